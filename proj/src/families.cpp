#include "sf/families.hpp"

#include <numeric>

#include "sf/nt.hpp"

namespace sf {

namespace {

std::string num(int64_t v) { return std::to_string(v); }

void require(bool ok, const std::string& cond, const std::string& msg) {
  if (!ok) throw ConditionError(cond, msg);
}

FamilyInstance finish(PlanarMap map, FamilyMeta meta) {
  FamilyInstance inst{std::move(map), {}, std::move(meta)};
  inst.psf = Presemifield::from_planar(inst.map);
  inst.psf.meta = inst.meta;
  return inst;
}

elt require_nonsquare(const FieldCtx& M, elt a, const char* who) {
  require(a != 0 && !M.is_square(a), "a_nonsquare",
          std::string(who) + ": a must be a non-square in M^x");
  return a;
}

}  // namespace

FamilySParams FamilySParams::make(uint32_t p, int m, int k, elt B, elt a) {
  FamilySParams prm;
  prm.p = p;
  prm.m = m;
  prm.k = k;
  require(m >= 2 && m % 2 == 0, "m_even", "family S: m must be even, got m=" + num(m));
  prm.M = &FieldCtx::get(p, m);
  require(k >= 1 && k <= m - 1, "k_range", "family S: need 1 <= k <= m-1, got k=" + num(k));
  prm.e = static_cast<int>(std::gcd(k, m));
  require((m / prm.e) % 2 == 1, "m_over_e_odd",
          "family S: m/e odd violated (e=" + num(prm.e) + ", m/e=" + num(m / prm.e) + ")");
  prm.d = static_cast<int>(std::gcd(k + m / 2, m));
  if (prm.d * 2 != prm.e) throw std::logic_error("family S: gcd(k+m/2,m) != gcd(k,m)/2");
  prm.l = (k + m / 2) % m;
  prm.q = nt::pow_u64(p, static_cast<unsigned>(k));
  prm.Q = nt::pow_u64(p, static_cast<unsigned>(m / 2));
  prm.r = nt::pow_u64(p, static_cast<unsigned>(prm.l));
  require(B != 0 && !prm.M->is_square(B), "B_nonsquare", "family S: B must be a non-square");
  require(a != 0 && prm.M->in_subfield(m / 2, a), "a_in_L",
          "family S: a must lie in L^x = GF(p^{m/2})^x");
  prm.B = B;
  prm.a = a;
  return prm;
}

FamilySParams FamilySParams::make_dlog(uint32_t p, int m, int k, int64_t B_dlog, int64_t a_dlog) {
  const FieldCtx& M = FieldCtx::get(p, m);
  return make(p, m, k, M.from_dlog(B_dlog), M.from_dlog(a_dlog));
}

BiprojPair FamilySParams::pair() const {
  BiprojPair bp;
  bp.M = M;
  bp.k = k;
  bp.l = l;
  bp.f = {M->one(), 0, 0, B};
  bp.g = {0, M->one(), M->div(a, B), 0};
  return bp;
}

FamilyInstance family_s(const FamilySParams& prm) {
  FamilyMeta meta;
  meta.family = "S";
  meta.params = {{"p", num(prm.p)},
                 {"m", num(prm.m)},
                 {"k", num(prm.k)},
                 {"B", num(static_cast<int64_t>(prm.M->dlog(prm.B)))},
                 {"a", num(static_cast<int64_t>(prm.M->dlog(prm.a)))}};
  const uint64_t n = 2 * static_cast<uint64_t>(prm.m);
  meta.count_note = ">= floor((sigma(n)-1)/2)*ceil((p^(n/4)-1)/n), n=" + num(n);
  meta.predicted_nuclei = {{nt::pow_u64(prm.p, prm.e / 2), nt::pow_u64(prm.p, prm.e),
                            nt::pow_u64(prm.p, prm.e / 2)}};
  return finish(prm.pair(), std::move(meta));
}

FamilyInstance family_s(uint32_t p, int m, int k, elt B, elt a, bool permissive) {
  if (!permissive) return family_s(FamilySParams::make(p, m, k, B, a));
  // Permissive path: realize the documented degenerations and tag them.
  require(m >= 2 && m % 2 == 0, "m_even", "family S: m must be even");
  const FieldCtx& M = FieldCtx::get(p, m);
  require(B != 0 && !M.is_square(B), "B_nonsquare", "family S: B must be a non-square");
  int kk = ((k % m) + m) % m;
  const int l = (kk + m / 2) % m;
  std::string reduced;
  if (a == 0) {
    reduced = "zp";
  } else {
    require(M.in_subfield(m / 2, a), "a_in_L", "family S: a must lie in L or be 0");
    if (kk == 0 || kk == m / 2) reduced = "dickson";
  }
  if (reduced.empty()) return family_s(FamilySParams::make(p, m, kk, B, a));
  BiprojPair bp;
  bp.M = &M;
  bp.k = kk;
  bp.l = l;
  bp.f = {M.one(), 0, 0, B};
  bp.g = {0, M.one(), a == 0 ? 0 : M.div(a, B), 0};
  FamilyMeta meta;
  meta.family = "S";
  meta.reduced_to = reduced;
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"k", num(kk)},
                 {"B", num(static_cast<int64_t>(M.dlog(B)))},
                 {"a", a == 0 ? "zero" : num(static_cast<int64_t>(M.dlog(a)))}};
  return finish(bp, std::move(meta));
}

FamilyInstance dickson(uint32_t p, int m, int k, elt a, bool permissive) {
  require(m >= 2, "m_range", "dickson: need m >= 2");
  const FieldCtx& M = FieldCtx::get(p, m);
  require_nonsquare(M, a, "dickson");
  std::string reduced;
  if (k <= 0 || k >= m) {
    require(permissive && (k % m == 0), "k_range", "dickson: need 0 < k < m, got k=" + num(k));
    k = 0;
    reduced = "F";
  }
  BiprojPair bp;
  bp.M = &M;
  bp.k = 0;
  bp.l = k;
  bp.f = {M.one(), 0, 0, a};
  bp.g = {0, M.one(), 0, 0};
  FamilyMeta meta;
  meta.family = "dickson";
  meta.reduced_to = reduced;
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"k", num(k)},
                 {"a", num(static_cast<int64_t>(M.dlog(a)))}};
  meta.count_note = "floor(n/4), n=" + num(2 * m);
  const uint64_t d = std::gcd(k == 0 ? m : k, m);
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(m)),
                            nt::pow_u64(p, static_cast<unsigned>(d))}};
  return finish(bp, std::move(meta));
}

FamilyInstance albert_univariate(uint32_t p, int n, int k) {
  const FieldCtx& F = FieldCtx::get(p, n);
  require(k >= 1 && k <= n - 1, "k_range", "albert: need 0 < k < n");
  const int d = static_cast<int>(std::gcd(k, n));
  require((n / d) % 2 == 1, "n_over_d_odd",
          "albert: n/gcd(k,n) must be odd (d=" + num(d) + ", n/d=" + num(n / d) + ")");
  DOPoly P;
  P.F = &F;
  P.terms = {{F.one(), 0, k}};
  P.normalize();
  FamilyMeta meta;
  meta.family = "albert";
  meta.params = {{"p", num(p)}, {"n", num(n)}, {"k", num(k)}};
  meta.count_note = "floor((sigma(n)-1)/2)";
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d))}};
  return finish(PlanarMap{P}, std::move(meta));
}

FamilyInstance albert_biproj(uint32_t p, int m, int k, elt a) {
  const FieldCtx& M = FieldCtx::get(p, m);
  const int n = 2 * m;
  require(k >= 1 && k <= m - 1, "k_range", "albert: need 0 < k < m");
  const int d = static_cast<int>(std::gcd(k, n));
  require((n / d) % 2 == 1, "n_over_d_odd",
          "albert: n/gcd(k,n) must be odd (d=" + num(d) + ", n/d=" + num(n / d) + ")");
  require_nonsquare(M, a, "albert");
  const uint64_t q = nt::pow_u64(p, static_cast<unsigned>(k));
  BiprojPair bp;
  bp.M = &M;
  bp.k = k;
  bp.l = k;
  bp.f = {0, M.pow(a, static_cast<int64_t>((q - 1) / 2)), M.one(), 0};
  bp.g = {M.pow(a, static_cast<int64_t>((q + 1) / 2)), 0, 0, M.one()};
  FamilyMeta meta;
  meta.family = "albert";
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"k", num(k)},
                 {"a", num(static_cast<int64_t>(M.dlog(a)))}};
  meta.count_note = "floor((sigma(n)-1)/2)";
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d))}};
  return finish(bp, std::move(meta));
}

FamilyInstance zhou_pott(uint32_t p, int m, int k, int j, elt a, bool permissive) {
  const FieldCtx& M = FieldCtx::get(p, m);
  require_nonsquare(M, a, "zhou_pott");
  std::string reduced;
  if (permissive) {
    k = ((k % m) + m) % m;
    j = ((j % m) + m) % m;
    if (k == 0 && j == 0)
      reduced = "F";
    else if (k == 0)
      reduced = "dickson";
    else if (j == 0)
      reduced = "bh";
  }
  if (reduced.empty()) {
    require(k >= 1 && k <= m - 1, "k_range", "zhou_pott: need 0 < k < m");
    require(j >= 1 && j <= m - 1, "j_range", "zhou_pott: need 0 < j < m");
    const int d = static_cast<int>(std::gcd(k, m));
    require((m / d) % 2 == 1, "m_over_d_odd",
            "zhou_pott: m/gcd(k,m) must be odd (d=" + num(d) + ", m/d=" + num(m / d) + ")");
  }
  BiprojPair bp;
  bp.M = &M;
  bp.k = k;
  bp.l = j;
  bp.f = {M.one(), 0, 0, a};
  bp.g = {0, M.one(), 0, 0};
  FamilyMeta meta;
  meta.family = "zp";
  meta.reduced_to = reduced;
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"k", num(k)}, {"j", num(j)},
                 {"a", num(static_cast<int64_t>(M.dlog(a)))}};
  meta.count_note = "floor((sigma(n)-1)/2)*floor(n/4), n=" + num(2 * m);
  const uint64_t d = std::gcd(k == 0 ? m : k, m);
  const uint64_t dp = std::gcd(std::gcd(static_cast<uint64_t>(j == 0 ? m : j),
                                        static_cast<uint64_t>(k == 0 ? m : k)),
                               static_cast<uint64_t>(m));
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(dp)),
                            nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(dp))}};
  return finish(bp, std::move(meta));
}

FamilyInstance bh(uint32_t p, int m, int k, elt a, bool permissive) {
  const FieldCtx& M = FieldCtx::get(p, m);
  require_nonsquare(M, a, "bh");
  std::string reduced;
  if (permissive && (k % m == 0)) {
    k = 0;
    reduced = "F";
  } else {
    require(k >= 1 && k <= m - 1, "k_range", "bh: need 0 < k < m");
  }
  const int d = static_cast<int>(std::gcd(k == 0 ? m : k, m));
  const bool odd_branch = (m / d) % 2 == 1;
  const uint64_t q = nt::pow_u64(p, static_cast<unsigned>(k));
  BiprojPair bp;
  bp.M = &M;
  bp.k = 0;
  bp.l = k;
  if (odd_branch) {
    bp.f = {0, M.one(), 0, 0};
    bp.g = {M.one(), 0, 0, a};
  } else {
    bp.f = {M.one(), 0, 0, a};
    bp.g = {0, M.one(), M.pow(a, static_cast<int64_t>((q - 1) / 2)), 0};
  }
  FamilyMeta meta;
  meta.family = "bh";
  meta.reduced_to = reduced;
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"k", num(k)},
                 {"a", num(static_cast<int64_t>(M.dlog(a)))},
                 {"branch", odd_branch ? "odd" : "even"}};
  meta.count_note = "floor(n/4), n=" + num(2 * m);
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(2 * d)),
                            nt::pow_u64(p, static_cast<unsigned>(d))}};
  return finish(bp, std::move(meta));
}

FamilyInstance field_square(uint32_t p, int n) {
  const FieldCtx& F = FieldCtx::get(p, n);
  DOPoly P;
  P.F = &F;
  P.terms = {{F.one(), 0, 0}};
  P.normalize();
  FamilyMeta meta;
  meta.family = "F";
  meta.params = {{"p", num(p)}, {"n", num(n)}};
  meta.count_note = "1";
  meta.predicted_nuclei = {{F.order(), F.order(), F.order()}};
  return finish(PlanarMap{P}, std::move(meta));
}

FamilyInstance field_biproj(uint32_t p, int m, elt a) {
  const FieldCtx& M = FieldCtx::get(p, m);
  require_nonsquare(M, a, "field_biproj");
  BiprojPair bp;
  bp.M = &M;
  bp.k = 0;
  bp.l = 0;
  bp.f = {0, M.one(), 0, 0};
  bp.g = {M.one(), 0, 0, a};
  FamilyMeta meta;
  meta.family = "F";
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"a", num(static_cast<int64_t>(M.dlog(a)))}};
  meta.count_note = "1";
  const uint64_t N = nt::pow_u64(p, static_cast<unsigned>(2 * m));
  meta.predicted_nuclei = {{N, N, N}};
  return finish(bp, std::move(meta));
}

namespace {

FamilyInstance zkw_shape(const char* fam, uint32_t p, int s, int t, std::optional<elt> a_opt,
                         int blocks, FamilyMeta meta) {
  // X^{q+1} - a^{Q-1} X^{qQ + Q^{blocks-1}} over GF(p^{blocks*s}).
  const int n = blocks * s;
  const FieldCtx& F = FieldCtx::get(p, n);
  elt a = a_opt.value_or(F.gen());
  require(a != 0 && std::gcd(F.dlog(a) == 0 ? F.group_order() : F.dlog(a), F.group_order()) == 1,
          "a_generator", std::string(fam) + ": a must generate the multiplicative group");
  const uint64_t Qm1 = nt::pow_u64(p, static_cast<unsigned>(s)) - 1;
  DOPoly P;
  P.F = &F;
  P.terms = {{F.one(), 0, t},
             {F.neg(F.pow(a, static_cast<int64_t>(Qm1))), s + t, (blocks - 1) * s}};
  P.normalize();
  meta.params.emplace("a", num(static_cast<int64_t>(F.dlog(a))));
  return finish(PlanarMap{P}, std::move(meta));
}

}  // namespace

FamilyInstance zkw(uint32_t p, int s, int t, std::optional<elt> a) {
  require(s >= 1 && t >= 1, "s_t_range", "zkw: need s, t >= 1");
  const int d = static_cast<int>(std::gcd(s, t));
  require((s / d) % 2 == 1, "s_prime_odd", "zkw: s/gcd(s,t) must be odd");
  require((s / d + t / d) % 3 == 0, "s_plus_t_mod3", "zkw: s'+t' must be divisible by 3");
  FamilyMeta meta;
  meta.family = "zkw";
  meta.params = {{"p", num(p)}, {"s", num(s)}, {"t", num(t)}};
  meta.count_note = ">= 1";
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d))}};
  return zkw_shape("zkw", p, s, t, a, 3, std::move(meta));
}

FamilyInstance b3(uint32_t p, int s, int t, std::optional<elt> a) {
  require(s >= 1 && t >= 1, "s_t_range", "b3: need s, t >= 1");
  const int d = static_cast<int>(std::gcd(s, t));
  require((s / d) % 2 == 1, "s_over_d_odd", "b3: s/gcd(s,t) must be odd");
  require(nt::pow_u64(p, static_cast<unsigned>(s)) % 3 == 1, "Q_mod3", "b3: Q = 1 mod 3 required");
  require(nt::pow_u64(p, static_cast<unsigned>(t)) % 3 == 1, "q_mod3", "b3: q = 1 mod 3 required");
  FamilyMeta meta;
  meta.family = "b3";
  meta.params = {{"p", num(p)}, {"s", num(s)}, {"t", num(t)}};
  meta.count_note = "<= 9*sigma(s)";
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d))}};
  return zkw_shape("b3", p, s, t, a, 3, std::move(meta));
}

FamilyInstance b4(uint32_t p, int s, int t, std::optional<elt> a) {
  require(s >= 1 && t >= 1, "s_t_range", "b4: need s, t >= 1");
  const int d = static_cast<int>(std::gcd(2 * s, t));
  require((2 * s / d) % 2 == 1, "two_s_over_d_odd", "b4: 2s/gcd(2s,t) must be odd");
  require(nt::pow_u64(p, static_cast<unsigned>(s)) % 4 == 1, "Q_mod4", "b4: Q = 1 mod 4 required");
  require(nt::pow_u64(p, static_cast<unsigned>(t)) % 4 == 1, "q_mod4", "b4: q = 1 mod 4 required");
  FamilyMeta meta;
  meta.family = "b4";
  meta.params = {{"p", num(p)}, {"s", num(s)}, {"t", num(t)}};
  meta.count_note = "<= 8*sigma(s)";
  meta.predicted_nuclei = {{nt::pow_u64(p, static_cast<unsigned>(d / 2)),
                            nt::pow_u64(p, static_cast<unsigned>(d)),
                            nt::pow_u64(p, static_cast<unsigned>(d / 2))}};
  return zkw_shape("b4", p, s, t, a, 4, std::move(meta));
}

FamilyInstance cm_dy(uint32_t p, int m, int sign) {
  require(p == 3, "p_three", "cm_dy: p = 3 required");
  require(m >= 5 && m % 2 == 1, "m_ge5_odd", "cm_dy: m >= 5 odd required");
  const FieldCtx& F = FieldCtx::get(p, m);
  // x^10 +- x^6 - x^2 (the x^2 term is the DO pair i = j = 0).
  DOPoly P;
  P.F = &F;
  P.terms = {{F.one(), 0, 2}, {sign > 0 ? F.one() : F.neg(F.one()), 1, 1}, {F.neg(F.one()), 0, 0}};
  P.normalize();
  FamilyMeta meta;
  meta.family = sign > 0 ? "cm" : "dy";
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"sign", sign > 0 ? "+" : "-"}};
  meta.count_note = "2";
  meta.predicted_nuclei = {{3, 3, 3}};
  return finish(PlanarMap{P}, std::move(meta));
}

FamilyInstance cg(uint32_t p, int m) {
  require(p == 3, "p_three", "cg: p = 3 required");
  require(m >= 3 && m % 2 == 1, "m_ge3_odd", "cg: m >= 3 odd required");
  const FieldCtx& M = FieldCtx::get(p, m);
  PairMap pm;
  pm.M = &M;
  pm.comp[0] = {{M.one(), 0, 0, 0, 0}, {M.one(), 1, 0, 1, 2}};     // x^2 + y^10
  pm.comp[1] = {{M.one(), 0, 0, 1, 0}, {M.neg(M.one()), 1, 1, 1, 1}};  // xy - y^6
  FamilyMeta meta;
  meta.family = "cg";
  meta.params = {{"p", num(p)}, {"m", num(m)}};
  meta.count_note = "1";
  meta.predicted_nuclei = {{3, nt::pow_u64(3, static_cast<unsigned>(m)), 3}};
  return finish(PlanarMap{pm}, std::move(meta));
}

FamilyInstance ganley(uint32_t p, int m, elt a) {
  require(p == 3, "p_three", "g: p = 3 required");
  require(m >= 3, "m_ge3", "g: m >= 3 required");
  const FieldCtx& M = FieldCtx::get(p, m);
  require_nonsquare(M, a, "g");
  const elt a3 = M.mul(a, M.mul(a, a));
  PairMap pm;
  pm.M = &M;
  pm.comp[0] = {{M.one(), 0, 0, 0, 0}, {a, 1, 0, 1, 0}, {a3, 1, 2, 1, 2}};  // x^2 + a y^2 + a^3 y^18
  pm.comp[1] = {{M.one(), 0, 0, 1, 0}, {M.neg(a), 1, 1, 1, 1}};             // xy - a y^6
  FamilyMeta meta;
  meta.family = "g";
  meta.params = {{"p", num(p)}, {"m", num(m)}, {"a", num(static_cast<int64_t>(M.dlog(a)))}};
  meta.count_note = "1";
  meta.predicted_nuclei = {{3, 3, 3}};
  return finish(PlanarMap{pm}, std::move(meta));
}

std::vector<int> family_s_admissible_k(int m) {
  std::vector<int> ks;
  for (int k = 1; k < m; ++k) {
    const int e = static_cast<int>(std::gcd(k, m));
    if ((m / e) % 2 == 1) ks.push_back(k);
  }
  return ks;
}

}  // namespace sf
