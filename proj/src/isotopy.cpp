#include "sf/isotopy.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>

#include "sf/nt.hpp"
#include "sf/parallel.hpp"
#include "sf/planarity.hpp"

namespace sf {

namespace {

LinPoly mono_or_zero(elt c, int e) { return c == 0 ? LinPoly{} : linpoly_monomial(c, e); }

// The two solutions of x^{q+1} = rhs (rhs a square); returns the one with the
// smaller discrete log. m/gcd(k,m) odd makes gcd(q+1, p^m-1) = 2.
elt solve_q_plus_one(const FieldCtx& K, int64_t q, elt rhs) {
  const uint64_t N = K.group_order();
  const auto sols = nt::solve_linear_congruence(static_cast<uint64_t>(q + 1) % N, K.dlog(rhs), N);
  if (sols.size() != 2) throw std::logic_error("solve_q_plus_one: expected exactly two solutions");
  return K.from_dlog(static_cast<int64_t>(std::min(sols[0], sols[1])));
}

}  // namespace

bool verify_isotopism(Isotopism& iso, const Presemifield& P1, const Presemifield& P2) {
  iso.verified = verify_triple(iso.triple(), P1, P2);
  return iso.verified;
}

LinTriple conjugate_triple(const Isotopism& gamma, const LinTriple& delta) {
  const auto Ni = gamma.N.inverse(), Li = gamma.L.inverse(), Mi = gamma.M.inverse();
  if (!Ni || !Li || !Mi) throw std::invalid_argument("conjugate_triple: gamma not invertible");
  return {Ni->compose(delta.N).compose(gamma.N), Li->compose(delta.L).compose(gamma.L),
          Mi->compose(delta.M).compose(gamma.M)};
}

std::pair<Isotopism, elt> qbar_isotopism(const FamilySParams& prm) {
  const FieldCtx& K = *prm.M;
  const int64_t Q = static_cast<int64_t>(prm.Q);
  const elt a_prime = K.div(K.pow(prm.B, Q + 1), prm.a);
  Isotopism iso;
  iso.N = LinMap::from_blocks(
      K, {linpoly_monomial(K.one(), 0), {}, {}, linpoly_monomial(K.div(K.frob(prm.B, prm.m / 2), prm.a), prm.m / 2)});
  iso.L = LinMap::from_blocks(K, {linpoly_monomial(K.one(), prm.k), {}, {}, linpoly_monomial(K.one(), prm.k)});
  iso.M = iso.L;
  iso.strong = true;
  iso.provenance = "qbar_flip";
  const FamilySParams dst = FamilySParams::make(prm.p, prm.m, prm.m - prm.k, prm.B, a_prime);
  const Presemifield P1 = family_s(prm).psf, P2 = family_s(dst).psf;
  if (!verify_isotopism(iso, P1, P2))
    throw std::logic_error("qbar_isotopism: constructed witness failed verification");
  return {iso, a_prime};
}

std::pair<Isotopism, elt> orbit_witness(const FamilySParams& prm, int t, char branch) {
  const FieldCtx& K = *prm.M;
  const int64_t q = static_cast<int64_t>(prm.q), Q = static_cast<int64_t>(prm.Q);
  const int64_t pt = static_cast<int64_t>(nt::pow_u64(prm.p, static_cast<unsigned>(t)));
  elt a_prime, ratio;
  Isotopism iso;
  iso.strong = true;
  if (branch == 'd') {
    // ratio^{q+1} = B^{1-p^t}; a' = a^{p^t} ratio^{q(Q+1)}.
    ratio = solve_q_plus_one(K, q, K.pow(prm.B, 1 - pt));
    a_prime = K.mul(K.pow(prm.a, pt), K.pow(ratio, q * (Q + 1)));
    const elt a1 = K.pow(ratio, q + 1);
    const elt d1 = K.pow(ratio, q * Q);
    iso.N = LinMap::from_blocks(K, {linpoly_monomial(a1, t), {}, {}, linpoly_monomial(d1, t)});
    iso.L = LinMap::from_blocks(K, {linpoly_monomial(ratio, t), {}, {}, linpoly_monomial(K.one(), t)});
    iso.provenance = "orbit_diag(t=" + std::to_string(t) + ")";
  } else {
    // ratio^{q+1} = B^{1+p^t}; a' = ratio^{q(Q+1)} / a^{p^t}.
    ratio = solve_q_plus_one(K, q, K.pow(prm.B, 1 + pt));
    a_prime = K.div(K.pow(ratio, q * (Q + 1)), K.pow(prm.a, pt));
    const elt a1 = prm.B;
    const elt d1 = K.mul(K.div(a_prime, prm.B), ratio);
    iso.N = LinMap::from_blocks(K, {linpoly_monomial(a1, t), {}, {}, linpoly_monomial(d1, t)});
    iso.L = LinMap::from_blocks(K, std::array<LinPoly, 4>{LinPoly{}, linpoly_monomial(ratio, t),
                                                           linpoly_monomial(K.one(), t), LinPoly{}});
    iso.provenance = "orbit_anti(t=" + std::to_string(t) + ")";
  }
  iso.M = iso.L;
  if (!K.in_subfield(prm.m / 2, a_prime))
    throw std::logic_error("orbit_witness: a' not in L");
  const FamilySParams dst = FamilySParams::make(prm.p, prm.m, prm.k, prm.B, a_prime);
  const Presemifield P1 = family_s(prm).psf, P2 = family_s(dst).psf;
  if (!verify_isotopism(iso, P1, P2))
    throw std::logic_error("orbit_witness: constructed witness failed verification");
  return {iso, a_prime};
}

OrbitReport orbit_of_a(const FamilySParams& prm) {
  const FieldCtx& K = *prm.M;
  OrbitReport rep;
  rep.base = prm;
  std::set<uint64_t> seen;
  for (int t = 0; t < prm.m; ++t) {
    for (char branch : {'d', 'a'}) {
      auto [iso, a_prime] = orbit_witness(prm, t, branch);
      OrbitEntry e;
      e.a_prime = a_prime;
      e.t = t;
      e.branch = branch;
      // The solved coefficient ratio sits in the L blocks of the witness.
      e.ratio = iso.L.blocks()[branch == 'd' ? 0 : 1].front().coef;
      e.iso = std::move(iso);
      rep.entries.push_back(std::move(e));
      seen.insert(K.dlog(a_prime));
    }
  }
  for (uint64_t d : seen) rep.orbit.push_back(K.from_dlog(static_cast<int64_t>(d)));
  // The sign pairing: shifting t by m/2 negates a' on both branches.
  rep.neg_pairing_ok = true;
  auto value_at = [&](int t, char b) {
    for (const auto& e : rep.entries)
      if (e.t == t && e.branch == b) return e.a_prime;
    throw std::logic_error("orbit entry missing");
  };
  for (int t = 0; t < prm.m; ++t) {
    for (char b : {'d', 'a'}) {
      const elt lhs = value_at((t + prm.m / 2) % prm.m, b);
      if (lhs != K.neg(value_at(t, b))) rep.neg_pairing_ok = false;
    }
  }
  return rep;
}

ScreenResult degree_pattern_screen(const BiprojPair& P1, const BiprojPair& P2,
                                   bool p1_condition_c) {
  if (P1.M != P2.M)
    throw std::invalid_argument("degree_pattern_screen: maps live over different fields");
  const int m = P1.M->m();
  auto eqm = [m](int a, int b) { return ((a - b) % m + m) % m == 0; };
  const int k1 = P1.k, l1 = P1.l, k2 = P2.k, l2 = P2.l;

  ScreenResult res;
  if (eqm(k1, l1) || eqm(k1, -l1)) {
    res.reason = "q1 in {r1, rbar1}";
    return res;
  }
  if (k1 % m == 0 || l1 % m == 0) {
    res.reason = "1 in {q1, r1}";
    return res;
  }
  if (m % 2 == 0 && (eqm(k1, m / 2) || eqm(l1, m / 2))) {
    res.reason = "Q in {q1, r1}";
    return res;
  }
  if (!p1_condition_c) {
    res.reason = "centralizer condition not certified for P1";
    return res;
  }
  const char* sgn[2] = {"+", "-"};
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      if (eqm(k1, s1 ? -k2 : k2) && eqm(l1, s2 ? -l2 : l2))
        res.relations.push_back(std::string("k1=") + sgn[s1] + "k2,l1=" + sgn[s2] + "l2");
      if (eqm(k1, s1 ? -l2 : l2) && eqm(l1, s2 ? -k2 : k2))
        res.relations.push_back(std::string("k1=") + sgn[s1] + "l2,l1=" + sgn[s2] + "k2");
    }
  res.verdict = res.relations.empty() ? ScreenVerdict::NonIsotopicByDegree : ScreenVerdict::Compatible;
  return res;
}

ZpNonIsoResult zp_noniso_check(const FamilySParams& s, const BiprojPair& zp, int jobs) {
  const FieldCtx& K = *s.M;
  const int m = s.m;
  ZpNonIsoResult res;
  if (zp.M != s.M) throw std::invalid_argument("zp_noniso_check: field mismatch");
  if (zp.k != s.k || zp.l != s.l)
    throw ConditionError("matching_exponents", "zp_noniso_check: exponents must match the instance");
  if (zp.f[1] != 0 || zp.f[2] != 0 || zp.f[0] == 0 || zp.f[3] == 0 || zp.g[0] != 0 ||
      zp.g[2] != 0 || zp.g[3] != 0 || zp.g[1] == 0)
    throw ConditionError("zp_shape", "zp_noniso_check: second map is not Zhou-Pott shaped");

  // The swapped monomial pattern (N1 = N4 = 0) would need m | m/2 or
  // m | 2k + m/2; the latter fails because the 2-adic valuation of 2k + m/2
  // is nu2(m) - 1 (family parameters force nu2(k) >= nu2(m)).
  if ((2 * s.k + m / 2) % m == 0)
    throw std::logic_error("zp_noniso_check: 2-adic exclusion violated");
  res.notes.push_back("swapped N pattern excluded: m does not divide m/2 or 2k + m/2");

  // Support propagation through the second-component coefficient equations
  // with d1 != 0: every zero-pattern of the eight L/M coefficients fails.
  for (uint32_t mask = 0; mask < 256; ++mask) {
    const bool a2 = mask & 1, b2 = mask & 2, c2 = mask & 4, d2 = mask & 8;
    const bool a3 = mask & 16, b3 = mask & 32, c3 = mask & 64, d3 = mask & 128;
    // N bijective (N2 = N3 = 0) forces d1 != 0 and the L, M bijectivity
    // requires every row/column of the coefficient blocks to be nonzero.
    const bool feasible = (a2 || b2) && (c2 || d2) && (a2 || c2) && (b2 || d2) &&
                          (a3 || b3) && (c3 || d3) && (a3 || c3) && (b3 || d3);
    if (!feasible) continue;
    ++res.patterns_checked;
    const bool eq1 = a2 && d3;          // d1 = (a2^{qQ} d3)^{p^t} != 0
    const bool eq2 = c2 && b3;          // d1 (a/B)^{p^t} = (c2 b3^{qQ})^{p^t} != 0
    const bool eq3 = !a2 || !c3;        // a2^{qQ} c3 = 0
    const bool eq4 = !c2 || !a3;        // c2 a3^{qQ} = 0
    if (eq1 && eq2 && eq3 && eq4) ++res.patterns_surviving;
  }
  res.notes.push_back("support sweep: d1 != 0 forces a2, d3, c2, b3 nonzero, then c3 = a3 = 0 and M is singular");

  // Concrete sweep over monomial candidates that solve the first-component
  // equations: diagonal and antidiagonal L patterns, all omega pairs in E^x,
  // all t, the free coefficient over M^x.
  const elt alpha = zp.f[3];
  const int64_t q = static_cast<int64_t>(s.q), Q = static_cast<int64_t>(s.Q);
  const uint64_t N = K.group_order();
  const auto Es = K.subfield_elements(s.e);
  const elt aB = K.div(s.a, s.B);
  std::atomic<uint64_t> checked{0}, surviving{0};
  parallel_chunks(m, jobs, [&](int64_t tlo, int64_t thi) {
    uint64_t local_checked = 0, local_surviving = 0;
    for (int64_t t = tlo; t < thi; ++t) {
      const int64_t pt = static_cast<int64_t>(nt::pow_u64(s.p, static_cast<unsigned>(t)));
      for (elt w1 : Es) {
        if (w1 == 0) continue;
        for (elt w2 : Es) {
          if (w2 == 0) continue;
          // Diagonal: (a2/d2)^{q+1} = alpha w2 / (B^{p^t} w1).
          {
            const elt rhs = K.div(K.mul(alpha, w2), K.mul(K.pow(s.B, pt), w1));
            const auto sols =
                nt::solve_linear_congruence(static_cast<uint64_t>(q + 1) % N, K.dlog(rhs), N);
            for (uint64_t sd : sols) {
              const elt x = K.from_dlog(static_cast<int64_t>(sd));
              for (uint64_t ad = 0; ad < N; ++ad) {
                const elt a2 = K.from_dlog(static_cast<int64_t>(ad));
                const elt d2 = K.div(a2, x);
                const elt d3 = K.mul(w2, d2), a3 = K.mul(w1, a2);
                ++local_checked;
                // Second component: d1 = a2^{qQ} d3 = d2 a3^{qQ} and the
                // (a/B)-paired coefficients must vanish.
                const elt d1a = K.mul(K.pow(a2, q * Q), d3);
                const elt d1b = K.mul(d2, K.pow(a3, q * Q));
                const bool ok = d1a != 0 && d1a == d1b && K.mul(d1a, K.pow(aB, pt)) == 0;
                if (ok) ++local_surviving;
              }
            }
          }
          // Antidiagonal: (b2/c2)^{q+1} = B^{p^t} alpha w2 / w1.
          {
            const elt rhs = K.div(K.mul(K.pow(s.B, pt), K.mul(alpha, w2)), w1);
            const auto sols =
                nt::solve_linear_congruence(static_cast<uint64_t>(q + 1) % N, K.dlog(rhs), N);
            for (uint64_t sd : sols) {
              const elt y = K.from_dlog(static_cast<int64_t>(sd));
              for (uint64_t bd = 0; bd < N; ++bd) {
                const elt b2 = K.from_dlog(static_cast<int64_t>(bd));
                const elt c2 = K.div(b2, y);
                const elt b3 = K.mul(w1, b2), c3 = K.mul(w2, c2);
                ++local_checked;
                // The antidiagonal RHS has no (x^{qQ} v)^{p^t} monomial, so
                // d1 must be 0, while the (y^{qQ} u) pair needs
                // d1 (a/B)^{p^t} equal to nonzero coefficients.
                const elt d1_required = 0;
                const elt rhs_yqQu = K.mul(K.pow(b2, q * Q), c3);
                const elt rhs_xvqQ = K.mul(c2, K.pow(b3, q * Q));
                const bool ok = d1_required != 0 &&
                                K.mul(d1_required, K.pow(aB, pt)) == rhs_yqQu &&
                                K.mul(d1_required, K.pow(aB, pt)) == rhs_xvqQ;
                if (ok) ++local_surviving;
              }
            }
          }
        }
      }
    }
    checked += local_checked;
    surviving += local_surviving;
  });
  res.candidates_checked = checked.load();
  res.candidates_surviving = surviving.load();
  res.notes.push_back("mixed diagonal/antidiagonal L,M patterns die in the first component (a1 = 0)");
  res.non_isotopic = res.patterns_surviving == 0 && res.candidates_surviving == 0;
  return res;
}

Isotopism dickson_reduction_shape(const FieldCtx& M, elt B, elt A) {
  if (M.m() % 2 != 0) throw ConditionError("m_even", "dickson_reduction: m must be even");
  if (A == 0) throw ConditionError("A_nonzero", "dickson_reduction: A must be nonzero");
  const int half = M.m() / 2;
  const int64_t Q = static_cast<int64_t>(nt::pow_u64(M.p(), static_cast<unsigned>(half)));
  const elt AQ1 = M.pow(A, Q + 1);
  if (AQ1 == M.one())
    throw ConditionError("A_norm_condition", "dickson_reduction: A^{Q+1} = 1 cannot be reduced");
  const elt denom = M.sub(M.one(), AQ1);
  const elt d1 = M.inv(denom);
  const elt d1p = M.neg(M.mul(A, d1));
  Isotopism iso;
  iso.N = LinMap::from_blocks(M, {linpoly_monomial(M.one(), 0), {}, {},
                                  LinPoly{{d1, 0}, {d1p, half}}});
  iso.L = LinMap::identity(M.p(), 2 * M.m(), &M);
  iso.M = iso.L;
  iso.strong = true;
  iso.provenance = "dickson_reduction";

  BiprojPair src;
  src.M = &M;
  src.k = 0;
  src.l = half;
  src.f = {M.one(), 0, 0, B};
  src.g = {0, M.one(), A, 0};
  BiprojPair dst = src;
  dst.g = {0, M.one(), 0, 0};
  const Presemifield P1 = Presemifield::from_planar(src), P2 = Presemifield::from_planar(dst);
  if (!verify_isotopism(iso, P1, P2))
    throw std::logic_error("dickson_reduction: witness failed verification");
  return iso;
}

Isotopism dickson_reduction_q1(const FieldCtx& M, elt B, elt a) {
  if (B == 0 || M.is_square(B))
    throw ConditionError("B_nonsquare", "dickson_reduction_q1: B must be a non-square");
  if (a == 0 || !M.in_subfield(M.m() / 2, a))
    throw ConditionError("a_in_L", "dickson_reduction_q1: a must lie in L^x");
  return dickson_reduction_shape(M, B, M.div(a, B));
}

B4BoundReport b4_class_bound(uint32_t p, int s, int t) {
  if (!nt::is_prime(p) || p < 3) throw ConditionError("p_odd_prime", "b4_class_bound: odd prime p required");
  if (s < 1 || t < 1) throw ConditionError("s_t_range", "b4_class_bound: s, t >= 1");
  const int d = static_cast<int>(std::gcd(2 * s, t));
  if ((2 * s / d) % 2 != 1) throw ConditionError("two_s_over_d_odd", "b4_class_bound: 2s/gcd(2s,t) must be odd");
  const uint64_t Q = nt::pow_u64(p, static_cast<unsigned>(s));
  const uint64_t q = nt::pow_u64(p, static_cast<unsigned>(t));
  if (Q % 4 != 1) throw ConditionError("Q_mod4", "b4_class_bound: Q = 1 mod 4 required");
  if (q % 4 != 1) throw ConditionError("q_mod4", "b4_class_bound: q = 1 mod 4 required");
  const uint64_t Q2 = Q * Q, Q3 = Q2 * Q;
  B4BoundReport rep;
  rep.gcd_sum_form = std::gcd(Q2 + Q + q + 1, Q3 + Q2 + Q + 1);
  rep.gcd_diff_form = std::gcd(Q3 > q ? Q3 - q : q - Q3, Q3 + Q2 + Q + 1);
  if (rep.gcd_sum_form != 4 || rep.gcd_diff_form != 4)
    throw std::logic_error("b4_class_bound: gcd identity violated");
  rep.bound = 8 * nt::odd_part(static_cast<uint64_t>(s));
  return rep;
}

uint64_t b3_class_bound(int s) { return 9 * nt::odd_part(static_cast<uint64_t>(s)); }

std::optional<Isotopism> tiny_strong_search(const Presemifield& P1, const Presemifield& P2) {
  const FieldCtx& K = P1.base();
  if (!P1.two_var() || !P2.two_var() || &P2.base() != &K)
    throw std::invalid_argument("tiny_strong_search: two-variable pre-semifields over one field required");
  if (K.order() > 9) throw std::domain_error("tiny_strong_search: calibration tool for |field| <= 81");
  const int m = K.m(), n = 2 * m;
  const uint32_t p = K.p();

  std::vector<FpVec> prods(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FpVec ei(n, 0), ej(n, 0);
      ei[i] = 1;
      ej[j] = 1;
      prods[i * n + j] = P1.mul(ei, ej);
    }

  for (int t = 0; t < m; ++t) {
    for (uint64_t c1 = 0; c1 < K.order(); ++c1)
      for (uint64_t c2 = 0; c2 < K.order(); ++c2)
        for (uint64_t c3 = 0; c3 < K.order(); ++c3)
          for (uint64_t c4 = 0; c4 < K.order(); ++c4) {
            const elt det = K.sub(K.mul(static_cast<elt>(c1), static_cast<elt>(c4)),
                                  K.mul(static_cast<elt>(c2), static_cast<elt>(c3)));
            if (det == 0) continue;
            LinMap L = LinMap::from_blocks(
                K, {mono_or_zero(static_cast<elt>(c1), t), mono_or_zero(static_cast<elt>(c2), t),
                    mono_or_zero(static_cast<elt>(c3), t), mono_or_zero(static_cast<elt>(c4), t)});
            // Solve N from N(e_i *1 e_j) = L(e_i) *2 L(e_j).
            MatFp A(p, n * n * n, n * n);
            FpVec rhs(n * n * n, 0);
            std::vector<FpVec> Lcols(n);
            for (int i = 0; i < n; ++i) Lcols[i] = L.matrix().col(i);
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                const FpVec w = P2.mul(Lcols[i], Lcols[j]);
                const FpVec& v = prods[i * n + j];
                const int pr = i * n + j;
                for (int r = 0; r < n; ++r) {
                  for (int sc = 0; sc < n; ++sc) A.set(pr * n + r, r * n + sc, v[sc]);
                  rhs[pr * n + r] = w[r];
                }
              }
            const auto sol = A.solve(rhs);
            if (!sol) continue;
            MatFp Nm(p, n, n);
            for (int r = 0; r < n; ++r)
              for (int sc = 0; sc < n; ++sc) Nm.set(r, sc, (*sol)[r * n + sc]);
            if (!Nm.invertible()) continue;
            Isotopism iso;
            iso.N = LinMap::from_matrix(Nm, &K);
            iso.L = L;
            iso.M = L;
            iso.strong = true;
            iso.provenance = "tiny_strong_search(t=" + std::to_string(t) + ")";
            if (verify_isotopism(iso, P1, P2)) return iso;
          }
  }
  return std::nullopt;
}

namespace {

FamilySParams params_of_s(const FamilyInstance& inst) {
  const auto& par = inst.meta.params;
  return FamilySParams::make_dlog(static_cast<uint32_t>(std::stoul(par.at("p"))),
                                  std::stoi(par.at("m")), std::stoi(par.at("k")),
                                  std::stoll(par.at("B")), std::stoll(par.at("a")));
}

bool same_instance(const FamilyInstance& A, const FamilyInstance& B) {
  return A.meta.family == B.meta.family && A.meta.params == B.meta.params &&
         A.meta.reduced_to == B.meta.reduced_to;
}

Isotopism identity_isotopism(const Presemifield& P) {
  Isotopism iso;
  const FieldCtx* bf = P.two_var() ? &P.base() : nullptr;
  iso.N = LinMap::identity(P.base().p(), P.dim(), bf);
  iso.L = iso.N;
  iso.M = iso.N;
  iso.strong = true;
  iso.provenance = "identity";
  return iso;
}

Isotopism compose_isotopisms(const Isotopism& second, const Isotopism& first) {
  // first: P1 -> P2, second: P2 -> P3.
  Isotopism iso;
  iso.N = second.N.compose(first.N);
  iso.L = second.L.compose(first.L);
  iso.M = second.M.compose(first.M);
  iso.strong = first.strong && second.strong;
  iso.provenance = second.provenance + " after " + first.provenance;
  return iso;
}

// Within fixed (q, B): search the orbit of a_src for a_dst.
std::optional<Isotopism> orbit_route(const FamilySParams& src, elt a_dst) {
  const OrbitReport rep = orbit_of_a(src);
  for (const auto& e : rep.entries)
    if (e.a_prime == a_dst) return e.iso;
  return std::nullopt;
}

}  // namespace

StrongCompareResult strong_vs_plain_isotopy(const FamilyInstance& A, const FamilyInstance& B,
                                            int jobs) {
  StrongCompareResult res;
  if (planar_dim(A.map) != planar_dim(B.map) || &planar_base(A.map) != &planar_base(B.map)) {
    res.verdict = StrongVerdict::NotIsotopicRestricted;
    res.restricted = false;
    res.note = "different ambient spaces";
    return res;
  }
  if (same_instance(A, B)) {
    res.verdict = StrongVerdict::StronglyIsotopic;
    Isotopism id = identity_isotopism(A.psf);
    verify_isotopism(id, A.psf, B.psf);
    res.witness = id;
    res.note = "identity";
    res.restricted = false;
    return res;
  }

  if (A.meta.family == "S" && B.meta.family == "S" && A.meta.reduced_to.empty() &&
      B.meta.reduced_to.empty()) {
    const FamilySParams pa = params_of_s(A), pb = params_of_s(B);
    if (pa.B != pb.B) throw std::domain_error("strong_vs_plain_isotopy: differing B not routed");
    if (pa.k == pb.k) {
      if (auto w = orbit_route(pa, pb.a)) {
        res.verdict = StrongVerdict::StronglyIsotopic;
        res.witness = *w;
        res.note = "orbit witness";
        return res;
      }
      res.verdict = StrongVerdict::NotIsotopicRestricted;
      res.note = "a outside the isotopy orbit (restricted monomial search exhausted)";
      return res;
    }
    if ((pa.k + pb.k) % pa.m == 0) {
      auto [flip, a_mid] = qbar_isotopism(pa);
      const FamilySParams mid = FamilySParams::make(pa.p, pa.m, pa.m - pa.k, pa.B, a_mid);
      if (auto w = orbit_route(mid, pb.a)) {
        Isotopism comp = compose_isotopisms(*w, flip);
        if (!verify_isotopism(comp, A.psf, B.psf))
          throw std::logic_error("strong_vs_plain_isotopy: composite witness failed");
        res.verdict = StrongVerdict::StronglyIsotopic;
        res.witness = comp;
        res.note = "qbar flip + orbit witness";
        return res;
      }
      res.verdict = StrongVerdict::NotIsotopicRestricted;
      res.note = "a outside the flipped orbit (restricted monomial search exhausted)";
      return res;
    }
    res.verdict = StrongVerdict::NotIsotopicRestricted;
    res.note = "exponent classes differ within the family";
    return res;
  }

  // Tiny-field calibration route: exhaustive monomial-blocked strong search
  // against G and against G'(x) = x * (a * x), a a non-square in N_m.
  if (A.psf.two_var() && B.psf.two_var() && planar_base(A.map).order() <= 9) {
    Presemifield PA = A.psf, PB = B.psf;
    if (auto w = tiny_strong_search(PA, PB)) {
      res.verdict = StrongVerdict::StronglyIsotopic;
      res.witness = *w;
      res.note = "exhaustive monomial-blocked search";
      return res;
    }
    certify(PB, jobs);
    const Semifield SB = unitalize_default(PB);
    const NucleiReport nuc = nuclei(SB);
    // A non-square of the middle nucleus under the semifield product.
    const int n = PB.dim();
    const uint32_t p = PB.base().p();
    std::vector<FpVec> nm_elems;
    {
      const int dm = nuc.dim_m;
      std::vector<uint32_t> digits(dm, 0);
      const uint64_t total = nt::pow_u64(p, static_cast<unsigned>(dm));
      for (uint64_t v = 0; v < total; ++v) {
        FpVec x(n, 0);
        uint64_t w = v;
        for (int i = 0; i < dm; ++i) {
          const uint32_t c = static_cast<uint32_t>(w % p);
          w /= p;
          if (c) x = fp_add(p, x, fp_scale(p, nuc.basis_m[i], c));
        }
        nm_elems.push_back(std::move(x));
      }
    }
    std::set<FpVec> squares;
    for (const auto& x : nm_elems) squares.insert(SB.ps.mul(x, x));
    FpVec a_ns;
    for (const auto& x : nm_elems)
      if (!fp_is_zero(x) && !squares.count(x)) {
        a_ns = x;
        break;
      }
    if (a_ns.empty())
      throw std::logic_error("strong_vs_plain_isotopy: no non-square in the middle nucleus");
    const Presemifield SBps = SB.ps;
    auto gprime_polar = [SBps, a_ns](const FpVec& x, const FpVec& y) {
      return fp_add(SBps.base().p(), SBps.mul(x, SBps.mul(a_ns, y)),
                    SBps.mul(y, SBps.mul(a_ns, x)));
    };
    const Presemifield PGp =
        Presemifield::from_bilinear(PB.base(), n, true, true, gprime_polar);
    if (auto w = tiny_strong_search(PA, PGp)) {
      res.verdict = StrongVerdict::IsotopicNotStrong;
      res.witness = *w;
      res.note = "equivalent to the shifted square map G'";
      return res;
    }
    res.verdict = StrongVerdict::NotIsotopicRestricted;
    res.note = "exhaustive monomial-blocked search against G and G' found nothing";
    return res;
  }

  // Fall back to unconditional invariants / the degree screen.
  const CompareResult cr = compare_presemifields(A, B, jobs);
  if (cr.verdict == "non_isotopic") {
    res.verdict = StrongVerdict::NotIsotopicRestricted;
    res.restricted = cr.evidence == "search";
    res.note = cr.evidence + ": " + cr.detail;
    return res;
  }
  if (cr.verdict == "isotopic" && cr.witness && cr.witness->strong) {
    res.verdict = StrongVerdict::StronglyIsotopic;
    res.witness = cr.witness;
    res.note = cr.detail;
    return res;
  }
  throw std::domain_error("strong_vs_plain_isotopy: inputs outside the supported search routes");
}

CompareResult compare_presemifields(const FamilyInstance& A, const FamilyInstance& B, int jobs) {
  CompareResult res;
  if (planar_dim(A.map) != planar_dim(B.map) ||
      planar_base(A.map).order() != planar_base(B.map).order()) {
    res.verdict = "non_isotopic";
    res.evidence = "invariant";
    res.detail = "different orders";
    return res;
  }
  if (same_instance(A, B)) {
    Isotopism id = identity_isotopism(A.psf);
    verify_isotopism(id, A.psf, B.psf);
    res.verdict = "isotopic";
    res.evidence = "witness";
    res.detail = "identical instances";
    res.witness = id;
    return res;
  }

  // Invariants first.
  Presemifield PA = A.psf, PB = B.psf;
  certify(PA, jobs);
  certify(PB, jobs);
  const NucleiReport na = nuclei_of(PA), nb = nuclei_of(PB);
  res.nuclei_a = {{na.nl, na.nm, na.nr}};
  res.nuclei_b = {{nb.nl, nb.nm, nb.nr}};
  if (na.nl != nb.nl || na.nm != nb.nm || na.nr != nb.nr) {
    res.verdict = "non_isotopic";
    res.evidence = "invariant";
    res.detail = "nuclei orders differ";
    return res;
  }

  // Degree screen second; orient the family-S side as P1.
  const bool a_is_s = A.meta.family == "S" && A.meta.reduced_to.empty();
  const bool b_is_s = B.meta.family == "S" && B.meta.reduced_to.empty();
  const BiprojPair* bpa = A.psf.biproj() ? &*A.psf.biproj() : nullptr;
  const BiprojPair* bpb = B.psf.biproj() ? &*B.psf.biproj() : nullptr;
  if (bpa && bpb && bpa->M == bpb->M && (a_is_s || b_is_s)) {
    const FamilyInstance& S = a_is_s ? A : B;
    const BiprojPair* p1 = a_is_s ? bpa : bpb;
    const BiprojPair* p2 = a_is_s ? bpb : bpa;
    const FamilySParams prm = params_of_s(S);
    const CentralizerReport cent = centralizer_enumerate(prm, jobs);
    const ScreenResult screen = degree_pattern_screen(*p1, *p2, cent.condition_c);
    if (screen.verdict == ScreenVerdict::NonIsotopicByDegree) {
      res.verdict = "non_isotopic";
      res.evidence = "degree";
      res.detail = "exponent pattern screen under the certified centralizer condition";
      return res;
    }
    if (screen.verdict == ScreenVerdict::Compatible) {
      const FamilyInstance& other = a_is_s ? B : A;
      if (a_is_s && b_is_s) {
        const StrongCompareResult sc = strong_vs_plain_isotopy(A, B, jobs);
        if (sc.verdict == StrongVerdict::NotIsotopicRestricted) {
          res.verdict = "non_isotopic";
          res.evidence = "search";
          res.detail = sc.note;
        } else {
          res.verdict = "isotopic";
          res.evidence = "witness";
          res.detail = sc.note;
          res.witness = sc.witness;
        }
        return res;
      }
      if (other.meta.family == "zp") {
        // Match exponents literally, flipping the family-S side if needed.
        const BiprojPair& zp_pair = *(a_is_s ? bpb : bpa);
        FamilySParams prm2 = prm;
        std::string flip_note;
        if (zp_pair.k == ((prm.m - prm.k) % prm.m)) {
          auto [flip, a_mid] = qbar_isotopism(prm);
          (void)flip;
          prm2 = FamilySParams::make(prm.p, prm.m, prm.m - prm.k, prm.B, a_mid);
          flip_note = " (after the qbar flip)";
        }
        if (zp_pair.k == prm2.k && zp_pair.l == prm2.l) {
          const ZpNonIsoResult z = zp_noniso_check(prm2, zp_pair, jobs);
          if (z.non_isotopic) {
            res.verdict = "non_isotopic";
            res.evidence = "search";
            res.detail = "coefficient contradiction in the matching-exponent system" + flip_note;
            return res;
          }
        }
      }
      res.verdict = "unknown";
      res.evidence = "";
      res.detail = "degree-compatible; no decisive route";
      return res;
    }
    res.verdict = "unknown";
    res.detail = screen.reason;
    return res;
  }

  res.verdict = "unknown";
  res.detail = "no decisive invariant, screen or search route";
  return res;
}

BiprojPair component_swap(const BiprojPair& P) {
  BiprojPair s;
  s.M = P.M;
  s.k = P.l;
  s.l = P.k;
  s.f = {P.g[3], P.g[2], P.g[1], P.g[0]};
  s.g = {P.f[3], P.f[2], P.f[1], P.f[0]};
  return s;
}

Isotopism component_swap_isotopism(const BiprojPair& P) {
  const FieldCtx& K = *P.M;
  Isotopism iso;
  const auto swap_blocks = std::array<LinPoly, 4>{LinPoly{}, linpoly_monomial(K.one(), 0),
                                                  linpoly_monomial(K.one(), 0), LinPoly{}};
  iso.N = LinMap::from_blocks(K, swap_blocks);
  iso.L = LinMap::from_blocks(K, swap_blocks);
  iso.M = iso.L;
  iso.strong = true;
  iso.provenance = "component_swap";
  const Presemifield P1 = Presemifield::from_planar(P);
  const Presemifield P2 = Presemifield::from_planar(component_swap(P));
  if (!verify_isotopism(iso, P1, P2))
    throw std::logic_error("component_swap_isotopism: verification failed");
  return iso;
}

}  // namespace sf
