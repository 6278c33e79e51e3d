#include "sf/structure.hpp"

#include <mutex>

#include "sf/nt.hpp"
#include "sf/parallel.hpp"

namespace sf {

Semifield unitalize(const Presemifield& P, const FpVec& e) {
  if (!P.s3_certified())
    throw ConditionError("s3_certificate", "unitalize: pre-semifield lacks an S3 certificate");
  if (fp_is_zero(e)) throw ConditionError("e_nonzero", "unitalize: e must be nonzero");
  const int n = P.dim();
  const MatFp Re = P.right_mult_matrix(e);
  const MatFp Le = P.left_mult_matrix(e);
  const auto Re_inv = Re.inverse();
  const auto Le_inv = Le.inverse();
  if (!Re_inv || !Le_inv)
    throw std::logic_error("unitalize: multiplication by e is singular despite S3");
  const MatFp Ri = *Re_inv, Li = *Le_inv;
  // Copy the structure data needed by the closure by value.
  const Presemifield base = P;
  auto closure = [base, Ri, Li](const FpVec& x, const FpVec& y) {
    return base.mul(Ri.apply(x), Li.apply(y));
  };
  Semifield S;
  S.ps = Presemifield::from_bilinear(P.base(), n, P.two_var(), P.commutative(), closure);
  S.ps.set_s3_certified(true);
  S.ps.meta = P.meta;
  S.base_point = e;
  S.identity = P.mul(e, e);
  // The identity law is structural; still assert it on the basis.
  for (int i = 0; i < n; ++i) {
    FpVec ei(n, 0);
    ei[i] = 1;
    if (S.ps.mul(S.identity, ei) != ei || S.ps.mul(ei, S.identity) != ei)
      throw std::logic_error("unitalize: identity law failed");
  }
  return S;
}

Semifield unitalize_default(const Presemifield& P) {
  FpVec e(P.dim(), 0);
  e[0] = 1;
  return unitalize(P, e);
}

namespace {

// Kernel of the stacked associativity system; rows indexed by basis pairs.
std::vector<FpVec> associativity_kernel(const Presemifield& S, int which) {
  const int n = S.dim();
  const uint32_t p = S.base().p();
  std::vector<MatFp> L(n), R(n);
  for (int i = 0; i < n; ++i) {
    FpVec ei(n, 0);
    ei[i] = 1;
    L[i] = S.left_mult_matrix(ei);
    R[i] = S.right_mult_matrix(ei);
  }
  MatFp sys(p, n * n * n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      MatFp D(p, n, n);
      FpVec ei(n, 0), ej(n, 0);
      ei[i] = 1;
      ej[j] = 1;
      switch (which) {
        case 0: {  // left: (x*e_i)*e_j - x*(e_i*e_j)
          const MatFp a = R[j].mul(R[i]);
          const MatFp b = S.right_mult_matrix(S.mul(ei, ej));
          D = a.add(b.scale(p - 1));
          break;
        }
        case 1: {  // middle: (e_i*y)*e_j - e_i*(y*e_j)
          const MatFp a = R[j].mul(L[i]);
          const MatFp b = L[i].mul(R[j]);
          D = a.add(b.scale(p - 1));
          break;
        }
        default: {  // right: (e_i*e_j)*z - e_i*(e_j*z)
          const MatFp a = S.left_mult_matrix(S.mul(ei, ej));
          const MatFp b = L[i].mul(L[j]);
          D = a.add(b.scale(p - 1));
          break;
        }
      }
      const int base = (i * n + j) * n;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) sys.set(base + r, c, D.at(r, c));
    }
  }
  return sys.kernel_basis();
}

}  // namespace

NucleiReport nuclei(const Semifield& S, std::optional<std::array<uint64_t, 3>> predicted) {
  const auto& ps = S.ps;
  NucleiReport rep;
  rep.basis_l = associativity_kernel(ps, 0);
  rep.basis_m = associativity_kernel(ps, 1);
  rep.basis_r = associativity_kernel(ps, 2);
  rep.dim_l = static_cast<int>(rep.basis_l.size());
  rep.dim_m = static_cast<int>(rep.basis_m.size());
  rep.dim_r = static_cast<int>(rep.basis_r.size());
  const uint32_t p = ps.base().p();
  rep.nl = nt::pow_u64(p, static_cast<unsigned>(rep.dim_l));
  rep.nm = nt::pow_u64(p, static_cast<unsigned>(rep.dim_m));
  rep.nr = nt::pow_u64(p, static_cast<unsigned>(rep.dim_r));
  rep.predicted = predicted;
  if (predicted) rep.match = rep.nl == (*predicted)[0] && rep.nm == (*predicted)[1] && rep.nr == (*predicted)[2];
  return rep;
}

NucleiReport nuclei_of(const Presemifield& P) {
  const Semifield S = unitalize_default(P);
  return nuclei(S, P.meta.predicted_nuclei);
}

bool verify_triple(const LinTriple& T, const Presemifield& P1, const Presemifield& P2) {
  const int n = P1.dim();
  if (P2.dim() != n || T.N.dim() != n || T.L.dim() != n || T.M.dim() != n)
    throw ConditionError("dimension", "verify_triple: dimension mismatch");
  if (!T.N.invertible() || !T.L.invertible() || !T.M.invertible()) return false;

  // Fast path: all three maps blocked over the same field and both
  // pre-semifields biprojective-backed on it.
  if (T.N.blocked() && T.L.blocked() && T.M.blocked() && P1.two_var() && P2.two_var() &&
      P1.has_table() && T.N.block_field() == &P1.base() && T.L.block_field() == &P1.base() &&
      T.M.block_field() == &P1.base() && &P1.base() == &P2.base()) {
    const FieldCtx& K = P1.base();
    const int m = K.m();
    const auto& prods = P1.basis_products2();
    std::vector<std::pair<elt, elt>> Lb(n), Mb(n);
    for (int s = 0; s < n; ++s) {
      const elt x = s < m ? K.from_coeffs([&] {
        std::vector<uint8_t> c(m, 0);
        c[s] = 1;
        return c;
      }())
                          : 0;
      const elt y = s < m ? 0 : K.from_coeffs([&] {
        std::vector<uint8_t> c(m, 0);
        c[s - m] = 1;
        return c;
      }());
      Lb[s] = T.L.apply2(x, y);
      Mb[s] = T.M.apply2(x, y);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto lhs = T.N.apply2(prods[i * n + j].first, prods[i * n + j].second);
        const auto rhs = P2.mul2(Lb[i].first, Lb[i].second, Mb[j].first, Mb[j].second);
        if (lhs != rhs) return false;
      }
    }
    return true;
  }

  for (int i = 0; i < n; ++i) {
    FpVec ei(n, 0);
    ei[i] = 1;
    const FpVec Li = T.L.apply(ei);
    for (int j = 0; j < n; ++j) {
      FpVec ej(n, 0);
      ej[j] = 1;
      const FpVec lhs = T.N.apply(P1.mul(ei, ej));
      const FpVec rhs = P2.mul(Li, T.M.apply(ej));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

LinTriple gamma_a(const BiprojPair& bp, elt a) {
  const FieldCtx& K = *bp.M;
  if (a == 0) throw ConditionError("a_nonzero", "gamma_a: a must be nonzero");
  const int64_t q = static_cast<int64_t>(nt::pow_u64(K.p(), static_cast<unsigned>(bp.k)));
  const int64_t r = static_cast<int64_t>(nt::pow_u64(K.p(), static_cast<unsigned>(bp.l)));
  LinTriple T;
  T.N = LinMap::from_blocks(K, {linpoly_monomial(K.pow(a, q + 1), 0), LinPoly{}, LinPoly{},
                                linpoly_monomial(K.pow(a, r + 1), 0)});
  T.L = LinMap::from_blocks(K, {linpoly_monomial(a, 0), LinPoly{}, LinPoly{}, linpoly_monomial(a, 0)});
  T.M = T.L;
  return T;
}

namespace {

struct CentralizerCases {
  // Valid (omega1, ratio) pairs per case; ratio = a2/d2 (diagonal) or b2/c2
  // (antidiagonal). Counts are multiplied by |M^x| choices of the free
  // coefficient.
  std::vector<std::pair<elt, elt>> diag, anti;
};

}  // namespace

CentralizerReport centralizer_enumerate(const FamilySParams& prm, int jobs, bool audit,
                                        std::vector<LinTriple>* out_elements) {
  const FieldCtx& K = *prm.M;
  const uint64_t N = K.group_order();
  const int64_t q = static_cast<int64_t>(prm.q);
  const int64_t Q = static_cast<int64_t>(prm.Q);
  const elt B = prm.B, a = prm.a;
  const Presemifield P = family_s(prm).psf;

  // E = GF(p^e), the subfield fixed by frobenius^e.
  const auto Es = K.subfield_elements(prm.e);

  CentralizerCases cases;
  for (elt w1 : Es) {
    if (w1 == 0) continue;
    // diagonal: ratio^{q+1} = w1^{Q-1}, ratio^{q(Q+1)} = 1
    {
      const uint64_t rhs = K.dlog(K.pow(w1, Q - 1));
      for (uint64_t t : nt::solve_linear_congruence(static_cast<uint64_t>(q + 1) % N, rhs, N)) {
        if ((static_cast<__uint128_t>(q) * (Q + 1) % N) * t % N == 0)
          cases.diag.emplace_back(w1, K.from_dlog(static_cast<int64_t>(t)));
      }
    }
    // antidiagonal: ratio^{q+1} = B^2 w1^{Q-1}, ratio^{q(Q+1)} = a^{Q+1}
    {
      const elt rhs_elt = K.mul(K.mul(B, B), K.pow(w1, Q - 1));
      const uint64_t rhs = K.dlog(rhs_elt);
      const uint64_t target = K.dlog(K.pow(a, Q + 1));
      for (uint64_t t : nt::solve_linear_congruence(static_cast<uint64_t>(q + 1) % N, rhs, N)) {
        if ((static_cast<__uint128_t>(q) * (Q + 1) % N) * t % N == target)
          cases.anti.emplace_back(w1, K.from_dlog(static_cast<int64_t>(t)));
      }
    }
  }

  std::mutex mu;
  uint64_t diag_count = 0, anti_count = 0;
  if (out_elements) jobs = 1;  // keep emission order deterministic
  // Iterate the free coefficient over M^x, reconstruct each triple, verify it.
  parallel_chunks(static_cast<int64_t>(N), jobs, [&](int64_t lo, int64_t hi) {
    uint64_t local_diag = 0, local_anti = 0;
    std::vector<LinTriple> local_out;
    for (int64_t di = lo; di < hi; ++di) {
      const elt a2 = K.from_dlog(di);
      for (const auto& [w1, ratio] : cases.diag) {
        const elt w2 = K.frob(w1, prm.m / 2);
        const elt d2 = K.div(a2, ratio);
        const elt a3 = K.mul(w1, a2), d3 = K.mul(w2, d2);
        const elt a1 = K.mul(K.pow(a2, q), a3);
        const elt d1 = K.mul(K.pow(a2, q * Q % static_cast<int64_t>(N)), d3);
        LinTriple T;
        T.N = LinMap::from_blocks(K, {linpoly_monomial(a1, 0), {}, {}, linpoly_monomial(d1, 0)});
        T.L = LinMap::from_blocks(K, {linpoly_monomial(a2, 0), {}, {}, linpoly_monomial(d2, 0)});
        T.M = LinMap::from_blocks(K, {linpoly_monomial(a3, 0), {}, {}, linpoly_monomial(d3, 0)});
        if (!verify_autotopism(T, P))
          throw std::logic_error("centralizer: diagonal candidate failed verification");
        ++local_diag;
        if (out_elements) local_out.push_back(std::move(T));
      }
      for (const auto& [w1, ratio] : cases.anti) {
        const elt b2 = a2;  // free coefficient of the antidiagonal case
        const elt w2 = K.frob(w1, prm.m / 2);
        const elt c2 = K.div(b2, ratio);
        const elt b3 = K.mul(w1, b2), c3 = K.mul(w2, c2);
        const elt a1 = K.mul(B, K.mul(K.pow(c2, q), c3));
        const elt d1 = K.mul(K.div(a, B), K.mul(K.pow(c2, q * Q % static_cast<int64_t>(N)), b3));
        LinTriple T;
        T.N = LinMap::from_blocks(K, {linpoly_monomial(a1, 0), {}, {}, linpoly_monomial(d1, 0)});
        T.L = LinMap::from_blocks(K, std::array<LinPoly, 4>{LinPoly{}, linpoly_monomial(b2, 0),
                                                             linpoly_monomial(c2, 0), LinPoly{}});
        T.M = LinMap::from_blocks(K, std::array<LinPoly, 4>{LinPoly{}, linpoly_monomial(b3, 0),
                                                             linpoly_monomial(c3, 0), LinPoly{}});
        if (!verify_autotopism(T, P))
          throw std::logic_error("centralizer: antidiagonal candidate failed verification");
        ++local_anti;
        if (out_elements) local_out.push_back(std::move(T));
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    diag_count += local_diag;
    anti_count += local_anti;
    if (out_elements)
      for (auto& t : local_out) out_elements->push_back(std::move(t));
  });

  if (audit) {
    // Slow path: loop over the ratio a2/d2 (resp. b2/c2) directly and test
    // solvability against every omega1. Each valid (ratio, omega1) pair
    // accounts for |M^x| triples, one per free coefficient.
    uint64_t audit_diag = 0, audit_anti = 0;
    for (uint64_t t = 0; t < N; ++t) {
      const elt ratio = K.from_dlog(static_cast<int64_t>(t));
      for (elt w1 : Es) {
        if (w1 == 0) continue;
        const elt rq1 = K.pow(ratio, q + 1);
        const elt rqQ1 = K.pow(ratio, q * (Q + 1) % static_cast<int64_t>(N));
        if (rq1 == K.pow(w1, Q - 1) && rqQ1 == K.one()) ++audit_diag;
        if (rq1 == K.mul(K.mul(B, B), K.pow(w1, Q - 1)) && rqQ1 == K.pow(a, Q + 1)) ++audit_anti;
      }
    }
    if (audit_diag * N != diag_count || audit_anti * N != anti_count)
      throw std::logic_error("centralizer: audit path disagrees with enumeration");
  }

  CentralizerReport rep;
  rep.diag_count = diag_count;
  rep.anti_count = anti_count;
  rep.size = diag_count + anti_count;
  const uint64_t pe = nt::pow_u64(prm.p, static_cast<unsigned>(prm.e));
  rep.predicted_small = N * (pe - 1);
  rep.predicted_large = 2 * rep.predicted_small;
  rep.matches_closed_form = rep.size == rep.predicted_small || rep.size == rep.predicted_large;
  rep.antidiag_contributes = anti_count > 0;
  rep.torus_order = N;
  rep.index_over_torus = rep.size / N;
  rep.pprime = nt::zsigmondy_prime(prm.p, prm.m);
  rep.condition_c = rep.index_over_torus % rep.pprime != 0;
  return rep;
}

CentralizerReport centralizer_enumerate(const Presemifield& P, int jobs, bool audit,
                                        std::vector<LinTriple>* out_elements) {
  if (P.meta.family != "S" || !P.meta.reduced_to.empty())
    throw ConditionError("family_s_input", "centralizer_enumerate: Family-S input required");
  const auto& par = P.meta.params;
  const uint32_t p = static_cast<uint32_t>(std::stoul(par.at("p")));
  const int m = std::stoi(par.at("m"));
  const int k = std::stoi(par.at("k"));
  const FamilySParams prm = FamilySParams::make_dlog(p, m, k, std::stoll(par.at("B")),
                                                     std::stoll(par.at("a")));
  return centralizer_enumerate(prm, jobs, audit, out_elements);
}

}  // namespace sf
