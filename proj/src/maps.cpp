#include "sf/maps.hpp"

#include <algorithm>
#include <stdexcept>

namespace sf {

FpVec pack1(const FieldCtx& F, elt x) {
  const auto c = F.coeffs(x);
  return FpVec(c.begin(), c.end());
}

elt unpack1(const FieldCtx& F, const FpVec& v) {
  return F.from_coeffs(std::vector<uint8_t>(v.begin(), v.end()));
}

FpVec pack2(const FieldCtx& M, elt x, elt y) {
  const int m = M.m();
  FpVec v(2 * m);
  const auto cx = M.coeffs(x), cy = M.coeffs(y);
  for (int i = 0; i < m; ++i) {
    v[i] = cx[i];
    v[m + i] = cy[i];
  }
  return v;
}

std::pair<elt, elt> unpack2(const FieldCtx& M, const FpVec& v) {
  const int m = M.m();
  std::vector<uint8_t> cx(v.begin(), v.begin() + m), cy(v.begin() + m, v.begin() + 2 * m);
  return {M.from_coeffs(cx), M.from_coeffs(cy)};
}

// --------------------------------------------------------------------------
// Linearized polynomials.

LinPoly linpoly_normalize(const FieldCtx& K, LinPoly a) {
  const int m = K.m();
  std::map<int, elt> acc;
  for (const auto& t : a) {
    int e = t.exp % m;
    if (e < 0) e += m;
    auto [it, fresh] = acc.emplace(e, t.coef);
    if (!fresh) it->second = K.add(it->second, t.coef);
  }
  LinPoly out;
  for (const auto& [e, c] : acc)
    if (c != 0) out.push_back({c, e});
  return out;
}

elt linpoly_eval(const FieldCtx& K, const LinPoly& a, elt x) {
  elt acc = 0;
  for (const auto& t : a) acc = K.add(acc, K.mul(t.coef, K.frob(x, t.exp)));
  return acc;
}

LinPoly linpoly_add(const FieldCtx& K, const LinPoly& a, const LinPoly& b) {
  LinPoly c = a;
  c.insert(c.end(), b.begin(), b.end());
  return linpoly_normalize(K, c);
}

LinPoly linpoly_compose(const FieldCtx& K, const LinPoly& a, const LinPoly& b) {
  LinPoly c;
  for (const auto& ta : a)
    for (const auto& tb : b) c.push_back({K.mul(ta.coef, K.frob(tb.coef, ta.exp)), ta.exp + tb.exp});
  return linpoly_normalize(K, c);
}

LinPoly linpoly_monomial(elt coef, int exp) { return LinPoly{{coef, exp}}; }

LinPoly matrix_to_linpoly(const FieldCtx& K, const MatFp& block) {
  const int m = K.m();
  if (block.rows() != m || block.cols() != m) throw std::invalid_argument("matrix_to_linpoly: shape");
  // Unknowns: coords of the m coefficients; equations: images of basis elements.
  MatFp A(K.p(), m * m, m * m);
  FpVec rhs(m * m, 0);
  for (int t = 0; t < m; ++t) {
    const elt et = K.from_coeffs([&] {
      std::vector<uint8_t> c(m, 0);
      c[t] = 1;
      return c;
    }());
    for (int i = 0; i < m; ++i) {
      const elt ft = K.frob(et, i);
      for (int s = 0; s < m; ++s) {
        const elt es = K.from_coeffs([&] {
          std::vector<uint8_t> c(m, 0);
          c[s] = 1;
          return c;
        }());
        const auto prod = K.coeffs(K.mul(es, ft));
        for (int r = 0; r < m; ++r) A.set(t * m + r, i * m + s, prod[r]);
      }
    }
    const auto img = block.col(t);
    for (int r = 0; r < m; ++r) rhs[t * m + r] = img[r];
  }
  const auto sol = A.solve(rhs);
  if (!sol) throw std::logic_error("matrix_to_linpoly: no linearized representation (bug)");
  LinPoly out;
  for (int i = 0; i < m; ++i) {
    std::vector<uint8_t> c(sol->begin() + i * m, sol->begin() + (i + 1) * m);
    const elt coef = K.from_coeffs(c);
    if (coef != 0) out.push_back({coef, i});
  }
  return out;
}

// --------------------------------------------------------------------------
// LinMap.

LinMap LinMap::from_matrix(MatFp mat, const FieldCtx* block_field) {
  LinMap L;
  L.mat_ = std::move(mat);
  L.K_ = block_field;
  return L;
}

LinMap LinMap::from_blocks(const FieldCtx& K, std::array<LinPoly, 4> blocks) {
  const int m = K.m();
  LinMap L;
  L.K_ = &K;
  for (auto& b : blocks) b = linpoly_normalize(K, b);
  L.blocks_ = blocks;
  MatFp mat(K.p(), 2 * m, 2 * m);
  for (int s = 0; s < 2 * m; ++s) {
    std::vector<uint8_t> c(m, 0);
    c[s % m] = 1;
    const elt e = K.from_coeffs(c);
    elt ix, iy;
    if (s < m) {
      ix = linpoly_eval(K, blocks[0], e);
      iy = linpoly_eval(K, blocks[2], e);
    } else {
      ix = linpoly_eval(K, blocks[1], e);
      iy = linpoly_eval(K, blocks[3], e);
    }
    mat.set_col(s, pack2(K, ix, iy));
  }
  L.mat_ = std::move(mat);
  return L;
}

LinMap LinMap::identity(uint32_t p, int n, const FieldCtx* block_field) {
  LinMap L = from_matrix(MatFp::identity(p, n), block_field);
  if (block_field && n == 2 * block_field->m()) {
    L.blocks_ = std::array<LinPoly, 4>{linpoly_monomial(block_field->one(), 0), LinPoly{},
                                       LinPoly{}, linpoly_monomial(block_field->one(), 0)};
  }
  return L;
}

std::array<LinPoly, 4> LinMap::to_blocks() const {
  if (blocks_) return *blocks_;
  if (!K_ || dim() != 2 * K_->m()) throw std::logic_error("LinMap::to_blocks: no block field");
  const int m = K_->m();
  std::array<LinPoly, 4> out;
  for (int br = 0; br < 2; ++br) {
    for (int bc = 0; bc < 2; ++bc) {
      MatFp sub(mat_.p(), m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub.set(i, j, mat_.at(br * m + i, bc * m + j));
      out[br * 2 + bc] = matrix_to_linpoly(*K_, sub);
    }
  }
  return out;
}

std::pair<elt, elt> LinMap::apply2(elt x, elt y) const {
  const FieldCtx& K = *K_;
  if (blocks_) {
    const auto& b = *blocks_;
    return {K.add(linpoly_eval(K, b[0], x), linpoly_eval(K, b[1], y)),
            K.add(linpoly_eval(K, b[2], x), linpoly_eval(K, b[3], y))};
  }
  return unpack2(K, mat_.apply(pack2(K, x, y)));
}

LinMap LinMap::compose(const LinMap& rhs) const {
  LinMap out = from_matrix(mat_.mul(rhs.mat_), K_ ? K_ : rhs.K_);
  if (blocks_ && rhs.blocks_ && K_ == rhs.K_) {
    const auto& A = *blocks_;
    const auto& B = *rhs.blocks_;
    const FieldCtx& K = *K_;
    out.blocks_ = std::array<LinPoly, 4>{
        linpoly_add(K, linpoly_compose(K, A[0], B[0]), linpoly_compose(K, A[1], B[2])),
        linpoly_add(K, linpoly_compose(K, A[0], B[1]), linpoly_compose(K, A[1], B[3])),
        linpoly_add(K, linpoly_compose(K, A[2], B[0]), linpoly_compose(K, A[3], B[2])),
        linpoly_add(K, linpoly_compose(K, A[2], B[1]), linpoly_compose(K, A[3], B[3]))};
  }
  return out;
}

std::optional<LinMap> LinMap::inverse() const {
  auto inv = mat_.inverse();
  if (!inv) return std::nullopt;
  return from_matrix(std::move(*inv), K_);
}

// --------------------------------------------------------------------------
// DOPoly.

void DOPoly::normalize() {
  const int n = F->m();
  std::map<std::pair<int, int>, elt> acc;
  for (const auto& t : terms) {
    int i = ((t.i % n) + n) % n, j = ((t.j % n) + n) % n;
    if (i > j) std::swap(i, j);
    auto [it, fresh] = acc.emplace(std::make_pair(i, j), t.coef);
    if (!fresh) it->second = F->add(it->second, t.coef);
  }
  terms.clear();
  for (const auto& [ij, c] : acc)
    if (c != 0) terms.push_back({c, ij.first, ij.second});
  linear = linpoly_normalize(*F, linear);
}

elt DOPoly::eval(elt x) const {
  elt acc = 0;
  for (const auto& t : terms) acc = F->add(acc, F->mul(t.coef, F->mul(F->frob(x, t.i), F->frob(x, t.j))));
  acc = F->add(acc, linpoly_eval(*F, linear, x));
  return acc;
}

elt DOPoly::polar(elt x, elt y) const {
  elt acc = 0;
  for (const auto& t : terms) {
    const elt s = F->add(F->mul(F->frob(x, t.i), F->frob(y, t.j)), F->mul(F->frob(y, t.i), F->frob(x, t.j)));
    acc = F->add(acc, F->mul(t.coef, s));
  }
  return acc;
}

// --------------------------------------------------------------------------
// PairMap.

std::pair<elt, elt> PairMap::eval(elt x, elt y) const {
  std::array<elt, 2> out{0, 0};
  const elt in[2] = {x, y};
  for (int c = 0; c < 2; ++c) {
    for (const auto& t : comp[c])
      out[c] = M->add(out[c], M->mul(t.coef, M->mul(M->frob(in[t.v1], t.i), M->frob(in[t.v2], t.j))));
    for (const auto& t : lin[c]) out[c] = M->add(out[c], M->mul(t.coef, M->frob(in[t.v], t.i)));
  }
  return {out[0], out[1]};
}

std::pair<elt, elt> PairMap::polar(elt x, elt y, elt u, elt v) const {
  std::array<elt, 2> out{0, 0};
  const elt s[2] = {x, y}, t2[2] = {u, v};
  for (int c = 0; c < 2; ++c) {
    for (const auto& t : comp[c]) {
      const elt cross = M->add(M->mul(M->frob(s[t.v1], t.i), M->frob(t2[t.v2], t.j)),
                               M->mul(M->frob(t2[t.v1], t.i), M->frob(s[t.v2], t.j)));
      out[c] = M->add(out[c], M->mul(t.coef, cross));
    }
  }
  return {out[0], out[1]};
}

// --------------------------------------------------------------------------
// BiprojPair.

std::pair<elt, elt> BiprojPair::eval(elt x, elt y) const {
  const FieldCtx& K = *M;
  const elt xq = K.frob(x, k), yq = K.frob(y, k);
  const elt xr = K.frob(x, l), yr = K.frob(y, l);
  elt a = K.add(K.add(K.mul(f[0], K.mul(xq, x)), K.mul(f[1], K.mul(xq, y))),
                K.add(K.mul(f[2], K.mul(x, yq)), K.mul(f[3], K.mul(yq, y))));
  elt b = K.add(K.add(K.mul(g[0], K.mul(xr, x)), K.mul(g[1], K.mul(xr, y))),
                K.add(K.mul(g[2], K.mul(x, yr)), K.mul(g[3], K.mul(yr, y))));
  return {a, b};
}

std::pair<elt, elt> BiprojPair::polar(elt x, elt y, elt u, elt v) const {
  const FieldCtx& K = *M;
  const elt xq = K.frob(x, k), yq = K.frob(y, k), uq = K.frob(u, k), vq = K.frob(v, k);
  const elt xr = K.frob(x, l), yr = K.frob(y, l), ur = K.frob(u, l), vr = K.frob(v, l);
  const elt a =
      K.add(K.add(K.mul(K.add(K.mul(f[0], u), K.mul(f[1], v)), xq),
                  K.mul(K.add(K.mul(f[0], uq), K.mul(f[2], vq)), x)),
            K.add(K.mul(K.add(K.mul(f[2], u), K.mul(f[3], v)), yq),
                  K.mul(K.add(K.mul(f[1], uq), K.mul(f[3], vq)), y)));
  const elt b =
      K.add(K.add(K.mul(K.add(K.mul(g[0], u), K.mul(g[1], v)), xr),
                  K.mul(K.add(K.mul(g[0], ur), K.mul(g[2], vr)), x)),
            K.add(K.mul(K.add(K.mul(g[2], u), K.mul(g[3], v)), yr),
                  K.mul(K.add(K.mul(g[1], ur), K.mul(g[3], vr)), y)));
  return {a, b};
}

PairMap BiprojPair::to_pair_map() const {
  PairMap pm;
  pm.M = M;
  // f = a0 x^{q}x + b0 x^q y + c0 x y^q + d0 y^q y; likewise g with r.
  auto fill = [&](int c, const std::array<elt, 4>& co, int e) {
    if (co[0]) pm.comp[c].push_back({co[0], 0, e, 0, 0});
    if (co[1]) pm.comp[c].push_back({co[1], 0, e, 1, 0});
    if (co[2]) pm.comp[c].push_back({co[2], 0, 0, 1, e});
    if (co[3]) pm.comp[c].push_back({co[3], 1, e, 1, 0});
  };
  fill(0, f, k);
  fill(1, g, l);
  return pm;
}

// --------------------------------------------------------------------------
// PlanarMap helpers.

int planar_dim(const PlanarMap& F) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DOPoly>)
          return m.F->m();
        else
          return 2 * m.M->m();
      },
      F);
}

const FieldCtx& planar_base(const PlanarMap& F) {
  return std::visit(
      [](const auto& m) -> const FieldCtx& {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DOPoly>)
          return *m.F;
        else
          return *m.M;
      },
      F);
}

bool planar_two_var(const PlanarMap& F) { return !std::holds_alternative<DOPoly>(F); }

FpVec planar_eval(const PlanarMap& F, const FpVec& v) {
  return std::visit(
      [&](const auto& m) -> FpVec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DOPoly>) {
          return pack1(*m.F, m.eval(unpack1(*m.F, v)));
        } else {
          const auto [x, y] = unpack2(*m.M, v);
          const auto [a, b] = m.eval(x, y);
          return pack2(*m.M, a, b);
        }
      },
      F);
}

FpVec planar_polar(const PlanarMap& F, const FpVec& a, const FpVec& b) {
  return std::visit(
      [&](const auto& m) -> FpVec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DOPoly>) {
          return pack1(*m.F, m.polar(unpack1(*m.F, a), unpack1(*m.F, b)));
        } else {
          const auto [x, y] = unpack2(*m.M, a);
          const auto [u, v] = unpack2(*m.M, b);
          const auto [s, t] = m.polar(x, y, u, v);
          return pack2(*m.M, s, t);
        }
      },
      F);
}

// --------------------------------------------------------------------------
// Presemifield.

Presemifield Presemifield::from_planar(const PlanarMap& F) {
  Presemifield P;
  P.K_ = &planar_base(F);
  P.n_ = planar_dim(F);
  P.two_var_ = planar_two_var(F);
  P.commutative_ = true;  // polarizations are symmetric
  P.origin_ = F;
  if (const auto* bp = std::get_if<BiprojPair>(&F)) P.bp_ = *bp;
  PlanarMap copy = F;
  P.closure_ = [copy](const FpVec& a, const FpVec& b) { return planar_polar(copy, a, b); };
  P.build_table();
  return P;
}

Presemifield Presemifield::from_bilinear(const FieldCtx& K, int n, bool two_var, bool commutative,
                                         std::function<FpVec(const FpVec&, const FpVec&)> closure) {
  Presemifield P;
  P.K_ = &K;
  P.n_ = n;
  P.two_var_ = two_var;
  P.commutative_ = commutative;
  P.closure_ = std::move(closure);
  P.build_table();
  return P;
}

void Presemifield::build_table() {
  if (n_ > kTableDimCap) return;
  table_.resize(n_ * n_);
  for (int i = 0; i < n_; ++i) {
    FpVec ei(n_, 0);
    ei[i] = 1;
    for (int j = 0; j < n_; ++j) {
      FpVec ej(n_, 0);
      ej[j] = 1;
      table_[i * n_ + j] = closure_(ei, ej);
    }
  }
  if (two_var_) {
    table2_.resize(n_ * n_);
    for (int i = 0; i < n_ * n_; ++i) table2_[i] = unpack2(*K_, table_[i]);
  }
}

FpVec Presemifield::mul(const FpVec& a, const FpVec& b) const {
  if (table_.empty()) return closure_(a, b);
  const uint32_t p = K_->p();
  FpVec r(n_, 0);
  for (int i = 0; i < n_; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < n_; ++j) {
      if (!b[j]) continue;
      const uint32_t c = (a[i] * b[j]) % p;
      const FpVec& t = table_[i * n_ + j];
      for (int s = 0; s < n_; ++s) r[s] = static_cast<uint8_t>((r[s] + c * t[s]) % p);
    }
  }
  return r;
}

std::pair<elt, elt> Presemifield::mul2(elt x, elt y, elt u, elt v) const {
  if (bp_) return bp_->polar(x, y, u, v);
  if (!two_var_) throw std::logic_error("mul2 on single-variable pre-semifield");
  return unpack2(*K_, mul(pack2(*K_, x, y), pack2(*K_, u, v)));
}

MatFp Presemifield::left_mult_matrix(const FpVec& a) const {
  MatFp mat(K_->p(), n_, n_);
  for (int j = 0; j < n_; ++j) {
    FpVec ej(n_, 0);
    ej[j] = 1;
    mat.set_col(j, mul(a, ej));
  }
  return mat;
}

MatFp Presemifield::right_mult_matrix(const FpVec& a) const {
  MatFp mat(K_->p(), n_, n_);
  for (int j = 0; j < n_; ++j) {
    FpVec ej(n_, 0);
    ej[j] = 1;
    mat.set_col(j, mul(ej, a));
  }
  return mat;
}

Presemifield polarize(const PlanarMap& F) { return Presemifield::from_planar(F); }

}  // namespace sf
