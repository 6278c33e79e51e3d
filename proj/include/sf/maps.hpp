#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sf/gf.hpp"
#include "sf/matfp.hpp"

namespace sf {

using elt = FieldCtx::elt;

// ---------------------------------------------------------------------------
// Coordinates. Single-field maps live on GF(p^n) with the polynomial basis;
// two-variable maps live on M x M with x-coordinates before y-coordinates.

FpVec pack1(const FieldCtx& F, elt x);
elt unpack1(const FieldCtx& F, const FpVec& v);
FpVec pack2(const FieldCtx& M, elt x, elt y);
std::pair<elt, elt> unpack2(const FieldCtx& M, const FpVec& v);

// ---------------------------------------------------------------------------
// Linearized polynomials sum_i c_i X^{p^i} over a field K.

struct LinTerm {
  elt coef;
  int exp;
};
using LinPoly = std::vector<LinTerm>;

LinPoly linpoly_normalize(const FieldCtx& K, LinPoly a);
elt linpoly_eval(const FieldCtx& K, const LinPoly& a, elt x);
LinPoly linpoly_add(const FieldCtx& K, const LinPoly& a, const LinPoly& b);
LinPoly linpoly_compose(const FieldCtx& K, const LinPoly& a, const LinPoly& b);  // a after b
LinPoly linpoly_monomial(elt coef, int exp);

// Recover the linearized-polynomial form of an F_p-linear endomorphism of K
// given by its m x m matrix in the polynomial basis.
LinPoly matrix_to_linpoly(const FieldCtx& K, const MatFp& block);

// ---------------------------------------------------------------------------
// F_p-linear map on an n-dimensional space, optionally carrying the 2x2
// block decomposition over M (n = 2m) as linearized polynomials.

class LinMap {
 public:
  LinMap() = default;

  static LinMap from_matrix(MatFp mat, const FieldCtx* block_field = nullptr);
  // L(x,y) = (B1(x)+B2(y), B3(x)+B4(y)); blocks ordered B1,B2,B3,B4.
  static LinMap from_blocks(const FieldCtx& K, std::array<LinPoly, 4> blocks);
  static LinMap identity(uint32_t p, int n, const FieldCtx* block_field = nullptr);

  int dim() const { return mat_.rows(); }
  const MatFp& matrix() const { return mat_; }
  const FieldCtx* block_field() const { return K_; }
  bool blocked() const { return blocks_.has_value(); }
  const std::array<LinPoly, 4>& blocks() const { return *blocks_; }

  // Derive the block decomposition from the matrix (requires block field).
  std::array<LinPoly, 4> to_blocks() const;

  FpVec apply(const FpVec& v) const { return mat_.apply(v); }
  std::pair<elt, elt> apply2(elt x, elt y) const;  // fast path when blocked

  LinMap compose(const LinMap& rhs) const;  // this after rhs
  std::optional<LinMap> inverse() const;
  bool invertible() const { return mat_.invertible(); }

 private:
  MatFp mat_;
  const FieldCtx* K_ = nullptr;
  std::optional<std::array<LinPoly, 4>> blocks_;
};

// ---------------------------------------------------------------------------
// Dembowski-Ostrom polynomial sum a_ij X^{p^i+p^j} over GF(p^n), with an
// optional linear part (the linear part cancels under polarization).

struct DOPoly {
  const FieldCtx* F = nullptr;
  struct Term {
    elt coef;
    int i, j;
  };
  std::vector<Term> terms;
  LinPoly linear;

  void normalize();  // exponents mod n, i <= j, merged, zero coefs dropped
  elt eval(elt x) const;
  elt polar(elt x, elt y) const;
};

// Two-variable map on M x M with components built from terms
// coef * w1^{p^i} * w2^{p^j} (w1, w2 in {x, y}) plus linear terms.
struct PairMap {
  const FieldCtx* M = nullptr;
  struct Term {
    elt coef;
    uint8_t v1;
    int i;
    uint8_t v2;
    int j;
  };
  struct Lin {
    elt coef;
    uint8_t v;
    int i;
  };
  std::array<std::vector<Term>, 2> comp;
  std::array<std::vector<Lin>, 2> lin;

  std::pair<elt, elt> eval(elt x, elt y) const;
  std::pair<elt, elt> polar(elt x, elt y, elt u, elt v) const;
};

// (q,r)-biprojective pair [(a0,b0,c0,d0)_q, (a1,b1,c1,d1)_r] over M,
// q = p^k, r = p^l.
struct BiprojPair {
  const FieldCtx* M = nullptr;
  std::array<elt, 4> f{};  // a0, b0, c0, d0
  std::array<elt, 4> g{};  // a1, b1, c1, d1
  int k = 0, l = 0;

  int kbar() const { return (M->m() - k) % M->m(); }
  int lbar() const { return (M->m() - l) % M->m(); }

  std::pair<elt, elt> eval(elt x, elt y) const;
  // The polarization: a symmetric M-biprojective bilinear form on (M x M)^2.
  std::pair<elt, elt> polar(elt x, elt y, elt u, elt v) const;
  PairMap to_pair_map() const;
};

using PlanarMap = std::variant<DOPoly, BiprojPair, PairMap>;

int planar_dim(const PlanarMap& F);
const FieldCtx& planar_base(const PlanarMap& F);
bool planar_two_var(const PlanarMap& F);
FpVec planar_eval(const PlanarMap& F, const FpVec& v);
FpVec planar_polar(const PlanarMap& F, const FpVec& a, const FpVec& b);

// ---------------------------------------------------------------------------
// Pre-semifield candidate: an exact bilinear multiplication on F_p^n.
// Zero-divisor freeness is certified separately (planarity module).

struct FamilyMeta {
  std::string family;
  std::map<std::string, std::string> params;
  std::string reduced_to;
  std::string count_note;
  std::optional<std::array<uint64_t, 3>> predicted_nuclei;  // |N_l|, |N_m|, |N_r|
};

class Presemifield {
 public:
  Presemifield() = default;

  static Presemifield from_planar(const PlanarMap& F);
  static Presemifield from_bilinear(const FieldCtx& K, int n, bool two_var, bool commutative,
                                    std::function<FpVec(const FpVec&, const FpVec&)> closure);

  int dim() const { return n_; }
  const FieldCtx& base() const { return *K_; }
  bool two_var() const { return two_var_; }
  bool commutative() const { return commutative_; }

  FpVec mul(const FpVec& a, const FpVec& b) const;
  std::pair<elt, elt> mul2(elt x, elt y, elt u, elt v) const;

  // Structure table access (n <= 16): e_i * e_j.
  bool has_table() const { return !table_.empty(); }
  const FpVec& basis_product(int i, int j) const { return table_[i * n_ + j]; }
  const std::vector<std::pair<elt, elt>>& basis_products2() const { return table2_; }

  MatFp left_mult_matrix(const FpVec& a) const;
  MatFp right_mult_matrix(const FpVec& a) const;

  const std::optional<BiprojPair>& biproj() const { return bp_; }
  const std::optional<PlanarMap>& origin() const { return origin_; }

  bool s3_certified() const { return s3_; }
  void set_s3_certified(bool v) { s3_ = v; }

  FamilyMeta meta;

  static constexpr int kTableDimCap = 16;

 private:
  const FieldCtx* K_ = nullptr;
  int n_ = 0;
  bool two_var_ = false;
  bool commutative_ = false;
  bool s3_ = false;
  std::vector<FpVec> table_;                       // n*n entries when n <= kTableDimCap
  std::vector<std::pair<elt, elt>> table2_;        // same, as field pairs (two_var only)
  std::function<FpVec(const FpVec&, const FpVec&)> closure_;
  std::optional<BiprojPair> bp_;
  std::optional<PlanarMap> origin_;

  void build_table();
};

// Spec-level names.
Presemifield polarize(const PlanarMap& F);
inline std::pair<elt, elt> biproj_mult(const BiprojPair& P, elt x, elt y, elt u, elt v) {
  return P.polar(x, y, u, v);
}

// Triple of linear maps; the common shape for autotopisms and isotopisms.
struct LinTriple {
  LinMap N, L, M;
};

}  // namespace sf
