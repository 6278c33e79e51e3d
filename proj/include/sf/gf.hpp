#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sf {

// Violation of a documented parameter condition; `condition` is a stable
// machine-readable tag, what() carries the readable message.
class ConditionError : public std::invalid_argument {
 public:
  ConditionError(std::string cond, const std::string& msg)
      : std::invalid_argument(msg), condition(std::move(cond)) {}
  std::string condition;
};

// Exact arithmetic context for GF(p^m), p an odd prime.
//
// Elements are indices in [0, p^m): the base-p packing of the coefficient
// vector in the polynomial basis 1, x, ..., x^{m-1} modulo a deterministic
// modulus (the lexicographically smallest monic irreducible polynomial of
// degree m whose root generates the multiplicative group). The root x
// itself is the canonical generator, so identical (p, m) always produce
// identical contexts, element indices and discrete logs.
//
// Immutable after construction; all operations are const and thread-safe.
class FieldCtx {
 public:
  using elt = uint32_t;

  FieldCtx(uint32_t p, int m);

  // Shared, cached context (contexts are immutable).
  static const FieldCtx& get(uint32_t p, int m);

  uint32_t p() const { return p_; }
  int m() const { return m_; }
  uint64_t order() const { return order_; }        // p^m
  uint64_t group_order() const { return gorder_; } // p^m - 1

  const std::vector<uint32_t>& modulus() const { return modulus_; }  // degree m, monic

  elt zero() const { return 0; }
  elt one() const { return one_; }
  elt gen() const { return gen_; }

  elt add(elt a, elt b) const;
  elt neg(elt a) const;
  elt sub(elt a, elt b) const { return add(a, neg(b)); }
  elt mul(elt a, elt b) const;
  elt inv(elt a) const;
  elt div(elt a, elt b) const { return mul(a, inv(b)); }
  elt pow(elt a, int64_t e) const;
  elt frob(elt a, int i) const;  // a^{p^i}, i taken mod m

  // Discrete log with respect to gen(); a != 0.
  uint64_t dlog(elt a) const;
  elt from_dlog(int64_t e) const;

  elt from_int(uint64_t scalar) const;  // image of an integer (mod p)
  std::vector<uint8_t> coeffs(elt a) const;
  elt from_coeffs(const std::vector<uint8_t>& c) const;

  // x in (M^x)^2, i.e. x^{(p^m-1)/2} = 1. Throws on x = 0.
  bool is_square(elt a) const;
  // x in (M^x)^s. Throws on x = 0.
  bool power_subgroup_test(elt a, uint64_t s) const;

  // Subfield tower: one entry per divisor d of m, the subfield GF(p^d).
  const std::vector<int>& subfield_degrees() const { return tower_; }
  bool in_subfield(int d, elt a) const;    // d | m
  elt subfield_gen(int d) const;           // canonical generator of GF(p^d)^x
  std::vector<elt> subfield_elements(int d) const;

  // Cyclic subgroup of order = p'-part of p^m - 1 for a prime p' | p^m - 1,
  // generated by gen()^{(p^m-1)/|R|}. Throws when p' does not divide p^m - 1.
  std::vector<elt> sylow_subgroup(uint64_t pprime) const;

  // For even m and nonzero square x: the decomposition x = c * g with
  // c in L^x = GF(p^{m/2})^x and g^{Q+1} = 1 (Q = p^{m/2}). Exactly two
  // decompositions exist, differing by (-c, -g); returns the canonical one
  // (even discrete log of c in L^x, smaller log breaking ties).
  std::pair<elt, elt> decompose_square(elt x) const;

  // Roots in this field of a monic polynomial with coefficients in F_p
  // (ascending, length deg+1). Used for subfield embeddings across contexts.
  std::vector<elt> roots_of_fp_poly(const std::vector<uint32_t>& poly) const;

  bool has_tables() const { return has_tables_; }

 private:
  uint32_t p_;
  int m_;
  uint64_t order_, gorder_;
  std::vector<uint32_t> modulus_;  // length m+1, ascending, monic
  elt one_, gen_;
  bool has_tables_;
  std::vector<uint32_t> log_, alog_;  // tables when order_ <= kTableCap
  std::vector<int64_t> zech_;         // zech_[k] = dlog(1 + g^k), -1 when zero
  std::vector<int> tower_;

  static constexpr uint64_t kTableCap = 59049;  // 3^10

  elt add_digits(elt a, elt b) const;
  elt mul_poly(elt a, elt b) const;  // schoolbook, no tables
  uint64_t dlog_bsgs(elt a) const;
};

// Constructor-style entry point.
inline const FieldCtx& make_field(uint32_t p, int m) { return FieldCtx::get(p, m); }

// Convenience element wrapper carrying its context.
struct Fe {
  const FieldCtx* F = nullptr;
  FieldCtx::elt v = 0;

  Fe() = default;
  Fe(const FieldCtx& f, FieldCtx::elt val) : F(&f), v(val) {}
  static Fe zero(const FieldCtx& f) { return {f, 0}; }
  static Fe one(const FieldCtx& f) { return {f, f.one()}; }
  static Fe gen(const FieldCtx& f) { return {f, f.gen()}; }

  bool is_zero() const { return v == 0; }
  Fe frob(int i) const { return {*F, F->frob(v, i)}; }
  Fe pow(int64_t e) const { return {*F, F->pow(v, e)}; }
  Fe inv() const { return {*F, F->inv(v)}; }

  friend Fe operator+(Fe a, Fe b) { return {*a.F, a.F->add(a.v, b.v)}; }
  friend Fe operator-(Fe a, Fe b) { return {*a.F, a.F->sub(a.v, b.v)}; }
  friend Fe operator-(Fe a) { return {*a.F, a.F->neg(a.v)}; }
  friend Fe operator*(Fe a, Fe b) { return {*a.F, a.F->mul(a.v, b.v)}; }
  friend Fe operator/(Fe a, Fe b) { return {*a.F, a.F->div(a.v, b.v)}; }
  friend bool operator==(Fe a, Fe b) { return a.v == b.v; }
  friend bool operator!=(Fe a, Fe b) { return a.v != b.v; }
};

}  // namespace sf
