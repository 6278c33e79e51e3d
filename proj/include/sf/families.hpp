#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sf/maps.hpp"

namespace sf {

// Validated parameters for the commutative pre-semifields
// [(1,0,0,B)_q, (0,1,a/B,0)_r] over M = GF(p^m), q = p^k, r = qQ, Q = p^{m/2}.
struct FamilySParams {
  const FieldCtx* M = nullptr;
  uint32_t p = 0;
  int m = 0, k = 0;
  elt B = 0, a = 0;
  // Derived.
  int l = 0;       // exponent of r: k + m/2 mod m
  int e = 0;       // gcd(k, m), even
  int d = 0;       // gcd(k + m/2, m) = e/2
  uint64_t q = 0, r = 0, Q = 0;

  static FamilySParams make(uint32_t p, int m, int k, elt B, elt a);
  static FamilySParams make_dlog(uint32_t p, int m, int k, int64_t B_dlog, int64_t a_dlog);

  BiprojPair pair() const;
};

struct FamilyInstance {
  PlanarMap map;
  Presemifield psf;
  FamilyMeta meta;
};

FamilyInstance family_s(const FamilySParams& prm);
FamilyInstance family_s(uint32_t p, int m, int k, elt B, elt a, bool permissive = false);

FamilyInstance dickson(uint32_t p, int m, int k, elt a, bool permissive = false);
FamilyInstance albert_univariate(uint32_t p, int n, int k);
FamilyInstance albert_biproj(uint32_t p, int m, int k, elt a);
FamilyInstance zhou_pott(uint32_t p, int m, int k, int j, elt a, bool permissive = false);
FamilyInstance bh(uint32_t p, int m, int k, elt a, bool permissive = false);
FamilyInstance field_square(uint32_t p, int n);
FamilyInstance field_biproj(uint32_t p, int m, elt a);

FamilyInstance zkw(uint32_t p, int s, int t, std::optional<elt> a = std::nullopt);
FamilyInstance b3(uint32_t p, int s, int t, std::optional<elt> a = std::nullopt);
FamilyInstance b4(uint32_t p, int s, int t, std::optional<elt> a = std::nullopt);
FamilyInstance cm_dy(uint32_t p, int m, int sign);  // sign = +1 or -1
FamilyInstance cg(uint32_t p, int m);
FamilyInstance ganley(uint32_t p, int m, elt a);

// Admissible k values of the family-S shape at (p, m): 1 <= k <= m-1 and
// m / gcd(k, m) odd (which rules out k = m/2).
std::vector<int> family_s_admissible_k(int m);

}  // namespace sf
