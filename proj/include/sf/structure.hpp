#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sf/families.hpp"
#include "sf/maps.hpp"

namespace sf {

// Unital semifield obtained from a pre-semifield by Kaplansky's trick:
// x * y := (R_e^{-1} x) o (L_e^{-1} y), identity element e o e.
struct Semifield {
  Presemifield ps;
  FpVec identity;
  FpVec base_point;
};

Semifield unitalize(const Presemifield& P, const FpVec& e);
Semifield unitalize_default(const Presemifield& P);  // e = first basis vector

struct NucleiReport {
  uint64_t nl = 0, nm = 0, nr = 0;
  int dim_l = 0, dim_m = 0, dim_r = 0;
  std::vector<FpVec> basis_l, basis_m, basis_r;
  std::optional<std::array<uint64_t, 3>> predicted;
  bool match = true;  // orders agree with the prediction, when one is present
};

NucleiReport nuclei(const Semifield& S,
                    std::optional<std::array<uint64_t, 3>> predicted = std::nullopt);
// Certified pre-semifield route: unitalize at the default base point and use
// the family prediction carried in the metadata.
NucleiReport nuclei_of(const Presemifield& P);

// Autotopism / isotopism verification on all n^2 basis pairs plus
// invertibility of the three maps.
bool verify_triple(const LinTriple& T, const Presemifield& P1, const Presemifield& P2);
inline bool verify_autotopism(const LinTriple& T, const Presemifield& P) {
  return verify_triple(T, P, P);
}

// gamma_a = (diag(a^{q+1}, a^{r+1}), diag(a, a), diag(a, a)), an autotopism of
// every (q,r)-biprojective pre-semifield for a != 0.
LinTriple gamma_a(const BiprojPair& bp, elt a);

struct CentralizerReport {
  uint64_t size = 0;
  uint64_t diag_count = 0, anti_count = 0;
  uint64_t predicted_small = 0, predicted_large = 0;  // (p^m-1)(p^e-1) and twice it
  bool matches_closed_form = false;
  bool antidiag_contributes = false;
  uint64_t torus_order = 0;        // p^m - 1
  uint64_t index_over_torus = 0;   // |C_P| / (p^m - 1)
  uint64_t pprime = 0;
  bool condition_c = false;        // pprime does not divide the index
};

// Enumerates the centralizer of the torus Sylow subgroup inside Aut(P) for a
// Family-S pre-semifield by the diagonal/antidiagonal case analysis; every
// emitted triple is re-verified as an autotopism before being counted.
// `audit` additionally re-derives both cases by a full loop over coefficient
// pairs with solvability tests and cross-checks the counts.
CentralizerReport centralizer_enumerate(const Presemifield& P, int jobs = 0, bool audit = false,
                                        std::vector<LinTriple>* out_elements = nullptr);
CentralizerReport centralizer_enumerate(const FamilySParams& prm, int jobs = 0, bool audit = false,
                                        std::vector<LinTriple>* out_elements = nullptr);

}  // namespace sf
