#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sf/maps.hpp"

namespace sf {

// Witness of non-planarity for the brute-force checker: a point a != 0 whose
// polarization map x -> Delta_F(x, a) has a nontrivial kernel vector.
struct BruteWitness {
  FpVec a;
  FpVec kernel;
};

// Witness for the biprojective linear-system checker: a projective parameter
// u (an element of M, or infinity) whose 2m x 2m system has a nonzero
// solution (x, y).
struct BiprojWitness {
  bool at_infinity = false;
  elt u = 0;
  elt x = 0, y = 0;
};

struct CheckerRun {
  std::string name;  // "biprojective_system" or "bruteforce_polarization"
  bool pass = false;
  std::optional<BruteWitness> brute_witness;
  std::optional<BiprojWitness> biproj_witness;
  double seconds = 0.0;
};

struct PlanarityCertificate {
  bool planar = false;
  std::vector<CheckerRun> runs;
  bool agreement = true;
  bool from_cache = false;
};

// Brute-force oracle: |field| capped at 3^12.
inline constexpr uint64_t kBruteForceCap = 531441;

bool is_planar_bruteforce(const PlanarMap& F, BruteWitness* witness = nullptr, int jobs = 0);

// One exact kernel computation per u in M union {infinity}, p^m + 1 systems.
bool is_planar_biproj(const BiprojPair& P, BiprojWitness* witness = nullptr, int jobs = 0);

// Runs every applicable checker; disagreement between checkers throws (it
// would indicate an implementation bug). Honors SEMIFIELD_CACHE_DIR for
// memoized certificates keyed by the canonical map hash.
PlanarityCertificate certify(const PlanarMap& F, int jobs = 0, bool force_oracle = false);

// Certify the origin map of a pre-semifield and stamp its S3 certificate.
PlanarityCertificate certify(Presemifield& P, int jobs = 0, bool force_oracle = false);

}  // namespace sf
