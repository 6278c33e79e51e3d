#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>

#include "sf/families.hpp"
#include "sf/planarity.hpp"
#include "sf/report.hpp"

using namespace sf;

TEST_CASE("brute-force oracle on the classical examples") {
  SUBCASE("X^2 over GF(9) is planar") {
    DOPoly sq{&make_field(3, 2), {{1, 0, 0}}, {}};
    CHECK(is_planar_bruteforce(PlanarMap{sq}));
  }
  SUBCASE("X^4 over GF(27) is planar") {
    DOPoly q{&make_field(3, 3), {{1, 0, 1}}, {}};
    CHECK(is_planar_bruteforce(PlanarMap{q}));
  }
  SUBCASE("X^4 over GF(9) is not planar, and the witness is genuine") {
    const FieldCtx& F = make_field(3, 2);
    DOPoly q{&F, {{1, 0, 1}}, {}};
    BruteWitness w;
    CHECK_FALSE(is_planar_bruteforce(PlanarMap{q}, &w));
    CHECK_FALSE(fp_is_zero(w.kernel));
    CHECK_FALSE(fp_is_zero(w.a));
    const PlanarMap M{q};
    CHECK(fp_is_zero(planar_polar(M, w.kernel, w.a)));
  }
}

TEST_CASE("biprojective checker") {
  const FieldCtx& M = make_field(3, 6);
  SUBCASE("family S at (3,6,2): planar for one non-square B and all 26 a") {
    for (elt a : M.subfield_elements(3)) {
      if (a == 0) continue;
      auto inst = family_s(3, 6, 2, M.gen(), a);
      CHECK(is_planar_biproj(*inst.psf.biproj()));
    }
  }
  SUBCASE("a0 = a1 = 0 is never planar; the witness solves the failing system") {
    BiprojPair bp;
    bp.M = &M;
    bp.k = 2;
    bp.l = 5;
    bp.f = {0, M.one(), 0, M.gen()};
    bp.g = {0, M.one(), M.one(), 0};
    BiprojWitness w;
    CHECK_FALSE(is_planar_biproj(bp, &w));
    CHECK((w.x != 0 || w.y != 0));
    // The witness solves the failing projective system, i.e. the polarization
    // vanishes at ((x, y), (u, 1)) resp. ((x, y), (1, 0)) for u = infinity.
    const auto z = w.at_infinity ? bp.polar(w.x, w.y, M.one(), 0) : bp.polar(w.x, w.y, w.u, M.one());
    CHECK(z.first == 0);
    CHECK(z.second == 0);
    // The infinity system fails as well: (x, 0) is in its kernel for any x.
    const elt df = M.add(M.mul(bp.f[0], M.frob(M.one(), bp.k)), M.mul(bp.f[0], M.one()));
    const elt dg = M.add(M.mul(bp.g[0], M.frob(M.one(), bp.l)), M.mul(bp.g[0], M.one()));
    CHECK(df == 0);
    CHECK(dg == 0);
  }
  SUBCASE("zhou-pott (3,3,1,1) is planar") {
    auto inst = zhou_pott(3, 3, 1, 1, make_field(3, 3).gen());
    CHECK(is_planar_biproj(*inst.psf.biproj()));
  }
  SUBCASE("witness is deterministic") {
    BiprojPair bp;
    bp.M = &make_field(3, 2);
    bp.k = 0;
    bp.l = 1;
    bp.f = {0, 1, 0, 0};
    bp.g = {0, 1, 0, 0};
    BiprojWitness w1, w2;
    REQUIRE_FALSE(is_planar_biproj(bp, &w1));
    REQUIRE_FALSE(is_planar_biproj(bp, &w2));
    CHECK(w1.at_infinity == w2.at_infinity);
    CHECK(w1.u == w2.u);
    CHECK(w1.x == w2.x);
    CHECK(w1.y == w2.y);
  }
}

TEST_CASE("checker agreement on random pairs at (3,2)") {
  const FieldCtx& M = make_field(3, 2);
  std::mt19937_64 rng(41);
  int planar_seen = 0, nonplanar_seen = 0;
  for (int rep = 0; rep < 60; ++rep) {
    BiprojPair bp;
    bp.M = &M;
    bp.k = static_cast<int>(rng() % 2);
    bp.l = static_cast<int>(rng() % 2);
    for (auto& c : bp.f) c = static_cast<elt>(rng() % 9);
    for (auto& c : bp.g) c = static_cast<elt>(rng() % 9);
    const bool a = is_planar_biproj(bp);
    const bool b = is_planar_bruteforce(PlanarMap{bp});
    CHECK(a == b);
    (a ? planar_seen : nonplanar_seen)++;
  }
  CHECK(nonplanar_seen > 0);  // the sample must actually exercise failures
}

TEST_CASE("certify: checker selection, agreement and failure witnesses") {
  SUBCASE("family S gets both checkers") {
    const FieldCtx& M = make_field(3, 6);
    auto inst = family_s(3, 6, 2, M.gen(), M.one());
    const auto cert = certify(inst.psf);
    REQUIRE(cert.runs.size() == 2);
    CHECK(cert.runs[0].name == "biprojective_system");
    CHECK(cert.runs[1].name == "bruteforce_polarization");
    CHECK(cert.planar);
    CHECK(cert.agreement);
    CHECK(inst.psf.s3_certified());
  }
  SUBCASE("cm/dy is certified by the oracle alone") {
    auto inst = cm_dy(3, 5, +1);
    const auto cert = certify(inst.psf);
    REQUIRE(cert.runs.size() == 1);
    CHECK(cert.runs[0].name == "bruteforce_polarization");
    CHECK(cert.planar);
  }
  SUBCASE("non-planar pair carries a witness") {
    BiprojPair bp;
    bp.M = &make_field(3, 2);
    bp.k = 0;
    bp.l = 1;
    bp.f = {0, 1, 0, 0};
    bp.g = {0, 1, 0, 0};
    const auto cert = certify(PlanarMap{bp});
    CHECK_FALSE(cert.planar);
    CHECK(cert.agreement);
    bool witness_seen = false;
    for (const auto& r : cert.runs) witness_seen |= r.biproj_witness || r.brute_witness;
    CHECK(witness_seen);
  }
}

TEST_CASE("planarity is invariant under the gamma_a substitution") {
  SUBCASE("full certificates at (3,2)") {
    const FieldCtx& M = make_field(3, 2);
    auto inst = dickson(3, 2, 1, M.gen());
    const auto& bp = *inst.psf.biproj();
    for (elt a = 1; a < 9; ++a) {
      BiprojPair scaled = bp;
      for (auto& c : scaled.f) c = M.mul(c, M.pow(a, 1 + 1));
      for (auto& c : scaled.g) c = M.mul(c, M.pow(a, 3 + 1));
      const auto c1 = certify(PlanarMap{bp});
      const auto c2 = certify(PlanarMap{scaled});
      CHECK(c1.planar == c2.planar);
      CHECK(c1.runs.size() == c2.runs.size());
    }
  }
  SUBCASE("biprojective checker at (3,6,2)") {
    const FieldCtx& M = make_field(3, 6);
    auto inst = family_s(3, 6, 2, M.gen(), M.one());
    const auto& bp = *inst.psf.biproj();
    for (elt a : {M.gen(), M.from_dlog(100), M.from_dlog(250)}) {
      BiprojPair scaled = bp;
      for (auto& c : scaled.f) c = M.mul(c, M.pow(a, 9 + 1));
      for (auto& c : scaled.g) c = M.mul(c, M.pow(a, 243 + 1));
      CHECK(is_planar_biproj(scaled) == is_planar_biproj(bp));
    }
  }
}

TEST_CASE("certificate cache round-trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sf_cert_cache_test";
  fs::remove_all(dir);
  setenv("SEMIFIELD_CACHE_DIR", dir.c_str(), 1);
  DOPoly q{&make_field(3, 3), {{1, 0, 1}}, {}};
  const auto c1 = certify(PlanarMap{q});
  CHECK_FALSE(c1.from_cache);
  const auto c2 = certify(PlanarMap{q});
  CHECK(c2.from_cache);
  CHECK(c1.planar == c2.planar);
  unsetenv("SEMIFIELD_CACHE_DIR");
  fs::remove_all(dir);
}

TEST_CASE("brute-force cap is enforced") {
  DOPoly q{&make_field(3, 6), {{1, 0, 1}}, {}};
  CHECK_NOTHROW(is_planar_bruteforce(PlanarMap{q}));
  // A two-variable map over GF(3^7) has 3^14 points, beyond the cap.
  PairMap pm;
  pm.M = &make_field(3, 7);
  pm.comp[0] = {{1, 0, 0, 0, 0}};
  pm.comp[1] = {{1, 0, 0, 1, 0}};
  CHECK_THROWS_AS(is_planar_bruteforce(PlanarMap{pm}), std::domain_error);
}
