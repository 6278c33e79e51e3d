#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "sf/isotopy.hpp"
#include "sf/nt.hpp"
#include "sf/planarity.hpp"

using namespace sf;

namespace {

const FieldCtx& M6() { return make_field(3, 6); }

FamilySParams prm626(int64_t a_dlog, int k = 2) {
  return FamilySParams::make(3, 6, k, M6().gen(), M6().from_dlog(a_dlog));
}

}  // namespace

TEST_CASE("verify_isotopism basics") {
  auto inst = family_s(prm626(0));
  SUBCASE("identity triple") {
    Isotopism id;
    id.N = LinMap::identity(3, 12, &M6());
    id.L = id.N;
    id.M = id.N;
    CHECK(verify_isotopism(id, inst.psf, inst.psf));
    CHECK(id.verified);
  }
  SUBCASE("component swap preserves isotopy") {
    const Isotopism sw = component_swap_isotopism(*inst.psf.biproj());
    CHECK(sw.verified);
    const auto d = dickson(3, 6, 1, M6().gen());
    CHECK(component_swap_isotopism(*d.psf.biproj()).verified);
  }
}

TEST_CASE("qbar flip: a' = B^{Q+1}/a, strong, involutive") {
  const FieldCtx& M = M6();
  auto [iso, ap] = qbar_isotopism(prm626(0));
  CHECK(iso.verified);
  CHECK(iso.strong);
  CHECK(M.dlog(ap) == 28);  // B = g, Q = 27, a = 1
  // Applying the construction on the flipped side returns to a.
  auto [iso2, back] = qbar_isotopism(FamilySParams::make(3, 6, 4, M.gen(), ap));
  CHECK(iso2.verified);
  CHECK(back == M.one());
}

TEST_CASE("orbit of a at (3,6,2)") {
  const FieldCtx& M = M6();
  SUBCASE("t = 0 diagonal entry is a itself") {
    const OrbitReport rep = orbit_of_a(prm626(56));
    bool self_found = false;
    for (const auto& e : rep.entries)
      if (e.t == 0 && e.branch == 'd') self_found = e.a_prime == M.from_dlog(56);
    CHECK(self_found);
  }
  SUBCASE("orbit size bound, negation closure, sign pairing") {
    for (int64_t ad : {0, 28, 56, 280}) {
      const OrbitReport rep = orbit_of_a(prm626(ad));
      CHECK(rep.orbit.size() <= 12);
      CHECK(rep.neg_pairing_ok);
      std::set<elt> orb(rep.orbit.begin(), rep.orbit.end());
      for (elt a : orb) CHECK(orb.count(M.neg(a)) == 1);
      for (const auto& e : rep.entries) {
        CHECK(e.iso.verified);
        CHECK(e.iso.strong);
        CHECK(M.in_subfield(3, e.a_prime));
      }
    }
  }
  SUBCASE("orbit symmetry, exhaustive over L^x") {
    std::map<uint64_t, std::set<elt>> orbits;
    for (elt a : M.subfield_elements(3)) {
      if (a == 0) continue;
      const OrbitReport rep = orbit_of_a(FamilySParams::make(3, 6, 2, M.gen(), a));
      orbits[M.dlog(a)] = std::set<elt>(rep.orbit.begin(), rep.orbit.end());
    }
    for (const auto& [ad, orb] : orbits)
      for (elt b : orb) CHECK(orbits.at(M.dlog(b)).count(M.from_dlog(static_cast<int64_t>(ad))) == 1);
  }
}

TEST_CASE("degree pattern screen") {
  const auto s2 = prm626(0).pair();
  SUBCASE("family S vs dickson: exponent sets are incompatible") {
    const auto d = dickson(3, 6, 1, M6().gen());
    const auto res = degree_pattern_screen(s2, *d.psf.biproj(), true);
    CHECK(res.verdict == ScreenVerdict::NonIsotopicByDegree);
  }
  SUBCASE("family S k=2 vs k=4: compatible via the minus signs") {
    const auto res = degree_pattern_screen(s2, prm626(0, 4).pair(), true);
    CHECK(res.verdict == ScreenVerdict::Compatible);
    REQUIRE(res.relations.size() == 1);
    CHECK(res.relations[0] == "k1=-k2,l1=-l2");
  }
  SUBCASE("self comparison: compatible via the identity relation") {
    const auto res = degree_pattern_screen(s2, s2, true);
    CHECK(res.verdict == ScreenVerdict::Compatible);
    CHECK(res.relations[0] == "k1=+k2,l1=+l2");
  }
  SUBCASE("screen declines without hypotheses or the centralizer condition") {
    CHECK(degree_pattern_screen(s2, s2, false).verdict == ScreenVerdict::Unknown);
    const auto d = dickson(3, 6, 1, M6().gen());
    // Dickson has q = 1, violating the hypotheses for the P1 slot.
    CHECK(degree_pattern_screen(*d.psf.biproj(), s2, true).verdict == ScreenVerdict::Unknown);
  }
}

TEST_CASE("zhou-pott separation at matching exponents") {
  const auto zp = zhou_pott(3, 6, 2, 5, M6().gen());
  const auto res = zp_noniso_check(prm626(0), *zp.psf.biproj(), 1);
  CHECK(res.non_isotopic);
  CHECK(res.patterns_surviving == 0);
  CHECK(res.candidates_surviving == 0);
  CHECK(res.patterns_checked > 0);
  CHECK(res.candidates_checked > 100000);
  // Shape and exponent guards.
  CHECK_THROWS_AS(zp_noniso_check(prm626(0), *zhou_pott(3, 6, 2, 4, M6().gen()).psf.biproj(), 1),
                  ConditionError);
}

TEST_CASE("dickson reduction of the q = 1 shape") {
  const FieldCtx& M = make_field(3, 2);
  SUBCASE("family-S shape with a in L^x") {
    for (elt a : {M.one(), M.neg(M.one())}) {
      const Isotopism iso = dickson_reduction_q1(M, M.gen(), a);
      CHECK(iso.verified);
      CHECK(iso.strong);
      // N4 bijectivity constant: ((A^{Q+1}-1)/(A(1-A^{Q+1})))^{Q+1} != 1.
      const elt A = M.div(a, M.gen());
      const elt A4 = M.pow(A, 4);
      const elt c = M.div(M.sub(A4, M.one()), M.mul(A, M.sub(M.one(), A4)));
      CHECK(M.pow(c, 4) != M.one());
    }
  }
  SUBCASE("the same N reduces the BH planar map at q = Q") {
    // BH even branch at (3, m=2, k=1): [(1,0,0,a)_1, (0,1,a^{(q-1)/2},0)_q]
    // with q = Q = 3; A = a^{(q-1)/2} = a.
    const elt a = M.gen();
    const Isotopism iso = dickson_reduction_shape(M, a, a);
    CHECK(iso.verified);
    // Cross-check: N composed with the BH map equals the Dickson map
    // pointwise on all 81 points.
    const auto bh_inst = bh(3, 2, 1, a);
    const auto dst = dickson(3, 2, 1, a);
    for (uint32_t s = 0; s < 81; ++s) {
      const FpVec v = pack2(M, s % 9, s / 9);
      CHECK(iso.N.apply(planar_eval(bh_inst.map, v)) == planar_eval(dst.map, v));
    }
  }
  SUBCASE("A on the norm kernel cannot be reduced") {
    CHECK_THROWS_AS(dickson_reduction_shape(M, M.gen(), M.one()), ConditionError);
  }
}

TEST_CASE("b4 class bound") {
  const auto rep = b4_class_bound(5, 1, 2);
  CHECK(rep.gcd_sum_form == 4);
  CHECK(rep.gcd_diff_form == 4);
  CHECK(rep.bound == 8);
  CHECK(b3_class_bound(1) == 9);
  CHECK_THROWS_AS(b4_class_bound(5, 1, 1), ConditionError);
  CHECK_THROWS_AS(b4_class_bound(3, 1, 2), ConditionError);
}

TEST_CASE("tiny-field exhaustive strong search") {
  const FieldCtx& M = make_field(3, 2);
  auto dck = dickson(3, 2, 1, M.gen());
  SUBCASE("finds the identity class") {
    const auto w = tiny_strong_search(dck.psf, dck.psf);
    REQUIRE(w.has_value());
    CHECK(w->verified);
  }
  SUBCASE("finds the Dickson/BH equivalence at q = Q") {
    const auto w = tiny_strong_search(dck.psf, bh(3, 2, 1, M.gen()).psf);
    REQUIRE(w.has_value());
    CHECK(w->verified);
  }
  SUBCASE("agrees with the constructed q=1 reduction") {
    BiprojPair src;
    src.M = &M;
    src.k = 0;
    src.l = 1;
    src.f = {M.one(), 0, 0, M.gen()};
    src.g = {0, M.one(), M.div(M.one(), M.gen()), 0};
    Presemifield P = Presemifield::from_planar(src);
    const auto w = tiny_strong_search(P, dck.psf);
    REQUIRE(w.has_value());
  }
}

TEST_CASE("strong vs plain isotopy") {
  SUBCASE("orbit members are strongly isotopic with a witness") {
    auto A = family_s(prm626(0));
    const OrbitReport orb = orbit_of_a(prm626(0));
    const elt target = orb.orbit.size() > 1 ? orb.orbit[1] : orb.orbit[0];
    auto B = family_s(FamilySParams::make(3, 6, 2, M6().gen(), target));
    const auto res = strong_vs_plain_isotopy(A, B, 1);
    CHECK(res.verdict == StrongVerdict::StronglyIsotopic);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->verified);
  }
  SUBCASE("self comparison is the identity") {
    auto A = family_s(prm626(28));
    const auto res = strong_vs_plain_isotopy(A, A, 1);
    CHECK(res.verdict == StrongVerdict::StronglyIsotopic);
  }
  SUBCASE("out-of-orbit values are rejected by the exhausted restricted search") {
    auto A = family_s(prm626(0));
    auto B = family_s(prm626(56));
    const auto res = strong_vs_plain_isotopy(A, B, 1);
    CHECK(res.verdict == StrongVerdict::NotIsotopicRestricted);
    CHECK(res.restricted);
  }
  SUBCASE("k=2 vs k=4 via the flip") {
    auto A = family_s(prm626(0));
    auto [flip, ap] = qbar_isotopism(prm626(0));
    auto B = family_s(FamilySParams::make(3, 6, 4, M6().gen(), ap));
    const auto res = strong_vs_plain_isotopy(A, B, 1);
    CHECK(res.verdict == StrongVerdict::StronglyIsotopic);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->verified);
    (void)flip;
  }
  SUBCASE("tiny route separates Dickson from the finite field") {
    auto f9 = field_biproj(3, 2, make_field(3, 2).gen());
    auto dck = dickson(3, 2, 1, make_field(3, 2).gen());
    const auto res = strong_vs_plain_isotopy(dck, f9, 1);
    CHECK(res.verdict == StrongVerdict::NotIsotopicRestricted);
  }
}

TEST_CASE("gamma conjugation transports autotopisms along isotopisms") {
  // gamma: P1 -> P2 verified; delta in C_{P2}; gamma^{-1} delta gamma is an
  // autotopism of P1.
  const auto [gamma, ap] = qbar_isotopism(prm626(0));
  auto P1 = family_s(prm626(0)).psf;
  auto P2 = family_s(FamilySParams::make(3, 6, 4, M6().gen(), ap)).psf;
  std::vector<LinTriple> elements;
  centralizer_enumerate(FamilySParams::make(3, 6, 4, M6().gen(), ap), 1, false, &elements);
  std::mt19937_64 rng(1234);
  for (int rep = 0; rep < 12; ++rep) {
    const LinTriple& delta = elements[rng() % elements.size()];
    CHECK(verify_autotopism(delta, P2));
    const LinTriple conj = conjugate_triple(gamma, delta);
    CHECK(verify_autotopism(conj, P1));
  }
}

TEST_CASE("classification census") {
  SUBCASE("(3, n=12): count within the counting bounds") {
    const ClassifyReport rep = count_classes_family_s(3, 12, 1, true);
    CHECK(rep.admissible_k == std::vector<int>{2, 4});
    CHECK(rep.lower_bound == 3);
    CHECK(rep.upper_bound == 26);
    CHECK(rep.bound_ok);
    CHECK(rep.classes.size() >= 3);
    CHECK(rep.classes.size() <= 26);
    uint64_t members = 0;
    for (const auto& c : rep.classes) members += c.members.size();
    CHECK(members == 52);
    for (const auto& c : rep.classes) {
      CHECK(c.nuclei == std::array<uint64_t, 3>{3, 9, 3});
      CHECK((c.centralizer_size == 5824 || c.centralizer_size == 11648));
    }
    CHECK(rep.pair_evidence.size() == rep.classes.size() * (rep.classes.size() - 1) / 2);
    for (const auto& ev : rep.pair_evidence)
      CHECK((ev.evidence == "search" || ev.evidence == "degree" || ev.evidence == "invariant"));
    // The partition is consistent with the orbits: every orbit member stays
    // in the class of its base point.
    const FieldCtx& M = M6();
    for (const auto& c : rep.classes) {
      std::set<std::pair<int, elt>> cls;
      for (const auto& mb : c.members) cls.insert({mb.k, mb.a});
      const OrbitReport orb = orbit_of_a(FamilySParams::make(3, 6, c.rep.k, M.gen(), c.rep.a));
      for (elt a : orb.orbit) CHECK(cls.count({c.rep.k, a}) == 1);
    }
  }
  SUBCASE("(3, n=8): the family is empty") {
    const ClassifyReport rep = count_classes_family_s(3, 8, 1, false);
    CHECK(rep.admissible_k.empty());
    CHECK(rep.classes.empty());
    CHECK(rep.bound_ok);
  }
}

TEST_CASE("nuclei are isotopy invariants across verified witnesses") {
  const FieldCtx& M = M6();
  const OrbitReport orb = orbit_of_a(prm626(0));
  std::map<uint64_t, std::array<uint64_t, 3>> cache;
  auto nuclei_of_a = [&](elt a) {
    const uint64_t d = M.dlog(a);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
    auto inst = family_s(FamilySParams::make(3, 6, 2, M.gen(), a));
    REQUIRE(is_planar_biproj(*inst.psf.biproj()));
    inst.psf.set_s3_certified(true);
    const auto rep = nuclei_of(inst.psf);
    const std::array<uint64_t, 3> v{rep.nl, rep.nm, rep.nr};
    cache[d] = v;
    return v;
  };
  const auto base = nuclei_of_a(M.one());
  for (const auto& e : orb.entries) {
    REQUIRE(e.iso.verified);
    CHECK(nuclei_of_a(e.a_prime) == base);
  }
}

TEST_CASE("compare pipeline") {
  auto S = family_s(prm626(0));
  SUBCASE("identical instances") {
    const auto res = compare_presemifields(S, family_s(prm626(0)), 1);
    CHECK(res.verdict == "isotopic");
    CHECK(res.evidence == "witness");
  }
  SUBCASE("different orders") {
    const auto res = compare_presemifields(S, dickson(3, 2, 1, make_field(3, 2).gen()), 1);
    CHECK(res.verdict == "non_isotopic");
    CHECK(res.evidence == "invariant");
  }
}
