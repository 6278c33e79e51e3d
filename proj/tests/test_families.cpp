#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "sf/families.hpp"
#include "sf/isotopy.hpp"
#include "sf/nt.hpp"
#include "sf/planarity.hpp"
#include "sf/structure.hpp"

using namespace sf;

namespace {

std::string condition_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConditionError& e) {
    return e.condition;
  }
  return "";
}

}  // namespace

TEST_CASE("family S parameter validation at (3,6)") {
  const FieldCtx& M = make_field(3, 6);
  const elt g = M.gen();
  SUBCASE("smallest admissible instance") {
    const FamilySParams prm = FamilySParams::make(3, 6, 2, g, M.one());
    CHECK(prm.q == 9);
    CHECK(prm.r == 243);
    CHECK(prm.Q == 27);
    CHECK(prm.e == 2);
    CHECK(prm.d == 1);
    const auto inst = family_s(prm);
    CHECK(inst.psf.commutative());
    CHECK(inst.meta.family == "S");
  }
  SUBCASE("named condition errors") {
    CHECK(condition_of([&] { FamilySParams::make(3, 6, 3, g, M.one()); }) == "m_over_e_odd");
    CHECK(condition_of([&] { FamilySParams::make(3, 6, 2, M.mul(g, g), M.one()); }) == "B_nonsquare");
    CHECK(condition_of([&] { FamilySParams::make(3, 6, 2, g, g); }) == "a_in_L");
    CHECK(condition_of([&] { FamilySParams::make(3, 6, 0, g, M.one()); }) == "k_range");
    CHECK(condition_of([&] { FamilySParams::make(3, 5, 1, g, M.one()); }) == "m_even");
  }
  SUBCASE("constructor accepts exactly the admissible (k, B-class, a) set") {
    for (int k = 1; k <= 5; ++k) {
      for (elt B : {g, M.mul(g, g)}) {
        for (elt a = 0; a < 729; ++a) {
          const bool admissible = (k == 2 || k == 4) && B == g && a != 0 && M.in_subfield(3, a);
          bool accepted = true;
          try {
            FamilySParams::make(3, 6, k, B, a);
          } catch (const ConditionError&) {
            accepted = false;
          }
          CHECK(accepted == admissible);
        }
      }
    }
  }
  SUBCASE("permissive degenerations are tagged with the reduced family") {
    CHECK(family_s(3, 6, 0, g, M.one(), true).meta.reduced_to == "dickson");
    CHECK(family_s(3, 6, 3, g, M.one(), true).meta.reduced_to == "dickson");
    CHECK(family_s(3, 6, 2, g, 0, true).meta.reduced_to == "zp");
    CHECK(family_s(3, 6, 2, g, M.one(), true).meta.reduced_to == "");
  }
}

TEST_CASE("dickson constructor") {
  const FieldCtx& M = make_field(3, 2);
  const auto inst = dickson(3, 2, 1, M.gen());
  const auto& bp = *inst.psf.biproj();
  CHECK(bp.k == 0);
  CHECK(bp.l == 1);
  CHECK(bp.f == std::array<elt, 4>{M.one(), 0, 0, M.gen()});
  CHECK(bp.g == std::array<elt, 4>{0, M.one(), 0, 0});
  CHECK(condition_of([&] { dickson(3, 2, 1, M.mul(M.gen(), M.gen())); }) == "a_nonsquare");
  CHECK(condition_of([&] { dickson(3, 2, 2, M.gen()); }) == "k_range");
  CHECK(dickson(3, 2, 0, M.gen(), true).meta.reduced_to == "F");
}

TEST_CASE("albert: univariate for odd degree, biprojective over M, and their identification") {
  SUBCASE("odd degree gives the univariate polynomial") {
    const auto inst = albert_univariate(3, 3, 1);
    const auto& dp = std::get<DOPoly>(inst.map);
    REQUIRE(dp.terms.size() == 1);
    CHECK(dp.terms[0].i == 0);
    CHECK(dp.terms[0].j == 1);
    CHECK(condition_of([] { albert_univariate(3, 4, 1); }) == "n_over_d_odd");
  }
  SUBCASE("the biprojective form is strongly isotopic to the univariate form") {
    // M = GF(27) inside F = GF(729): phi maps the canonical generator of M to
    // a root of M's modulus in F, and xi is a square root of phi(a).
    const FieldCtx& Mf = make_field(3, 3);
    const FieldCtx& Ff = make_field(3, 6);
    const elt a = Mf.gen();  // non-square in M
    const auto inst_pair = albert_biproj(3, 3, 2, a);
    const auto inst_uni = albert_univariate(3, 6, 2);

    const auto roots = Ff.roots_of_fp_poly(Mf.modulus());
    REQUIRE(roots.size() == 3);
    const elt rho = *std::min_element(roots.begin(), roots.end());
    auto phi = [&](elt x) {
      elt acc = 0;
      const auto c = Mf.coeffs(x);
      for (int i = 0; i < 3; ++i)
        acc = Ff.add(acc, Ff.mul(Ff.from_int(c[i]), Ff.pow(rho, i)));
      return acc;
    };
    // phi is a field homomorphism.
    for (elt x = 0; x < 27; ++x)
      for (elt y = 0; y < 27; ++y) {
        CHECK(phi(Mf.mul(x, y)) == Ff.mul(phi(x), phi(y)));
        CHECK(phi(Mf.add(x, y)) == Ff.add(phi(x), phi(y)));
      }
    const elt xi = Ff.from_dlog(static_cast<int64_t>(Ff.dlog(phi(a)) / 2));
    REQUIRE(Ff.mul(xi, xi) == phi(a));

    MatFp T(3, 6, 6);
    for (int s = 0; s < 6; ++s) {
      std::vector<uint8_t> c(3, 0);
      c[s % 3] = 1;
      const elt e = Mf.from_coeffs(c);
      const elt img = s < 3 ? Ff.mul(phi(e), xi) : phi(e);
      T.set_col(s, pack1(Ff, img));
    }
    Isotopism iso;
    iso.N = LinMap::from_matrix(T);
    iso.L = iso.N;
    iso.M = iso.N;
    iso.strong = true;
    CHECK(verify_isotopism(iso, inst_pair.psf, inst_uni.psf));
  }
}

TEST_CASE("zhou-pott and bh constructors") {
  const FieldCtx& M2 = make_field(3, 2);
  const FieldCtx& M3 = make_field(3, 3);
  CHECK(condition_of([&] { zhou_pott(3, 2, 1, 1, M2.gen()); }) == "m_over_d_odd");
  const auto zp = zhou_pott(3, 3, 1, 1, M3.gen());
  CHECK(is_planar_biproj(*zp.psf.biproj()));
  CHECK(zhou_pott(3, 6, 0, 2, FieldCtx::get(3, 6).gen(), true).meta.reduced_to == "dickson");
  CHECK(zhou_pott(3, 6, 2, 0, FieldCtx::get(3, 6).gen(), true).meta.reduced_to == "bh");

  const auto b_even = bh(3, 2, 1, M2.gen());
  CHECK(b_even.meta.params.at("branch") == "even");
  const auto b_odd = bh(3, 3, 1, M3.gen());
  CHECK(b_odd.meta.params.at("branch") == "odd");
}

TEST_CASE("univariate family constructors") {
  SUBCASE("cm/dy shape over GF(3^5)") {
    const auto inst = cm_dy(3, 5, +1);
    const FieldCtx& F = make_field(3, 5);
    const auto& dp = std::get<DOPoly>(inst.map);
    // F(x) = x^10 + x^6 - x^2 by direct exponentiation.
    for (elt x = 0; x < 243; x += 7) {
      const elt direct = F.sub(F.add(F.pow(x, 10), F.pow(x, 6)), F.mul(x, x));
      CHECK(dp.eval(x) == direct);
    }
    CHECK(condition_of([] { cm_dy(3, 4, +1); }) == "m_ge5_odd");
    CHECK(condition_of([] { cm_dy(5, 5, +1); }) == "p_three");
  }
  SUBCASE("linear DOPoly terms vanish under polarization") {
    const FieldCtx& F = make_field(3, 5);
    DOPoly with{&F, {{F.one(), 0, 2}}, {{F.neg(F.one()), 0}, {F.gen(), 1}}};
    DOPoly without{&F, {{F.one(), 0, 2}}, {}};
    for (elt x = 0; x < 243; x += 5)
      for (elt y = 0; y < 243; y += 7) CHECK(with.polar(x, y) == without.polar(x, y));
    CHECK(with.eval(F.one()) != without.eval(F.one()));
  }
  SUBCASE("b4 shape over GF(5^4): X^26 - a^4 X^250") {
    const auto inst = b4(5, 1, 2);
    const FieldCtx& F = make_field(5, 4);
    const auto& dp = std::get<DOPoly>(inst.map);
    const elt a = F.gen();
    for (elt x = 1; x < 625; x += 13) {
      const elt direct = F.sub(F.pow(x, 26), F.mul(F.pow(a, 4), F.pow(x, 250)));
      CHECK(dp.eval(x) == direct);
    }
    CHECK(condition_of([] { b4(5, 1, 1); }) == "two_s_over_d_odd");
    CHECK(condition_of([] { b4(3, 1, 2); }) == "Q_mod4");
  }
  SUBCASE("zkw over GF(27) and named violations") {
    const auto inst = zkw(3, 1, 2);
    const FieldCtx& F = make_field(3, 3);
    const auto& dp = std::get<DOPoly>(inst.map);
    const elt a = F.gen();
    for (elt x = 1; x < 27; ++x) {
      const elt direct = F.sub(F.pow(x, 10), F.mul(F.mul(a, a), F.pow(x, 36)));
      CHECK(dp.eval(x) == direct);
    }
    CHECK(condition_of([] { zkw(3, 1, 1); }) == "s_plus_t_mod3");
  }
  SUBCASE("cg and ganley") {
    CHECK(condition_of([] { cg(3, 2); }) == "m_ge3_odd");
    const auto g_inst = ganley(3, 3, make_field(3, 3).gen());
    CHECK(std::get<PairMap>(g_inst.map).comp[0].size() == 3);
    CHECK(condition_of([] { ganley(3, 3, 1); }) == "a_nonsquare");
  }
}

TEST_CASE("every admissible small construction certifies planar") {
  std::vector<FamilyInstance> insts;
  const FieldCtx& M2 = make_field(3, 2);
  const FieldCtx& M3 = make_field(3, 3);
  insts.push_back(field_square(3, 2));
  insts.push_back(field_square(3, 3));
  insts.push_back(field_biproj(3, 2, M2.gen()));
  insts.push_back(dickson(3, 2, 1, M2.gen()));
  insts.push_back(dickson(3, 3, 1, M3.gen()));
  insts.push_back(dickson(3, 3, 2, M3.gen()));
  insts.push_back(albert_univariate(3, 3, 1));
  insts.push_back(albert_univariate(3, 3, 2));
  insts.push_back(albert_biproj(3, 3, 2, M3.gen()));
  insts.push_back(zhou_pott(3, 3, 1, 1, M3.gen()));
  insts.push_back(zhou_pott(3, 3, 1, 2, M3.gen()));
  insts.push_back(zhou_pott(3, 3, 2, 1, M3.gen()));
  insts.push_back(bh(3, 2, 1, M2.gen()));
  insts.push_back(bh(3, 3, 1, M3.gen()));
  insts.push_back(bh(3, 3, 2, M3.gen()));
  insts.push_back(zkw(3, 1, 2));
  insts.push_back(b3(7, 1, 1));
  insts.push_back(b4(5, 1, 2));
  insts.push_back(cm_dy(3, 5, +1));
  insts.push_back(cm_dy(3, 5, -1));
  insts.push_back(cg(3, 3));
  insts.push_back(ganley(3, 3, M3.gen()));
  for (auto& inst : insts) {
    const PlanarityCertificate cert = certify(inst.psf);
    CHECK(cert.planar);
    CHECK(cert.agreement);
    CHECK(inst.psf.s3_certified());
  }
  // Family S biprojective certificates for every a in L^x.
  const FieldCtx& M6 = make_field(3, 6);
  for (elt a : M6.subfield_elements(3)) {
    if (a == 0) continue;
    auto inst = family_s(3, 6, 2, M6.gen(), a);
    CHECK(is_planar_biproj(*inst.psf.biproj()));
  }
}

TEST_CASE("zkw count metadata is carried, not asserted") {
  CHECK(zkw(3, 1, 2).meta.count_note == ">= 1");
  CHECK(b3(7, 1, 1).meta.count_note == "<= 9*sigma(s)");
  CHECK(b4(5, 1, 2).meta.count_note == "<= 8*sigma(s)");
}
