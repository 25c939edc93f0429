#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fqt/descent.hpp"
#include "pinned.hpp"

using namespace fqt;

TEST_CASE("nu is a character of N fixed by O(W)") {
  Engine E;
  auto psi = psi_pair(E.field(3)).first;
  GroupPtr O5 = E.group(3, Tower::OOddPlus, 5);
  for (SquareClass c : {SquareClass(1), SquareClass(-1)}) CHECK(bessel_character_defect(E, O5, 1, c, psi) < 1e-9);
  GroupPtr O3 = E.group(3, Tower::OOddMinus, 3);
  // complement O_1^- only takes non-square values
  CHECK_THROWS_AS(bessel_character_defect(E, O3, 1, SquareClass(1), psi), NoRationalOrbit);
  CHECK(bessel_character_defect(E, O3, 1, SquareClass(-1), psi) < 1e-9);
}

TEST_CASE("Jacobi nu is a representation") {
  Engine E;
  GroupPtr Sp4 = E.group(3, Tower::Sp, 4);
  for (bool prime : {false, true}) {
    CHECK(fj_representation_defect(E, Sp4, 1, prime, 200) < 1e-9);
    CHECK(fj_representation_defect(E, Sp4, 2, prime, 200) < 1e-9);
  }
}

TEST_CASE("Bessel multiplicities agree with the explicit carrier") {
  Engine E;
  auto psi = psi_pair(E.field(3)).first;
  auto [p, m] = build_odd_orth_unipotent(E, 1, 1, 3);
  const auto& pin = pinned("descent.q3.o5plus.pi_plus.bessel_ell1");
  for (SquareClass c : {SquareClass(1), SquareClass(-1)}) {
    auto Q = bessel_quotient(E, p.chi, 1, c, psi);
    const auto& row = pin[std::string(1, c.sign())];
    REQUIRE(Q.rational);
    CHECK(Q.D->G->name == row["w"].get<std::string>());
    for (const auto& t : irr_small(Q.D->G)) {
      CAPTURE(t.label);
      CHECK(bessel_multiplicity(Q, t) == row["m"][t.label].get<long long>());
    }
  }
}

TEST_CASE("v0 representatives of one square class give the same quotient") {
  Engine E;
  auto psi = psi_pair(E.field(3)).first;
  auto [p, m] = build_odd_orth_unipotent(E, 1, -1, 3);
  for (SquareClass c : {SquareClass(1), SquareClass(-1)}) {
    auto a = bessel_quotient(E, m.chi, 1, c, psi, 0), b = bessel_quotient(E, m.chi, 1, c, psi, 1);
    REQUIRE(a.rational == b.rational);
    if (!a.rational) continue;
    for (size_t i = 0; i < a.D->v.size(); ++i) CHECK(std::abs(a.D->v[i] - b.D->v[i]) < 1e-9);
  }
}

TEST_CASE("ell = 0 is restriction") {
  Engine E;
  auto psi = psi_pair(E.field(3)).first;
  auto [p, m] = base_even_orth(E, 3);
  for (SquareClass c : {SquareClass(1), SquareClass(-1)}) {
    auto Q = bessel_quotient(E, m.chi, 0, c, psi);
    REQUIRE(Q.rational);
    CHECK(Q.w_dim == 1);
    CHECK(Q.D->degree() == 1);
  }
}

TEST_CASE("trivial character of O_3^+(3): scan matches the pinned direct scan") {
  Engine E;
  auto sc = bessel_first_occurrence(E, trivial(E.group(3, Tower::OOddPlus, 3)), psi_pair(E.field(3)).first);
  const auto& p = pinned("descent.q3.o3plus.triv.first_occurrence");
  CHECK(sc.ell0 == p["ell0"].get<int>());
  std::vector<std::string> cls;
  for (auto c : sc.realizing) cls.push_back(std::string(1, c.sign()));
  CHECK(nlohmann::json(cls) == p["realizing"]);
}

TEST_CASE("Fourier-Jacobi: nothing at ell = 2, both psi classes realize ell = 1") {
  Engine E;
  auto pi = build_sp_unipotent(E, 1, 3);
  for (bool prime : {false, true}) CHECK(fj_quotient(E, pi.chi, 2, prime).D.is_zero());
  auto sc = fj_first_occurrence(E, pi.chi);
  CHECK(sc.ell0 == 1);
  CHECK(sc.realizing.size() == 2);
  for (const auto& Q : sc.at_ell0) CHECK(inner(Q.D, Q.D) == 1);
}

TEST_CASE("binding defaults and case names") {
  CHECK(default_binding(Case::BOdd, 3));
  CHECK(default_binding(Case::BEven, 3));
  CHECK_FALSE(default_binding(Case::FJ, 3));
  CHECK(default_binding(Case::FJ, 5));
  for (Case c : {Case::BOdd, Case::BEven, Case::FJ}) CHECK(parse_case(case_name(c)) == c);
  CHECK_THROWS_AS(parse_case("bessel"), ConfigError);
}

TEST_CASE("descent cases at q=3") {
  Engine E;
  for (Case c : {Case::BOdd, Case::BEven}) {
    auto r = verify_descent_case(E, c, 1, 3);
    CAPTURE(case_name(c));
    CHECK(r.binding);
    CHECK(r.binding_pass());
    CHECK(r.failures(false) == 0);
  }
  auto fj = verify_descent_case(E, Case::FJ, 1, 3);
  CHECK_FALSE(fj.binding);
  CHECK(fj.binding_pass());
  // the descent targets hold; only the labelling rule is off at q=3
  for (const auto& a : fj.assertions)
    if (!a.pass) CHECK(a.name.find("label rule") != std::string::npos);
  auto strict = verify_descent_case(E, Case::FJ, 1, 3, true);
  CHECK(strict.binding);
  CHECK_FALSE(strict.binding_pass());
}

TEST_CASE("out-of-range k") {
  Engine E;
  CHECK_THROWS_AS(verify_descent_case(E, Case::BOdd, 0, 3), ConfigError);
  for (Case c : {Case::BOdd, Case::BEven, Case::FJ}) CHECK_THROWS_AS(verify_descent_case(E, c, 2, 3), ResourceRefusal);
}
