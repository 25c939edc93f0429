#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fqt/classfun.hpp"
#include "fqt/parabolic.hpp"
#include "pinned.hpp"

using namespace fqt;

namespace {
GroupPtr build(const FieldCtx& F, Tower t, int d, bool special = false) {
  return realize(standard_space(F, t, d), special, RealizeOptions{});
}
}  // namespace

TEST_CASE("round_checked rejects non-integers") {
  CHECK(round_checked(cplx(3.0000000001, 0), "x") == 3);
  CHECK_THROWS_AS(round_checked(cplx(2.5, 0), "x"), NumericError);
  CHECK_THROWS_AS(round_checked(cplx(2, 0.1), "x"), NumericError);
}

TEST_CASE("unipotent radical sizes") {
  auto F3 = make_field(3);
  auto O5 = build(F3, Tower::OOddPlus, 5);
  CHECK(parabolic(O5, {1}).N.size() == 27);
  CHECK(parabolic(O5, {1, 1}).N.size() == 81);
  auto Sp4 = build(F3, Tower::Sp, 4);
  CHECK(parabolic(Sp4, {1}).N.size() == 27);
  CHECK(parabolic(Sp4, {2}).N.size() == 27);
  CHECK(parabolic(Sp4, {1, 1}).N.size() == 81);
  for (const Mat& n : parabolic(Sp4, {1, 1}).N) REQUIRE(Sp4->contains(n));
}

TEST_CASE("induction from the Borel of SL_2") {
  auto F3 = make_field(3);
  auto SL2 = build(F3, Tower::Sp, 2);
  auto P = parabolic(SL2, {1});
  auto trivial_group = build(F3, Tower::Sp, 0);
  auto I = induce_parabolic(P, *trivial_group, [](const Mat&) { return cplx(1); }, "I1");
  CHECK(I.degree() == 4);
  CHECK(inner(I, I) == 2);
  CHECK(inner(I, trivial(SL2)) == 1);
  // Frobenius reciprocity against the Jacquet module at the identity
  CHECK(round_checked(jacquet_value(trivial(SL2), P.N, nullptr, Mat::identity(2)), "J") == 1);
}

TEST_CASE("complete character tables of small orthogonal groups") {
  for (int q : {3, 5}) {
    auto F = make_field(q);
    for (Tower t : {Tower::OEvenMinus, Tower::OEvenPlus, Tower::OOddPlus}) {
      int d = t == Tower::OOddPlus ? 1 : 2;
      auto G = build(F, t, d);
      auto irr = irr_small(G);
      CHECK(static_cast<int>(irr.size()) == G->num_classes());
      uint64_t sq = 0;
      for (auto& a : irr) {
        sq += a.degree() * a.degree();
        for (auto& b : irr) CHECK(inner(a, b) == (&a == &b ? 1 : 0));
      }
      CHECK(sq == G->order());
    }
  }
}

TEST_CASE("determinant character separates SO") {
  auto F3 = make_field(3);
  auto O3 = build(F3, Tower::OOddPlus, 3);
  auto s = determinant_char(O3);
  CHECK(inner(s, trivial(O3)) == 0);
  CHECK(inner_special(s, trivial(O3)) == 1);
}

TEST_CASE("GL_2 characters are irreducible") {
  auto F = make_field(5);
  auto gl = gl_elements(F, 2);
  REQUIRE(gl.size() == 480);
  auto norm = [&](const std::function<cplx(const Mat&)>& chi) {
    cplx s = 0;
    for (auto& g : gl) s += std::norm(chi(g));
    return round_checked(s / static_cast<double>(gl.size()), "norm");
  };
  CHECK(norm(gl2_cuspidal(F, 1)) == 1);
  CHECK(std::abs(gl2_cuspidal(F, 1)(Mat::identity(2)) - cplx(4)) < 1e-9);
  CHECK(norm(gl2_principal(mult_char(F, 0), mult_char(F, 1))) == 1);
  CHECK_THROWS_AS(gl2_cuspidal(F, 6), ConfigError);
}

TEST_CASE("cuspidality") {
  auto F3 = make_field(3);
  auto SL2 = build(F3, Tower::Sp, 2);
  CHECK_FALSE(is_cuspidal(trivial(SL2)));
  auto O2m = build(F3, Tower::OEvenMinus, 2);
  CHECK(is_cuspidal(trivial(O2m)));
}

TEST_CASE("line radicals against the pinned scan") {
  auto F3 = make_field(3);
  for (auto [t, d] : {std::pair{Tower::Sp, 4}, std::pair{Tower::OOddPlus, 5}}) {
    auto G = build(F3, t, d);
    auto N = parabolic(G, {1}).N;
    int centre = 0;
    for (const Mat& x : N) {
      bool c = true;
      for (const Mat& y : N) c = c && mul(F3, x, y) == mul(F3, y, x);
      centre += c;
    }
    const auto& p = pinned("parabolic.q3." + tower_name(t) + std::to_string(d) + ".line_radical");
    CHECK(N.size() == p["order"].get<size_t>());
    CHECK(centre == p["centre"].get<int>());
  }
}

TEST_CASE("Borel induction against the pinned permutation model") {
  for (int q : {3, 5}) {
    auto F = make_field(q);
    auto SL2 = build(F, Tower::Sp, 2);
    auto P = parabolic(SL2, {1});
    auto I = induce_parabolic(P, *build(F, Tower::Sp, 0), [](const Mat&) { return cplx(1); }, "I1");
    auto St = I - trivial(SL2);
    const auto& p = pinned("classfun.q" + std::to_string(q) + ".sl2.borel_induced_trivial");
    CHECK(static_cast<long long>(I.degree()) == p["dim"].get<long long>());
    CHECK(inner(I, I) == p["norm"].get<long long>());
    CHECK(round_checked(jacquet_value(I, P.N, nullptr, Mat::identity(2)), "J") == p["n_fixed"].get<long long>());
    CHECK(round_checked(jacquet_value(St, P.N, nullptr, Mat::identity(2)), "J") == p["steinberg_n_fixed"].get<long long>());
    CHECK_FALSE(is_cuspidal(St));
  }
}
