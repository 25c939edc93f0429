#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fqt/unipotent.hpp"
#include "pinned.hpp"

using namespace fqt;

TEST_CASE("pi_Sp4 at q=3 agrees with the isotypic projection class by class") {
  Engine E;
  auto r = build_sp_unipotent(E, 1, 3);
  const auto& p = pinned("unipotent.q3.pi_sp4");
  CHECK(r.chi.degree() == p["dim"].get<long long>());
  CHECK(r.chi.degree() == 3 * 2 * 2 / 2);  // q(q-1)^2/2
  CHECK(r.irreducible);
  CHECK(r.cuspidal);
  CHECK(r.label_ok);
  const auto& tr = p["class_traces"];
  REQUIRE(tr.size() == r.chi.v.size());
  for (size_t c = 0; c < tr.size(); ++c) {
    CHECK(std::abs(r.chi.v[c].real() - tr[c][0].get<double>()) < 1e-4);
    CHECK(std::abs(r.chi.v[c].imag() - tr[c][1].get<double>()) < 1e-4);
  }
}

TEST_CASE("theta representations of SL_2(5)") {
  Engine E;
  auto a = base_theta(E, 1, 5, false), b = base_theta(E, 1, 5, true);
  const auto& dims = pinned("unipotent.q5.theta_dims");
  CHECK(a.chi.degree() == dims["alpha"].get<long long>());
  CHECK(b.chi.degree() == dims["beta"].get<long long>());
  for (auto* r : {&a, &b}) {
    CHECK(r->irreducible);
    CHECK(r->cuspidal);
    CHECK(r->label_ok);
  }
  CHECK((inner(a.chi, b.chi) == 0) == pinned("unipotent.q5.theta_alpha_differs_from_beta").get<bool>());
  auto P = pinned("classfun.q5.sl2.odd_weil_n_fixed");
  CHECK(P["psi"] == 0);
  CHECK(P["psi_prime"] == 0);
}

TEST_CASE("q=3 theta representations break the central-sign labelling rule") {
  Engine E;
  for (bool beta : {false, true}) {
    auto r = base_theta(E, 1, 3, beta);
    CHECK(r.irreducible);
    CHECK(r.cuspidal);
    CHECK(central_sign(r.chi) == 1);
    CHECK_FALSE(r.label_ok);
    CHECK_FALSE(r.label_note.empty());
  }
}

TEST_CASE("odd orthogonal unipotent cuspidals at q=3") {
  Engine E;
  for (int eps : {1, -1}) {
    auto [p, m] = build_odd_orth_unipotent(E, 1, eps, 3);
    CHECK(central_sign(p.chi) == 1);
    CHECK(central_sign(m.chi) == -1);
    for (auto* r : {&p, &m}) {
      CHECK(r->irreducible);
      CHECK(r->cuspidal);
      CHECK(r->chi.degree() == 6);
    }
    CHECK(inner(p.chi, m.chi) == 0);
  }
}

TEST_CASE("O_2^- base pair") {
  Engine E;
  auto [p, m] = base_even_orth(E, 3);
  CHECK(p.label_ok);
  CHECK(m.label_ok);
  CHECK(p.irreducible);
  CHECK(m.cuspidal);
}

TEST_CASE("Weil pieces of SL_2 sum to the Weil character") {
  Engine E;
  const FieldCtx& F = E.field(5);
  auto psi = psi_pair(F).first;
  auto even = weil_piece(E, 5, psi, false, "e"), odd = weil_piece(E, 5, psi, true, "o");
  CHECK(even.degree() == 3);
  CHECK(odd.degree() == 2);
  CHECK(inner(even, odd) == 0);
}
