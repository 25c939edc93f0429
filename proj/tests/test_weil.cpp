#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>

#include "fqt/classfun.hpp"
#include "fqt/weil.hpp"
#include "pinned.hpp"

using namespace fqt;

namespace {
GroupPtr build(const FieldCtx& F, Tower t, int d) { return realize(standard_space(F, t, d), false, RealizeOptions{}); }

int kernel_dim(const FieldCtx& F, const Mat& g) { return g.r - rank(F, sub(F, g, Mat::identity(g.r))); }
}  // namespace

TEST_CASE("closed form agrees with the Schrodinger model on the gate groups") {
  auto t0 = std::chrono::steady_clock::now();
  GateResult r = weil_gate();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(r.checked == 2 * (7 + 9 + 34));
  CHECK(r.worst_model_error < 1e-9);
  REQUIRE(!r.passing.empty());
  CHECK(r.passing.front() == kWeilScale);
  CHECK(secs < 10);
}

TEST_CASE("the model is a representation") {
  std::mt19937 rng(7);
  for (auto [q, d] : {std::pair{3, 2}, {5, 2}, {3, 4}}) {
    auto F = make_field(q);
    auto G = build(F, Tower::Sp, d);
    auto psi = psi_pair(F).first;
    WeilModel W(F, G->space.gram, psi);
    CHECK(max_abs_diff(W.matrix(Mat::identity(d)), CMat::identity(W.dim())) < 1e-12);
    CHECK(std::abs(W.matrix(Mat::identity(d)).trace() - cplx(W.dim())) < 1e-9);
    std::uniform_int_distribution<uint64_t> pick(0, G->order() - 1);
    double worst = 0;
    for (int t = 0; t < 1000; ++t) {
      Mat a = G->element(pick(rng)), b = G->element(pick(rng));
      worst = std::max(worst, max_abs_diff(W.matrix(mul(F, a, b)), W.matrix(a) * W.matrix(b)));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("modulus law and direct sums") {
  auto F = make_field(5);
  auto psi = psi_pair(F).second;
  WeilCharacter chi(F, psi);
  auto G = build(F, Tower::Sp, 2);
  const Mat& J = G->space.gram;
  for (int c = 0; c < G->num_classes(); ++c) {
    Mat g = G->rep(c);
    CHECK(std::norm(chi(g, J)) == doctest::Approx(std::pow(5.0, kernel_dim(F, g))));
    for (int e = 0; e < G->num_classes(); ++e) {
      Mat h = G->rep(e);
      cplx sum = chi(block_diag({g, h}), block_diag({J, J}));
      CHECK(std::abs(sum - chi(g, J) * chi(h, J)) < 1e-9);
    }
  }
  CHECK(std::abs(chi(Mat::identity(2), J) - cplx(5)) < 1e-12);
  CHECK(std::abs(chi(scale(F, F.neg(1), Mat::identity(2)), J)) == doctest::Approx(1.0));
}

TEST_CASE("pair characters on a tensor form match the model") {
  auto F = make_field(3);
  auto O = build(F, Tower::OEvenMinus, 2);
  auto S = build(F, Tower::Sp, 2);
  for (const AddChar& psi : {psi_pair(F).first, psi_pair(F).second}) {
    Mat omega = kron(F, O->space.gram, S->space.gram);
    WeilModel W(F, omega, psi);
    WeilCharacter chi(F, psi);
    for (int a = 0; a < O->num_classes(); ++a)
      for (int b = 0; b < S->num_classes(); ++b) {
        Mat g = O->rep(a), h = S->rep(b);
        cplx model = W.matrix(kron(F, g, h)).trace();
        CHECK(std::abs(chi.pair(g, O->space.gram, h, S->space.gram) - model) < 1e-8);
      }
  }
}

TEST_CASE("SL_2(3) Weil representation splits into two pieces") {
  auto F = make_field(3);
  auto G = build(F, Tower::Sp, 2);
  WeilCharacter chi(F, psi_pair(F).first);
  auto w = from_function(G, [&](const Mat& g) { return chi(g, G->space.gram); }, "omega");
  CHECK(w.degree() == 3);
  CHECK(inner(w, w) == 2);
}

TEST_CASE("parity involution commutes with the image and splits the carrier") {
  auto F = make_field(5);
  auto G = build(F, Tower::Sp, 2);
  WeilModel W(F, G->space.gram, psi_pair(F).first);
  CMat P = W.parity();
  for (int c = 0; c < G->num_classes(); ++c) {
    CMat M = W.matrix(G->rep(c));
    CHECK(max_abs_diff(P * M, M * P) < 1e-9);
  }
  // eigenspace dimensions (dim +- tr P) / 2
  CHECK(std::abs(P.trace() - cplx(1)) < 1e-12);
  CHECK((W.dim() + 1) / 2 == 3);
  CHECK((W.dim() - 1) / 2 == 2);
}

TEST_CASE("Heisenberg action") {
  auto F = make_field(3);
  auto G = build(F, Tower::Sp, 2);
  auto psi = psi_pair(F).first;
  WeilModel W(F, G->space.gram, psi);
  for (int z = 0; z < 3; ++z) {
    CMat C = W.heisenberg({0, 0}, static_cast<Elt>(z));
    CMat S = CMat::identity(3);
    for (auto& x : S.a) x *= psi(static_cast<Elt>(z));
    CHECK(max_abs_diff(C, S) < 1e-12);
  }
  // group law (w,t)(w',t') = (w+w', t+t'+<w,w'>/2)
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) {
      Vec a = vector_at(F, 2, i), b = vector_at(F, 2, j);
      Vec s = {F.add(a[0], b[0]), F.add(a[1], b[1])};
      Elt t = F.mul(F.half(), bilinear(F, G->space.gram, a, b));
      CHECK(max_abs_diff(W.heisenberg(a, 0) * W.heisenberg(b, 0), W.heisenberg(s, t)) < 1e-12);
      if (i) CHECK(std::abs(W.heisenberg(a, 0).trace()) < 1e-12);
    }
  // equivariance
  for (int c = 0; c < G->num_classes(); ++c) {
    Mat g = G->rep(c);
    CMat M = W.matrix(g);
    for (int i = 0; i < 9; ++i) {
      Vec w = vector_at(F, 2, i);
      CHECK(max_abs_diff(M * W.heisenberg(w, 1) * adjoint(M), W.heisenberg(apply(F, g, w), 1)) < 1e-9);
    }
  }
}

TEST_CASE("odd orthogonal twisting identity on (SL_2, O_3)") {
  for (int q : {3, 5}) {
    auto F = make_field(q);
    auto [psi, psi2] = psi_pair(F);
    auto S = build(F, Tower::Sp, 2);
    for (Tower t : {Tower::OOddPlus, Tower::OOddMinus}) {
      Tower u = t == Tower::OOddPlus ? Tower::OOddMinus : Tower::OOddPlus;
      auto A = build(F, t, 3);
      FormedSpace B = standard_space(F, u, 3);
      // T^T B T = delta A, so g -> T g T^{-1} identifies O(A) with O(B)
      Mat target = scale(F, psi2.a(), A->space.gram);
      Mat T = find_isometric_basis(F, B.gram, Mat::identity(3), target);
      Mat Ti = inverse_or_throw(F, T);
      WeilCharacter c1(F, psi), c2(F, psi2);
      for (int a = 0; a < A->num_classes(); ++a)
        for (int b = 0; b < S->num_classes(); ++b) {
          Mat g = A->rep(a), h = S->rep(b);
          Mat g2 = mul(F, mul(F, T, g), Ti);
          CHECK(std::abs(c1.pair(g, A->space.gram, h, S->space.gram) - c2.pair(g2, B.gram, h, S->space.gram)) < 1e-8);
        }
    }
  }
}

TEST_CASE("carrier bound") {
  auto F = make_field(5);
  auto V = standard_space(F, Tower::Sp, 12);
  CHECK_THROWS_AS(WeilModel(F, V.gram, psi_pair(F).first), ResourceRefusal);
}

TEST_CASE("closed form against the pinned model values") {
  auto g = weil_gate();
  std::vector<std::string> names;
  for (int i : g.passing) names.push_back(kWeilScaleNames[i]);
  CHECK(nlohmann::json(names) == pinned("weil.gate.passing_conventions"));
  for (int q : {3, 5}) {
    auto F = make_field(q);
    auto G = build(F, Tower::Sp, 2);
    WeilCharacter chi(F, psi_pair(F).first);
    const Mat& J = G->space.gram;
    auto w = from_function(G, [&](const Mat& x) { return chi(x, J); }, "omega");
    std::string pre = "weil.q" + std::to_string(q) + ".sl2.";
    CHECK(inner(w, w) == pinned(pre + "self_intertwiners").get<long long>());
    // even and odd pieces: omega(-1) = chi(-1) times the parity operator
    double c = F.legendre(F.neg(1));
    Elt m1 = F.neg(1);
    auto piece = [&](double s) {
      return from_function(G, [&](const Mat& x) { return 0.5 * (chi(x, J) + s * c * chi(scale(F, m1, x), J)); });
    };
    CHECK(nlohmann::json::array({piece(1).degree(), piece(-1).degree()}) == pinned(pre + "parity_split"));
  }
}
