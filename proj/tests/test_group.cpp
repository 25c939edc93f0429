#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "fqt/group.hpp"
#include "pinned.hpp"

using namespace fqt;

namespace {
GroupPtr build(const FieldCtx& F, Tower t, int d, bool special = false) {
  return realize(standard_space(F, t, d), special, RealizeOptions{});
}

bool preserves_form(const Group& G, const Mat& g) {
  return mul(*G.F, mul(*G.F, transpose(g), G.space.gram), g) == G.space.gram;
}
}  // namespace

TEST_CASE("orders match the classical formulas") {
  auto F3 = make_field(3);
  CHECK(build(F3, Tower::Sp, 4)->order() == 51840);
  CHECK(build(F3, Tower::Sp, 2)->order() == 24);
  CHECK(build(F3, Tower::OEvenMinus, 2)->order() == 8);
  CHECK(build(F3, Tower::OEvenPlus, 2)->order() == 4);
  CHECK(build(F3, Tower::OOddPlus, 1)->order() == 2);
  CHECK(build(F3, Tower::OOddPlus, 3)->order() == 48);
  CHECK(build(F3, Tower::OEvenMinus, 4)->order() == 1440);
  CHECK(build(F3, Tower::OEvenPlus, 4)->order() == 1152);
  CHECK(build(F3, Tower::OOddMinus, 3, true)->order() == 24);
  auto F5 = make_field(5);
  CHECK(build(F5, Tower::OOddPlus, 3)->order() == 240);
  CHECK(build(F5, Tower::Sp, 2)->order() == 120);
  CHECK(build(F5, Tower::OEvenMinus, 4, true)->order() == 15600);
}

TEST_CASE("every element preserves the form") {
  auto F3 = make_field(3);
  for (auto [t, d] : {std::pair{Tower::Sp, 4}, {Tower::OOddMinus, 3}, {Tower::OEvenMinus, 4}}) {
    auto G = build(F3, t, d);
    for (uint64_t i = 0; i < G->order(); ++i) {
      Mat g = G->element(i);
      CHECK(preserves_form(*G, g));
      if (t == Tower::Sp) CHECK(det(F3, g) == 1);
    }
  }
}

TEST_CASE("conjugacy classes") {
  auto F3 = make_field(3);
  auto SL2 = build(F3, Tower::Sp, 2);
  CHECK(SL2->num_classes() == 7);
  CHECK(SL2->class_size[SL2->class_of(Mat::identity(2))] == 1);
  uint64_t total = 0;
  for (auto s : SL2->class_size) total += s;
  CHECK(total == 24);
  auto Sp4 = build(F3, Tower::Sp, 4);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    Mat g = Sp4->element(rng() % Sp4->order()), h = Sp4->element(rng() % Sp4->order());
    Mat c = mul(F3, mul(F3, h, g), inverse_or_throw(F3, h));
    CHECK(Sp4->class_of(c) == Sp4->class_of(g));
  }
  CHECK(Sp4->num_classes() == 34);
}

TEST_CASE("SO has index two") {
  auto F3 = make_field(3);
  for (auto [t, d] : {std::pair{Tower::OOddPlus, 3}, {Tower::OEvenMinus, 2}, {Tower::OEvenPlus, 4}}) {
    auto O = build(F3, t, d), S = build(F3, t, d, true);
    CHECK(O->order() == 2 * S->order());
  }
}

TEST_CASE("order bound refuses") {
  auto F3 = make_field(3);
  RealizeOptions o;
  o.order_bound = 1000;
  CHECK_THROWS_AS(realize(standard_space(F3, Tower::Sp, 4), false, o), ResourceRefusal);
  CHECK(projected_order(standard_space(F3, Tower::OOddPlus, 13), false) > 2e7L);
}

TEST_CASE("disk cache reload is bit exact") {
  auto F3 = make_field(3);
  auto dir = std::filesystem::temp_directory_path() / "fqt_group_cache_test";
  std::filesystem::remove_all(dir);
  RealizeOptions o;
  o.cache_dir = dir.string();
  auto V = standard_space(F3, Tower::OEvenMinus, 4);
  RealizeStats s1, s2;
  auto A = realize(V, false, o, &s1);
  auto B = realize(V, false, o, &s2);
  CHECK_FALSE(s1.cache_hit);
  CHECK(s2.cache_hit);
  CHECK(A->elems == B->elems);
  CHECK(A->cls == B->cls);
  CHECK(A->rep_index == B->rep_index);
  // corrupt the body: reload must refuse and the next realize rebuilds
  auto path = dir / group_cache_name(V, false);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    char c = 0x55;
    f.write(&c, 1);
  }
  CHECK(load_group(V, false, path.string()) == nullptr);
  RealizeStats s3;
  auto C = realize(V, false, o, &s3);
  CHECK(s3.cache_rebuilt);
  CHECK(C->cls == A->cls);
  std::filesystem::remove_all(dir);
}

TEST_CASE("orders and class counts against the pinned brute force") {
  struct Item {
    int q;
    Tower t;
    int d;
    bool classes;
  };
  for (Item it : {Item{3, Tower::Sp, 2, true}, Item{5, Tower::Sp, 2, true}, Item{3, Tower::Sp, 4, false},
                  Item{3, Tower::OEvenMinus, 2, true}, Item{3, Tower::OEvenPlus, 2, true},
                  Item{3, Tower::OOddPlus, 3, true}, Item{3, Tower::OOddPlus, 5, false},
                  Item{3, Tower::OOddMinus, 5, false}}) {
    auto F = make_field(it.q);
    auto G = build(F, it.t, it.d);
    std::string key = "group.q" + std::to_string(it.q) + "." + tower_name(it.t) + std::to_string(it.d);
    CAPTURE(key);
    CHECK(G->order() == pinned(key + ".order").get<uint64_t>());
    if (it.classes) CHECK(G->num_classes() == pinned(key + ".classes").get<int>());
  }
}
