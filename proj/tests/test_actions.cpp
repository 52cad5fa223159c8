#include "support.hpp"

#include "gacomb/error.hpp"

using namespace gacomb;
using namespace gacomb::test;
using V = std::vector<std::string>;

TEST_CASE("make_action examples") {
  CHECK(cyclic(5)->elements()->size() == 5);
  auto aff = affine(5);
  CHECK(aff->elements()->size() == 20);
  auto t = aff->transporter(aff->parse_point("1"), aff->parse_point("3"));
  CHECK(t.size() == 4);
  std::vector<std::string> expected;
  for (int a = 1; a <= 4; ++a) expected.push_back("(" + std::to_string(a) + "," + std::to_string(((3 - a) % 5 + 5) % 5) + ")");
  std::sort(expected.begin(), expected.end());
  auto got = names(*aff, t);
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
  CHECK(psl2(5)->elements()->size() == 60);
}

TEST_CASE("make_action rejects bad descriptors") {
  CHECK_THROWS_AS(make_action({{"kind", "affine"}, {"p", 6}}), InvalidArgument);
  CHECK_THROWS_AS(make_action({{"kind", "psl2"}, {"p", 9}}), InvalidArgument);
  CHECK_THROWS_AS(make_action({{"kind", "nope"}}), InvalidArgument);
  auto q = make_action({{"kind", "linear_q"}, {"n", 2}});
  CHECK_THROWS_AS(q->parse_element("[[1,2],[2,4]]"), InvalidArgument);
}

TEST_CASE("generators") {
  auto z = cyclic(101);
  auto ap = generate_points(*z, {{"kind", "arithmetic_progression"}, {"start", 0}, {"step", 3}, {"length", 10}});
  CHECK(ap.size() == 10);
  for (int k = 0; k < 10; ++k) CHECK(ap.contains(*z->point_from_int(3 * k)));
  auto aff = affine(101);
  auto gp = generate_points(*aff, {{"kind", "geometric_progression"}, {"start", 1}, {"ratio", 2}, {"length", 5}});
  CHECK(gp == pts(*aff, {"1", "2", "4", "8", "16"}));
  nlohmann::json r = {{"kind", "random"}, {"count", 20}, {"seed", 7}};
  auto r1 = generate_points(*aff, r);
  CHECK(r1.size() == 20);
  CHECK(r1 == generate_points(*aff, r));
  CHECK(r1 != generate_points(*aff, {{"kind", "random"}, {"count", 20}, {"seed", 8}}));
  CHECK_THROWS_AS(generate_points(*aff, {{"kind", "random"}, {"count", 200}, {"seed", 7}}), InvalidArgument);
}

TEST_CASE("generated subgroup") {
  auto z6 = cyclic(6);
  CHECK(generated_subgroup(*z6, ElementSet{z6->identity()}, 10) == ElementSet{z6->identity()});
  CHECK(names(*z6, generated_subgroup(*z6, els(*z6, {"2"}), 10)) == V{"0", "2", "4"});
  auto s = sl2(3);
  CHECK(generated_subgroup(*s, els(*s, {"[[1,1],[0,1]]", "[[1,0],[1,1]]"}), 100).size() == 24);
  CHECK_THROWS_AS(generated_subgroup(*s, els(*s, {"[[1,1],[0,1]]", "[[1,0],[1,1]]"}), 10), ClosureTooLarge);
}

TEST_CASE("affine groups have order p(p-1) and at most one fixed point") {
  for (int p : {2, 3, 5, 7, 11, 13}) {
    auto a = affine(p);
    auto G = *a->elements();
    CHECK(G.size() == static_cast<std::size_t>(p * (p - 1)));
    auto X = *a->points();
    for (const auto& g : G)
      if (g != a->identity()) CHECK(fixed_in(*a, g, X).size() <= 1);
  }
}

TEST_CASE("PSL2 has no non-identity element fixing three points") {
  for (int p : {2, 3, 5, 7}) {
    auto a = psl2(p);
    auto G = *a->elements();
    CHECK(G.size() == static_cast<std::size_t>(p == 2 ? 6 : p * (p * p - 1) / 2));
    auto X = *a->points();
    CHECK(X.size() == static_cast<std::size_t>(p + 1));
    for (const auto& g : G) {
      if (g == a->identity()) continue;
      CHECK(fixed_in(*a, g, X).size() <= 2);
      bool moves = false;
      for (const auto& x : X) moves = moves || a->act(g, x) != x;
      CHECK(moves);
    }
  }
}

TEST_CASE("coset action image is the projection of A") {
  nlohmann::json ambient = {{"kind", "permutation"}, {"n", 4}};
  auto base = make_action(ambient);
  auto H = generated_subgroup(*base, els(*base, {"[2,1,3,4]", "[1,2,4,3]"}), 100);
  auto a = make_action({{"kind", "coset"}, {"ambient", ambient}, {"subgroup", {"[2,1,3,4]", "[1,2,4,3]"}}});
  CHECK(a->points()->size() == 6);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    auto A = random_elements(*a, 1 + rng() % 8, rng());
    auto home = a->act(a->identity(), (*a->points())[0]);
    auto image = image_set(*a, A, PointSet{home});
    std::set<std::vector<std::string>> cosets;
    for (const auto& g : A) cosets.insert(names(*base, product_set(*base, ElementSet{g}, H)));
    CHECK(image.size() == cosets.size());
  }
}

TEST_CASE("distinct-tuple diagonal action is free when fixed points are few") {
  for (int p : {3, 5}) {
    auto a = make_action({{"kind", "diagonal"}, {"base", {{"kind", "affine"}, {"p", p}}}, {"n", 2}, {"distinct", true}});
    auto X = *a->points();
    CHECK(X.size() == static_cast<std::size_t>(p * (p - 1)));
    auto G = *a->elements();
    for (const auto& g : G)
      if (g != a->identity()) CHECK(fixed_in(*a, g, X).empty());
  }
  auto a = make_action({{"kind", "diagonal"}, {"base", {{"kind", "psl2"}, {"p", 3}}}, {"n", 3}, {"distinct", true}});
  auto G = *a->elements();
  auto X = *a->points();
  for (const auto& g : G)
    if (g != a->identity()) CHECK(fixed_in(*a, g, X).empty());
}

TEST_CASE("translation actions are free") {
  for (const auto& a : {cyclic(12), make_action({{"kind", "regular"}, {"base", {{"kind", "sl2"}, {"p", 3}}}})}) {
    auto G = *a->elements();
    auto X = *a->points();
    for (const auto& g : G)
      if (g != a->identity()) CHECK(fixed_in(*a, g, X).empty());
  }
}

TEST_CASE("linear actions over Q are exact") {
  auto q = make_action({{"kind", "linear_q"}, {"n", 2}});
  auto g = q->parse_element("[[1/2,1],[0,3]]");
  auto x = q->parse_point("[2,1/3]");
  CHECK(q->format_point(q->act(g, x)) == "[4/3,1]");
  CHECK(q->act(q->inv(g), q->act(g, x)) == x);
}
