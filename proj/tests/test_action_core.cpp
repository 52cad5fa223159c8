#include "support.hpp"

#include "gacomb/statistics.hpp"

using namespace gacomb;
using namespace gacomb::test;
using V = std::vector<std::string>;

TEST_CASE("image set examples") {
  auto z5 = cyclic(5);
  CHECK(image_set(*z5, els(*z5, {"0"}), int_pts(*z5, 0, 2)) == int_pts(*z5, 0, 2));
  CHECK(names(*z5, image_set(*z5, els(*z5, {"0", "1"}), int_pts(*z5, 0, 2))) == V{"0", "1", "2", "3"});
  auto aff = affine(5);
  CHECK(names(*aff, image_set(*aff, els(*aff, {"(2,0)", "(2,1)"}), pts(*aff, {"1", "2"}))) == V{"0", "2", "3", "4"});
}

TEST_CASE("partial image set examples") {
  auto z5 = cyclic(5);
  CHECK(partial_image_set(*z5, ImageRelation{}).empty());
  ImageRelation E({{z5->parse_element("0"), z5->parse_point("0")}, {z5->parse_element("1"), z5->parse_point("2")}});
  CHECK(names(*z5, partial_image_set(*z5, E)) == V{"0", "3"});
  auto A = els(*z5, {"1", "3"});
  auto Y = int_pts(*z5, 1, 2);
  std::vector<std::pair<GroupElement, Point>> full;
  for (const auto& a : A)
    for (const auto& y : Y) full.emplace_back(a, y);
  CHECK(partial_image_set(*z5, ImageRelation(full)) == image_set(*z5, A, Y));
}

TEST_CASE("product, inverse and symmetrized powers") {
  auto z = integers();
  auto e = ElementSet{z->identity()};
  CHECK(product_set(*z, e, e) == e);
  CHECK(inverse_set(*z, e) == e);
  CHECK(symmetrized_power(*z, e, 4) == e);
  auto A = int_els(*z, 0, 9);
  auto sum = product_set(*z, A, A);
  CHECK(sum.size() == 19);
  CHECK(sum == int_els(*z, 0, 18));
  auto s3 = perm(3);
  auto A2 = symmetrized_power(*s3, els(*s3, {"[2,1,3]"}), 2);
  CHECK(names(*s3, A2) == V{"[1,2,3]", "[2,1,3]"});
}

TEST_CASE("transporters, stabilizers and fixed points") {
  auto s3 = perm(3);
  auto G = *s3->elements();
  auto x = s3->parse_point("1");
  CHECK(transporter_in(*s3, G, x, x) == stabilizer_in(*s3, G, x));
  auto stab = stabilizer_in(*s3, G, x);
  CHECK(names(*s3, stab) == V{"[1,2,3]", "[1,3,2]"});
  CHECK(image_set(*s3, G, PointSet{x}).size() * stab.size() == G.size());
  auto z6 = cyclic(6);
  CHECK(names(*z6, set_stabilizer_in(*z6, *z6->elements(), pts(*z6, {"0", "2", "4"}))) == V{"0", "2", "4"});
  auto aff = affine(7);
  CHECK(names(*aff, fixed_in(*aff, aff->parse_element("(3,1)"), *aff->points())) == V{"3"});
}

TEST_CASE("count map examples") {
  auto z4 = cyclic(4);
  auto r = count_quotients(*z4, els(*z4, {"0", "1"}));
  CHECK(r.get(z4->parse_element("0")) == 2);
  CHECK(r.get(z4->parse_element("1")) == 1);
  CHECK(r.get(z4->parse_element("3")) == 1);
  CHECK(r.size() == 3);
  auto ray = count_images(*z4, els(*z4, {"0", "1"}), pts(*z4, {"0", "2"}));
  CHECK(ray.size() == 4);
  for (int x = 0; x < 4; ++x) CHECK(ray.get(*z4->point_from_int(x)) == 1);
  auto s3 = perm(3);
  auto id = count_quotients(*s3, ElementSet{s3->identity()});
  CHECK(id.size() == 1);
  CHECK(id.get(s3->identity()) == 1);
}

TEST_CASE("action axioms on every built-in action") {
  for (const auto& a : zoo()) {
    CAPTURE(a->kind());
    auto G = random_elements(*a, 12, 1);
    auto X = random_points(*a, 12, 2);
    for (const auto& x : X) CHECK(a->act(a->identity(), x) == x);
    for (const auto& g : G) {
      CHECK(a->mul(g, a->inv(g)) == a->identity());
      CHECK(a->parse_element(a->format_element(g)) == g);
      for (const auto& h : G)
        for (const auto& x : X) CHECK(a->act(a->mul(g, h), x) == a->act(g, a->act(h, x)));
    }
    for (const auto& x : X) CHECK(a->parse_point(a->format_point(x)) == x);
  }
}

TEST_CASE("transporters are cosets of stabilizers") {
  for (const auto& a : {affine(7), psl2(5), cyclic(9)}) {
    CAPTURE(a->kind());
    REQUIRE(a->has_transporter());
    auto G = *a->elements();
    auto X = *a->points();
    for (const auto& x : X) {
      auto stab = stabilizer_in(*a, G, x);
      for (const auto& y : X) {
        auto t = a->transporter(x, y);
        CHECK(t == transporter_in(*a, G, x, y));
        if (t.empty()) continue;
        for (const auto& g0 : t) CHECK(product_set(*a, ElementSet{g0}, stab) == t);
      }
    }
  }
}

TEST_CASE("count map masses and image composition") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    for (const auto& a : zoo()) {
      CAPTURE(a->kind());
      auto A = random_elements(*a, 1 + rng() % 6, rng());
      auto B = random_elements(*a, 1 + rng() % 6, rng());
      auto Y = random_points(*a, 1 + rng() % 8, rng());
      CHECK(count_images(*a, A, Y).total() == A.size() * Y.size());
      CHECK(count_quotients(*a, A).total() == A.size() * A.size());
      CHECK(image_set(*a, A, image_set(*a, B, Y)) == image_set(*a, product_set(*a, A, B), Y));
      std::vector<std::pair<GroupElement, GroupElement>> rel;
      for (const auto& x : A)
        for (const auto& y : B)
          if (rng() % 2) rel.emplace_back(x, y);
      ProductRelation E(rel);
      CHECK(count_partial_products(*a, E).total() == E.size());
    }
  }
}

TEST_CASE("exact growth forces a stabilizing subgroup") {
  std::mt19937_64 rng(11);
  int applied = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto a = cyclic(24);
    auto H = generated_subgroup(*a, ElementSet{*a->element_from_int(static_cast<std::int64_t>(6 * (1 + rng() % 3)))}, 100);
    auto Y = image_set(*a, H, random_points(*a, 1 + rng() % 3, rng()));
    auto A = product_set(*a, ElementSet{*a->element_from_int(static_cast<std::int64_t>(rng() % 24))},
                         random_elements(*a, 1, rng()));
    A = set_union(A, product_set(*a, A, sample_subset(H, 1 + rng() % H.size(), rng())));
    auto r = check_exact_growth(*a, A, Y);
    if (!r.applies) continue;
    ++applied;
    CHECK(image_set(*a, A, image_set(*a, inverse_set(*a, A), Y)) == Y);
    auto quotients = product_set(*a, inverse_set(*a, A), A);
    CHECK(set_stabilizer_in(*a, quotients, Y) == quotients);
    CHECK(r.quotients_stabilize);
    CHECK(r.orbits_partition);
  }
  CHECK(applied > 0);
}
