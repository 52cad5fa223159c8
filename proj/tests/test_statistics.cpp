#include "support.hpp"

#include "gacomb/statistics.hpp"

using namespace gacomb;
using namespace gacomb::test;
using V = std::vector<std::string>;

namespace {

ImageRelation full_relation(const ElementSet& A, const PointSet& Y) {
  std::vector<std::pair<GroupElement, Point>> out;
  for (const auto& a : A)
    for (const auto& y : Y) out.emplace_back(a, y);
  return ImageRelation(std::move(out));
}

}  // namespace

TEST_CASE("overlap and symmetry set examples") {
  auto z6 = cyclic(6);
  auto Y = int_pts(*z6, 0, 3);
  CHECK(oracle_overlap(*z6, z6->parse_element("1"), Y) == 3);
  CHECK(oracle_overlap(*z6, z6->parse_element("3"), Y) == 2);
  auto r = symmetry_set(*z6, Y, Rational(3, 4));
  CHECK(names(*z6, r.members) == V{"0", "1", "5"});
  CHECK(r.overlaps.get(z6->parse_element("1")) == 3);
  CHECK(r.overlaps.get(z6->parse_element("0")) == 4);
  CHECK(check_symmetry_set(*z6, Y, std::nullopt, r).empty());
  auto even = symmetry_set(*z6, pts(*z6, {"0", "2", "4"}), Rational(1));
  CHECK(names(*z6, even.members) == V{"0", "2", "4"});
  CHECK_THROWS_AS(symmetry_set(*z6, Y, Rational(0)), InvalidArgument);
  CHECK_THROWS_AS(symmetry_set(*z6, Y, Rational(3, 2)), InvalidArgument);
}

TEST_CASE("symmetry set matches the brute-force oracle") {
  std::mt19937_64 rng(21);
  for (const auto& a : zoo()) {
    CAPTURE(a->kind());
    for (int trial = 0; trial < 6; ++trial) {
      auto Y = random_points(*a, 1 + rng() % 8, rng());
      Rational alpha(1 + rng() % 4, 4);
      auto r = symmetry_set(*a, Y, alpha);
      CHECK(names(*a, r.members) ==
            oracle_symmetry(*a, Y, static_cast<std::uint64_t>(numerator(alpha)),
                            static_cast<std::uint64_t>(denominator(alpha))));
      CHECK(r.members.contains(a->identity()));
      CHECK(inverse_set(*a, r.members) == r.members);
      CHECK(is_subset(r.members, symmetry_set(*a, Y, alpha / 2).members));
      CHECK(symmetry_set(*a, Y, Rational(1)).members == set_stabilizer_in(*a, *a->elements(), Y));
    }
  }
}

TEST_CASE("action energy examples") {
  auto z4 = cyclic(4);
  auto A = els(*z4, {"0", "1"});
  auto Y = pts(*z4, {"0", "2"});
  auto e = action_energy(*z4, A, Y);
  CHECK(e.value == 4);
  CHECK(oracle_energy(*z4, A, Y) == 4);
  CHECK(check_action_energy(*z4, A, Y, e).empty());

  auto z12 = cyclic(12);
  auto B = int_els(*z12, 0, 4);
  CHECK(action_energy(*z12, B, int_pts(*z12, 5, 5)).value == B.size());

  auto aff = affine(5);
  auto dil = els(*aff, {"(1,0)", "(2,0)", "(3,0)", "(4,0)"});
  CHECK(action_energy(*aff, dil, pts(*aff, {"0"})).value == 16);

  auto h = cyclic(6);
  auto H = generated_subgroup(*h, els(*h, {"2"}), 10);
  auto HY = image_set(*h, H, pts(*h, {"0"}));
  CHECK(action_energy(*h, H, HY).value == H.size() * H.size() * HY.size());
}

TEST_CASE("energy evaluations agree with the quadruple oracle") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    for (const auto& a : zoo()) {
      CAPTURE(a->kind());
      auto A = random_elements(*a, 1 + rng() % 7, rng());
      auto Y = random_points(*a, 1 + rng() % 7, rng());
      auto e = action_energy(*a, A, Y);
      CHECK(e.value == oracle_energy(*a, A, Y));
      CHECK(e.by_pairs == e.value);
      CHECK(e.by_repr == e.value);
      CHECK(e.by_fibers == e.value);
      CHECK(e.value <= A.size() * A.size() * Y.size());
    }
  }
}

TEST_CASE("energy bounds") {
  auto z4 = cyclic(4);
  auto A = els(*z4, {"0", "1"});
  auto Y = pts(*z4, {"0", "2"});
  auto r = energy_bounds(*z4, A, Y, Rational(1, 2));
  CHECK(r.energy == 4);
  CHECK(r.image_size == 4);
  CHECK(r.image_holds);
  CHECK(r.sym_holds);
  CHECK(r.lower_repr_holds);
  CHECK(r.upper_repr_holds);
  CHECK(r.upper_max_holds);
  CHECK(r.upper_trivial_holds);
  CHECK(check_energy_bounds(*z4, A, Y, std::nullopt, r).empty());

  auto one = energy_bounds(*z4, ElementSet{z4->identity()}, Y, Rational(1));
  CHECK(one.energy == 2);
  CHECK(one.image_lhs == one.image_rhs);

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    for (const auto& a : zoo()) {
      CAPTURE(a->kind());
      auto B = random_elements(*a, 1 + rng() % 6, rng());
      auto Z = random_points(*a, 1 + rng() % 6, rng());
      std::vector<std::pair<GroupElement, Point>> rel;
      for (const auto& x : B)
        for (const auto& y : Z)
          if (rng() % 3) rel.emplace_back(x, y);
      std::optional<ImageRelation> E;
      if (!rel.empty()) E = ImageRelation(rel);
      auto b = energy_bounds(*a, B, Z, Rational(1 + rng() % 5, 5), E);
      CHECK(b.image_holds);
      CHECK(b.sym_holds);
      CHECK(b.lower_repr_holds);
      CHECK(b.upper_repr_holds);
      CHECK(b.upper_max_holds);
      CHECK(b.upper_trivial_holds);
      if (E) CHECK(b.relation_holds.value());
      CHECK(check_energy_bounds(*a, B, Z, E, b).empty());
    }
  }
}

TEST_CASE("orbit-stabilizer witness") {
  auto z6 = cyclic(6);
  auto w = orbit_stabilizer_witness(*z6, int_els(*z6, 0, 2), z6->parse_point("0"));
  CHECK(w.stab_count == 1);
  CHECK(w.orbit_size == 3);
  CHECK(w.holds);
  auto aff = affine(5);
  auto dil = els(*aff, {"(1,0)", "(2,0)", "(3,0)", "(4,0)"});
  auto d = orbit_stabilizer_witness(*aff, dil, aff->parse_point("0"));
  CHECK(d.stab_count == 4);
  CHECK(d.orbit_size == 1);
  CHECK(check_orbit_stabilizer(*aff, dil, d).empty());
  CHECK_THROWS_AS(orbit_stabilizer_witness(*aff, ElementSet{}, aff->parse_point("0")), InvalidArgument);

  auto p = psl2(5);
  auto G = *p->elements();
  auto x = p->parse_point("0");
  auto whole = orbit_stabilizer_witness(*p, G, x);
  CHECK(whole.stab_count * whole.orbit_size == G.size());

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    for (const auto& a : zoo()) {
      auto A = random_elements(*a, 1 + rng() % 8, rng());
      auto X = random_points(*a, 1, rng());
      auto r = orbit_stabilizer_witness(*a, A, X[0]);
      CHECK(r.holds);
      CHECK(check_orbit_stabilizer(*a, A, r).empty());
    }
  }
}

TEST_CASE("energy to partial image and symmetry") {
  auto z8 = cyclic(8);
  auto A = els(*z8, {"0", "1"});
  auto Y = int_pts(*z8, 0, 3);
  REQUIRE(oracle_energy(*z8, A, Y) == 14);
  Rational alpha(14, 32);
  auto c = energy_to_partial_image(*z8, A, Y, alpha);
  CHECK(c.size_holds);
  CHECK(c.image_holds);
  CHECK(check_partial_image_from_energy(*z8, A, Y, c).empty());
  auto s = energy_to_symmetry(*z8, A, Y, alpha);
  CHECK(s.holds);
  CHECK(check_symmetry_from_energy(*z8, A, Y, s).empty());
  CHECK_THROWS_AS(energy_to_partial_image(*z8, A, Y, Rational(15, 32)), HypothesisNotMet);
  CHECK_THROWS_AS(energy_to_symmetry(*z8, A, Y, Rational(15, 32)), HypothesisNotMet);

  auto h = make_action({{"kind", "regular"}, {"base", {{"kind", "cyclic"}, {"n", 5}}}});
  auto H = *h->elements();
  auto HY = *h->points();
  auto t = energy_to_partial_image(*h, H, HY, Rational(1, 2));
  CHECK(t.popular == HY);
  CHECK(t.relation == full_relation(H, HY));

  std::mt19937_64 rng(17);
  int applied = 0;
  for (int trial = 0; trial < 40; ++trial) {
    for (const auto& a : zoo()) {
      auto B = random_elements(*a, 2 + rng() % 6, rng());
      auto Z = random_points(*a, 2 + rng() % 6, rng());
      auto e = oracle_energy(*a, B, Z);
      Rational measured(static_cast<std::int64_t>(e), static_cast<std::int64_t>(2 * B.size() * B.size() * Z.size()));
      if (measured > 1) continue;
      ++applied;
      auto p = energy_to_partial_image(*a, B, Z, measured);
      CHECK(check_partial_image_from_energy(*a, B, Z, p).empty());
      auto q = energy_to_symmetry(*a, B, Z, measured);
      CHECK(check_symmetry_from_energy(*a, B, Z, q).empty());
    }
  }
  CHECK(applied > 100);
}

TEST_CASE("partial image to symmetry and back") {
  auto z = cyclic(101);
  auto A = int_els(*z, 0, 4);
  auto Y = int_pts(*z, 0, 19);
  auto E = full_relation(A, Y);
  auto c = partial_image_to_symmetry(*z, A, Y, E, Rational(6, 5), Rational(1));
  CHECK(c.dense == A);
  CHECK(c.extended.size() == 24);
  CHECK(c.dense_holds);
  CHECK(c.extended_holds);
  CHECK(c.members_hold);
  CHECK(check_symmetry_from_partial_image(*z, A, Y, E, c).empty());
  CHECK_THROWS_AS(partial_image_to_symmetry(*z, A, Y, E, Rational(1), Rational(1)), HypothesisNotMet);

  auto z6 = cyclic(6);
  auto even = pts(*z6, {"0", "2", "4"});
  auto stab = els(*z6, {"0", "2"});
  auto t = partial_image_to_symmetry(*z6, stab, even, full_relation(stab, even), Rational(1), Rational(1));
  CHECK(t.dense == stab);
  CHECK(t.extended == even);
  CHECK(t.alpha == Rational(1, 4));

  auto sym = symmetry_set(*z, Y, Rational(3, 4)).members;
  auto back = symmetry_to_partial_image(*z, sym, Y, Rational(3, 4));
  CHECK(back.size_holds);
  CHECK(back.inside_holds);
  CHECK(check_partial_image_from_symmetry(*z, sym, Y, back).empty());
  CHECK(is_subset(partial_image_set(*z, back.relation), Y));
  CHECK_THROWS_AS(symmetry_to_partial_image(*z, int_els(*z, 0, 10), Y, Rational(3, 4)), HypothesisNotMet);
}

TEST_CASE("popularity principle") {
  CountMap<std::string> f;
  f.add("a", 10);
  f.add("b", 1);
  auto r = popular_subset(f, Rational(1, 2));
  CHECK(r.popular.items() == std::vector<std::string>{"a"});
  CHECK(r.mass == 10);
  CHECK(r.holds);

  CountMap<std::string> g;
  g.add("a");
  g.add("b");
  g.add("c", 4);
  auto s = popular_subset(g, Rational(3, 4));
  CHECK(s.popular.items() == std::vector<std::string>{"c"});
  CHECK(s.holds);

  CountMap<int> flat;
  for (int i = 0; i < 5; ++i) flat.add(i, 3);
  CHECK(popular_subset(flat, Rational(1, 3)).popular.size() == 5);
  CHECK_THROWS_AS(popular_subset(CountMap<int>{}, Rational(1, 2)), InvalidArgument);
  CHECK_THROWS_AS(popular_subset(flat, Rational(1)), InvalidArgument);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    CountMap<int> h;
    int n = 1 + rng() % 12;
    for (int i = 0; i < n; ++i) h.add(i, 1 + rng() % 20);
    Rational lambda(1 + rng() % 9, 10);
    auto p = popular_subset(h, lambda);
    CHECK(p.holds);
    std::uint64_t mass = 0;
    for (const auto& [k, v] : h.entries())
      if (Rational(BigInt(v) * n) >= lambda * BigInt(h.total())) mass += v;
    CHECK(mass == p.mass);
  }
}

TEST_CASE("Cauchy-Schwarz intersection pairs") {
  std::vector<std::uint32_t> all{0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<std::vector<std::uint32_t>> full(4, all);
  auto r = cs_intersection_pairs(full, 8, Rational(1));
  CHECK(r.pairs.size() == 16);
  CHECK(check_intersection_pairs(full, r).empty());

  std::vector<std::uint32_t> low{0, 1, 2, 3}, high{4, 5, 6, 7};
  std::vector<std::vector<std::uint32_t>> halves{low, low, high, high};
  auto h = cs_intersection_pairs(halves, 8, Rational(1, 2));
  CHECK(h.pairs.size() == 8);
  for (auto [s, t] : h.pairs) CHECK(s / 2 == t / 2);
  CHECK(h.count_holds);
  CHECK_THROWS_AS(cs_intersection_pairs(halves, 8, Rational(3, 4)), HypothesisNotMet);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint32_t n = 4 + rng() % 16;
    std::vector<std::vector<std::uint32_t>> fam(2 + rng() % 10);
    std::uint64_t total = 0;
    for (auto& s : fam) {
      for (std::uint32_t i = 0; i < n; ++i)
        if (rng() % 3) s.push_back(i);
      total += s.size();
    }
    if (total == 0) continue;
    Rational delta(static_cast<std::int64_t>(total), static_cast<std::int64_t>(fam.size() * n));
    auto c = cs_intersection_pairs(fam, n, delta);
    CHECK(c.cauchy_schwarz_holds);
    CHECK(c.count_holds);
    CHECK(check_intersection_pairs(fam, c).empty());
    for (auto [s, t] : c.pairs) {
      std::vector<std::uint32_t> both;
      std::set_intersection(fam[s].begin(), fam[s].end(), fam[t].begin(), fam[t].end(), std::back_inserter(both));
      CHECK(Rational(2 * static_cast<std::int64_t>(both.size())) >= delta * delta * n);
    }
  }
}

TEST_CASE("incidence identity") {
  auto z6 = cyclic(6);
  auto Y = int_pts(*z6, 0, 2);
  auto r = incidence_identity(*z6, els(*z6, {"0", "1"}), Y);
  CHECK(r.incidences == 5);
  CHECK(r.overlap_sum == 5);
  CHECK(r.holds);
  CHECK(incidence_identity(*z6, ElementSet{z6->identity()}, Y).incidences == 3);

  auto p = psl2(5);
  auto A = ElementSet{p->identity(), p->parse_element("[[1,1],[0,1]]")};
  auto Yp = pts(*p, {"0", "1", "2"});
  auto s = incidence_identity(*p, A, Yp);
  CHECK(s.incidences == s.overlap_sum);
  CHECK(s.incidences == oracle_overlap(*p, A[0], Yp) + oracle_overlap(*p, A[1], Yp));

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    for (const auto& a : zoo()) {
      auto B = random_elements(*a, 1 + rng() % 8, rng());
      auto Z = random_points(*a, 1 + rng() % 8, rng());
      std::uint64_t oracle = 0;
      for (const auto& g : B) oracle += oracle_overlap(*a, g, Z);
      auto c = incidence_identity(*a, B, Z);
      CHECK(c.incidences == oracle);
      CHECK(c.overlap_sum == oracle);
    }
  }
}
