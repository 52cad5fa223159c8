#include "support.hpp"

#include "gacomb/bounds.hpp"
#include "gacomb/bsg.hpp"
#include "gacomb/statistics.hpp"

using namespace gacomb;
using namespace gacomb::test;

namespace {

ElementSet borel(const GroupAction& sl, int p) {
  std::vector<GroupElement> out;
  for (int a = 1; a < p; ++a) {
    int inv = 1;
    while (a * inv % p != 1) ++inv;
    for (int b = 0; b < p; ++b)
      out.push_back(sl.parse_element("[[" + std::to_string(a) + "," + std::to_string(b) + "],[0," +
                                     std::to_string(inv) + "]]"));
  }
  return ElementSet(std::move(out));
}

}  // namespace

TEST_CASE("free symmetry bound") {
  auto z6 = cyclic(6);
  auto Y = int_pts(*z6, 0, 3);
  auto r = sym_bound_free(*z6, std::nullopt, Y, Rational(3, 4));
  CHECK(r.bound == Rational(16, 3));
  CHECK(r.measured == 3);
  CHECK(r.holds.value());
  CHECK(check_sym_bound(*z6, std::nullopt, Y, std::nullopt, r).empty());

  auto all = *z6->points();
  auto w = sym_bound_free(*z6, std::nullopt, all, Rational(1));
  CHECK(w.measured == 6);
  CHECK(w.free->transitive_bound == Rational(6));
  CHECK(w.bound == Rational(6));

  auto aff = affine(7);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    auto Z = random_points(*aff, 2 + rng() % 5, rng());
    Rational alpha(1 + rng() % 4, 4);
    auto b = sym_bound_free(*aff, std::nullopt, Z, alpha);
    CHECK(b.holds.value());
    CHECK(Rational(BigInt(symmetry_set(*aff, Z, alpha).members.size())) <= b.bound);
    CHECK(check_sym_bound(*aff, std::nullopt, Z, std::nullopt, b).empty());
  }
  CHECK_THROWS_AS(sym_bound_free(*z6, std::nullopt, Y, Rational(0)), InvalidArgument);
}

TEST_CASE("almost-free symmetry bound") {
  auto p7 = psl2(7);
  auto X = *p7->points();
  auto r = sym_bound_almost_free(*p7, X, Rational(7, 8), 3);
  CHECK(r.almost_free->max_fixed == 2);
  CHECK(r.almost_free->fix_holds);
  CHECK(r.almost_free->epsilon_holds);
  CHECK(r.almost_free->closed_form_holds);
  CHECK(r.almost_free->inclusion_holds.value());
  CHECK(r.measured == 168);
  CHECK(r.holds.value());
  CHECK(check_sym_bound(*p7, std::nullopt, X, std::nullopt, r).empty());

  // |Y| = 5 ≤ (1 + 5/3)·3 on the projective line over F_5: size precondition fails.
  auto p5 = psl2(5);
  CHECK_THROWS_AS(sym_bound_almost_free(*p5, pts(*p5, {"0", "1", "2", "3", "4"}), Rational(3, 5), 3),
                  HypothesisNotMet);
  // Two points fixed by a non-identity Möbius map violate n = 2.
  CHECK_THROWS_AS(sym_bound_almost_free(*p7, X, Rational(7, 8), 2), HypothesisNotMet);

  auto aff = affine(7);
  auto Y = *aff->points();
  auto a = sym_bound_almost_free(*aff, Y, Rational(1, 2), 2);
  CHECK(a.holds.value());
  CHECK(check_sym_bound(*aff, std::nullopt, Y, std::nullopt, a).empty());

  auto z12 = cyclic(12);
  auto Z = int_pts(*z12, 0, 7);
  Rational alpha(1, 2);
  auto one = sym_bound_almost_free(*z12, Z, alpha, 1);
  auto free = sym_bound_free(*z12, std::nullopt, Z, alpha);
  CHECK(one.bound == free.bound * (1 + 1 / (alpha * 8 - (1 + alpha))));
  CHECK(one.holds.value());
  CHECK(free.holds.value());
}

TEST_CASE("linear symmetry bound") {
  auto gl1 = make_action({{"kind", "linear_fp"}, {"p", 11}, {"n", 1}, {"special", false}});
  std::vector<Point> gp;
  for (int k : {1, 2, 4, 8, 5}) gp.push_back(gl1->parse_point("[" + std::to_string(k) + "]"));
  PointSet Y(gp);
  auto r = sym_bound_linear(*gl1, Y, Rational(3, 5), Rational(2, 5));
  CHECK(r.bound == Rational(5) / (Rational(3, 5) - Rational(1, 5)));
  CHECK(r.holds.value());
  CHECK(check_sym_bound(*gl1, std::nullopt, Y, std::nullopt, r).empty());

  auto gl2 = make_action({{"kind", "linear_fp"}, {"p", 5}, {"n", 2}, {"special", false}});
  REQUIRE(gl2->elements()->size() == 480);
  auto Y2 = pts(*gl2, {"[1,0]", "[2,0]", "[0,1]", "[0,2]", "[1,1]", "[2,2]", "[1,2]", "[1,3]"});
  auto s = sym_bound_linear(*gl2, Y2, Rational(1, 2), Rational(1, 4));
  CHECK(s.linear->concentration_holds);
  CHECK(s.holds.value());
  CHECK(s.linear->lemma_holds.value_or(true));
  CHECK(check_sym_bound(*gl2, std::nullopt, Y2, std::nullopt, s).empty());

  auto crowded = pts(*gl2, {"[1,0]", "[2,0]", "[3,0]", "[4,0]", "[0,1]", "[1,1]", "[1,2]", "[1,3]"});
  CHECK_THROWS_AS(sym_bound_linear(*gl2, crowded, Rational(1, 2), Rational(1, 4)), HypothesisNotMet);
  CHECK_THROWS_AS(sym_bound_linear(*affine(5), int_pts(*affine(5), 0, 3), Rational(1, 2), Rational(1, 4)),
                  InvalidArgument);
}

TEST_CASE("affine incidence bound") {
  auto aff = affine(11);
  auto ten = int_pts(*aff, 0, 9);
  CHECK(affine_incidence_sym_bound(*aff, ten, Rational(1, 2)).bound == Rational(10000, 9));
  auto Y = int_pts(*aff, 1, 6);
  auto r = affine_incidence_sym_bound(*aff, Y, Rational(1, 2));
  CHECK(r.bound == Rational(1296));
  CHECK(r.holds.value());
  CHECK(r.affine->rich_holds.value());
  CHECK(r.affine->incidence_holds.value());
  CHECK(check_sym_bound(*aff, std::nullopt, Y, std::nullopt, r).empty());
  CHECK_THROWS_AS(affine_incidence_sym_bound(*aff, Y, Rational(1, 3)), HypothesisNotMet);
}

TEST_CASE("SL2 incidence scan") {
  auto s = sl2(5);
  auto id = ElementSet{s->identity()};
  auto r = sl2_incidence_scan(*s, id, {0, 1, 2}, {0, 1, 2}, Rational(1));
  CHECK(r.curve_count == 3);
  CHECK(r.dual_holds);
  auto shift = els(*s, {"[[1,1],[0,1]]"});
  auto t = sl2_incidence_scan(*s, shift, {0, 1}, {1, 2}, Rational(1));
  CHECK(t.curve_count == 2);
  CHECK(check_incidence_scan(*s, shift, t).empty());

  auto s7 = sl2(7);
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    auto A = random_elements(*s7, 10 + rng() % 30, rng());
    std::vector<std::int64_t> xs, ys;
    for (int x = 0; x < 7; ++x) {
      if (rng() % 2) xs.push_back(x);
      if (rng() % 2) ys.push_back(x);
    }
    auto c = sl2_incidence_scan(*s7, A, xs, ys, Rational(2));
    CHECK(c.dual_holds);
    CHECK(c.curve_count == c.mobius_count);
    CHECK(c.mass_holds);
    CHECK(c.cap_holds);
    CHECK(check_incidence_scan(*s7, A, c).empty());
  }
  CHECK_THROWS_AS(sl2_incidence_scan(*psl2(5), id, {0}, {0}, Rational(1)), InvalidArgument);
}

TEST_CASE("SL2 growth trichotomy") {
  auto s3 = sl2(3);
  auto whole = *s3->elements();
  auto g = sl2_growth_check(*s3, whole);
  CHECK(g.branch == "closure");
  CHECK(check_growth(*s3, whole, g).empty());

  auto s5 = sl2(5);
  auto B = borel(*s5, 5);
  REQUIRE(B.size() == 20);
  auto b = sl2_growth_check(*s5, B);
  CHECK(b.branch == "non-generation");
  CHECK(b.generated_size == 20);
  CHECK(check_growth(*s5, B, b).empty());

  auto st = els(*s5, {"[[0,4],[1,0]]", "[[1,1],[0,1]]"});
  auto c = sl2_growth_check(*s5, st);
  CHECK(c.generates);
  CHECK((c.branch == "closure" || c.branch == "growth"));
  CHECK(c.tripling_holds);
  CHECK(check_growth(*s5, st, c).empty());
  CHECK_THROWS_AS(sl2_growth_check(*sl2(11), ElementSet{sl2(11)->identity()}), InvalidArgument);
}

TEST_CASE("subgroup concentration") {
  auto s3 = sl2(3);
  auto whole = *s3->elements();
  auto c = subgroup_concentration_scan(*s3, whole);
  CHECK(c.best < whole.size());
  CHECK(check_concentration(*s3, whole, c).empty());

  auto s5 = sl2(5);
  auto B = borel(*s5, 5);
  auto g = s5->parse_element("[[0,4],[1,0]]");
  auto coset = product_set(*s5, ElementSet{g}, B);
  CHECK(subgroup_concentration_scan(*s5, coset).best == coset.size());

  auto rest = set_difference(*s5->elements(), coset);
  auto A = set_union(sample_subset(coset, 16, 71), sample_subset(rest, 4, 72));
  auto r = subgroup_concentration_scan(*s5, A);
  CHECK(r.best >= 16);
  CHECK(check_concentration(*s5, A, r).empty());
  CHECK_THROWS_AS(subgroup_concentration_scan(*s5, A, 50), ClosureTooLarge);
}

TEST_CASE("almost-free BSG then closure then growth lands in one branch") {
  auto s5 = sl2(5);
  auto B = borel(*s5, 5);
  std::vector<Point> nonzero;
  auto all = *s5->points();
  for (const auto& x : all)
    if (s5->format_point(x) != "[0,0]") nonzero.push_back(x);
  PointSet Y(nonzero);
  auto trace = bsg_almost_free(*s5, B, Y, Rational(1), 1, 5);
  CHECK(check_bsg(*s5, B, Y, {}, trace).empty());
  auto S = trace.structured;
  auto approx = approx_group_close(*s5, S);
  CHECK(check_approx_group(*s5, S, approx).empty());
  auto growth = sl2_growth_check(*s5, S);
  CHECK(growth.branch != "none");
  int branches = growth.closure_holds + (growth.generates && growth.growth_holds) + !growth.generates;
  CHECK(branches >= 1);
  CHECK(check_growth(*s5, S, growth).empty());
}
