#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#define DOCTEST_CONFIG_DISABLE
#include "../mutation.hpp"
#include "../support.hpp"
#include "gacomb/bounds.hpp"
#include "gacomb/bsg.hpp"
#include "gacomb/covering.hpp"
#include "gacomb/statistics.hpp"

using namespace gacomb;
using namespace gacomb::test;
namespace sc = gacomb::scenario;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

bool verbose = false;

// Brute-force oracles over ordered containers, independent of the library kernels.

std::set<Point> brute_image(const GroupAction& a, const ElementSet& A, const PointSet& Y) {
  std::set<Point> out;
  for (const auto& g : A)
    for (const auto& y : Y) out.insert(a.act(g, y));
  return out;
}

std::set<GroupElement> brute_products(const GroupAction& a, const ElementSet& A, const ElementSet& B) {
  std::set<GroupElement> out;
  for (const auto& x : A)
    for (const auto& y : B) out.insert(a.mul(x, y));
  return out;
}

std::set<GroupElement> brute_quotients(const GroupAction& a, const ElementSet& A) {
  std::set<GroupElement> out;
  for (const auto& x : A)
    for (const auto& y : A) out.insert(a.mul(a.inv(x), y));
  return out;
}

std::uint64_t brute_incidences(const GroupAction& a, const ElementSet& A, const PointSet& Y) {
  std::uint64_t n = 0;
  for (const auto& y : Y)
    for (const auto& z : Y)
      for (const auto& g : A) n += a.act(g, y) == z;
  return n;
}

BigInt falling(std::uint64_t n, std::uint32_t k) {
  BigInt out = 1;
  for (std::uint32_t i = 0; i < k; ++i) out *= n >= i ? BigInt(n - i) : BigInt(0);
  return out;
}

ElementSet elements_of(std::vector<GroupElement> v) { return ElementSet(std::move(v)); }

// ---------------------------------------------------------------------------
// 1. Exact identities

struct Instance {
  std::string family;
  ActionPtr action;
  std::function<ElementSet(std::mt19937_64&)> elements;
  std::function<PointSet(std::mt19937_64&)> points;
};

std::vector<Instance> identity_families() {
  std::vector<Instance> out;
  auto enumerable = [&](const std::string& family, ActionPtr a, std::size_t max_a, std::size_t max_y) {
    out.push_back({family, a, [a, max_a](std::mt19937_64& rng) { return random_elements(*a, 1 + rng() % max_a, rng()); },
                   [a, max_y](std::mt19937_64& rng) { return random_points(*a, 1 + rng() % max_y, rng()); }});
  };
  enumerable("cyclic", cyclic(30), 10, 12);
  enumerable("permutation", perm(5), 10, 5);
  enumerable("affine", affine(13), 12, 10);
  enumerable("mobius", psl2(7), 12, 8);
  enumerable("linear", make_action({{"kind", "linear_fp"}, {"p", 3}, {"n", 2}, {"special", false}}), 12, 9);
  enumerable("linear", sl2(5), 12, 12);
  enumerable("coset", make_action({{"kind", "coset"},
                                   {"ambient", {{"kind", "permutation"}, {"n", 4}}},
                                   {"subgroup", {"[2,1,3,4]", "[1,2,4,3]"}}}),
             10, 6);
  enumerable("diagonal", make_action({{"kind", "diagonal"}, {"base", {{"kind", "affine"}, {"p", 5}}}, {"n", 2}, {"distinct", true}}),
             10, 12);
  enumerable("product", make_action({{"kind", "product"}, {"left", {{"kind", "cyclic"}, {"n", 4}}},
                                     {"right", {{"kind", "affine"}, {"p", 5}}}}),
             10, 12);
  enumerable("regular", make_action({{"kind", "regular"}, {"base", {{"kind", "sl2"}, {"p", 3}}}}), 10, 12);

  auto z = integers();
  out.push_back({"integer", z,
                 [z](std::mt19937_64& rng) {
                   std::vector<GroupElement> v;
                   for (int i = 0, n = 1 + rng() % 10; i < n; ++i) v.push_back(*z->element_from_int(int(rng() % 41) - 20));
                   return elements_of(v);
                 },
                 [z](std::mt19937_64& rng) {
                   std::vector<Point> v;
                   for (int i = 0, n = 1 + rng() % 12; i < n; ++i) v.push_back(*z->point_from_int(int(rng() % 41) - 20));
                   return PointSet(v);
                 }});
  auto q = make_action({{"kind", "linear_q"}, {"n", 2}});
  out.push_back({"linear-rational", q,
                 [q](std::mt19937_64& rng) {
                   std::vector<GroupElement> v;
                   for (int i = 0, n = 1 + rng() % 8; i < n;) {
                     int m[4];
                     for (auto& x : m) x = int(rng() % 5) - 2;
                     if (m[0] * m[3] - m[1] * m[2] == 0) continue;
                     v.push_back(q->parse_element("[[" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "],[" +
                                                  std::to_string(m[2]) + "," + std::to_string(m[3]) + "]]"));
                     ++i;
                   }
                   return elements_of(v);
                 },
                 [q](std::mt19937_64& rng) {
                   std::vector<Point> v;
                   for (int i = 0, n = 1 + rng() % 8; i < n; ++i)
                     v.push_back(q->parse_point("[" + std::to_string(int(rng() % 5) - 2) + "," +
                                                std::to_string(int(rng() % 5) - 2) + "]"));
                   return PointSet(v);
                 }});
  return out;
}

Outcome exact_identities() {
  auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  auto families = identity_families();
  std::set<std::string> covered;
  int instances = 0, mismatches = 0;
  Outcome out;
  for (int round = 0; round < 20; ++round) {
    for (const auto& f : families) {
      auto A = f.elements(rng);
      auto Y = f.points(rng);
      const auto& a = *f.action;
      std::uint64_t overlap_sum = 0;
      for (const auto& g : A) overlap_sum += oracle_overlap(a, g, Y);
      auto incidences = brute_incidences(a, A, Y);
      auto id = incidence_identity(a, A, Y);
      auto energy = action_energy(a, A, Y);
      auto oracle = oracle_energy(a, A, Y);
      bool ok = incidences == overlap_sum && id.incidences == incidences && id.overlap_sum == overlap_sum && id.holds &&
                energy.value == oracle && energy.by_pairs == oracle && energy.by_repr == oracle &&
                energy.by_fibers == oracle && check_action_energy(a, A, Y, energy).empty();
      ++instances;
      covered.insert(f.family);
      if (!ok) {
        ++mismatches;
        out.details.push_back(f.family + ": identity mismatch");
      }
    }
  }
  double t = seconds_since(start);
  out.pass = instances >= 200 && mismatches == 0 && t < 60;
  out.summary = std::to_string(instances) + " instances over " + std::to_string(covered.size()) + " action families, " +
                std::to_string(mismatches) + " mismatches, " + std::to_string(t).substr(0, 5) + " s";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Inequality suites

struct Suite {
  std::string name;
  int instances = 0;
  int violations = 0;
  int rejected = 0;
  int missed = 0;
  std::string note;
  double seconds = 0;

  void run(const std::function<bool()>& f) {
    ++instances;
    auto start = Clock::now();
    struct Timer {
      double& total;
      Clock::time_point start;
      ~Timer() { total += seconds_since(start); }
    } timer{seconds, start};
    try {
      if (!f()) {
        ++violations;
        if (note.empty()) note = "violation at instance " + std::to_string(instances);
      }
    } catch (const std::exception& e) {
      ++violations;
      if (note.empty()) note = std::string("unexpected error: ") + e.what();
    }
  }

  void expect_rejection(const std::function<void()>& f) {
    try {
      f();
      ++missed;
      if (note.empty()) note = "hypothesis failure was not rejected";
    } catch (const HypothesisNotMet&) {
      ++rejected;
    } catch (const InvalidArgument&) {
      ++rejected;
    }
  }

  bool pass() const { return instances >= 100 && violations == 0 && rejected >= 1 && missed == 0; }
};

std::vector<ActionPtr> inequality_zoo() {
  auto out = zoo();
  out.push_back(sl2(3));
  out.push_back(cyclic(30));
  return out;
}

Suite ruzsa_suite(std::mt19937_64& rng) {
  Suite s{"ruzsa triangle"};
  for (int trial = 0; trial < 12; ++trial) {
    for (const auto& a : inequality_zoo()) {
      auto A1 = random_elements(*a, 1 + rng() % 6, rng());
      auto A2 = random_elements(*a, 1 + rng() % 6, rng());
      auto Y = random_points(*a, 1 + rng() % 6, rng());
      s.run([&] {
        auto r = ruzsa_triangle(*a, A1, A2, Y);
        BigInt lhs = BigInt(A1.size()) * brute_image(*a, A2, Y).size();
        BigInt rhs = BigInt(brute_products(*a, A2, inverse_set(*a, A1)).size()) * brute_image(*a, A1, Y).size();
        return r.injective && r.holds && BigInt(r.lhs) == lhs && BigInt(r.rhs) == rhs && lhs <= rhs &&
               check_ruzsa_triangle(*a, A1, A2, Y, r).empty();
      });
    }
  }
  auto z = cyclic(5);
  s.expect_rejection([&] { ruzsa_triangle(*z, ElementSet{}, ElementSet{z->identity()}, int_pts(*z, 0, 1)); });
  return s;
}

Suite subgroup_growth_suite(std::mt19937_64& rng) {
  Suite s{"growth in a subgroup"};
  struct Case {
    ActionPtr a;
    ElementSet gens;
  };
  auto z = cyclic(12);
  auto s4 = perm(4);
  auto sl = sl2(3);
  std::vector<Case> cases{{z, els(*z, {"4"})}, {s4, els(*s4, {"[2,1,3,4]", "[1,2,4,3]"})},
                          {s4, els(*s4, {"[2,3,1,4]"})}, {sl, els(*sl, {"[[1,1],[0,1]]"})}};
  while (s.instances < 120) {
    for (const auto& c : cases) {
      auto H = generated_subgroup(*c.a, c.gens, 1000);
      auto A = random_elements(*c.a, 1 + rng() % 8, rng());
      auto B = set_union(random_elements(*c.a, rng() % 8, rng()), sample_subset(H, 1, rng()));
      s.run([&] {
        auto g = growth_in_subgroup(*c.a, c.gens, A, B);
        std::set<std::set<GroupElement>> cosets;
        for (const auto& x : A) {
          auto coset = brute_products(*c.a, ElementSet{x}, H);
          cosets.insert(coset);
        }
        BigInt lhs = BigInt(cosets.size()) * intersection_size(B, H);
        BigInt rhs = BigInt(brute_products(*c.a, A, B).size());
        return g.holds && BigInt(g.lhs) == lhs && BigInt(g.rhs) == rhs && lhs <= rhs &&
               check_growth_in_subgroup(*c.a, c.gens, A, B, g).empty();
      });
    }
  }
  s.expect_rejection([&] { growth_in_subgroup(*z, els(*z, {"4"}), els(*z, {"0", "1"}), els(*z, {"1"})); });
  return s;
}

Suite cover_image_suite(std::mt19937_64& rng) {
  Suite s{"covering by image"};
  for (int trial = 0; trial < 12; ++trial) {
    for (const auto& a : inequality_zoo()) {
      auto A = random_elements(*a, 1 + rng() % 6, rng());
      auto Y = random_points(*a, 1 + rng() % 10, rng());
      s.run([&] {
        auto c = cover_by_image(*a, A, Y);
        auto Q = brute_quotients(*a, A);
        bool covered = true;
        for (const auto& y : Y) {
          bool hit = false;
          for (const auto& z : c.centers)
            for (const auto& q : Q) hit = hit || a->act(q, z) == y;
          covered = covered && hit;
        }
        return covered && is_subset(c.centers, Y) && c.cover_holds && c.disjoint_holds && c.maximal_holds &&
               c.max_bound_holds && c.average_bound_holds && check_cover(*a, A, Y, c).empty();
      });
    }
  }
  auto z = cyclic(5);
  s.expect_rejection([&] { cover_by_image(*z, ElementSet{}, int_pts(*z, 0, 2)); });
  return s;
}

struct SymInstance {
  ActionPtr a;
  PointSet Y;
  Rational alpha;
  ElementSet B;
};

SymInstance symmetric_instance(const ActionPtr& a, std::mt19937_64& rng, std::size_t min_y, std::size_t max_y) {
  auto Y = random_points(*a, min_y + rng() % (max_y - min_y + 1), rng());
  static const Rational alphas[] = {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(3, 4)};
  Rational alpha = alphas[rng() % 5];
  auto sym = symmetry_set(*a, Y, alpha).members;
  auto B = sample_subset(sym, 1 + rng() % sym.size(), rng());
  return {a, Y, alpha, B};
}

Suite closure_suite(std::mt19937_64& rng) {
  Suite s{"approximate closure"};
  for (int trial = 0; trial < 12; ++trial) {
    for (const auto& a : inequality_zoo()) {
      auto in = symmetric_instance(a, rng, 2, 7);
      s.run([&] {
        auto c = approximate_closure(*a, in.B, in.Y, in.alpha);
        bool members = true;
        for (const auto& g : c.product)
          members = members && Rational(BigInt(2 * oracle_overlap(*a, g, in.Y))) >= in.alpha * in.alpha * in.Y.size();
        return members && c.size_holds && c.members_hold && c.symmetric && c.inverse_closed &&
               check_closure(*a, in.B, in.Y, c).empty();
      });
    }
  }
  auto z = cyclic(12);
  s.expect_rejection([&] { approximate_closure(*z, els(*z, {"0", "4"}), int_pts(*z, 0, 7), Rational(7, 8)); });
  return s;
}

Suite cover_symmetry_suite(std::mt19937_64& rng) {
  Suite s{"covering by symmetry"};
  for (int trial = 0; trial < 12; ++trial) {
    for (const auto& a : inequality_zoo()) {
      auto in = symmetric_instance(a, rng, 2, 9);
      s.run([&] {
        auto c = cover_symmetry(*a, in.B, in.Y, in.alpha);
        auto Q = brute_quotients(*a, in.B);
        bool covered = is_subset(c.covered, in.Y);
        for (const auto& y : c.covered) {
          bool hit = false;
          for (const auto& z : c.centers)
            for (const auto& q : Q) hit = hit || a->act(q, z) == y;
          covered = covered && hit;
        }
        return covered && c.cover_holds && c.disjoint_holds && c.max_bound_holds && c.average_bound_holds &&
               c.covered_holds.value_or(false) && check_cover(*a, in.B, in.Y, c).empty();
      });
    }
  }
  auto z = cyclic(12);
  s.expect_rejection([&] { cover_symmetry(*z, els(*z, {"0", "3"}), int_pts(*z, 0, 7), Rational(3, 4)); });
  return s;
}

Suite free_bound_suite(std::mt19937_64& rng) {
  Suite s{"symmetry bound (generic)"};
  for (int trial = 0; trial < 12; ++trial) {
    for (const auto& a : inequality_zoo()) {
      auto Y = random_points(*a, 1 + rng() % 8, rng());
      Rational alpha(1 + rng() % 4, 4);
      s.run([&] {
        auto b = sym_bound_free(*a, std::nullopt, Y, alpha);
        auto oracle = oracle_symmetry(*a, Y, static_cast<std::uint64_t>(numerator(alpha)),
                                      static_cast<std::uint64_t>(denominator(alpha)));
        return b.holds.value_or(false) && Rational(BigInt(oracle.size())) <= b.bound &&
               check_sym_bound(*a, std::nullopt, Y, std::nullopt, b).empty();
      });
    }
  }
  auto z = cyclic(6);
  s.expect_rejection([&] { sym_bound_free(*z, std::nullopt, int_pts(*z, 0, 3), Rational(0)); });
  return s;
}

void almost_free_suites(std::mt19937_64& rng, Suite& bound, Suite& inclusion) {
  struct Case {
    ActionPtr a;
    std::uint32_t n;
  };
  std::vector<Case> cases{{psl2(11), 3}, {psl2(13), 3}, {affine(11), 2}, {affine(13), 2}, {cyclic(20), 1}};
  static const Rational alphas[] = {Rational(1, 2), Rational(2, 3), Rational(3, 4)};
  while (bound.instances < 120) {
    for (const auto& c : cases) {
      const auto& a = *c.a;
      Rational alpha = alphas[rng() % 3];
      auto X = *a.points();
      // Smallest |Y| with |Y| > (1 + 1/alpha) n.
      auto threshold = floor_of((1 + 1 / alpha) * c.n) + 1;
      auto low = static_cast<std::size_t>(threshold);
      if (low > X.size()) continue;
      auto Y = sample_subset(X, low + rng() % (X.size() - low + 1), rng());
      auto sym = symmetry_set(a, Y, alpha).members;
      std::optional<SymBoundReport> r;
      bound.run([&] {
        r = sym_bound_almost_free(a, Y, alpha, c.n);
        const auto& d = *r->almost_free;
        return r->holds.value_or(false) && d.fix_holds && d.epsilon_holds && d.closed_form_holds &&
               r->measured == sym.size() && Rational(BigInt(sym.size())) <= r->bound &&
               check_sym_bound(a, std::nullopt, Y, std::nullopt, *r).empty();
      });
      inclusion.run([&] {
        if (!r) return false;
        const auto& d = *r->almost_free;
        bool members = true;
        for (const auto& g : sym)
          members = members && Rational(falling(oracle_overlap(a, g, Y), c.n)) >= d.tuple_alpha * falling(Y.size(), c.n);
        return members && d.inclusion_holds.value_or(false);
      });
    }
  }
  auto p7 = psl2(7);
  bound.expect_rejection([&] { sym_bound_almost_free(*p7, *p7->points(), Rational(7, 8), 2); });
  auto p5 = psl2(5);
  bound.expect_rejection([&] { sym_bound_almost_free(*p5, pts(*p5, {"0", "1", "2", "3", "4"}), Rational(3, 5), 3); });
  inclusion.expect_rejection([&] { sym_bound_almost_free(*p7, *p7->points(), Rational(7, 8), 2); });
}

void energy_bound_suites(std::mt19937_64& rng, Suite& upper, Suite& symmetric, Suite& image) {
  for (int trial = 0; trial < 12; ++trial) {
    for (const auto& a : inequality_zoo()) {
      auto A = random_elements(*a, 1 + rng() % 7, rng());
      auto Y = random_points(*a, 1 + rng() % 7, rng());
      std::vector<std::pair<GroupElement, Point>> rel;
      for (const auto& x : A)
        for (const auto& y : Y)
          if (rng() % 3) rel.emplace_back(x, y);
      std::optional<ImageRelation> E;
      if (!rel.empty()) E = ImageRelation(rel);
      Rational alpha(1 + rng() % 5, 5);
      std::optional<EnergyBoundsReport> b;
      bool checked = false;
      try {
        b = energy_bounds(*a, A, Y, alpha, E);
        checked = check_energy_bounds(*a, A, Y, E, *b).empty();
      } catch (const std::exception&) {
      }
      auto energy = oracle_energy(*a, A, Y);
      auto image_size = brute_image(*a, A, Y).size();
      upper.run([&] {
        return b && checked && b->energy == energy && b->upper_repr_holds && b->upper_max_holds &&
               b->upper_trivial_holds && energy <= A.size() * A.size() * Y.size();
      });
      symmetric.run([&] { return b && checked && b->sym_holds && b->lower_repr_holds; });
      image.run([&] {
        return b && checked && b->image_holds && b->relation_holds.value_or(true) && b->image_size == image_size &&
               BigInt(energy) * image_size >= BigInt(A.size() * A.size()) * (Y.size() * Y.size());
      });
    }
  }
  auto z = cyclic(4);
  auto bad = [&] { energy_bounds(*z, els(*z, {"0"}), pts(*z, {"0"}), Rational(3, 2)); };
  upper.expect_rejection(bad);
  symmetric.expect_rejection(bad);
  image.expect_rejection(bad);
}

Suite energy_conversion_suite(std::mt19937_64& rng) {
  Suite s{"energy to partial image and symmetry"};
  while (s.instances < 120) {
    for (const auto& a : inequality_zoo()) {
      auto A = random_elements(*a, 2 + rng() % 6, rng());
      auto Y = random_points(*a, 2 + rng() % 6, rng());
      auto e = oracle_energy(*a, A, Y);
      Rational alpha(static_cast<std::int64_t>(e), static_cast<std::int64_t>(2 * A.size() * A.size() * Y.size()));
      if (alpha > 1) continue;
      s.run([&] {
        auto p = energy_to_partial_image(*a, A, Y, alpha);
        auto q = energy_to_symmetry(*a, A, Y, alpha);
        return p.size_holds && p.image_holds && q.holds && p.energy == e &&
               check_partial_image_from_energy(*a, A, Y, p).empty() && check_symmetry_from_energy(*a, A, Y, q).empty();
      });
    }
  }
  auto z8 = cyclic(8);
  s.expect_rejection([&] { energy_to_partial_image(*z8, els(*z8, {"0", "1"}), int_pts(*z8, 0, 3), Rational(15, 32)); });
  s.expect_rejection([&] { energy_to_symmetry(*z8, els(*z8, {"0", "1"}), int_pts(*z8, 0, 3), Rational(15, 32)); });
  return s;
}

std::vector<int> coordinates(const std::string& text) {
  std::vector<int> out;
  std::string digits;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
      digits += ch;
    } else if (!digits.empty()) {
      out.push_back(std::stoi(digits));
      digits.clear();
    }
  }
  return out;
}

Suite linear_suite(std::mt19937_64& rng) {
  Suite s{"symmetry bound (linear)"};
  struct Case {
    ActionPtr a;
    int p;
    int n;
  };
  std::vector<Case> cases{{make_action({{"kind", "linear_fp"}, {"p", 5}, {"n", 2}, {"special", false}}), 5, 2},
                          {make_action({{"kind", "linear_fp"}, {"p", 3}, {"n", 2}, {"special", false}}), 3, 2},
                          {sl2(5), 5, 2},
                          {make_action({{"kind", "linear_fp"}, {"p", 11}, {"n", 1}, {"special", false}}), 11, 1}};
  while (s.instances < 120) {
    for (const auto& c : cases) {
      const auto& a = *c.a;
      std::vector<Point> nonzero;
      auto X = *a.points();
      for (const auto& x : X) {
        auto v = coordinates(a.format_point(x));
        if (std::any_of(v.begin(), v.end(), [](int t) { return t != 0; })) nonzero.push_back(x);
      }
      PointSet pool(nonzero);
      auto Y = sample_subset(pool, std::min<std::size_t>(pool.size(), 3 + rng() % 10), rng());
      std::size_t crowd = 0;
      if (c.n == 2) {
        for (const auto& y : Y) {
          auto u = coordinates(a.format_point(y));
          std::size_t line = 0;
          for (const auto& z : Y) {
            auto w = coordinates(a.format_point(z));
            line += ((u[0] * w[1] - u[1] * w[0]) % c.p + c.p) % c.p == 0;
          }
          crowd = std::max(crowd, line);
        }
      }
      Rational rho(static_cast<std::int64_t>(std::max<std::size_t>(crowd, 2)), static_cast<std::int64_t>(Y.size()));
      if (rho >= 1) continue;
      Rational alpha = rho + (1 - rho) * Rational(1 + rng() % 4, 4);
      s.run([&] {
        auto r = sym_bound_linear(a, Y, alpha, rho);
        auto oracle = oracle_symmetry(a, Y, static_cast<std::uint64_t>(numerator(alpha)),
                                      static_cast<std::uint64_t>(denominator(alpha)));
        return r.holds.value_or(false) && r.linear->concentration_holds && r.linear->lemma_holds.value_or(true) &&
               r.measured == oracle.size() && Rational(BigInt(oracle.size())) <= r.bound &&
               check_sym_bound(a, std::nullopt, Y, std::nullopt, r).empty();
      });
    }
  }
  const auto& gl = *cases[0].a;
  auto crowded = pts(gl, {"[1,0]", "[2,0]", "[3,0]", "[4,0]", "[0,1]", "[1,1]", "[1,2]", "[1,3]"});
  s.expect_rejection([&] { sym_bound_linear(gl, crowded, Rational(1, 2), Rational(1, 4)); });
  s.expect_rejection([&] { sym_bound_linear(gl, crowded, Rational(1, 4), Rational(1, 2)); });
  return s;
}

Suite popularity_suite(std::mt19937_64& rng) {
  Suite s{"popularity principle"};
  for (int trial = 0; trial < 150; ++trial) {
    CountMap<int> h;
    int n = 1 + rng() % 15;
    for (int i = 0; i < n; ++i) h.add(i, 1 + rng() % 30);
    Rational lambda(1 + rng() % 9, 10);
    s.run([&] {
      auto p = popular_subset(h, lambda);
      std::uint64_t mass = 0;
      for (const auto& [k, v] : h.entries())
        if (Rational(BigInt(v) * n) >= lambda * BigInt(h.total())) mass += v;
      return p.holds && p.mass == mass && Rational(BigInt(mass)) >= (1 - lambda) * BigInt(h.total());
    });
  }
  CountMap<int> flat;
  flat.add(0, 3);
  s.expect_rejection([&] { popular_subset(flat, Rational(1)); });
  return s;
}

Suite intersection_suite(std::mt19937_64& rng) {
  Suite s{"Cauchy-Schwarz intersections"};
  while (s.instances < 120) {
    std::uint32_t n = 4 + rng() % 20;
    std::vector<std::vector<std::uint32_t>> fam(2 + rng() % 12);
    std::uint64_t total = 0;
    for (auto& t : fam) {
      for (std::uint32_t i = 0; i < n; ++i)
        if (rng() % 3) t.push_back(i);
      total += t.size();
    }
    if (total == 0) continue;
    Rational delta(static_cast<std::int64_t>(total), static_cast<std::int64_t>(fam.size() * n));
    s.run([&] {
      auto c = cs_intersection_pairs(fam, n, delta);
      bool pairs = true;
      for (auto [x, y] : c.pairs) {
        std::vector<std::uint32_t> both;
        std::set_intersection(fam[x].begin(), fam[x].end(), fam[y].begin(), fam[y].end(), std::back_inserter(both));
        pairs = pairs && Rational(2 * static_cast<std::int64_t>(both.size())) >= delta * delta * n;
      }
      return pairs && c.cauchy_schwarz_holds && c.count_holds &&
             Rational(2 * static_cast<std::int64_t>(c.pairs.size())) >= delta * delta * (fam.size() * fam.size()) &&
             check_intersection_pairs(fam, c).empty();
    });
  }
  std::vector<std::uint32_t> low{0, 1, 2, 3}, high{4, 5, 6, 7};
  s.expect_rejection([&] { cs_intersection_pairs({low, low, high, high}, 8, Rational(3, 4)); });
  return s;
}

void uniform_closure_suites(std::mt19937_64& rng, Suite& uniform, Suite& back) {
  std::vector<ActionPtr> actions{affine(11), psl2(5), cyclic(40), perm(4), sl2(3)};
  while (uniform.instances < 120) {
    for (const auto& a : actions) {
      auto in = symmetric_instance(a, rng, 3, 7);
      std::optional<ClosureCertificate> c;
      uniform.run([&] {
        c = uniform_approximate_closure(*a, in.B, in.Y, in.alpha);
        return c->size_holds && c->members_hold && c->uniform_holds.value_or(false) &&
               check_closure(*a, in.B, in.Y, *c).empty();
      });
      back.run([&] {
        if (!c) return false;
        auto S = sample_subset(c->product, 1 + rng() % c->product.size(), rng());
        auto t = bring_structure_back(*a, in.B, *c, S);
        std::uint64_t best = 0;
        for (const auto& x : in.B)
          best = std::max<std::uint64_t>(best, intersection_size(in.B, product_set(*a, ElementSet{x}, S)));
        return t.count_holds && t.mass_holds && t.exact_holds && t.dyadic_holds && t.hits == best &&
               check_structure_transfer(*a, in.B, *c, S, t).empty();
      });
    }
  }
  auto z = cyclic(12);
  uniform.expect_rejection(
      [&] { uniform_approximate_closure(*z, els(*z, {"0", "4"}), int_pts(*z, 0, 7), Rational(7, 8)); });
  auto z101 = cyclic(101);
  auto A = int_els(*z101, 0, 9);
  auto Y = int_pts(*z101, 0, 19);
  auto plain = approximate_closure(*z101, A, Y, Rational(11, 20));
  back.expect_rejection([&] { bring_structure_back(*z101, A, plain, int_els(*z101, 0, 3)); });
}

Suite tripling_relation_suite(std::mt19937_64& rng) {
  Suite s{"SL2 tripling relation"};
  std::vector<ActionPtr> groups{sl2(3), sl2(5), sl2(7)};
  for (int trial = 0; trial < 40; ++trial) {
    for (const auto& g : groups) {
      auto A = random_elements(*g, 1 + rng() % 12, rng());
      s.run([&] {
        auto r = sl2_growth_check(*g, A);
        auto square = brute_products(*g, A, A);
        auto cube = brute_products(*g, elements_of(std::vector<GroupElement>(square.begin(), square.end())), A);
        auto sym = set_union(set_union(A, inverse_set(*g, A)), ElementSet{g->identity()});
        auto sym2 = brute_products(*g, sym, sym);
        auto sym3 = brute_products(*g, elements_of(std::vector<GroupElement>(sym2.begin(), sym2.end())), sym);
        BigInt lhs = BigInt(27) * BigInt(cube.size()) * cube.size() * cube.size();
        BigInt rhs = BigInt(sym3.size()) * A.size() * A.size();
        return r.tripling_holds && r.cube_size == cube.size() && r.sym_cube_size == sym3.size() && lhs >= rhs &&
               check_growth(*g, A, r).empty();
      });
    }
  }
  s.expect_rejection([&] { sl2_growth_check(*sl2(11), ElementSet{sl2(11)->identity()}); });
  s.expect_rejection([&] { sl2_growth_check(*psl2(5), ElementSet{psl2(5)->identity()}); });
  return s;
}

Suite affine_incidence_suite(std::mt19937_64& rng) {
  Suite s{"affine incidence bound"};
  std::vector<ActionPtr> groups{affine(11), affine(13), affine(17)};
  while (s.instances < 120) {
    for (const auto& a : groups) {
      auto Y = random_points(*a, 3 + rng() % 6, rng());
      auto k = 3 + rng() % (Y.size() - 2);
      Rational alpha(static_cast<std::int64_t>(k), static_cast<std::int64_t>(Y.size()));
      s.run([&] {
        auto r = affine_incidence_sym_bound(*a, Y, alpha);
        auto oracle = oracle_symmetry(*a, Y, static_cast<std::uint64_t>(numerator(alpha)),
                                      static_cast<std::uint64_t>(denominator(alpha)));
        return r.holds.value_or(false) && r.affine->rich_holds.value_or(false) &&
               r.affine->incidence_holds.value_or(false) && Rational(BigInt(oracle.size())) <= r.bound &&
               check_sym_bound(*a, std::nullopt, Y, std::nullopt, r).empty();
      });
    }
  }
  auto a = affine(11);
  s.expect_rejection([&] { affine_incidence_sym_bound(*a, int_pts(*a, 1, 6), Rational(1, 3)); });
  return s;
}

Outcome inequality_suites() {
  auto start = Clock::now();
  std::mt19937_64 rng(20240202);
  std::vector<Suite> suites;
  suites.push_back(ruzsa_suite(rng));
  suites.push_back(subgroup_growth_suite(rng));
  suites.push_back(cover_image_suite(rng));
  suites.push_back(closure_suite(rng));
  suites.push_back(cover_symmetry_suite(rng));
  suites.push_back(free_bound_suite(rng));
  Suite almost{"symmetry bound (almost free)"}, inclusion{"distinct-tuple inclusion"};
  almost_free_suites(rng, almost, inclusion);
  suites.push_back(almost);
  suites.push_back(inclusion);
  Suite upper{"energy upper bounds"}, sym{"energy from symmetry"}, image{"energy from small image"};
  energy_bound_suites(rng, upper, sym, image);
  suites.push_back(upper);
  suites.push_back(sym);
  suites.push_back(image);
  suites.push_back(energy_conversion_suite(rng));
  suites.push_back(linear_suite(rng));
  suites.push_back(popularity_suite(rng));
  suites.push_back(intersection_suite(rng));
  Suite uniform{"uniform approximate closure"}, back{"bringing structure back"};
  uniform_closure_suites(rng, uniform, back);
  suites.push_back(uniform);
  suites.push_back(back);
  suites.push_back(tripling_relation_suite(rng));
  suites.push_back(affine_incidence_suite(rng));

  Outcome out;
  out.pass = true;
  int instances = 0, violations = 0, rejected = 0;
  for (const auto& s : suites) {
    instances += s.instances;
    violations += s.violations;
    rejected += s.rejected;
    std::ostringstream line;
    line << (s.pass() ? "ok   " : "FAIL ") << s.name << ": " << s.instances << " instances, " << s.violations
         << " violations, " << s.rejected << " rejected, " << s.missed << " missed, "
         << std::to_string(s.seconds).substr(0, 5) << " s";
    if (!s.note.empty()) line << " (" << s.note << ")";
    if (!s.pass()) out.pass = false;
    if (!s.pass() || verbose) out.details.push_back(line.str());
  }
  out.summary = std::to_string(suites.size()) + " suites, " + std::to_string(instances) + " instances, " +
                std::to_string(violations) + " violations, " + std::to_string(rejected) + " rejections, " +
                std::to_string(seconds_since(start)).substr(0, 5) + " s";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Exact growth

Outcome exact_growth() {
  std::mt19937_64 rng(20240303);
  auto actions = zoo();
  actions.push_back(sl2(3));
  actions.push_back(cyclic(60));
  int instances = 0, failures = 0;
  Outcome out;
  while (instances < 50) {
    for (const auto& a : actions) {
      auto G = *a->elements();
      auto gens = sample_subset(G, 1 + rng() % 2, rng());
      auto H = generated_subgroup(*a, gens, 10000);
      if (H.size() == G.size() && rng() % 2) continue;
      auto seeds = random_points(*a, 1 + rng() % 3, rng());
      auto Y = image_set(*a, H, seeds);
      auto a0 = sample_subset(G, 1, rng())[0];
      auto A = product_set(*a, ElementSet{a0}, sample_subset(H, 1 + rng() % H.size(), rng()));
      if (brute_image(*a, A, Y).size() != Y.size()) {
        ++failures;
        out.details.push_back(a->kind() + ": constructed instance does not have |A(Y)| = |Y|");
        continue;
      }
      ++instances;
      auto c = check_exact_growth(*a, A, Y);
      bool ok = c.applies && c.quotients_stabilize && c.image_of_image && c.orbits_partition;
      auto quotients = brute_quotients(*a, A);
      for (const auto& q : quotients) ok = ok && brute_image(*a, ElementSet{q}, Y) == std::set<Point>(Y.begin(), Y.end());
      std::set<Point> seen;
      std::size_t total = 0;
      for (const auto& orbit : c.orbits) {
        total += orbit.size();
        seen.insert(orbit.begin(), orbit.end());
        ok = ok && brute_image(*a, c.subgroup, orbit) == std::set<Point>(orbit.begin(), orbit.end());
      }
      ok = ok && total == Y.size() && seen == std::set<Point>(Y.begin(), Y.end());
      ok = ok && is_subset(elements_of(std::vector<GroupElement>(quotients.begin(), quotients.end())), c.subgroup);
      if (!ok) {
        ++failures;
        out.details.push_back(a->kind() + ": exact-growth certificate failed");
      }
      if (instances >= 50) break;
    }
  }
  out.pass = failures == 0 && instances >= 50;
  out.summary = std::to_string(instances) + " instances, " + std::to_string(failures) + " failures";
  return out;
}

// ---------------------------------------------------------------------------
// 4. BSG pipeline on a stabilizing subgroup

Outcome pipeline_subgroup() {
  Outcome out;
  int runs = 0, failures = 0;
  auto attempt = [&](const ActionPtr& a, const ElementSet& gens, std::initializer_list<std::string> seeds) {
    auto H = generated_subgroup(*a, gens, 1000);
    std::vector<Point> s;
    for (const auto& t : seeds) s.push_back(a->parse_point(t));
    auto Y = image_set(*a, H, PointSet(s));
    auto orbits = orbits_on(*a, H, Y);
    for (std::uint32_t J : {1u, 2u, 3u}) {
      ++runs;
      bool ok = false;
      try {
        auto t = bsg_pipeline(*a, H, Y, Rational(1), J);
        ok = t.structured_tripling == Rational(1) && t.cover.has_value() && t.cover->cover.covered == Y &&
             t.cover->cover.centers.size() == orbits.size() && check_bsg(*a, H, Y, {}, t).empty();
      } catch (const std::exception& e) {
        out.details.push_back(a->kind() + ": " + e.what());
      }
      if (!ok) {
        ++failures;
        out.details.push_back(a->kind() + " J=" + std::to_string(J) + ": tripling or cover mismatch");
      }
    }
  };
  auto z = cyclic(60);
  attempt(z, els(*z, {"12"}), {"0", "1", "7"});
  attempt(z, els(*z, {"15"}), {"2", "3"});
  attempt(z, els(*z, {"10"}), {"0", "1", "2", "3", "4"});
  auto aff = affine(11);
  attempt(aff, els(*aff, {"(3,0)"}), {"0", "1"});
  attempt(aff, els(*aff, {"(3,0)"}), {"0", "1", "2"});
  attempt(aff, els(*aff, {"(10,0)"}), {"1", "2", "3"});
  attempt(aff, els(*aff, {"(1,1)"}), {"0"});
  out.pass = failures == 0;
  out.summary = std::to_string(runs) + " pipeline runs over Z/60 and Aff(1,F_11), " + std::to_string(failures) + " failures";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Perturbed-coset recovery

fs::path scenario_dir() { return fs::path(GACOMB_SOURCE_DIR) / "scenarios"; }

const sc::Json* find_result(const sc::Json& report, const std::string& id) {
  for (const auto& r : report.at("results"))
    if (r.at("id") == id) return &r;
  return nullptr;
}

Outcome perturbed_recovery() {
  Outcome out;
  auto start = Clock::now();
  auto ctx = sc::load(sc::read_json_file(scenario_dir() / "affine-bsg-demo.json"));
  auto result = sc::run(ctx);
  double t = seconds_since(start);
  auto v = sc::verify(ctx, result.report);
  auto golden = sc::read_json_file(scenario_dir() / "golden" / "affine-bsg-demo.report.json");
  const auto* fresh = find_result(result.report, "trace");
  const auto* recorded = find_result(golden, "trace");
  if (!fresh || !recorded) {
    out.summary = "trace entry missing";
    return out;
  }
  auto measured = parse_rational(fresh->at("certificate").at("structured_tripling").get<std::string>());
  auto reference = parse_rational(recorded->at("certificate").at("structured_tripling").get<std::string>());
  bool verified = fresh->at("status") == "verified";
  out.pass = result.ok && v.ok && verified && t < 120 && measured <= 2 * reference;
  out.details = v.failures;
  out.summary = "tripling " + format_rational(measured) + " vs golden " + format_rational(reference) +
                " (threshold x2), re-verify " + (v.ok ? "ok" : "failed") + ", " + std::to_string(t).substr(0, 5) + " s";
  return out;
}

// ---------------------------------------------------------------------------
// 6. SL2 growth trichotomy

Outcome sl2_trichotomy() {
  Outcome out;
  auto start = Clock::now();
  std::ostringstream summary;
  bool ok = true;
  for (int p : {3, 5}) {
    auto g = sl2(p);
    auto census = sl2_pair_census(*g);
    bool census_ok = census.none == 0 && census.closure + census.growth + census.non_generating == census.classes &&
                     census.subgroup_orders.total() == census.non_generating;
    auto G = *g->elements();
    std::uint64_t generating = 0, other = 0, bad = 0;
    for (std::size_t i = 0; i < G.size(); ++i) {
      for (std::size_t j = i + 1; j < G.size(); ++j) {
        ElementSet A{G[i], G[j]};
        auto r = sl2_growth_check(*g, A);
        auto H = generated_subgroup(*g, A, G.size());
        bool good;
        if (H.size() == G.size()) {
          ++generating;
          good = r.generates && (r.branch == "closure" || r.branch == "growth");
        } else {
          ++other;
          good = !r.generates && r.branch == "non-generation" && r.generated_size == H.size();
        }
        if (!good || !check_growth(*g, A, r).empty()) ++bad;
      }
    }
    ok = ok && census_ok && bad == 0;
    if (!census_ok) out.details.push_back("p=" + std::to_string(p) + ": census classification incomplete");
    if (bad) out.details.push_back("p=" + std::to_string(p) + ": " + std::to_string(bad) + " misclassified pairs");
    summary << "p=" << p << ": " << census.classes << " classes (" << census.closure << " closure, " << census.growth
            << " growth, " << census.non_generating << " non-generating), " << generating << "+" << other
            << " pairs rechecked; ";
  }
  double t = seconds_since(start);
  out.pass = ok && t < 600;
  summary << std::to_string(t).substr(0, 5) << " s";
  out.summary = summary.str();
  return out;
}

// ---------------------------------------------------------------------------
// 7. Sharpness of the covering bound

Outcome covering_sharpness() {
  Outcome out;
  nlohmann::json left = {{"kind", "coset"},
                         {"ambient", {{"kind", "permutation"}, {"n", 3}}},
                         {"subgroup", {"[2,1,3]", "[2,3,1]"}}};
  auto g1 = make_action(left);
  auto g2 = cyclic(12);
  auto a = make_action({{"kind", "product"}, {"left", left}, {"right", {{"kind", "cyclic"}, {"n", 12}}}});
  auto G = *a->elements();
  std::vector<GroupElement> A;
  for (const auto& g : G) {
    auto text = a->format_element(g);
    auto tail = text.substr(text.rfind(';') + 1);
    tail.pop_back();
    if (tail == "0" || tail == "1" || tail == "2") A.push_back(g);
  }
  auto Y = *a->points();
  auto c = cover_by_image(*a, ElementSet(A), Y);
  auto checked = check_cover(*a, ElementSet(A), Y, c);
  out.details = checked;
  out.pass = g1->elements()->size() == 6 && g2->elements()->size() == 12 && checked.empty() &&
             Rational(BigInt(c.centers.size())) == c.max_bound;
  out.summary = "|G1| = " + std::to_string(g1->elements()->size()) + ", |G2| = " +
                std::to_string(g2->elements()->size()) + ", |Z| = " + std::to_string(c.centers.size()) +
                ", max-stabilizer bound = " + format_rational(c.max_bound);
  return out;
}

// ---------------------------------------------------------------------------
// 8. Determinism and certificate integrity

Outcome determinism_and_integrity() {
  Outcome out;
  auto start = Clock::now();
  struct Shipped {
    std::string name;
    sc::Json config;
    sc::Json report;
  };
  std::vector<Shipped> shipped;
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(scenario_dir())) {
    if (entry.path().extension() != ".json") continue;
    auto config = sc::read_json_file(entry.path());
    auto first = sc::run(sc::load(config)).report;
    auto second = sc::run(sc::load(config)).report;
    if (first.dump(2) != second.dump(2)) {
      identical = false;
      out.details.push_back(entry.path().filename().string() + ": reruns differ");
    }
    auto golden_path = sc::report_path(config, scenario_dir() / "golden");
    if (!fs::exists(golden_path) || sc::read_json_file(golden_path) != first) {
      identical = false;
      out.details.push_back(entry.path().filename().string() + ": differs from the golden report");
    }
    shipped.push_back({entry.path().stem().string(), config, first});
  }
  std::sort(shipped.begin(), shipped.end(), [](const auto& x, const auto& y) { return x.name < y.name; });

  // Mutations are verified against a one-operation scenario holding just the
  // mutated entry, so each verification re-checks and recomputes one certificate.
  struct Single {
    sc::Context ctx;
    sc::Json report;
  };
  std::map<std::pair<std::size_t, std::size_t>, Single> singles;
  auto single = [&](std::size_t s, std::size_t op) -> Single& {
    auto key = std::make_pair(s, op);
    auto it = singles.find(key);
    if (it != singles.end()) return it->second;
    auto config = shipped[s].config;
    config["operations"] = sc::Json::array({shipped[s].config["operations"][op]});
    auto report = shipped[s].report;
    report["scenario"] = config;
    report["results"] = sc::Json::array({shipped[s].report["results"][op]});
    return singles.emplace(key, Single{sc::load(config), report}).first->second;
  };

  std::mt19937_64 rng(20240808);
  int mutations = 0, rejected = 0, baseline_failures = 0;
  for (std::size_t s = 0; s < shipped.size(); ++s)
    for (std::size_t op = 0; op < shipped[s].report["results"].size(); ++op)
      if (!sc::verify(single(s, op).ctx, single(s, op).report).ok) ++baseline_failures;
  while (mutations < 1000) {
    auto s = rng() % shipped.size();
    auto op = rng() % shipped[s].report["results"].size();
    auto& one = single(s, op);
    if (certificate_targets(one.report).empty()) continue;
    auto mutated = mutate_certificate(one.report, rng);
    if (mutated == one.report) continue;
    ++mutations;
    if (!sc::verify(one.ctx, mutated).ok) {
      ++rejected;
    } else if (out.details.size() < 10) {
      out.details.push_back(shipped[s].name + ": accepted mutation " + sc::Json::diff(one.report, mutated).dump());
    }
  }
  if (baseline_failures) out.details.push_back(std::to_string(baseline_failures) + " unmutated entries failed to verify");
  out.pass = identical && baseline_failures == 0 && rejected == mutations;
  out.summary = std::to_string(shipped.size()) + " scenarios rerun " + (identical ? "byte-identical" : "with differences") +
                ", " + std::to_string(rejected) + "/" + std::to_string(mutations) + " mutations rejected, " +
                std::to_string(seconds_since(start)).substr(0, 5) + " s";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "-v" || arg == "--verbose") {
      verbose = true;
    } else {
      only.insert(std::stoi(arg));
    }
  }
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "exact identities", exact_identities},
      {2, "inequality suites", inequality_suites},
      {3, "exact growth", exact_growth},
      {4, "BSG pipeline on a stabilizing subgroup", pipeline_subgroup},
      {5, "BSG pipeline on a perturbed coset", perturbed_recovery},
      {6, "SL2 growth trichotomy", sl2_trichotomy},
      {7, "covering sharpness", covering_sharpness},
      {8, "determinism and certificate integrity", determinism_and_integrity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
