#include "gacomb/core.hpp"

#include <deque>
#include <set>

#include "gacomb/error.hpp"
#include "gacomb/kernels.hpp"

namespace gacomb {

PointSet image_set(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  return PointSet(kernels::image_table(action, A, Y));
}

PointSet partial_image_set(const GroupAction& action, const ImageRelation& E) {
  std::vector<Point> out;
  out.reserve(E.size());
  for (const auto& [g, y] : E) out.push_back(action.act(g, y));
  return PointSet(std::move(out));
}

ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B) {
  return kernels::product_set(action, A, B);
}

ElementSet inverse_set(const GroupAction& action, const ElementSet& A) {
  std::vector<GroupElement> out;
  out.reserve(A.size());
  for (const auto& a : A) out.push_back(action.inv(a));
  return ElementSet(std::move(out));
}

ElementSet symmetrize(const GroupAction& action, const ElementSet& A) {
  auto out = set_union(A, inverse_set(action, A));
  return set_union(out, ElementSet{action.identity()});
}

ElementSet symmetrized_power(const GroupAction& action, const ElementSet& A, unsigned k) {
  if (k == 0) throw InvalidArgument("symmetrized_power: k must be at least 1");
  auto base = symmetrize(action, A);
  auto out = base;
  for (unsigned i = 1; i < k; ++i) out = product_set(action, out, base);
  return out;
}

ElementSet power_set(const GroupAction& action, const ElementSet& A, unsigned k) {
  if (k == 0) throw InvalidArgument("power_set: k must be at least 1");
  auto out = A;
  for (unsigned i = 1; i < k; ++i) out = product_set(action, out, A);
  return out;
}

ElementSet partial_product(const GroupAction& action, const ProductRelation& E) {
  std::vector<GroupElement> out;
  out.reserve(E.size());
  for (const auto& [a, b] : E) out.push_back(action.mul(a, b));
  return ElementSet(std::move(out));
}

ElementSet transporter_in(const GroupAction& action, const ElementSet& A, const Point& x, const Point& y) {
  std::vector<GroupElement> out;
  for (const auto& g : A)
    if (action.act(g, x) == y) out.push_back(g);
  return ElementSet::from_sorted_unique(std::move(out));
}

ElementSet stabilizer_in(const GroupAction& action, const ElementSet& A, const Point& x) {
  return transporter_in(action, A, x, x);
}

ElementSet set_stabilizer_in(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  std::vector<GroupElement> out;
  for (const auto& g : A) {
    bool keeps = true;
    for (const auto& y : Y) {
      if (!Y.contains(action.act(g, y))) {
        keeps = false;
        break;
      }
    }
    if (keeps) out.push_back(g);
  }
  return ElementSet::from_sorted_unique(std::move(out));
}

PointSet fixed_in(const GroupAction& action, const GroupElement& g, const PointSet& Y) {
  std::vector<Point> out;
  for (const auto& y : Y)
    if (action.act(g, y) == y) out.push_back(y);
  return PointSet::from_sorted_unique(std::move(out));
}

std::uint64_t overlap(const GroupAction& action, const GroupElement& g, const PointSet& Y) {
  std::uint64_t n = 0;
  for (const auto& y : Y)
    if (Y.contains(action.act(g, y))) ++n;
  return n;
}

CountMap<Point> count_partial_images(const GroupAction& action, const ImageRelation& E) {
  CountMap<Point> out;
  for (const auto& [g, y] : E) out.add(action.act(g, y));
  return out;
}

CountMap<Point> count_images(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  CountMap<Point> out;
  for (const auto& x : kernels::image_table(action, A, Y)) out.add(x);
  return out;
}

CountMap<GroupElement> count_quotients(const GroupAction& action, const ElementSet& A) {
  return kernels::quotient_counts(action, A);
}

CountMap<GroupElement> count_partial_products(const GroupAction& action, const ProductRelation& E) {
  CountMap<GroupElement> out;
  for (const auto& [a, b] : E) out.add(action.mul(a, b));
  return out;
}

ElementSet generated_subgroup(const GroupAction& action, const ElementSet& gens, std::size_t cap) {
  std::set<GroupElement> seen{action.identity()};
  std::vector<GroupElement> steps;
  for (const auto& g : gens) {
    steps.push_back(g);
    steps.push_back(action.inv(g));
  }
  std::deque<GroupElement> frontier{action.identity()};
  while (!frontier.empty()) {
    auto x = frontier.front();
    frontier.pop_front();
    for (const auto& s : steps) {
      auto y = action.mul(x, s);
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw ClosureTooLarge("closure too large: exceeds cap " + std::to_string(cap));
        frontier.push_back(y);
      }
    }
  }
  return ElementSet(std::vector<GroupElement>(seen.begin(), seen.end()));
}

std::vector<PointSet> orbits_on(const GroupAction& action, const ElementSet& H, const PointSet& Y) {
  std::vector<PointSet> out;
  std::set<Point> done;
  for (const auto& y : Y) {
    if (done.count(y)) continue;
    auto orbit = image_set(action, H, PointSet{y});
    for (const auto& x : orbit) done.insert(x);
    out.push_back(std::move(orbit));
  }
  return out;
}

ExactGrowthCheck check_exact_growth(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                    std::size_t subgroup_cap) {
  ExactGrowthCheck out;
  auto image = image_set(action, A, Y);
  out.applies = image.size() == Y.size();
  if (!out.applies) return out;
  auto quotients = product_set(action, inverse_set(action, A), A);
  out.quotients_stabilize = set_stabilizer_in(action, quotients, Y) == quotients;
  out.image_of_image = image_set(action, inverse_set(action, A), image) == Y;
  out.subgroup = generated_subgroup(action, quotients, subgroup_cap);
  out.orbits = orbits_on(action, out.subgroup, Y);
  std::size_t covered = 0;
  std::set<Point> seen;
  bool ok = true;
  for (const auto& orbit : out.orbits) {
    for (const auto& x : orbit) {
      if (!Y.contains(x) || !seen.insert(x).second) ok = false;
      ++covered;
    }
  }
  out.orbits_partition = ok && covered == Y.size();
  return out;
}

}  // namespace gacomb
