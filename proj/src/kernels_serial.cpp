#include <algorithm>

#include "gacomb/kernels.hpp"

namespace gacomb::kernels::serial {

ImageTable image_table(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  ImageTable table;
  table.reserve(A.size() * Y.size());
  for (const auto& a : A)
    for (const auto& y : Y) table.push_back(action.act(a, y));
  return table;
}

std::vector<std::uint64_t> overlaps(const GroupAction& action, const ElementSet& candidates, const PointSet& Y) {
  std::vector<std::uint64_t> out(candidates.size(), 0);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::uint64_t n = 0;
    for (const auto& y : Y)
      if (Y.contains(action.act(candidates[i], y))) ++n;
    out[i] = n;
  }
  return out;
}

std::uint64_t pair_overlap_sum(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  const std::size_t m = Y.size();
  std::vector<PointSet> images;
  images.reserve(A.size());
  for (const auto& a : A) {
    std::vector<Point> row;
    row.reserve(m);
    for (const auto& y : Y) row.push_back(action.act(a, y));
    images.emplace_back(std::move(row));
  }
  std::uint64_t total = 0;
  for (const auto& s : images)
    for (const auto& t : images) total = checked_add(total, intersection_size(s, t));
  return total;
}

CountMap<GroupElement> quotient_counts(const GroupAction& action, const ElementSet& A) {
  CountMap<GroupElement> counts;
  for (const auto& a1 : A) {
    auto a1inv = action.inv(a1);
    for (const auto& a2 : A) counts.add(action.mul(a1inv, a2));
  }
  return counts;
}

ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B) {
  std::vector<GroupElement> out;
  out.reserve(A.size() * B.size());
  for (const auto& a : A)
    for (const auto& b : B) out.push_back(action.mul(a, b));
  return ElementSet(std::move(out));
}

std::vector<std::uint64_t> intersection_matrix(const std::vector<std::vector<std::uint32_t>>& family) {
  const std::size_t n = family.size();
  std::vector<std::uint64_t> out(n * n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<std::uint32_t> common;
      std::set_intersection(family[s].begin(), family[s].end(), family[t].begin(), family[t].end(),
                            std::back_inserter(common));
      out[s * n + t] = common.size();
    }
  }
  return out;
}

}  // namespace gacomb::kernels::serial
