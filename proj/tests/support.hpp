#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "gacomb/actions.hpp"
#include "gacomb/core.hpp"
#include "gacomb/types.hpp"

namespace gacomb::test {

inline ActionPtr action(const nlohmann::json& descriptor) { return make_action(descriptor); }
inline ActionPtr cyclic(int n) { return make_action({{"kind", "cyclic"}, {"n", n}}); }
inline ActionPtr affine(int p) { return make_action({{"kind", "affine"}, {"p", p}}); }
inline ActionPtr psl2(int p) { return make_action({{"kind", "psl2"}, {"p", p}}); }
inline ActionPtr sl2(int p) { return make_action({{"kind", "sl2"}, {"p", p}}); }
inline ActionPtr perm(int n) { return make_action({{"kind", "permutation"}, {"n", n}}); }
inline ActionPtr integers() { return make_action({{"kind", "integer"}}); }

inline ElementSet els(const GroupAction& a, std::initializer_list<std::string> items) {
  std::vector<GroupElement> out;
  for (const auto& s : items) out.push_back(a.parse_element(s));
  return ElementSet(std::move(out));
}

inline PointSet pts(const GroupAction& a, std::initializer_list<std::string> items) {
  std::vector<Point> out;
  for (const auto& s : items) out.push_back(a.parse_point(s));
  return PointSet(std::move(out));
}

inline ElementSet int_els(const GroupAction& a, std::int64_t from, std::int64_t to) {
  std::vector<GroupElement> out;
  for (auto v = from; v <= to; ++v) out.push_back(*a.element_from_int(v));
  return ElementSet(std::move(out));
}

inline PointSet int_pts(const GroupAction& a, std::int64_t from, std::int64_t to) {
  std::vector<Point> out;
  for (auto v = from; v <= to; ++v) out.push_back(*a.point_from_int(v));
  return PointSet(std::move(out));
}

template <class T>
std::vector<std::string> names(const GroupAction& a, const OrderedSet<T>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) {
    if constexpr (std::is_same_v<T, GroupElement>) {
      out.push_back(a.format_element(x));
    } else {
      out.push_back(a.format_point(x));
    }
  }
  return out;
}

/// Small enumerable actions spanning every built-in family.
inline std::vector<ActionPtr> zoo() {
  return {
      cyclic(12),
      perm(4),
      affine(7),
      psl2(5),
      make_action({{"kind", "linear_fp"}, {"p", 3}, {"n", 2}, {"special", false}}),
      make_action({{"kind", "coset"}, {"ambient", {{"kind", "permutation"}, {"n", 4}}}, {"subgroup", {"[2,1,3,4]"}}}),
      make_action({{"kind", "diagonal"}, {"base", {{"kind", "affine"}, {"p", 5}}}, {"n", 2}, {"distinct", true}}),
  };
}

inline ElementSet random_elements(const GroupAction& a, std::size_t count, std::uint64_t seed) {
  auto all = *a.elements();
  return sample_subset(all, std::min(count, all.size()), seed);
}

inline PointSet random_points(const GroupAction& a, std::size_t count, std::uint64_t seed) {
  auto all = *a.points();
  return sample_subset(all, std::min(count, all.size()), seed);
}

// Brute-force oracles.

inline std::uint64_t oracle_overlap(const GroupAction& a, const GroupElement& g, const PointSet& Y) {
  std::uint64_t n = 0;
  for (const auto& y : Y) n += Y.contains(a.act(g, y));
  return n;
}

inline std::uint64_t oracle_energy(const GroupAction& a, const ElementSet& A, const PointSet& Y) {
  std::uint64_t n = 0;
  for (const auto& a1 : A)
    for (const auto& a2 : A)
      for (const auto& y1 : Y)
        for (const auto& y2 : Y) n += a.act(a1, y1) == a.act(a2, y2);
  return n;
}

inline std::vector<std::string> oracle_symmetry(const GroupAction& a, const PointSet& Y, std::uint64_t num,
                                                std::uint64_t den) {
  std::vector<std::string> out;
  auto G = *a.elements();
  for (const auto& g : G)
    if (oracle_overlap(a, g, Y) * den >= num * Y.size()) out.push_back(a.format_element(g));
  return out;
}

}  // namespace gacomb::test
