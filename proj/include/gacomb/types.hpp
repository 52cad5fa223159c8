#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gacomb/rational.hpp"

namespace gacomb {

/// Canonical byte encoding of a group element or a point. Two values are
/// equal iff their encodings are byte-identical; the byte order is the
/// canonical iteration order everywhere in the library.
template <class Tag>
class Encoded {
 public:
  Encoded() = default;
  explicit Encoded(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const noexcept { return bytes_; }

  friend bool operator==(const Encoded&, const Encoded&) = default;
  friend std::strong_ordering operator<=>(const Encoded& a, const Encoded& b) {
    return a.bytes_.compare(b.bytes_) <=> 0;
  }

 private:
  std::string bytes_;
};

struct ElementTag {};
struct PointTag {};
using GroupElement = Encoded<ElementTag>;
using Point = Encoded<PointTag>;

/// Sorted, duplicate-free vector. Immutable once built.
template <class T>
class OrderedSet {
 public:
  using value_type = T;
  using const_iterator = typename std::vector<T>::const_iterator;

  OrderedSet() = default;
  OrderedSet(std::initializer_list<T> items) : OrderedSet(std::vector<T>(items)) {}
  explicit OrderedSet(std::vector<T> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
    items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
  }

  /// Rejects input that is not strictly increasing (used when parsing reports,
  /// where a reordered or duplicated member is a malformed certificate).
  static OrderedSet from_sorted_unique(std::vector<T> items) {
    for (std::size_t i = 1; i < items.size(); ++i) {
      if (!(items[i - 1] < items[i])) throw std::invalid_argument("set members not in canonical order or duplicated");
    }
    OrderedSet out;
    out.items_ = std::move(items);
    return out;
  }

  bool contains(const T& value) const { return std::binary_search(items_.begin(), items_.end(), value); }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const_iterator begin() const noexcept { return items_.begin(); }
  const_iterator end() const noexcept { return items_.end(); }
  const T& operator[](std::size_t i) const { return items_[i]; }
  const T& front() const { return items_.front(); }
  const std::vector<T>& items() const noexcept { return items_; }

  friend bool operator==(const OrderedSet&, const OrderedSet&) = default;

 private:
  std::vector<T> items_;
};

using ElementSet = OrderedSet<GroupElement>;
using PointSet = OrderedSet<Point>;

/// Relation E ⊆ A×Y (element/point) or E ⊆ A×B (element/element).
using ImageRelation = OrderedSet<std::pair<GroupElement, Point>>;
using ProductRelation = OrderedSet<std::pair<GroupElement, GroupElement>>;

template <class T>
OrderedSet<T> set_union(const OrderedSet<T>& a, const OrderedSet<T>& b) {
  std::vector<T> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return OrderedSet<T>::from_sorted_unique(std::move(out));
}

template <class T>
OrderedSet<T> set_intersection(const OrderedSet<T>& a, const OrderedSet<T>& b) {
  std::vector<T> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return OrderedSet<T>::from_sorted_unique(std::move(out));
}

template <class T>
OrderedSet<T> set_difference(const OrderedSet<T>& a, const OrderedSet<T>& b) {
  std::vector<T> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return OrderedSet<T>::from_sorted_unique(std::move(out));
}

template <class T>
bool is_subset(const OrderedSet<T>& a, const OrderedSet<T>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

template <class T>
std::size_t intersection_size(const OrderedSet<T>& a, const OrderedSet<T>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

/// Multiplicity function: key -> positive count. Absent keys have count 0.
template <class K>
class CountMap {
 public:
  void add(const K& key, std::uint64_t count = 1) {
    if (count == 0) return;
    auto& slot = entries_[key];
    slot = checked_add(slot, count);
  }
  std::uint64_t get(const K& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second;
  }
  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& [k, v] : entries_) sum = checked_add(sum, v);
    return sum;
  }
  std::uint64_t sum_of_squares() const {
    std::uint64_t sum = 0;
    for (const auto& [k, v] : entries_) sum = checked_add(sum, checked_mul(v, v));
    return sum;
  }
  std::uint64_t max() const {
    std::uint64_t m = 0;
    for (const auto& [k, v] : entries_) m = std::max(m, v);
    return m;
  }
  OrderedSet<K> keys() const {
    std::vector<K> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return OrderedSet<K>::from_sorted_unique(std::move(out));
  }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<K, std::uint64_t>& entries() const noexcept { return entries_; }

  friend bool operator==(const CountMap&, const CountMap&) = default;

 private:
  std::map<K, std::uint64_t> entries_;
};

}  // namespace gacomb

template <class Tag>
struct std::hash<gacomb::Encoded<Tag>> {
  std::size_t operator()(const gacomb::Encoded<Tag>& e) const noexcept {
    return std::hash<std::string>{}(e.bytes());
  }
};
