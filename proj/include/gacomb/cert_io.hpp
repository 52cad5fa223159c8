#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gacomb/action.hpp"
#include "gacomb/check.hpp"
#include "gacomb/error.hpp"
#include "gacomb/rational.hpp"
#include "gacomb/types.hpp"

// Field-by-field JSON serialization of certificate structs. A certificate
// exposes `template <class V> void visit(V& v)` calling v("name", field) for
// every field; the same member drives writing and strict reading.
namespace gacomb::certio {

using Json = nlohmann::ordered_json;

template <class T, class V>
concept Visitable = requires(T& t, V& v) { t.visit(v); };

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};
template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};
template <class T>
struct is_pair : std::false_type {};
template <class A, class B>
struct is_pair<std::pair<A, B>> : std::true_type {};
template <class T>
struct is_ordered_set : std::false_type {};
template <class T>
struct is_ordered_set<OrderedSet<T>> : std::true_type {};
template <class T>
struct is_count_map : std::false_type {};
template <class T>
struct is_count_map<CountMap<T>> : std::true_type {};

class Writer {
 public:
  explicit Writer(const GroupAction* action) : action_(action), out_(Json::object()) {}

  template <class T>
  void operator()(const char* key, const T& value) {
    out_[key] = encode(value);
  }

  Json take() { return std::move(out_); }

  template <class T>
  Json encode(const T& v) {
    if constexpr (std::is_same_v<T, bool>) {
      return v;
    } else if constexpr (std::is_integral_v<T>) {
      return v;
    } else if constexpr (std::is_same_v<T, std::string>) {
      return v;
    } else if constexpr (std::is_same_v<T, Rational>) {
      return format_rational(v);
    } else if constexpr (std::is_same_v<T, BigInt>) {
      return v.str();
    } else if constexpr (std::is_same_v<T, GroupElement>) {
      return need_action().format_element(v);
    } else if constexpr (std::is_same_v<T, Point>) {
      return need_action().format_point(v);
    } else if constexpr (is_optional<T>::value) {
      return v ? encode(*v) : Json(nullptr);
    } else if constexpr (is_pair<T>::value) {
      return Json::array({encode(v.first), encode(v.second)});
    } else if constexpr (is_vector<T>::value || is_ordered_set<T>::value) {
      Json arr = Json::array();
      for (const auto& item : v) arr.push_back(encode(item));
      return arr;
    } else if constexpr (is_count_map<T>::value) {
      Json arr = Json::array();
      for (const auto& [k, c] : v.entries()) arr.push_back(Json::array({encode(k), c}));
      return arr;
    } else {
      static_assert(Visitable<T, Writer>, "unsupported certificate field type");
      Writer nested(action_);
      const_cast<T&>(v).visit(nested);
      return nested.take();
    }
  }

 private:
  const GroupAction& need_action() const {
    if (!action_) throw std::logic_error("certificate writer needs an action to format elements");
    return *action_;
  }
  const GroupAction* action_;
  Json out_;
};

/// Strict reader: every visited key must be present with the right type,
/// no extra keys are allowed, sets must be in canonical order without
/// duplicates, and element/point strings must be in canonical text form.
class Reader {
 public:
  Reader(const GroupAction* action, const Json& in, std::string path = "")
      : action_(action), in_(in), path_(std::move(path)) {
    if (!in_.is_object()) fail(path_, "expected an object");
  }

  template <class T>
  void operator()(const char* key, T& value) {
    auto it = in_.find(key);
    if (it == in_.end()) fail(path_ + "." + key, "missing field");
    seen_.insert(key);
    decode(*it, value, path_ + "." + key);
  }

  void finish() const {
    for (auto it = in_.begin(); it != in_.end(); ++it)
      if (!seen_.count(it.key())) fail(path_ + "." + it.key(), "unexpected field");
  }

  template <class T>
  void decode(const Json& j, T& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) fail(path, "expected a boolean");
      v = j.get<bool>();
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
      v = j.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_integer()) fail(path, "expected an integer");
      v = j.get<T>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!j.is_string()) fail(path, "expected a string");
      v = j.get<std::string>();
    } else if constexpr (std::is_same_v<T, Rational>) {
      if (!j.is_string()) fail(path, "expected a rational string");
      try {
        v = parse_rational(j.get<std::string>());
      } catch (const std::exception& e) {
        fail(path, e.what());
      }
      if (format_rational(v) != j.get<std::string>()) fail(path, "rational not in canonical n/d form");
    } else if constexpr (std::is_same_v<T, BigInt>) {
      if (!j.is_string()) fail(path, "expected an integer string");
      try {
        v = BigInt(j.get<std::string>());
      } catch (const std::exception& e) {
        fail(path, e.what());
      }
      if (v.str() != j.get<std::string>()) fail(path, "integer not in canonical form");
    } else if constexpr (std::is_same_v<T, GroupElement>) {
      if (!j.is_string()) fail(path, "expected an element string");
      try {
        v = need_action().parse_element(j.get<std::string>());
      } catch (const std::exception& e) {
        fail(path, e.what());
      }
      if (need_action().format_element(v) != j.get<std::string>()) fail(path, "element not in canonical form");
    } else if constexpr (std::is_same_v<T, Point>) {
      if (!j.is_string()) fail(path, "expected a point string");
      try {
        v = need_action().parse_point(j.get<std::string>());
      } catch (const std::exception& e) {
        fail(path, e.what());
      }
      if (need_action().format_point(v) != j.get<std::string>()) fail(path, "point not in canonical form");
    } else if constexpr (is_optional<T>::value) {
      if (j.is_null()) {
        v.reset();
      } else {
        typename T::value_type inner{};
        decode(j, inner, path);
        v = std::move(inner);
      }
    } else if constexpr (is_pair<T>::value) {
      if (!j.is_array() || j.size() != 2) fail(path, "expected a pair");
      decode(j[0], v.first, path + "[0]");
      decode(j[1], v.second, path + "[1]");
    } else if constexpr (is_vector<T>::value) {
      if (!j.is_array()) fail(path, "expected an array");
      v.clear();
      for (std::size_t i = 0; i < j.size(); ++i) {
        typename T::value_type item{};
        decode(j[i], item, path + "[" + std::to_string(i) + "]");
        v.push_back(std::move(item));
      }
    } else if constexpr (is_ordered_set<T>::value) {
      if (!j.is_array()) fail(path, "expected an array");
      std::vector<typename T::value_type> items;
      for (std::size_t i = 0; i < j.size(); ++i) {
        typename T::value_type item{};
        decode(j[i], item, path + "[" + std::to_string(i) + "]");
        items.push_back(std::move(item));
      }
      try {
        v = T::from_sorted_unique(std::move(items));
      } catch (const std::exception& e) {
        fail(path, e.what());
      }
    } else if constexpr (is_count_map<T>::value) {
      if (!j.is_array()) fail(path, "expected an array of [key, count]");
      T out;
      std::optional<std::decay_t<decltype(out.entries().begin()->first)>> prev;
      for (std::size_t i = 0; i < j.size(); ++i) {
        auto p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected [key, count]");
        std::decay_t<decltype(out.entries().begin()->first)> key{};
        decode(j[i][0], key, p);
        std::uint64_t count = 0;
        decode(j[i][1], count, p);
        if (count == 0) fail(p, "zero count entry");
        if (prev && !(*prev < key)) fail(p, "keys not in canonical order or duplicated");
        prev = key;
        out.add(key, count);
      }
      v = std::move(out);
    } else {
      static_assert(Visitable<T, Reader>, "unsupported certificate field type");
      Reader nested(action_, j, path);
      v.visit(nested);
      nested.finish();
    }
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw InvalidArgument("malformed certificate at " + (path.empty() ? std::string("<root>") : path) + ": " + what);
  }

 private:
  const GroupAction& need_action() const {
    if (!action_) throw std::logic_error("certificate reader needs an action to parse elements");
    return *action_;
  }
  const GroupAction* action_;
  const Json& in_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
Json to_json(const GroupAction* action, const T& cert) {
  Writer w(action);
  return w.encode(cert);
}

template <class T>
T from_json(const GroupAction* action, const Json& j) {
  T out{};
  Reader r(action, j);
  out.visit(r);
  r.finish();
  return out;
}

/// Path of the first difference between two documents, if any.
inline std::optional<std::string> first_difference(const Json& a, const Json& b, const std::string& path = "") {
  const bool integers = a.is_number_integer() && b.is_number_integer();
  if (a.type() != b.type() && !integers) return path.empty() ? std::string("<root>") : path;
  if (a.is_object()) {
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      if (ia.key() != ib.key()) return path + "." + ia.key();
      if (auto d = first_difference(ia.value(), ib.value(), path + "." + ia.key())) return d;
    }
    if (ia != a.end() || ib != b.end()) return path + ".<keys>";
    return std::nullopt;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
      if (auto d = first_difference(a[i], b[i], path + "[" + std::to_string(i) + "]")) return d;
    if (a.size() != b.size()) return path + ".<length>";
    return std::nullopt;
  }
  if (a != b) return path.empty() ? std::string("<root>") : path;
  return std::nullopt;
}

/// Logs a failure when a recorded certificate differs from a fresh recomputation.
template <class T>
void require_recomputed(CheckLog& log, const std::string& statement, const GroupAction* action, const T& recorded,
                        const T& fresh) {
  auto d = first_difference(to_json(action, recorded), to_json(action, fresh));
  log.require(!d, statement, "recorded value differs from recomputation at " + d.value_or(""));
}

}  // namespace gacomb::certio
