#include <random>

#include "gacomb/actions.hpp"
#include "gacomb/core.hpp"
#include "gacomb/error.hpp"

namespace gacomb {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InvalidArgument(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::int64_t int_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) throw InvalidArgument(std::string("field '") + name + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) throw InvalidArgument(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t seed_field(const json& j) {
  const auto& v = field(j, "seed");
  if (!v.is_number_integer()) throw InvalidArgument("field 'seed' must be an integer");
  return v.is_number_unsigned() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(v.get<std::int64_t>());
}

std::size_t length_field(const json& j, const char* name) {
  auto v = int_field(j, name);
  if (v < 0) throw InvalidArgument(std::string("field '") + name + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

// Integer sequences for the interval/progression generators.
std::vector<std::int64_t> integer_sequence(const json& spec, std::optional<std::int64_t> modulus) {
  const auto kind = string_field(spec, "kind");
  const auto length = length_field(spec, "length");
  const auto start = int_field(spec, "start");
  std::vector<std::int64_t> out;
  out.reserve(length);
  if (kind == "interval" || kind == "arithmetic_progression") {
    const std::int64_t step = kind == "interval" ? 1 : int_field(spec, "step");
    for (std::size_t i = 0; i < length; ++i) {
      std::int64_t v;
      if (__builtin_mul_overflow(static_cast<std::int64_t>(i), step, &v) || __builtin_add_overflow(v, start, &v))
        throw InvalidArgument("progression overflows 64-bit integers");
      out.push_back(modulus ? mod_norm(v, *modulus) : v);
    }
    return out;
  }
  const auto ratio = int_field(spec, "ratio");
  if (modulus) {
    if (mod_norm(ratio, *modulus) == 0 || mod_norm(start, *modulus) == 0)
      throw InvalidArgument("geometric_progression: start and ratio must be units mod " + std::to_string(*modulus));
    std::int64_t v = mod_norm(start, *modulus);
    for (std::size_t i = 0; i < length; ++i) {
      out.push_back(v);
      v = mod_mul(v, mod_norm(ratio, *modulus), *modulus);
    }
    return out;
  }
  std::int64_t v = start;
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(v);
    if (i + 1 < length && __builtin_mul_overflow(v, ratio, &v))
      throw InvalidArgument("geometric_progression overflows 64-bit integers");
  }
  return out;
}

bool is_integer_kind(const std::string& kind) {
  return kind == "interval" || kind == "arithmetic_progression" || kind == "geometric_progression";
}

}  // namespace

ActionPtr make_action(const json& d) {
  const auto kind = string_field(d, "kind");
  if (kind == "cyclic") return std::make_shared<CyclicAction>(int_field(d, "n"));
  if (kind == "integer") return std::make_shared<IntegerAction>();
  if (kind == "table") {
    const auto& t = field(d, "table");
    if (!t.is_array()) throw InvalidArgument("table: 'table' must be an array of rows");
    return std::make_shared<TableAction>(t.get<std::vector<std::vector<std::int64_t>>>());
  }
  if (kind == "permutation") return std::make_shared<PermutationAction>(static_cast<int>(int_field(d, "n")));
  if (kind == "affine") return std::make_shared<AffineFpAction>(int_field(d, "p"));
  if (kind == "psl2") return std::make_shared<ProjectiveSL2Action>(int_field(d, "p"));
  if (kind == "linear_fp") {
    bool special = d.contains("special") ? field(d, "special").get<bool>() : false;
    return std::make_shared<LinearFpAction>(int_field(d, "p"), static_cast<int>(int_field(d, "n")), special);
  }
  if (kind == "sl2") return std::make_shared<LinearFpAction>(int_field(d, "p"), 2, true);
  if (kind == "linear_q") return std::make_shared<LinearQAction>(static_cast<int>(int_field(d, "n")));
  if (kind == "coset") {
    auto ambient = make_action(field(d, "ambient"));
    const auto& gens = field(d, "subgroup");
    if (!gens.is_array()) throw InvalidArgument("coset: 'subgroup' must be an array of generators");
    std::vector<GroupElement> parsed;
    for (const auto& g : gens) parsed.push_back(ambient->parse_element(g.get<std::string>()));
    return std::make_shared<CosetAction>(ambient, ElementSet(std::move(parsed)));
  }
  if (kind == "diagonal") {
    bool distinct = d.contains("distinct") ? field(d, "distinct").get<bool>() : false;
    return std::make_shared<DiagonalPowerAction>(make_action(field(d, "base")), static_cast<int>(int_field(d, "n")),
                                                 distinct);
  }
  if (kind == "product") return std::make_shared<ProductAction>(make_action(field(d, "left")), make_action(field(d, "right")));
  if (kind == "regular") return std::make_shared<RegularAction>(make_action(field(d, "base")));
  throw InvalidArgument("unknown action kind '" + kind + "'");
}

std::vector<std::pair<std::string, std::string>> action_catalog() {
  return {
      {"cyclic", "{n}: Z/n acting on itself by translation"},
      {"integer", "{}: Z acting on itself by translation (not enumerable)"},
      {"table", "{table}: finite group from a Cayley table, acting on itself"},
      {"permutation", "{n}: S_n acting on {1..n}"},
      {"affine", "{p}: x -> ax+b over F_p, elements (a,b)"},
      {"psl2", "{p}: PSL_2(F_p) acting on the projective line by Moebius maps"},
      {"linear_fp", "{p,n,special}: GL_n(F_p) or SL_n(F_p) on F_p^n"},
      {"sl2", "{p}: SL_2(F_p) on F_p^2 (shorthand for linear_fp with n=2, special)"},
      {"linear_q", "{n}: GL_n(Q) on Q^n, exact rationals (not enumerable)"},
      {"coset", "{ambient,subgroup}: ambient group on left cosets of the generated subgroup"},
      {"diagonal", "{base,n,distinct}: diagonal action on n-tuples of base points"},
      {"product", "{left,right}: direct product acting coordinatewise"},
      {"regular", "{base}: base group acting on itself by left multiplication"},
  };
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count, std::uint64_t seed) {
  if (count > n) throw InvalidArgument("random: count " + std::to_string(count) + " exceeds universe size " + std::to_string(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    auto j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

PointSet generate_points(const GroupAction& action, const json& spec) {
  const auto kind = string_field(spec, "kind");
  if (kind == "explicit") {
    std::vector<Point> out;
    for (const auto& item : field(spec, "items")) out.push_back(action.parse_point(item.get<std::string>()));
    return PointSet(std::move(out));
  }
  if (is_integer_kind(kind)) {
    std::vector<Point> out;
    for (auto v : integer_sequence(spec, action.point_modulus())) {
      auto x = action.point_from_int(v);
      if (!x) throw InvalidArgument(kind + ": action '" + action.kind() + "' does not index points by integers");
      out.push_back(*x);
    }
    return PointSet(std::move(out));
  }
  if (kind == "random") {
    auto universe = action.points();
    if (!universe) throw CapabilityMissing("random: point space of '" + action.kind() + "' is not enumerable");
    return sample_subset(*universe, length_field(spec, "count"), seed_field(spec));
  }
  if (kind == "all") {
    auto universe = action.points();
    if (!universe) throw CapabilityMissing("all: point space of '" + action.kind() + "' is not enumerable");
    return *universe;
  }
  if (kind == "union") {
    PointSet out;
    for (const auto& sub : field(spec, "sets")) out = set_union(out, generate_points(action, sub));
    return out;
  }
  throw InvalidArgument("unknown point generator '" + kind + "'");
}

ElementSet generate_elements(const GroupAction& action, const json& spec) {
  const auto kind = string_field(spec, "kind");
  if (kind == "explicit") {
    std::vector<GroupElement> out;
    for (const auto& item : field(spec, "items")) out.push_back(action.parse_element(item.get<std::string>()));
    return ElementSet(std::move(out));
  }
  if (is_integer_kind(kind)) {
    std::vector<GroupElement> out;
    for (auto v : integer_sequence(spec, action.point_modulus())) {
      auto g = action.element_from_int(v);
      if (!g) throw InvalidArgument(kind + ": action '" + action.kind() + "' does not index elements by integers");
      out.push_back(*g);
    }
    return ElementSet(std::move(out));
  }
  if (kind == "element_progression") {
    auto g = action.parse_element(string_field(spec, "start"));
    auto step = action.parse_element(string_field(spec, "step"));
    std::vector<GroupElement> out;
    for (std::size_t i = 0, n = length_field(spec, "length"); i < n; ++i) {
      out.push_back(g);
      g = action.mul(g, step);
    }
    return ElementSet(std::move(out));
  }
  if (kind == "subgroup_coset") {
    std::vector<GroupElement> gens;
    for (const auto& item : field(spec, "generators")) gens.push_back(action.parse_element(item.get<std::string>()));
    auto cap = spec.contains("cap") ? length_field(spec, "cap") : std::size_t{100000};
    auto H = generated_subgroup(action, ElementSet(std::move(gens)), cap);
    auto rep = spec.contains("representative") ? action.parse_element(string_field(spec, "representative"))
                                               : action.identity();
    return product_set(action, ElementSet{rep}, H);
  }
  if (kind == "random") {
    auto universe = action.elements();
    if (!universe) throw CapabilityMissing("random: group '" + action.kind() + "' is not enumerable");
    return sample_subset(*universe, length_field(spec, "count"), seed_field(spec));
  }
  if (kind == "all") {
    auto universe = action.elements();
    if (!universe) throw CapabilityMissing("all: group '" + action.kind() + "' is not enumerable");
    return *universe;
  }
  if (kind == "union") {
    ElementSet out;
    for (const auto& sub : field(spec, "sets")) out = set_union(out, generate_elements(action, sub));
    return out;
  }
  throw InvalidArgument("unknown element generator '" + kind + "'");
}

}  // namespace gacomb
