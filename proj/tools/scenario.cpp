#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "gacomb/actions.hpp"
#include "gacomb/bounds.hpp"
#include "gacomb/bsg.hpp"
#include "gacomb/cert_io.hpp"
#include "gacomb/check.hpp"
#include "gacomb/core.hpp"
#include "gacomb/covering.hpp"
#include "gacomb/error.hpp"
#include "gacomb/statistics.hpp"

namespace gacomb::scenario {
namespace {

using Failures = std::vector<std::string>;

nlohmann::json plain(const Json& j) { return nlohmann::json::parse(j.dump()); }

[[noreturn]] void invalid(const std::string& what) { throw ValidationError(what); }

const Json& require_key(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) invalid(where + ": missing field '" + key + "'");
  return j.at(key);
}

void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }))
      invalid(where + ": unexpected field '" + it.key() + "'");
  }
}

bool is_nonnegative_integer(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

// Adds the override to every "seed" of a randomized generator.
void apply_seed_override(Json& spec, std::uint64_t offset) {
  if (spec.is_object()) {
    for (auto it = spec.begin(); it != spec.end(); ++it) {
      if (it.key() == "seed") {
        if (!is_nonnegative_integer(it.value())) invalid("seed must be a nonnegative integer");
        it.value() = it.value().get<std::uint64_t>() + offset;
      } else {
        apply_seed_override(it.value(), offset);
      }
    }
  } else if (spec.is_array()) {
    for (auto& item : spec) apply_seed_override(item, offset);
  }
}

std::string spec_kind(const Json& spec, const std::string& where) {
  const auto& k = require_key(spec, "kind", where);
  if (!k.is_string()) invalid(where + ": 'kind' must be a string");
  return k.get<std::string>();
}

std::uint64_t spec_count(const Json& spec, const char* key, const std::string& where) {
  const auto& v = require_key(spec, key, where);
  if (!is_nonnegative_integer(v)) invalid(where + ": '" + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string spec_name(const Json& spec, const char* key, const std::string& where) {
  const auto& v = require_key(spec, key, where);
  if (!v.is_string()) invalid(where + ": '" + key + "' must be a set name");
  return v.get<std::string>();
}

PointSet resolve_points(const Context& ctx, const Json& spec, const std::string& where);

ElementSet resolve_elements(const Context& ctx, const Json& spec, const std::string& where) {
  const auto kind = spec_kind(spec, where);
  if (kind == "ref") {
    auto name = spec_name(spec, "name", where);
    auto it = ctx.elements.find(name);
    if (it == ctx.elements.end()) invalid(where + ": unknown element set '" + name + "'");
    return it->second;
  }
  if (kind == "union") {
    ElementSet out;
    for (const auto& sub : require_key(spec, "sets", where)) out = set_union(out, resolve_elements(ctx, sub, where));
    return out;
  }
  if (kind == "inverse") return inverse_set(*ctx.action, resolve_elements(ctx, require_key(spec, "of", where), where));
  if (kind == "product") {
    return product_set(*ctx.action, resolve_elements(ctx, require_key(spec, "left", where), where),
                       resolve_elements(ctx, require_key(spec, "right", where), where));
  }
  if (kind == "symmetry") {
    auto Y = resolve_points(ctx, require_key(spec, "points", where), where);
    const auto& a = require_key(spec, "alpha", where);
    if (!a.is_string()) invalid(where + ": 'alpha' must be a rational string");
    return symmetry_set(*ctx.action, Y, parse_rational(a.get<std::string>())).members;
  }
  if (kind == "perturb") {
    only_keys(spec, {"kind", "base", "pool", "remove", "add", "seed"}, where);
    auto base = resolve_elements(ctx, require_key(spec, "base", where), where);
    auto pool = resolve_elements(ctx, require_key(spec, "pool", where), where);
    auto remove = spec_count(spec, "remove", where);
    auto add = spec_count(spec, "add", where);
    auto seed = spec_count(spec, "seed", where);
    if (remove > base.size()) invalid(where + ": cannot remove more elements than the base holds");
    auto kept = sample_subset(base, base.size() - remove, seed);
    auto extra = set_difference(pool, base);
    if (add > extra.size()) invalid(where + ": pool too small for the requested additions");
    return set_union(kept, sample_subset(extra, add, seed + 1));
  }
  return generate_elements(*ctx.action, plain(spec));
}

PointSet resolve_points(const Context& ctx, const Json& spec, const std::string& where) {
  const auto kind = spec_kind(spec, where);
  if (kind == "ref") {
    auto name = spec_name(spec, "name", where);
    auto it = ctx.points.find(name);
    if (it == ctx.points.end()) invalid(where + ": unknown point set '" + name + "'");
    return it->second;
  }
  if (kind == "union") {
    PointSet out;
    for (const auto& sub : require_key(spec, "sets", where)) out = set_union(out, resolve_points(ctx, sub, where));
    return out;
  }
  if (kind == "image") {
    return image_set(*ctx.action, resolve_elements(ctx, require_key(spec, "elements", where), where),
                     resolve_points(ctx, require_key(spec, "points", where), where));
  }
  return generate_points(*ctx.action, plain(spec));
}

template <class Cert>
Operation op(std::string name, std::string summary, std::function<Cert(const Args&)> make,
             std::function<Failures(const Args&, const Cert&)> check) {
  Operation o;
  o.name = std::move(name);
  o.summary = std::move(summary);
  o.run = [make](const Args& a) { return certio::to_json(&a.action(), make(a)); };
  o.check = [check](const Args& a, const Json& j) {
    Cert c = certio::from_json<Cert>(&a.action(), j);
    return check(a, c);
  };
  return o;
}

ProductRelation full_relation(const ElementSet& A, const ElementSet& B) {
  std::vector<std::pair<GroupElement, GroupElement>> out;
  for (const auto& a : A)
    for (const auto& b : B) out.emplace_back(a, b);
  return ProductRelation::from_sorted_unique(std::move(out));
}

BsgOptions bsg_options(const Args& a, bool with_upper) {
  BsgOptions o;
  if (with_upper) o.sym_upper = a.optional_rational("sym_upper");
  o.target = a.optional_elements("target");
  o.candidates = a.optional_elements("candidates");
  return o;
}

std::vector<Operation> build_operations() {
  std::vector<Operation> ops;
  ops.push_back(op<SymmetryReport>(
      "symmetry_set", "Sym_alpha(Y) with per-member overlaps. Args: Y, alpha, [candidates]",
      [](const Args& a) {
        return symmetry_set(a.action(), a.points("Y"), a.rational("alpha"), a.optional_elements("candidates"));
      },
      [](const Args& a, const SymmetryReport& c) {
        return check_symmetry_set(a.action(), a.points("Y"), a.optional_elements("candidates"), c);
      }));
  ops.push_back(op<EnergyReport>(
      "action_energy", "E(A,Y) by three counts. Args: A, Y",
      [](const Args& a) { return action_energy(a.action(), a.elements("A"), a.points("Y")); },
      [](const Args& a, const EnergyReport& c) {
        return check_action_energy(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<EnergyBoundsReport>(
      "energy_bounds", "Image and symmetry bounds on the energy. Args: A, Y, alpha",
      [](const Args& a) { return energy_bounds(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha")); },
      [](const Args& a, const EnergyBoundsReport& c) {
        return check_energy_bounds(a.action(), a.elements("A"), a.points("Y"), std::nullopt, c);
      }));
  ops.push_back(op<OrbitStabilizerWitness>(
      "orbit_stabilizer", "Orbit-stabilizer for sets at a point. Args: A, x",
      [](const Args& a) { return orbit_stabilizer_witness(a.action(), a.elements("A"), a.point("x")); },
      [](const Args& a, const OrbitStabilizerWitness& c) {
        return check_orbit_stabilizer(a.action(), a.elements("A"), c);
      }));
  ops.push_back(op<PartialImageFromEnergy>(
      "energy_to_partial_image", "Large energy gives a small partial image. Args: A, Y, alpha",
      [](const Args& a) {
        return energy_to_partial_image(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"));
      },
      [](const Args& a, const PartialImageFromEnergy& c) {
        return check_partial_image_from_energy(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<SymmetryFromEnergy>(
      "energy_to_symmetry", "Large energy gives a large symmetry set. Args: A, Y, alpha",
      [](const Args& a) {
        return energy_to_symmetry(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"));
      },
      [](const Args& a, const SymmetryFromEnergy& c) {
        return check_symmetry_from_energy(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<PartialImageFromSymmetry>(
      "symmetry_to_partial_image", "Large symmetry set gives a small partial image. Args: A, Y, alpha",
      [](const Args& a) {
        return symmetry_to_partial_image(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"));
      },
      [](const Args& a, const PartialImageFromSymmetry& c) {
        return check_partial_image_from_symmetry(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<IncidenceIdentity>(
      "incidence_identity", "Incidences of Y x Y with A against the overlap sum. Args: A, Y",
      [](const Args& a) { return incidence_identity(a.action(), a.elements("A"), a.points("Y")); },
      [](const Args& a, const IncidenceIdentity& c) {
        CheckLog log;
        auto fresh = incidence_identity(a.action(), a.elements("A"), a.points("Y"));
        certio::require_recomputed(log, "incidence-identity", &a.action(), c, fresh);
        log.require(c.incidences == c.overlap_sum, "incidence-identity", "incidence count differs from overlap sum");
        return log.take();
      }));
  ops.push_back(op<ExactGrowthCheck>(
      "exact_growth", "If |A(Y)| = |Y| then A^-1 A stabilizes Y and Y splits into orbits. Args: A, Y",
      [](const Args& a) { return check_exact_growth(a.action(), a.elements("A"), a.points("Y")); },
      [](const Args& a, const ExactGrowthCheck& c) {
        CheckLog log;
        auto fresh = check_exact_growth(a.action(), a.elements("A"), a.points("Y"));
        certio::require_recomputed(log, "exact-growth", &a.action(), c, fresh);
        if (c.applies)
          log.require(c.quotients_stabilize && c.image_of_image && c.orbits_partition, "exact-growth",
                      "exact growth case without a stabilizing subgroup");
        return log.take();
      }));
  ops.push_back(op<InjectionCertificate>(
      "ruzsa_triangle", "Injection behind |A1^-1 A2| |Y| <= |A1(Y)| |A2(Y)|. Args: A1, A2, Y",
      [](const Args& a) { return ruzsa_triangle(a.action(), a.elements("A1"), a.elements("A2"), a.points("Y")); },
      [](const Args& a, const InjectionCertificate& c) {
        return check_ruzsa_triangle(a.action(), a.elements("A1"), a.elements("A2"), a.points("Y"), c);
      }));
  ops.push_back(op<SubgroupGrowth>(
      "growth_in_subgroup", "Growth inside a subgroup and its cosets. Args: generators, A, B",
      [](const Args& a) {
        return growth_in_subgroup(a.action(), a.elements("generators"), a.elements("A"), a.elements("B"));
      },
      [](const Args& a, const SubgroupGrowth& c) {
        return check_growth_in_subgroup(a.action(), a.elements("generators"), a.elements("A"), a.elements("B"), c);
      }));
  ops.push_back(op<CoverCertificate>(
      "cover_by_image", "Covering of Y by A^-1 A(Z) with stabilizer bounds on |Z|. Args: A, Y",
      [](const Args& a) { return cover_by_image(a.action(), a.elements("A"), a.points("Y")); },
      [](const Args& a, const CoverCertificate& c) {
        return check_cover(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<CoverCertificate>(
      "cover_symmetry", "Covering of the popular part of Y by B^-1 B(Z). Args: B, Y, alpha",
      [](const Args& a) { return cover_symmetry(a.action(), a.elements("B"), a.points("Y"), a.rational("alpha")); },
      [](const Args& a, const CoverCertificate& c) {
        return check_cover(a.action(), a.elements("B"), a.points("Y"), c);
      }));
  ops.push_back(op<PetridisSelection>(
      "petridis_select", "Subset minimizing |B(Y)|/|B| and the growth comparisons. Args: A, Y, family",
      [](const Args& a) {
        return petridis_select(a.action(), a.elements("A"), a.points("Y"), a.element_family("family"));
      },
      [](const Args& a, const PetridisSelection& c) {
        return check_petridis(a.action(), a.elements("A"), a.points("Y"), a.element_family("family"), c);
      }));
  ops.push_back(op<SymBoundReport>(
      "sym_bound_free", "|Sym_alpha(Y) ∩ A| <= |Y| M / alpha. Args: Y, alpha, [A], [candidates]",
      [](const Args& a) {
        return sym_bound_free(a.action(), a.optional_elements("A"), a.points("Y"), a.rational("alpha"),
                              a.optional_elements("candidates"));
      },
      [](const Args& a, const SymBoundReport& c) {
        return check_sym_bound(a.action(), a.optional_elements("A"), a.points("Y"), a.optional_elements("candidates"),
                               c);
      }));
  ops.push_back(op<SymBoundReport>(
      "sym_bound_almost_free", "Symmetry bound when non-identity elements fix fewer than n points. Args: Y, alpha, n, [candidates]",
      [](const Args& a) {
        return sym_bound_almost_free(a.action(), a.points("Y"), a.rational("alpha"), a.count("n"),
                                     a.optional_elements("candidates"));
      },
      [](const Args& a, const SymBoundReport& c) {
        a.count("n");
        return check_sym_bound(a.action(), std::nullopt, a.points("Y"), a.optional_elements("candidates"), c);
      }));
  ops.push_back(op<SymBoundReport>(
      "sym_bound_linear", "Symmetry bound for linear actions with no concentrated subspace. Args: Y, alpha, rho, [candidates]",
      [](const Args& a) {
        return sym_bound_linear(a.action(), a.points("Y"), a.rational("alpha"), a.rational("rho"),
                                a.optional_elements("candidates"));
      },
      [](const Args& a, const SymBoundReport& c) {
        a.rational("rho");
        return check_sym_bound(a.action(), std::nullopt, a.points("Y"), a.optional_elements("candidates"), c);
      }));
  ops.push_back(op<SymBoundReport>(
      "affine_incidence_bound", "Incidence bound on affine symmetry sets. Args: Y, alpha",
      [](const Args& a) { return affine_incidence_sym_bound(a.action(), a.points("Y"), a.rational("alpha")); },
      [](const Args& a, const SymBoundReport& c) {
        return check_sym_bound(a.action(), std::nullopt, a.points("Y"), std::nullopt, c);
      }));
  ops.push_back(op<IncidenceScan>(
      "sl2_incidence_scan", "Rich SL_2 transformations on a grid. Args: A, xs, ys, threshold",
      [](const Args& a) {
        return sl2_incidence_scan(a.action(), a.elements("A"), a.integers("xs"), a.integers("ys"),
                                  a.rational("threshold"));
      },
      [](const Args& a, const IncidenceScan& c) {
        a.integers("xs");
        a.integers("ys");
        a.rational("threshold");
        return check_incidence_scan(a.action(), a.elements("A"), c);
      }));
  ops.push_back(op<GrowthReport>(
      "sl2_growth", "Growth trichotomy for A in SL_2(F_p). Args: A",
      [](const Args& a) { return sl2_growth_check(a.action(), a.elements("A")); },
      [](const Args& a, const GrowthReport& c) { return check_growth(a.action(), a.elements("A"), c); }));
  ops.push_back(op<PairCensus>(
      "sl2_pair_census", "Growth trichotomy over all 2-element subsets of SL_2(F_p). Args: none",
      [](const Args& a) { return sl2_pair_census(a.action()); },
      [](const Args& a, const PairCensus& c) {
        CheckLog log;
        certio::require_recomputed(log, "sl2-growth", &a.action(), c, sl2_pair_census(a.action()));
        log.require(c.none == 0, "sl2-growth", "generating pair in neither branch");
        return log.take();
      }));
  ops.push_back(op<ConcentrationReport>(
      "subgroup_concentration", "Largest |A ∩ gH| over small-generated proper subgroups. Args: A",
      [](const Args& a) { return subgroup_concentration_scan(a.action(), a.elements("A")); },
      [](const Args& a, const ConcentrationReport& c) {
        return check_concentration(a.action(), a.elements("A"), c);
      }));
  ops.push_back(op<ClosureCertificate>(
      "approximate_closure", "Symmetric relation E with A^-1 *_E A inside Sym_{alpha^2/2}(Y). Args: A, Y, alpha",
      [](const Args& a) { return approximate_closure(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha")); },
      [](const Args& a, const ClosureCertificate& c) {
        a.rational("alpha");
        return check_closure(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<ClosureCertificate>(
      "uniform_closure", "Approximate closure restricted to one dyadic class. Args: A, Y, alpha",
      [](const Args& a) {
        return uniform_approximate_closure(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"));
      },
      [](const Args& a, const ClosureCertificate& c) {
        a.rational("alpha");
        return check_closure(a.action(), a.elements("A"), a.points("Y"), c);
      }));
  ops.push_back(op<TriplingCertificate>(
      "small_tripling", "Constructive small-tripling extraction from the full relation A x B. Args: A, B, alpha, K",
      [](const Args& a) {
        const auto& A = a.elements("A");
        const auto& B = a.elements("B");
        return extract_small_tripling(a.action(), A, B, full_relation(A, B), a.rational("alpha"), a.rational("K"));
      },
      [](const Args& a, const TriplingCertificate& c) {
        const auto& A = a.elements("A");
        const auto& B = a.elements("B");
        a.rational("alpha");
        a.rational("K");
        return check_tripling(a.action(), A, B, full_relation(A, B), c);
      }));
  ops.push_back(op<SmallTriplingFromSymmetry>(
      "small_tripling_from_symmetry", "Small tripling set inside A when Sym_{alpha^2/2}(Y) is small. Args: A, Y, alpha, K, [candidates]",
      [](const Args& a) {
        return extract_from_symmetry(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"), a.rational("K"),
                             a.optional_elements("candidates"));
      },
      [](const Args& a, const SmallTriplingFromSymmetry& c) {
        a.rational("alpha");
        a.rational("K");
        return check_extract_from_symmetry(a.action(), a.elements("A"), a.points("Y"), a.optional_elements("candidates"), c);
      }));
  ops.push_back(op<ApproxGroupCertificate>(
      "approx_group_close", "A_(3) with a greedy cover of A_(3)A_(3) by translates. Args: A",
      [](const Args& a) { return approx_group_close(a.action(), a.elements("A")); },
      [](const Args& a, const ApproxGroupCertificate& c) {
        return check_approx_group(a.action(), a.elements("A"), c);
      }));
  ops.push_back(op<BsgTrace>(
      "bsg_pipeline", "Full BSG trace. Args: A, Y, alpha, J, [sym_upper], [target], [candidates]",
      [](const Args& a) {
        return bsg_pipeline(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"), a.count("J"),
                            bsg_options(a, true));
      },
      [](const Args& a, const BsgTrace& c) {
        a.rational("alpha");
        a.count("J");
        return check_bsg(a.action(), a.elements("A"), a.points("Y"), bsg_options(a, true), c);
      }));
  ops.push_back(op<BsgTrace>(
      "bsg_free", "BSG trace for free actions. Args: A, Y, alpha, J, [target], [candidates]",
      [](const Args& a) {
        return bsg_free(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"), a.count("J"),
                        bsg_options(a, false));
      },
      [](const Args& a, const BsgTrace& c) {
        a.rational("alpha");
        a.count("J");
        return check_bsg(a.action(), a.elements("A"), a.points("Y"), bsg_options(a, false), c);
      }));
  ops.push_back(op<BsgTrace>(
      "bsg_almost_free", "BSG trace for almost free actions. Args: A, Y, alpha, J, n, [target], [candidates]",
      [](const Args& a) {
        return bsg_almost_free(a.action(), a.elements("A"), a.points("Y"), a.rational("alpha"), a.count("J"),
                               a.count("n"), bsg_options(a, false));
      },
      [](const Args& a, const BsgTrace& c) {
        a.rational("alpha");
        a.count("J");
        a.count("n");
        return check_bsg(a.action(), a.elements("A"), a.points("Y"), bsg_options(a, false), c);
      }));
  return ops;
}

struct Entry {
  Json json;
  bool ok = true;
};

Entry run_entry(const Context& ctx, const Json& spec, const Operation& operation) {
  const auto id = spec.at("id").get<std::string>();
  const auto expect = spec.value("expect", std::string("verified"));
  Entry e;
  e.json["id"] = id;
  e.json["op"] = operation.name;
  e.json["args"] = spec.value("args", Json::object());
  try {
    Args args(ctx, operation.name, e.json["args"]);
    auto cert = operation.run(args);
    args.finish();
    Failures failures;
    try {
      failures = operation.check(args, cert);
    } catch (const InvalidArgument& err) {
      failures.push_back(std::string("[certificate-format] ") + err.what());
    }
    e.json["status"] = failures.empty() ? "verified" : "failed";
    e.json["error"] = nullptr;
    e.json["certificate"] = std::move(cert);
    e.json["failures"] = failures;
  } catch (const HypothesisNotMet& err) {
    e.json["status"] = "rejected";
    e.json["error"] = err.what();
    e.json["certificate"] = nullptr;
    e.json["failures"] = Json::array();
  } catch (const CapabilityMissing& err) {
    e.json["status"] = "rejected";
    e.json["error"] = err.what();
    e.json["certificate"] = nullptr;
    e.json["failures"] = Json::array();
  } catch (const ClosureTooLarge& err) {
    e.json["status"] = "rejected";
    e.json["error"] = err.what();
    e.json["certificate"] = nullptr;
    e.json["failures"] = Json::array();
  } catch (const InvalidArgument& err) {
    invalid("operation '" + id + "': " + err.what());
  }
  e.ok = e.json["status"] == expect;
  return e;
}

}  // namespace

Args::Args(const Context& ctx, std::string op, const Json& args) : ctx_(ctx), op_(std::move(op)), args_(args) {
  if (!args_.is_object()) fail("'args' must be an object");
}

void Args::fail(const std::string& what) const { invalid("operation '" + op_ + "': " + what); }

const Json& Args::field(const char* key) const {
  if (!args_.contains(key)) fail(std::string("missing argument '") + key + "'");
  if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) seen_.push_back(key);
  return args_.at(key);
}

const ElementSet& Args::elements(const char* key) const {
  const auto& v = field(key);
  if (!v.is_string()) fail(std::string("argument '") + key + "' must name an element set");
  auto it = ctx_.elements.find(v.get<std::string>());
  if (it == ctx_.elements.end()) fail("unknown element set '" + v.get<std::string>() + "'");
  return it->second;
}

std::optional<ElementSet> Args::optional_elements(const char* key) const {
  if (!args_.contains(key) || args_.at(key).is_null()) {
    if (args_.contains(key)) field(key);
    return std::nullopt;
  }
  return elements(key);
}

std::vector<ElementSet> Args::element_family(const char* key) const {
  const auto& v = field(key);
  if (!v.is_array()) fail(std::string("argument '") + key + "' must be a list of element set names");
  std::vector<ElementSet> out;
  for (const auto& item : v) {
    if (!item.is_string()) fail(std::string("argument '") + key + "' must be a list of element set names");
    auto it = ctx_.elements.find(item.get<std::string>());
    if (it == ctx_.elements.end()) fail("unknown element set '" + item.get<std::string>() + "'");
    out.push_back(it->second);
  }
  return out;
}

const PointSet& Args::points(const char* key) const {
  const auto& v = field(key);
  if (!v.is_string()) fail(std::string("argument '") + key + "' must name a point set");
  auto it = ctx_.points.find(v.get<std::string>());
  if (it == ctx_.points.end()) fail("unknown point set '" + v.get<std::string>() + "'");
  return it->second;
}

Point Args::point(const char* key) const {
  const auto& v = field(key);
  if (!v.is_string()) fail(std::string("argument '") + key + "' must be a point string");
  try {
    return action().parse_point(v.get<std::string>());
  } catch (const std::exception& e) {
    fail(std::string("argument '") + key + "': " + e.what());
  }
}

Rational Args::rational(const char* key) const {
  const auto& v = field(key);
  Rational r;
  try {
    if (v.is_number_integer()) {
      r = Rational(v.get<std::int64_t>());
    } else if (v.is_string()) {
      r = parse_rational(v.get<std::string>());
    } else {
      fail(std::string("argument '") + key + "' must be a rational string");
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    fail(std::string("argument '") + key + "': " + e.what());
  }
  if (std::string(key) == "alpha" && (r <= 0 || r > 1)) fail("alpha out of (0,1]");
  return r;
}

std::optional<Rational> Args::optional_rational(const char* key) const {
  if (!args_.contains(key) || args_.at(key).is_null()) {
    if (args_.contains(key)) field(key);
    return std::nullopt;
  }
  return rational(key);
}

std::uint32_t Args::count(const char* key) const {
  const auto& v = field(key);
  if (!is_nonnegative_integer(v) || v.get<std::uint64_t>() > 0xffffffffULL)
    fail(std::string("argument '") + key + "' must be a nonnegative integer");
  return v.get<std::uint32_t>();
}

std::vector<std::int64_t> Args::integers(const char* key) const {
  const auto& v = field(key);
  if (!v.is_array()) fail(std::string("argument '") + key + "' must be a list of integers");
  std::vector<std::int64_t> out;
  for (const auto& item : v) {
    if (!item.is_number_integer()) fail(std::string("argument '") + key + "' must be a list of integers");
    out.push_back(item.get<std::int64_t>());
  }
  return out;
}

void Args::finish() const {
  for (auto it = args_.begin(); it != args_.end(); ++it)
    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) fail("unexpected argument '" + it.key() + "'");
}

const std::vector<Operation>& operations() {
  static const std::vector<Operation> ops = build_operations();
  return ops;
}

const Operation* find_operation(const std::string& name) {
  for (const auto& o : operations())
    if (o.name == name) return &o;
  return nullptr;
}

const std::vector<std::pair<std::string, std::string>>& statements() {
  static const std::vector<std::pair<std::string, std::string>> list = {
      {"symmetry-set", "Sym_alpha(Y) = {g : |Y ∩ gY| >= alpha|Y|}, membership by exact overlap counts"},
      {"incidence-identity", "Sum over g in A of |Y ∩ gY| equals the incidences between Y x Y and A"},
      {"action-energy", "E(A,Y) counted as quadruples, as sum of squared fibers, and as sum of |a1Y ∩ a2Y|"},
      {"image-energy", "Energy lower bound |A|^2|Y|^2 <= |A(Y)| E(A,Y)"},
      {"energy-bounds", "Energy bounds through the image size and through the symmetry set"},
      {"orbit-stabilizer-sets", "|A(x)| |a^-1 A ∩ stab(x)| >= |A| for some a in A"},
      {"energy-conversion", "Large energy yields a relation with a small partial image"},
      {"symmetry-energy", "Large energy yields a large symmetry set"},
      {"partial-image-conversion", "Small partial image and large symmetry set imply each other"},
      {"cs-intersection", "Cauchy-Schwarz: many pairs of large sets in a family intersect substantially"},
      {"exact-growth", "|A(Y)| = |Y| forces A^-1 A to stabilize Y and Y to split into orbits"},
      {"ruzsa-triangle", "|A1^-1 A2| |Y| <= |A1(Y)| |A2(Y)| by an explicit injection"},
      {"growth-in-subgroup", "Growth of A inside a subgroup is controlled by its growth in the cosets"},
      {"ruzsa-covering", "Y is covered by A^-1 A(Z) for a maximal set Z with disjoint A-images"},
      {"symmetry-covering", "The popular part of Y is covered by B^-1 B(Z) for B inside a symmetry set"},
      {"petridis-selection", "A subset B minimizing |B(Y)|/|B| grows slowly under every further set"},
      {"generic-symmetry-bound", "|Sym_alpha(Y) ∩ A| <= |Y| M / alpha with M the largest transporter intersection"},
      {"almost-free-bound", "Symmetry bound when non-identity elements fix fewer than n points"},
      {"linear-bound", "Symmetry bound for linear actions without concentrated subspaces"},
      {"affine-incidence-bound", "Incidence bound |Sym_alpha(Y)| <= |Y|^2/(alpha - 2/|Y|)^2 for affine maps"},
      {"rich-transformations", "Rich SL_2 transformations counted as curve incidences on a grid"},
      {"sl2-growth", "Sets in SL_2(F_p) close up in three steps, grow by a fixed power, or generate a proper subgroup"},
      {"subgroup-concentration", "Largest intersection of A with a coset of a small-generated proper subgroup"},
      {"approximate-closure", "A symmetric relation E on A^-1 x A with A^-1 *_E A inside Sym_{alpha^2/2}(Y)"},
      {"uniform-closure", "Approximate closure restricted to one dyadic class of representation counts"},
      {"bring-structure-back", "A translate aS meets A in a proportion controlled by the closure density of S"},
      {"small-tripling-extraction", "Constructive extraction of a small tripling set from a dense relation"},
      {"approximate-group-closure", "A_(3) is symmetric, contains A and e, and A_(3)A_(3) is covered by few translates"},
      {"bsg-pipeline", "Iterated closure, pigeonholed level, structured set, walk back to A and symmetry cover"},
      {"bsg-free", "BSG pipeline for free actions with the generic symmetry bound"},
      {"bsg-almost-free", "BSG pipeline for almost free actions with the fixed-point correction"},
      {"certificate-format", "A recorded certificate failed strict parsing"},
  };
  return list;
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    invalid(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": parse error: " + e.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path.string());
}

Context load(const Json& config, std::optional<std::uint64_t> seed_override) {
  if (!config.is_object()) invalid("scenario must be a JSON object");
  only_keys(config, {"schema", "name", "description", "action", "sets", "operations", "output"}, "scenario");
  const auto& schema = require_key(config, "schema", "scenario");
  if (schema != kScenarioSchema) invalid(std::string("scenario: schema must be '") + kScenarioSchema + "'");
  if (!require_key(config, "name", "scenario").is_string()) invalid("scenario: 'name' must be a string");
  const auto& output = require_key(config, "output", "scenario");
  only_keys(output, {"report", "csv"}, "output");
  if (!require_key(output, "report", "output").is_string()) invalid("output: 'report' must be a path string");
  if (output.contains("csv") && !output.at("csv").is_string()) invalid("output: 'csv' must be a path string");

  Context ctx;
  ctx.config = config;
  ctx.seed_override = seed_override;
  try {
    ctx.action = make_action(plain(require_key(config, "action", "scenario")));
  } catch (const InvalidArgument& e) {
    invalid(std::string("action: ") + e.what());
  }

  Json sets = config.value("sets", Json::object());
  if (!sets.is_object()) invalid("scenario: 'sets' must be an object");
  if (seed_override) apply_seed_override(sets, *seed_override);
  for (auto it = sets.begin(); it != sets.end(); ++it) {
    const auto where = "set '" + it.key() + "'";
    if (ctx.elements.count(it.key()) || ctx.points.count(it.key())) invalid(where + ": duplicate name");
    const auto& def = it.value();
    if (!def.is_object() || def.size() != 1 || !(def.contains("elements") || def.contains("points")))
      invalid(where + ": expected {\"elements\": spec} or {\"points\": spec}");
    try {
      if (def.contains("elements")) {
        ctx.elements[it.key()] = resolve_elements(ctx, def.at("elements"), where);
      } else {
        ctx.points[it.key()] = resolve_points(ctx, def.at("points"), where);
      }
    } catch (const InvalidArgument& e) {
      invalid(where + ": " + e.what());
    }
  }

  const auto& ops = require_key(config, "operations", "scenario");
  if (!ops.is_array()) invalid("scenario: 'operations' must be an array");
  std::set<std::string> ids;
  for (const auto& spec : ops) {
    if (!spec.is_object()) invalid("operations: each entry must be an object");
    only_keys(spec, {"id", "op", "args", "expect"}, "operation");
    const auto& id = require_key(spec, "id", "operation");
    if (!id.is_string()) invalid("operation: 'id' must be a string");
    if (!ids.insert(id.get<std::string>()).second) invalid("operation '" + id.get<std::string>() + "': duplicate id");
    const auto& name = require_key(spec, "op", "operation '" + id.get<std::string>() + "'");
    if (!name.is_string() || !find_operation(name.get<std::string>()))
      invalid("operation '" + id.get<std::string>() + "': unknown op " + name.dump());
    if (spec.contains("expect") && spec.at("expect") != "verified" && spec.at("expect") != "rejected")
      invalid("operation '" + id.get<std::string>() + "': 'expect' must be \"verified\" or \"rejected\"");
  }
  return ctx;
}

RunResult run(const Context& ctx) {
  RunResult out;
  out.report["schema"] = kReportSchema;
  out.report["scenario"] = ctx.config;
  out.report["seed_override"] = ctx.seed_override ? Json(*ctx.seed_override) : Json(nullptr);
  out.report["results"] = Json::array();
  out.timings["report"] = ctx.config.at("output").at("report");
  out.timings["operations"] = Json::array();
  double total = 0;
  for (const auto& spec : ctx.config.at("operations")) {
    const auto* operation = find_operation(spec.at("op").get<std::string>());
    auto t0 = std::chrono::steady_clock::now();
    auto e = run_entry(ctx, spec, *operation);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    total += secs;
    out.ok = out.ok && e.ok;
    out.report["results"].push_back(std::move(e.json));
    out.timings["operations"].push_back({{"id", spec.at("id")}, {"seconds", secs}});
  }
  out.timings["total_seconds"] = total;
  return out;
}

VerifyResult verify(const Context& ctx, const Json& report) {
  VerifyResult out;
  auto fail = [&](const std::string& what) {
    out.ok = false;
    out.failures.push_back(what);
  };
  if (!report.is_object() || report.size() != 4 || !report.contains("schema") || !report.contains("scenario") ||
      !report.contains("seed_override") || !report.contains("results")) {
    fail("report: expected exactly the fields schema, scenario, seed_override, results");
    return out;
  }
  if (report.at("schema") != kReportSchema) fail(std::string("report: schema is not '") + kReportSchema + "'");
  if (report.at("scenario") != ctx.config) fail("report: scenario echo differs from the config");
  const Json override_json = ctx.seed_override ? Json(*ctx.seed_override) : Json(nullptr);
  if (report.at("seed_override") != override_json) fail("report: seed override differs");
  const auto& results = report.at("results");
  const auto& ops = ctx.config.at("operations");
  if (!results.is_array() || results.size() != ops.size()) {
    fail("report: result count differs from the operation list");
    return out;
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& spec = ops[i];
    const auto& recorded = results[i];
    const auto id = spec.at("id").get<std::string>();
    const auto* operation = find_operation(spec.at("op").get<std::string>());
    if (recorded.is_object() && recorded.value("status", "") == "verified" && recorded.contains("certificate")) {
      try {
        Args args(ctx, operation->name, spec.value("args", Json::object()));
        for (const auto& f : operation->check(args, recorded.at("certificate"))) fail(id + ": " + f);
      } catch (const InvalidArgument& e) {
        fail(id + ": [certificate-format] " + e.what());
      }
    }
    Entry fresh;
    try {
      fresh = run_entry(ctx, spec, *operation);
    } catch (const ValidationError& e) {
      fail(id + ": " + e.what());
      continue;
    }
    if (auto d = certio::first_difference(recorded, fresh.json))
      fail(id + ": recorded entry differs from recomputation at " + *d);
    if (!fresh.ok) fail(id + ": status '" + fresh.json.at("status").get<std::string>() + "' is not the expected one");
  }
  return out;
}

std::string csv_summary(const Json& report) {
  auto quote = [](std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream out;
  out << "id,op,field,value\n";
  for (const auto& r : report.at("results")) {
    const auto id = quote(r.at("id").get<std::string>());
    const auto op = r.at("op").get<std::string>();
    out << id << "," << op << ",status," << r.at("status").get<std::string>() << "\n";
    if (!r.at("certificate").is_object()) continue;
    for (auto it = r.at("certificate").begin(); it != r.at("certificate").end(); ++it) {
      const auto& v = it.value();
      if (v.is_string()) {
        out << id << "," << op << "," << it.key() << "," << quote(v.get<std::string>()) << "\n";
      } else if (v.is_number() || v.is_boolean()) {
        out << id << "," << op << "," << it.key() << "," << v.dump() << "\n";
      }
    }
  }
  return out.str();
}

std::filesystem::path report_path(const Json& config, const std::filesystem::path& out_dir) {
  return out_dir / config.at("output").at("report").get<std::string>();
}

std::optional<std::filesystem::path> csv_path(const Json& config, const std::filesystem::path& out_dir) {
  const auto& output = config.at("output");
  if (!output.contains("csv")) return std::nullopt;
  return out_dir / output.at("csv").get<std::string>();
}

}  // namespace gacomb::scenario
