#include "gacomb/statistics.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "gacomb/check.hpp"
#include "gacomb/core.hpp"
#include "gacomb/kernels.hpp"

namespace gacomb {

bool meets_fraction(std::uint64_t count, const Rational& fraction, std::uint64_t size) {
  return numerator(fraction) * size <= BigInt(count) * denominator(fraction);
}

void require_unit_fraction(const Rational& alpha, const char* name) {
  if (alpha <= 0 || alpha > 1) throw InvalidArgument(std::string(name) + " out of (0,1]");
}

ElementSet candidate_universe(const GroupAction& action, const PointSet& Y,
                              const std::optional<ElementSet>& supplied, std::string* source) {
  auto set_source = [&](const char* s) {
    if (source) *source = s;
  };
  if (supplied) {
    set_source("supplied");
    return *supplied;
  }
  if (action.has_transporter()) {
    set_source("transporter");
    std::unordered_set<GroupElement> seen;
    for (const auto& x : Y)
      for (const auto& y : Y)
        for (const auto& g : action.transporter(x, y)) seen.insert(g);
    return ElementSet(std::vector<GroupElement>(seen.begin(), seen.end()));
  }
  if (auto all = action.elements()) {
    set_source("enumeration");
    return *all;
  }
  throw CapabilityMissing(action.kind() +
                          ": symmetry set needs candidates, a transporter or an enumerable group");
}

namespace {

void require_nonempty(const PointSet& Y, const char* what) {
  if (Y.empty()) throw InvalidArgument(std::string(what) + ": Y must be nonempty");
}

void require_nonempty(const ElementSet& A, const char* what) {
  if (A.empty()) throw InvalidArgument(std::string(what) + ": A must be nonempty");
}

// Members of `universe` meeting the threshold, with their overlaps.
std::pair<ElementSet, CountMap<GroupElement>> threshold_members(const GroupAction& action, const ElementSet& universe,
                                                                const PointSet& Y, const Rational& alpha) {
  auto counts = kernels::overlaps(action, universe, Y);
  std::vector<GroupElement> members;
  CountMap<GroupElement> overlaps;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (meets_fraction(counts[i], alpha, Y.size())) {
      members.push_back(universe[i]);
      overlaps.add(universe[i], counts[i]);
    }
  }
  return {ElementSet::from_sorted_unique(std::move(members)), std::move(overlaps)};
}

BigInt big(std::uint64_t v) { return BigInt(v); }

}  // namespace

SymmetryReport symmetry_set(const GroupAction& action, const PointSet& Y, const Rational& alpha,
                            const std::optional<ElementSet>& candidates) {
  require_unit_fraction(alpha);
  require_nonempty(Y, "symmetry set");
  SymmetryReport out;
  out.alpha = alpha;
  auto universe = candidate_universe(action, Y, candidates, &out.universe);
  out.universe_size = universe.size();
  out.y_size = Y.size();
  std::tie(out.members, out.overlaps) = threshold_members(action, universe, Y, alpha);
  return out;
}

std::vector<std::string> check_symmetry_set(const GroupAction& action, const PointSet& Y,
                                            const std::optional<ElementSet>& candidates,
                                            const SymmetryReport& report) {
  CheckLog log;
  const std::string slug = "symmetry-set";
  log.require(report.alpha > 0 && report.alpha <= 1, slug, "alpha out of (0,1]");
  log.require(report.y_size == Y.size(), slug, "recorded |Y| differs from input");
  std::string source;
  ElementSet universe;
  try {
    universe = candidate_universe(action, Y, candidates, &source);
  } catch (const std::exception& e) {
    log.fail(slug, e.what());
    return log.take();
  }
  log.require(source == report.universe, slug, "candidate universe source differs");
  log.require(universe.size() == report.universe_size, slug, "candidate universe size differs");
  log.require(report.overlaps.keys() == report.members, slug, "overlap table keys differ from members");
  auto counts = kernels::serial::overlaps(action, universe, Y);
  for (std::size_t i = 0; i < universe.size(); ++i) {
    bool member = meets_fraction(counts[i], report.alpha, Y.size());
    const auto& g = universe[i];
    if (member != report.members.contains(g)) {
      log.fail(slug, "membership of " + action.format_element(g) + " disagrees with overlap " +
                         std::to_string(counts[i]));
    } else if (member && report.overlaps.get(g) != counts[i]) {
      log.fail(slug, "overlap of " + action.format_element(g) + " recorded as " +
                         std::to_string(report.overlaps.get(g)) + ", measured " + std::to_string(counts[i]));
    }
  }
  for (const auto& g : report.members)
    log.require(universe.contains(g), slug, "member " + action.format_element(g) + " outside the universe");
  if (report.universe != "supplied") {
    log.require(report.members.contains(action.identity()), slug, "identity missing");
    for (const auto& g : report.members)
      log.require(report.members.contains(action.inv(g)), slug,
                  "not closed under inversion at " + action.format_element(g));
  }
  return log.take();
}

EnergyReport action_energy(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  EnergyReport out;
  out.by_pairs = kernels::pair_overlap_sum(action, A, Y);
  auto quotients = kernels::quotient_counts(action, A);
  auto keys = quotients.keys();
  auto counts = kernels::overlaps(action, keys, Y);
  for (std::size_t i = 0; i < keys.size(); ++i)
    out.by_repr = checked_add(out.by_repr, checked_mul(quotients.get(keys[i]), counts[i]));
  out.by_fibers = count_images(action, A, Y).sum_of_squares();
  out.value = out.by_pairs;
  return out;
}

std::vector<std::string> check_action_energy(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                             const EnergyReport& r) {
  CheckLog log;
  const std::string slug = "action-energy";
  log.require(r.by_pairs == r.value && r.by_repr == r.value && r.by_fibers == r.value, slug,
              "the three evaluations disagree");
  auto pairs = kernels::serial::pair_overlap_sum(action, A, Y);
  log.require(pairs == r.value, slug, "recorded energy " + std::to_string(r.value) + ", measured " +
                                          std::to_string(pairs));
  std::map<Point, std::uint64_t> fibers;
  for (const auto& a : A)
    for (const auto& y : Y) ++fibers[action.act(a, y)];
  std::uint64_t squares = 0;
  for (const auto& [x, c] : fibers) squares += c * c;
  log.require(squares == pairs, slug, "fiber count disagrees with pair count");
  log.require(big(r.value) <= big(A.size()) * A.size() * Y.size(), slug, "energy exceeds |A|^2|Y|");
  return log.take();
}

namespace {

struct SymmetryData {
  std::uint64_t sym_in_a = 0;
  std::uint64_t repr_sum = 0;
  std::uint64_t max_shifted = 0;
};

// Quantities over Sym_alpha(Y) restricted to A ∪ A⁻¹A, the only elements the
// bounds involve.
SymmetryData symmetry_data(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                           const Rational& alpha, const CountMap<GroupElement>& quotients,
                           const std::vector<std::uint64_t>& universe_counts, const ElementSet& universe) {
  SymmetryData d;
  std::unordered_set<GroupElement> sym;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (meets_fraction(universe_counts[i], alpha, Y.size())) sym.insert(universe[i]);
  for (const auto& a : A) d.sym_in_a += sym.count(a);
  for (const auto& [g, r] : quotients.entries())
    if (sym.count(g)) d.repr_sum += r;
  for (const auto& a : A) {
    auto ainv = action.inv(a);
    std::uint64_t n = 0;
    for (const auto& b : A) n += sym.count(action.mul(ainv, b));
    d.max_shifted = std::max(d.max_shifted, n);
  }
  return d;
}

BigInt ceil_times(const Rational& alpha, std::uint64_t n) { return ceil_of(alpha * BigInt(n)); }

}  // namespace

EnergyBoundsReport energy_bounds(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                 const Rational& alpha, const std::optional<ImageRelation>& relation) {
  require_unit_fraction(alpha);
  require_nonempty(A, "energy bounds");
  require_nonempty(Y, "energy bounds");
  EnergyBoundsReport out;
  out.alpha = alpha;
  out.a_size = A.size();
  out.y_size = Y.size();
  out.image_size = image_set(action, A, Y).size();
  out.energy = action_energy(action, A, Y).value;
  out.image_lhs = big(out.a_size) * out.a_size * out.y_size * out.y_size;
  out.image_rhs = big(out.image_size) * out.energy;
  out.image_holds = out.image_lhs <= out.image_rhs;
  if (relation) {
    out.relation_size = relation->size();
    out.partial_image_size = partial_image_set(action, *relation).size();
    out.relation_holds = big(*out.relation_size) * *out.relation_size <= big(*out.partial_image_size) * out.energy;
  }
  auto quotients = kernels::quotient_counts(action, A);
  auto universe = set_union(A, quotients.keys());
  auto counts = kernels::overlaps(action, universe, Y);
  auto d = symmetry_data(action, A, Y, alpha, quotients, counts, universe);
  out.sym_in_a = d.sym_in_a;
  out.sym_repr_sum = d.repr_sum;
  out.max_shifted_sym = d.max_shifted;
  out.sym_lhs = alpha * alpha * big(d.sym_in_a) * d.sym_in_a * out.y_size;
  out.sym_holds = out.sym_lhs <= Rational(big(out.energy));
  out.lower_repr = alpha * big(out.y_size) * d.repr_sum;
  out.lower_repr_holds = out.lower_repr <= Rational(big(out.energy));
  BigInt slack = (ceil_times(alpha, out.y_size) - 1) * out.a_size * out.a_size;
  out.upper_repr = slack + big(out.y_size) * d.repr_sum;
  out.upper_max = slack + big(out.a_size) * out.y_size * d.max_shifted;
  out.upper_trivial = big(out.a_size) * out.a_size * out.y_size;
  out.upper_repr_holds = big(out.energy) <= out.upper_repr;
  out.upper_max_holds = big(out.energy) <= out.upper_max;
  out.upper_trivial_holds = big(out.energy) <= out.upper_trivial;
  return out;
}

std::vector<std::string> check_energy_bounds(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                             const std::optional<ImageRelation>& relation,
                                             const EnergyBoundsReport& r) {
  CheckLog log;
  const std::string slug = "energy-bounds";
  log.require(r.a_size == A.size() && r.y_size == Y.size(), slug, "recorded sizes differ from input");
  std::map<Point, std::uint64_t> fibers;
  for (const auto& a : A)
    for (const auto& y : Y) ++fibers[action.act(a, y)];
  std::uint64_t energy = 0;
  for (const auto& [x, c] : fibers) energy += c * c;
  log.require(r.energy == energy, slug, "recorded energy differs from fiber count");
  log.require(r.image_size == fibers.size(), slug, "recorded |A(Y)| differs");
  log.require(r.image_lhs == big(A.size()) * A.size() * Y.size() * Y.size(), slug, "image bound left side");
  log.require(r.image_rhs == big(fibers.size()) * energy, slug, "image bound right side");
  log.require(r.image_holds == (r.image_lhs <= r.image_rhs), slug, "image bound flag");
  log.require(r.image_lhs <= r.image_rhs, "image-energy", "|A|^2|Y|^2 <= |A(Y)| E fails");
  log.require(relation.has_value() == r.relation_size.has_value(), slug, "relation presence differs");
  if (relation && r.relation_size && r.partial_image_size && r.relation_holds) {
    std::map<Point, int> partial;
    for (const auto& [g, y] : *relation) partial[action.act(g, y)] = 1;
    log.require(*r.relation_size == relation->size(), slug, "relation size differs");
    log.require(*r.partial_image_size == partial.size(), slug, "partial image size differs");
    bool holds = big(relation->size()) * relation->size() <= big(partial.size()) * energy;
    log.require(*r.relation_holds == holds, slug, "relation bound flag");
    log.require(holds, "image-energy", "|E|^2 <= |A_E(Y)| E fails");
  }
  const Rational& alpha = r.alpha;
  if (alpha <= 0 || alpha > 1) {
    log.fail(slug, "alpha out of (0,1]");
    return log.take();
  }
  auto quotients = kernels::serial::quotient_counts(action, A);
  auto universe = set_union(A, quotients.keys());
  std::vector<std::uint64_t> counts;
  counts.reserve(universe.size());
  for (const auto& g : universe) counts.push_back(overlap(action, g, Y));
  auto d = symmetry_data(action, A, Y, alpha, quotients, counts, universe);
  log.require(r.sym_in_a == d.sym_in_a, slug, "|A ∩ Sym| differs");
  log.require(r.sym_repr_sum == d.repr_sum, slug, "representation sum over Sym differs");
  log.require(r.max_shifted_sym == d.max_shifted, slug, "max shifted count differs");
  Rational sym_lhs = alpha * alpha * big(d.sym_in_a) * d.sym_in_a * Y.size();
  log.require(r.sym_lhs == sym_lhs, slug, "symmetry bound left side");
  log.require(sym_lhs <= Rational(big(energy)), "symmetry-energy", "alpha^2 |A ∩ Sym|^2 |Y| <= E fails");
  Rational lower = alpha * big(Y.size()) * d.repr_sum;
  BigInt slack = (ceil_times(alpha, Y.size()) - 1) * A.size() * A.size();
  BigInt upper = slack + big(Y.size()) * d.repr_sum;
  BigInt upper_max = slack + big(A.size()) * Y.size() * d.max_shifted;
  log.require(r.lower_repr == lower && r.upper_repr == upper && r.upper_max == upper_max, slug,
              "decomposition bound values differ");
  log.require(r.upper_trivial == big(A.size()) * A.size() * Y.size(), slug, "trivial bound value differs");
  log.require(lower <= Rational(big(energy)), slug, "alpha|Y| sum r <= E fails");
  log.require(big(energy) <= upper, slug, "E <= (ceil(alpha|Y|)-1)|A|^2 + |Y| sum r fails");
  log.require(big(energy) <= upper_max, slug, "max-form upper bound fails");
  log.require(big(energy) <= r.upper_trivial, slug, "E <= |A|^2|Y| fails");
  log.require(r.sym_holds && r.lower_repr_holds && r.upper_repr_holds && r.upper_max_holds &&
                  r.upper_trivial_holds && r.image_holds,
              slug, "a recorded inequality flag is false");
  return log.take();
}

namespace {

// Σ_a |a⁻¹A ∩ stab(x)| terms: for each a, #{a' : a' x = a x}.
std::vector<std::uint64_t> shifted_stabilizer_counts(const GroupAction& action, const ElementSet& A, const Point& x,
                                                     std::uint64_t* orbit) {
  std::map<Point, std::uint64_t> fiber;
  std::vector<Point> images;
  images.reserve(A.size());
  for (const auto& a : A) {
    images.push_back(action.act(a, x));
    ++fiber[images.back()];
  }
  if (orbit) *orbit = fiber.size();
  std::vector<std::uint64_t> out;
  out.reserve(A.size());
  for (const auto& p : images) out.push_back(fiber[p]);
  return out;
}

}  // namespace

OrbitStabilizerWitness orbit_stabilizer_witness(const GroupAction& action, const ElementSet& A, const Point& x) {
  require_nonempty(A, "orbit-stabilizer witness");
  OrbitStabilizerWitness w;
  w.x = x;
  w.a_size = A.size();
  auto counts = shifted_stabilizer_counts(action, A, x, &w.orbit_size);
  std::size_t best = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    w.shifted_sum += counts[i];
    if (counts[i] > counts[best]) best = i;
  }
  w.a0 = A[best];
  w.stab_count = counts[best];
  w.holds = big(w.stab_count) * w.orbit_size >= w.a_size;
  return w;
}

std::vector<std::string> check_orbit_stabilizer(const GroupAction& action, const ElementSet& A,
                                                const OrbitStabilizerWitness& w) {
  CheckLog log;
  const std::string slug = "orbit-stabilizer-sets";
  log.require(A.contains(w.a0), slug, "a0 not in A");
  log.require(w.a_size == A.size(), slug, "recorded |A| differs");
  auto a0inv = action.inv(w.a0);
  std::uint64_t stab = 0;
  PointSet orbit(std::vector<Point>{});
  std::vector<Point> pts;
  for (const auto& a : A) {
    if (action.act(action.mul(a0inv, a), w.x) == w.x) ++stab;
    pts.push_back(action.act(a, w.x));
  }
  orbit = PointSet(std::move(pts));
  log.require(stab == w.stab_count, slug, "|a0^-1 A ∩ stab(x)| recorded " + std::to_string(w.stab_count) +
                                              ", measured " + std::to_string(stab));
  log.require(orbit.size() == w.orbit_size, slug, "|A(x)| differs");
  std::uint64_t orbit_size = 0;
  auto counts = shifted_stabilizer_counts(action, A, w.x, &orbit_size);
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  log.require(sum == w.shifted_sum, slug, "shifted sum differs");
  log.require(*std::max_element(counts.begin(), counts.end()) == stab, slug, "a0 is not a maximizer");
  log.require(big(stab) * orbit.size() >= A.size(), slug, "|a0^-1 A ∩ stab(x)| |A(x)| >= |A| fails");
  log.require(big(A.size()) * A.size() <= big(orbit.size()) * sum, slug, "|A|^2 <= |A(x)| sum fails");
  log.require(w.holds, slug, "recorded flag is false");
  return log.take();
}

namespace {

void require_energy_hypothesis(std::uint64_t energy, const Rational& alpha, std::uint64_t a, std::uint64_t y) {
  Rational need = 2 * alpha * big(a) * a * y;
  if (Rational(big(energy)) < need) {
    throw HypothesisNotMet("hypothesis not met: E(A,Y) = " + std::to_string(energy) + " < 2 alpha |A|^2 |Y| = " +
                           format_rational(need));
  }
}

}  // namespace

PartialImageFromEnergy energy_to_partial_image(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                               const Rational& alpha) {
  require_unit_fraction(alpha);
  require_nonempty(A, "energy conversion");
  require_nonempty(Y, "energy conversion");
  PartialImageFromEnergy out;
  out.alpha = alpha;
  out.a_size = A.size();
  out.y_size = Y.size();
  out.energy = action_energy(action, A, Y).value;
  require_energy_hypothesis(out.energy, alpha, A.size(), Y.size());
  auto r = count_images(action, A, Y);
  std::vector<Point> popular;
  for (const auto& [x, c] : r.entries())
    if (meets_fraction(c, alpha, A.size())) popular.push_back(x);
  out.popular = PointSet::from_sorted_unique(std::move(popular));
  auto table = kernels::image_table(action, A, Y);
  std::vector<std::pair<GroupElement, Point>> rel;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < Y.size(); ++j)
      if (out.popular.contains(table[i * Y.size() + j])) rel.emplace_back(A[i], Y[j]);
  out.relation = ImageRelation::from_sorted_unique(std::move(rel));
  out.relation_size = out.relation.size();
  out.partial_image_size = partial_image_set(action, out.relation).size();
  out.size_holds = meets_fraction(out.relation_size, alpha, static_cast<std::uint64_t>(A.size()) * Y.size());
  out.image_holds = alpha * alpha * big(out.partial_image_size) <= Rational(big(Y.size()));
  return out;
}

SymmetryFromEnergy energy_to_symmetry(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                      const Rational& alpha) {
  require_unit_fraction(alpha);
  require_nonempty(A, "energy conversion");
  require_nonempty(Y, "energy conversion");
  SymmetryFromEnergy out;
  out.alpha = alpha;
  out.a_size = A.size();
  out.energy = action_energy(action, A, Y).value;
  require_energy_hypothesis(out.energy, alpha, A.size(), Y.size());
  auto quotients = kernels::quotient_counts(action, A).keys();
  auto counts = kernels::overlaps(action, quotients, Y);
  std::unordered_set<GroupElement> sym;
  for (std::size_t i = 0; i < quotients.size(); ++i)
    if (meets_fraction(counts[i], alpha, Y.size())) sym.insert(quotients[i]);
  std::uint64_t best = 0;
  bool first = true;
  for (const auto& a : A) {
    auto ainv = action.inv(a);
    std::vector<GroupElement> shifted;
    for (const auto& b : A) {
      auto g = action.mul(ainv, b);
      if (sym.count(g)) shifted.push_back(std::move(g));
    }
    if (first || shifted.size() > best) {
      first = false;
      best = shifted.size();
      out.a0 = a;
      out.shifted = ElementSet(std::move(shifted));
    }
  }
  out.shifted_size = out.shifted.size();
  out.holds = meets_fraction(out.shifted_size, alpha, A.size());
  return out;
}

SymmetryFromPartialImage partial_image_to_symmetry(const GroupAction& action, const ElementSet& A,
                                                   const PointSet& Y, const ImageRelation& E, const Rational& growth,
                                                   const Rational& rho) {
  require_unit_fraction(rho, "rho");
  if (growth <= 0) throw InvalidArgument("K must be positive");
  require_nonempty(A, "partial image conversion");
  require_nonempty(Y, "partial image conversion");
  for (const auto& [a, y] : E)
    if (!A.contains(a) || !Y.contains(y)) throw InvalidArgument("relation is not inside A x Y");
  auto partial = partial_image_set(action, E);
  if (Rational(big(partial.size())) > growth * big(Y.size())) {
    throw HypothesisNotMet("hypothesis not met: |A_E(Y)| = " + std::to_string(partial.size()) + " > K|Y|");
  }
  if (!meets_fraction(E.size(), rho, static_cast<std::uint64_t>(A.size()) * Y.size())) {
    throw HypothesisNotMet("hypothesis not met: |E| = " + std::to_string(E.size()) + " < rho |A||Y|");
  }
  SymmetryFromPartialImage out;
  out.rho = rho;
  out.growth = growth;
  out.alpha = rho / (2 * (growth + 1));
  out.a_size = A.size();
  out.y_size = Y.size();
  out.relation_size = E.size();
  out.partial_image_size = partial.size();
  std::map<GroupElement, std::uint64_t> degree;
  for (const auto& [a, y] : E) ++degree[a];
  std::vector<GroupElement> dense;
  for (const auto& [a, deg] : degree)
    if (meets_fraction(2 * deg, rho, Y.size())) dense.push_back(a);
  out.dense = ElementSet::from_sorted_unique(std::move(dense));
  out.extended = set_union(Y, partial);
  auto counts = kernels::overlaps(action, out.dense, out.extended);
  out.members_hold = true;
  for (std::size_t i = 0; i < out.dense.size(); ++i) {
    out.overlaps.add(out.dense[i], counts[i]);
    if (!meets_fraction(counts[i], out.alpha, out.extended.size())) out.members_hold = false;
  }
  out.dense_holds = meets_fraction(2 * out.dense.size(), rho, A.size());
  out.extended_holds = Rational(big(out.extended.size())) <= (growth + 1) * big(Y.size());
  return out;
}

PartialImageFromSymmetry symmetry_to_partial_image(const GroupAction& action, const ElementSet& A,
                                                   const PointSet& Y, const Rational& alpha) {
  require_unit_fraction(alpha);
  require_nonempty(Y, "symmetry conversion");
  auto counts = kernels::overlaps(action, A, Y);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!meets_fraction(counts[i], alpha, Y.size()))
      throw HypothesisNotMet("hypothesis not met: " + action.format_element(A[i]) + " is not in Sym_alpha(Y)");
  }
  PartialImageFromSymmetry out;
  out.alpha = alpha;
  out.a_size = A.size();
  out.y_size = Y.size();
  auto table = kernels::image_table(action, A, Y);
  std::vector<std::pair<GroupElement, Point>> rel;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < Y.size(); ++j)
      if (Y.contains(table[i * Y.size() + j])) rel.emplace_back(A[i], Y[j]);
  out.relation = ImageRelation::from_sorted_unique(std::move(rel));
  out.relation_size = out.relation.size();
  out.size_holds = meets_fraction(out.relation_size, alpha, static_cast<std::uint64_t>(A.size()) * Y.size());
  out.inside_holds = is_subset(partial_image_set(action, out.relation), Y);
  return out;
}

std::vector<std::string> check_partial_image_from_energy(const GroupAction& action, const ElementSet& A,
                                                         const PointSet& Y, const PartialImageFromEnergy& c) {
  CheckLog log;
  const std::string slug = "energy-conversion";
  log.require(c.a_size == A.size() && c.y_size == Y.size(), slug, "recorded sizes differ from input");
  std::map<Point, std::uint64_t> fibers;
  for (const auto& a : A)
    for (const auto& y : Y) ++fibers[action.act(a, y)];
  std::uint64_t energy = 0;
  for (const auto& [x, n] : fibers) energy += n * n;
  log.require(energy == c.energy, slug, "recorded energy differs");
  log.require(Rational(big(energy)) >= 2 * c.alpha * big(A.size()) * A.size() * Y.size(), slug,
              "hypothesis E >= 2 alpha |A|^2 |Y| fails");
  for (const auto& [x, n] : fibers) {
    bool popular = meets_fraction(n, c.alpha, A.size());
    if (popular != c.popular.contains(x)) log.fail(slug, "popularity of " + action.format_point(x) + " misrecorded");
  }
  for (const auto& x : c.popular)
    log.require(fibers.count(x) > 0, slug, "popular point " + action.format_point(x) + " outside A(Y)");
  std::uint64_t expected = 0;
  for (const auto& a : A)
    for (const auto& y : Y)
      if (c.popular.contains(action.act(a, y))) {
        ++expected;
        if (!c.relation.contains({a, y})) log.fail(slug, "relation misses a pair mapping into the popular set");
      }
  log.require(c.relation.size() == expected, slug, "relation contains pairs outside the construction");
  log.require(c.relation_size == c.relation.size(), slug, "recorded |E| differs");
  std::map<Point, int> partial;
  for (const auto& [a, y] : c.relation) partial[action.act(a, y)] = 1;
  log.require(c.partial_image_size == partial.size(), slug, "recorded |A_E(Y)| differs");
  log.require(meets_fraction(c.relation.size(), c.alpha, static_cast<std::uint64_t>(A.size()) * Y.size()), slug,
              "|E| >= alpha |A||Y| fails");
  log.require(c.alpha * c.alpha * big(partial.size()) <= Rational(big(Y.size())), slug,
              "|A_E(Y)| <= alpha^-2 |Y| fails");
  log.require(c.size_holds && c.image_holds, slug, "a recorded flag is false");
  return log.take();
}

std::vector<std::string> check_symmetry_from_energy(const GroupAction& action, const ElementSet& A,
                                                    const PointSet& Y, const SymmetryFromEnergy& c) {
  CheckLog log;
  const std::string slug = "energy-conversion";
  log.require(A.contains(c.a0), slug, "a0 not in A");
  log.require(c.a_size == A.size(), slug, "recorded |A| differs");
  log.require(c.energy == kernels::serial::pair_overlap_sum(action, A, Y), slug, "recorded energy differs");
  log.require(Rational(big(c.energy)) >= 2 * c.alpha * big(A.size()) * A.size() * Y.size(), slug,
              "hypothesis E >= 2 alpha |A|^2 |Y| fails");
  auto a0inv = action.inv(c.a0);
  std::vector<GroupElement> expect;
  for (const auto& b : A) {
    auto g = action.mul(a0inv, b);
    if (meets_fraction(overlap(action, g, Y), c.alpha, Y.size())) expect.push_back(std::move(g));
  }
  ElementSet shifted(std::move(expect));
  log.require(shifted == c.shifted, slug, "a0^-1 A ∩ Sym_alpha(Y) differs");
  log.require(c.shifted_size == shifted.size(), slug, "recorded count differs");
  log.require(meets_fraction(shifted.size(), c.alpha, A.size()), slug, "|a0^-1 A ∩ Sym| >= alpha |A| fails");
  log.require(c.holds, slug, "recorded flag is false");
  return log.take();
}

std::vector<std::string> check_symmetry_from_partial_image(const GroupAction& action, const ElementSet& A,
                                                           const PointSet& Y, const ImageRelation& E,
                                                           const SymmetryFromPartialImage& c) {
  CheckLog log;
  const std::string slug = "partial-image-conversion";
  log.require(c.a_size == A.size() && c.y_size == Y.size() && c.relation_size == E.size(), slug,
              "recorded sizes differ from input");
  log.require(c.growth > 0 && c.rho > 0 && c.rho <= 1, slug, "parameters out of range");
  log.require(c.alpha == c.rho / (2 * (c.growth + 1)), slug, "alpha is not rho / 2(K+1)");
  std::map<Point, int> partial;
  std::map<GroupElement, std::uint64_t> degree;
  for (const auto& [a, y] : E) {
    partial[action.act(a, y)] = 1;
    ++degree[a];
  }
  log.require(c.partial_image_size == partial.size(), slug, "recorded |A_E(Y)| differs");
  log.require(Rational(big(partial.size())) <= c.growth * big(Y.size()), slug, "hypothesis |A_E(Y)| <= K|Y| fails");
  log.require(meets_fraction(E.size(), c.rho, static_cast<std::uint64_t>(A.size()) * Y.size()), slug,
              "hypothesis |E| >= rho |A||Y| fails");
  for (const auto& a : A) {
    bool dense = meets_fraction(2 * degree[a], c.rho, Y.size());
    if (dense != c.dense.contains(a)) log.fail(slug, "density of " + action.format_element(a) + " misrecorded");
  }
  log.require(is_subset(c.dense, A), slug, "dense set not inside A");
  std::vector<Point> ext(Y.begin(), Y.end());
  for (const auto& [x, one] : partial) ext.push_back(x);
  PointSet extended(std::move(ext));
  log.require(extended == c.extended, slug, "Y ∪ A_E(Y) differs");
  log.require(c.overlaps.keys() == c.dense, slug, "overlap table keys differ from the dense set");
  for (const auto& a : c.dense) {
    auto n = overlap(action, a, extended);
    log.require(n == c.overlaps.get(a), slug, "overlap of " + action.format_element(a) + " differs");
    log.require(meets_fraction(n, c.alpha, extended.size()), slug,
                action.format_element(a) + " not in Sym_alpha(Y')");
  }
  log.require(meets_fraction(2 * c.dense.size(), c.rho, A.size()), slug, "|A'| >= rho |A| / 2 fails");
  log.require(Rational(big(extended.size())) <= (c.growth + 1) * big(Y.size()), slug, "|Y'| <= (K+1)|Y| fails");
  log.require(c.dense_holds && c.extended_holds && c.members_hold, slug, "a recorded flag is false");
  return log.take();
}

std::vector<std::string> check_partial_image_from_symmetry(const GroupAction& action, const ElementSet& A,
                                                           const PointSet& Y, const PartialImageFromSymmetry& c) {
  CheckLog log;
  const std::string slug = "partial-image-conversion";
  log.require(c.a_size == A.size() && c.y_size == Y.size(), slug, "recorded sizes differ from input");
  for (const auto& a : A)
    log.require(meets_fraction(overlap(action, a, Y), c.alpha, Y.size()), slug,
                action.format_element(a) + " not in Sym_alpha(Y)");
  std::vector<std::pair<GroupElement, Point>> rel;
  for (const auto& a : A)
    for (const auto& y : Y)
      if (Y.contains(action.act(a, y))) rel.emplace_back(a, y);
  log.require(ImageRelation(std::move(rel)) == c.relation, slug, "relation differs from {(a,y) : ay in Y}");
  log.require(c.relation_size == c.relation.size(), slug, "recorded |E| differs");
  for (const auto& [a, y] : c.relation)
    log.require(Y.contains(action.act(a, y)), slug, "A_E(Y) leaves Y");
  log.require(meets_fraction(c.relation.size(), c.alpha, static_cast<std::uint64_t>(A.size()) * Y.size()), slug,
              "|E| >= alpha |A||Y| fails");
  log.require(c.size_holds && c.inside_holds, slug, "a recorded flag is false");
  return log.take();
}

IntersectionPairs cs_intersection_pairs(const std::vector<std::vector<std::uint32_t>>& family,
                                        std::uint64_t universe_size, const Rational& delta) {
  require_unit_fraction(delta, "delta");
  if (family.empty() || universe_size == 0) throw InvalidArgument("intersection pairs: empty family or universe");
  IntersectionPairs out;
  out.delta = delta;
  out.universe_size = universe_size;
  out.family_size = family.size();
  for (const auto& t : family) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= universe_size || (i > 0 && t[i - 1] >= t[i]))
        throw InvalidArgument("intersection pairs: members must be sorted, distinct and below the universe size");
    }
    out.total_size += t.size();
  }
  if (!meets_fraction(out.total_size, delta, out.family_size * universe_size)) {
    throw HypothesisNotMet("hypothesis not met: sum |T_s| = " + std::to_string(out.total_size) +
                           " < delta |S||T|");
  }
  auto matrix = kernels::intersection_matrix(family);
  Rational threshold = delta * delta * BigInt(universe_size) / 2;
  const auto n = family.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      auto m = matrix[s * n + t];
      out.intersection_total += m;
      if (Rational(big(m)) >= threshold)
        out.pairs.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t));
    }
  }
  out.cauchy_schwarz_holds = big(out.total_size) * out.total_size <= big(universe_size) * out.intersection_total;
  out.count_holds = Rational(big(2 * out.pairs.size())) >= delta * delta * big(n) * n;
  return out;
}

std::vector<std::string> check_intersection_pairs(const std::vector<std::vector<std::uint32_t>>& family,
                                                  const IntersectionPairs& c) {
  CheckLog log;
  const std::string slug = "cs-intersection";
  log.require(c.family_size == family.size(), slug, "family size differs");
  auto matrix = kernels::serial::intersection_matrix(family);
  const auto n = family.size();
  Rational threshold = c.delta * c.delta * BigInt(c.universe_size) / 2;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> expect;
  std::uint64_t total = 0;
  std::uint64_t sizes = 0;
  for (const auto& t : family) sizes += t.size();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      total += matrix[s * n + t];
      if (Rational(big(matrix[s * n + t])) >= threshold)
        expect.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(t));
    }
  log.require(sizes == c.total_size && total == c.intersection_total, slug, "recorded sums differ");
  log.require(meets_fraction(sizes, c.delta, n * c.universe_size), slug, "hypothesis sum |T_s| >= delta|S||T| fails");
  log.require(expect == c.pairs, slug, "pair set differs from the threshold construction");
  log.require(big(sizes) * sizes <= big(c.universe_size) * total, slug, "Cauchy-Schwarz inequality fails");
  log.require(Rational(big(2 * expect.size())) >= c.delta * c.delta * big(n) * n, slug, "|P| >= delta^2|S|^2/2 fails");
  log.require(c.cauchy_schwarz_holds && c.count_holds, slug, "a recorded flag is false");
  return log.take();
}

std::uint64_t incidence_count(const GroupAction& action, const std::vector<std::pair<Point, Point>>& pairs,
                              const ElementSet& A) {
  std::uint64_t n = 0;
  for (const auto& [x, y] : pairs)
    for (const auto& a : A)
      if (action.act(a, x) == y) ++n;
  return n;
}

IncidenceIdentity incidence_identity(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  IncidenceIdentity out;
  std::vector<std::pair<Point, Point>> square;
  square.reserve(Y.size() * Y.size());
  for (const auto& x : Y)
    for (const auto& y : Y) square.emplace_back(x, y);
  out.incidences = incidence_count(action, square, A);
  for (auto c : kernels::overlaps(action, A, Y)) out.overlap_sum += c;
  out.holds = out.incidences == out.overlap_sum;
  return out;
}

}  // namespace gacomb
