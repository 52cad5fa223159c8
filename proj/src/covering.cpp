#include "gacomb/covering.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "gacomb/check.hpp"
#include "gacomb/core.hpp"
#include "gacomb/error.hpp"
#include "gacomb/kernels.hpp"
#include "gacomb/statistics.hpp"

namespace gacomb {

namespace {

BigInt big(std::uint64_t v) { return BigInt(v); }

template <class S>
void require_nonempty(const S& s, const std::string& what) {
  if (s.empty()) throw InvalidArgument(what + " must be nonempty");
}

}  // namespace

InjectionCertificate ruzsa_triangle(const GroupAction& action, const ElementSet& A1, const ElementSet& A2,
                                    const PointSet& Y) {
  require_nonempty(A1, "A1");
  require_nonempty(A2, "A2");
  require_nonempty(Y, "Y");
  InjectionCertificate out;
  std::map<Point, std::pair<GroupElement, Point>> reps;
  for (const auto& a : A2)
    for (const auto& y : Y) reps.try_emplace(action.act(a, y), a, y);
  for (const auto& [x, ay] : reps) out.representatives.push_back({x, ay.first, ay.second});
  std::set<std::pair<GroupElement, Point>> images;
  for (const auto& a : A1) {
    auto ainv = action.inv(a);
    for (const auto& r : out.representatives) {
      InjectionCertificate::Row row{a, r.x, action.mul(r.a, ainv), action.act(a, r.y)};
      images.emplace(row.quotient, row.image);
      out.mapping.push_back(std::move(row));
    }
  }
  out.a1_size = A1.size();
  out.image2_size = reps.size();
  out.quotient_size = product_set(action, A2, inverse_set(action, A1)).size();
  out.image1_size = image_set(action, A1, Y).size();
  out.lhs = big(out.a1_size) * out.image2_size;
  out.rhs = big(out.quotient_size) * out.image1_size;
  out.injective = images.size() == out.mapping.size();
  out.holds = out.lhs <= out.rhs;
  return out;
}

std::vector<std::string> check_ruzsa_triangle(const GroupAction& action, const ElementSet& A1, const ElementSet& A2,
                                              const PointSet& Y, const InjectionCertificate& c) {
  CheckLog log;
  const std::string slug = "ruzsa-triangle";
  std::set<Point> image2;
  for (const auto& a : A2)
    for (const auto& y : Y) image2.insert(action.act(a, y));
  std::set<GroupElement> quotients;
  for (const auto& a2 : A2)
    for (const auto& a1 : A1) quotients.insert(action.mul(a2, action.inv(a1)));
  std::set<Point> image1;
  for (const auto& a : A1)
    for (const auto& y : Y) image1.insert(action.act(a, y));
  log.require(c.a1_size == A1.size() && c.image2_size == image2.size() && c.quotient_size == quotients.size() &&
                  c.image1_size == image1.size(),
              slug, "recorded set sizes differ");
  log.require(c.representatives.size() == image2.size(), slug, "one representative per point of A2(Y) required");
  std::map<Point, const InjectionCertificate::Representative*> rep_of;
  for (const auto& r : c.representatives) {
    log.require(image2.count(r.x) > 0, slug, "representative for a point outside A2(Y)");
    log.require(A2.contains(r.a) && Y.contains(r.y), slug, "representative pair not in A2 x Y");
    log.require(action.act(r.a, r.y) == r.x, slug, "representative does not map to its point");
    log.require(rep_of.emplace(r.x, &r).second, slug, "point represented twice");
  }
  log.require(c.mapping.size() == A1.size() * image2.size(), slug, "mapping does not cover A1 x A2(Y)");
  std::set<std::pair<GroupElement, Point>> domain;
  std::set<std::pair<GroupElement, Point>> images;
  for (const auto& row : c.mapping) {
    log.require(A1.contains(row.a) && image2.count(row.x) > 0, slug, "mapping row outside A1 x A2(Y)");
    domain.emplace(row.a, row.x);
    auto it = rep_of.find(row.x);
    if (it == rep_of.end()) {
      log.fail(slug, "mapping row uses an unrepresented point");
      continue;
    }
    log.require(row.quotient == action.mul(it->second->a, action.inv(row.a)) &&
                    row.image == action.act(row.a, it->second->y),
                slug, "mapping row is not (a_x a^-1, a y_x)");
    log.require(quotients.count(row.quotient) > 0 && image1.count(row.image) > 0, slug,
                "mapping row leaves A2A1^-1 x A1(Y)");
    images.emplace(row.quotient, row.image);
  }
  log.require(domain.size() == c.mapping.size(), slug, "mapping rows repeat a domain pair");
  log.require(images.size() == c.mapping.size(), slug, "mapping is not injective");
  BigInt lhs = big(A1.size()) * image2.size();
  BigInt rhs = big(quotients.size()) * image1.size();
  log.require(c.lhs == lhs && c.rhs == rhs, slug, "recorded sides differ");
  log.require(lhs <= rhs, slug, "|A1||A2(Y)| <= |A2A1^-1||A1(Y)| fails");
  log.require(c.injective && c.holds, slug, "a recorded flag is false");
  return log.take();
}

SubgroupGrowth growth_in_subgroup(const GroupAction& action, const ElementSet& subgroup_generators,
                                  const ElementSet& A, const ElementSet& B, std::size_t cap) {
  require_nonempty(A, "A");
  require_nonempty(B, "B");
  auto H = generated_subgroup(action, subgroup_generators, cap);
  SubgroupGrowth out;
  out.subgroup_size = H.size();
  out.subgroup_intersection = intersection_size(B, H);
  if (out.subgroup_intersection == 0) throw InvalidArgument("growth in subgroup: B ∩ H is empty");
  std::set<GroupElement> cosets;
  for (const auto& a : A) {
    GroupElement key = action.mul(a, H.front());
    for (const auto& h : H) key = std::min(key, action.mul(a, h));
    cosets.insert(key);
  }
  out.coset_count = cosets.size();
  out.product_size = product_set(action, A, B).size();
  out.lhs = checked_mul(out.coset_count, out.subgroup_intersection);
  out.rhs = out.product_size;
  out.holds = out.lhs <= out.rhs;
  return out;
}

std::vector<std::string> check_growth_in_subgroup(const GroupAction& action, const ElementSet& subgroup_generators,
                                                  const ElementSet& A, const ElementSet& B, const SubgroupGrowth& c,
                                                  std::size_t cap) {
  CheckLog log;
  const std::string slug = "growth-in-subgroup";
  ElementSet H;
  try {
    H = generated_subgroup(action, subgroup_generators, cap);
  } catch (const std::exception& e) {
    log.fail(slug, e.what());
    return log.take();
  }
  std::uint64_t meet = 0;
  for (const auto& b : B) meet += H.contains(b);
  std::vector<GroupElement> classes;
  for (const auto& a : A) {
    auto ainv = action.inv(a);
    bool known = std::any_of(classes.begin(), classes.end(),
                             [&](const GroupElement& r) { return H.contains(action.mul(ainv, r)); });
    if (!known) classes.push_back(a);
  }
  auto product = kernels::serial::product_set(action, A, B);
  log.require(c.subgroup_size == H.size(), slug, "recorded |H| differs");
  log.require(c.subgroup_intersection == meet, slug, "recorded |B ∩ H| differs");
  log.require(c.coset_count == classes.size(), slug, "recorded |pi(A)| differs");
  log.require(c.product_size == product.size(), slug, "recorded |AB| differs");
  log.require(c.lhs == classes.size() * meet && c.rhs == product.size(), slug, "recorded sides differ");
  log.require(meet > 0, slug, "B ∩ H is empty");
  log.require(classes.size() * meet <= product.size(), slug, "|pi(A)||B ∩ H| <= |AB| fails");
  log.require(c.holds, slug, "recorded flag is false");
  return log.take();
}

namespace {

// Column j of an image table restricted to `keep` (all points when null).
std::vector<Point> column_images(const kernels::ImageTable& table, std::size_t rows, std::size_t cols, std::size_t j,
                                 const PointSet* keep) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& p = table[i * cols + j];
    if (!keep || keep->contains(p)) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct StabilizerStats {
  std::uint64_t max_stabilizer = 0;
  std::uint64_t max_shifted = 0;
  std::uint64_t repr_sum = 0;
};

StabilizerStats stabilizer_stats(const GroupAction& action, const ElementSet& A, const PointSet& Z,
                                 const CountMap<GroupElement>& quotients) {
  StabilizerStats s;
  for (const auto& z : Z) {
    std::uint64_t count = 0;
    for (const auto& [g, r] : quotients.entries()) {
      if (action.act(g, z) == z) {
        ++count;
        s.repr_sum += r;
      }
    }
    s.max_stabilizer = std::max(s.max_stabilizer, count);
    std::map<Point, std::uint64_t> fiber;
    for (const auto& a : A) s.max_shifted = std::max(s.max_shifted, ++fiber[action.act(a, z)]);
  }
  return s;
}

Rational safe_ratio(const BigInt& num, const BigInt& den) { return den == 0 ? Rational(0) : Rational(num, den); }

void fill_bounds(CoverCertificate& c) {
  std::uint64_t z = c.centers.size();
  if (c.kind == "image") {
    c.max_bound = safe_ratio(big(*c.image_size) * c.max_stabilizer, big(c.a_size));
    c.average_bound = safe_ratio(big(*c.image_size) * c.stabilizer_repr_sum, big(c.a_size) * c.a_size * z);
  } else {
    const Rational& alpha = *c.alpha;
    c.max_bound = 2 * Rational(big(c.y_size) * c.max_stabilizer) / (alpha * big(c.a_size));
    c.average_bound = z == 0 ? Rational(0)
                             : 4 * Rational(big(c.y_size) * c.stabilizer_repr_sum) /
                                   (alpha * alpha * big(c.a_size) * c.a_size * z);
    c.sharper_bound = z == 0 ? Rational(0)
                             : 2 * Rational(big(c.y_size) * c.stabilizer_repr_sum) /
                                   (alpha * big(c.a_size) * c.a_size * z);
    c.covered_lower = alpha * big(c.a_size) * c.y_size / (2 * big(*c.quotient_product_size));
    c.covered_holds = Rational(big(c.covered.size())) >= *c.covered_lower;
    c.sharper_holds = Rational(big(z)) <= *c.sharper_bound;
  }
  c.max_bound_holds = Rational(big(z)) <= c.max_bound;
  c.average_bound_holds = Rational(big(z)) <= c.average_bound;
}

// Greedy maximal Z ⊆ candidates with pairwise disjoint orbit sets, scanning in
// canonical order. orbit(j) gives the (restricted) orbit of the j-th point of Y.
template <class OrbitFn>
void greedy_centers(const PointSet& Y, const PointSet& candidates, OrbitFn orbit, CoverCertificate& c) {
  std::unordered_set<Point> seen;
  std::vector<Point> centers;
  for (std::size_t j = 0; j < Y.size(); ++j) {
    if (!candidates.contains(Y[j])) continue;
    auto images = orbit(j);
    bool free = std::none_of(images.begin(), images.end(), [&](const Point& p) { return seen.count(p) > 0; });
    if (!free) continue;
    centers.push_back(Y[j]);
    c.orbit_sizes.push_back(images.size());
    seen.insert(images.begin(), images.end());
  }
  c.centers = PointSet::from_sorted_unique(std::move(centers));
  c.union_size = seen.size();
  std::uint64_t sum = 0;
  for (auto s : c.orbit_sizes) sum += s;
  c.disjoint_holds = sum == c.union_size;
  c.maximal_holds = true;
  for (std::size_t j = 0; j < Y.size(); ++j) {
    if (!candidates.contains(Y[j]) || c.centers.contains(Y[j])) continue;
    auto images = orbit(j);
    if (std::none_of(images.begin(), images.end(), [&](const Point& p) { return seen.count(p) > 0; }))
      c.maximal_holds = false;
  }
}

}  // namespace

CoverCertificate cover_by_image(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  require_nonempty(A, "A");
  require_nonempty(Y, "Y");
  CoverCertificate c;
  c.kind = "image";
  c.a_size = A.size();
  c.y_size = Y.size();
  auto table = kernels::image_table(action, A, Y);
  c.image_size = PointSet(std::vector<Point>(table.begin(), table.end())).size();
  c.covered = Y;
  greedy_centers(
      Y, Y, [&](std::size_t j) { return column_images(table, A.size(), Y.size(), j, nullptr); }, c);
  auto quotients = kernels::quotient_counts(action, A);
  c.cover_holds = is_subset(Y, image_set(action, quotients.keys(), c.centers));
  auto s = stabilizer_stats(action, A, c.centers, quotients);
  c.max_stabilizer = s.max_stabilizer;
  c.max_shifted_stabilizer = s.max_shifted;
  c.stabilizer_repr_sum = s.repr_sum;
  fill_bounds(c);
  return c;
}

CoverCertificate cover_symmetry(const GroupAction& action, const ElementSet& B, const PointSet& Y,
                                const Rational& alpha) {
  require_unit_fraction(alpha);
  require_nonempty(B, "B");
  require_nonempty(Y, "Y");
  auto overlaps = kernels::overlaps(action, B, Y);
  for (std::size_t i = 0; i < B.size(); ++i) {
    if (!meets_fraction(overlaps[i], alpha, Y.size()))
      throw HypothesisNotMet("hypothesis not met: " + action.format_element(B[i]) + " is not in Sym_alpha(Y) (overlap " +
                             std::to_string(overlaps[i]) + ")");
  }
  CoverCertificate c;
  c.kind = "symmetry";
  c.alpha = alpha;
  c.a_size = B.size();
  c.y_size = Y.size();
  c.quotient_product_size = product_set(action, B, inverse_set(action, B)).size();
  auto table = kernels::image_table(action, B, Y);
  std::vector<Point> popular;
  for (std::size_t j = 0; j < Y.size(); ++j) {
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < B.size(); ++i) hits += Y.contains(table[i * Y.size() + j]);
    if (meets_fraction(2 * hits, alpha, B.size())) popular.push_back(Y[j]);
  }
  c.covered = PointSet::from_sorted_unique(std::move(popular));
  greedy_centers(
      Y, c.covered, [&](std::size_t j) { return column_images(table, B.size(), Y.size(), j, &Y); }, c);
  auto quotients = kernels::quotient_counts(action, B);
  c.cover_holds = is_subset(c.covered, image_set(action, quotients.keys(), c.centers));
  auto s = stabilizer_stats(action, B, c.centers, quotients);
  c.max_stabilizer = s.max_stabilizer;
  c.max_shifted_stabilizer = s.max_shifted;
  c.stabilizer_repr_sum = s.repr_sum;
  fill_bounds(c);
  return c;
}

std::vector<std::string> check_cover(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                     const CoverCertificate& c) {
  CheckLog log;
  const bool image = c.kind == "image";
  if (!image && c.kind != "symmetry") {
    log.fail("ruzsa-covering", "unknown cover kind '" + c.kind + "'");
    return log.take();
  }
  const std::string slug = image ? "ruzsa-covering" : "symmetry-covering";
  log.require(c.a_size == A.size() && c.y_size == Y.size(), slug, "recorded sizes differ from input");
  log.require(image == !c.alpha.has_value() && image == c.image_size.has_value() &&
                  image != c.quotient_product_size.has_value() && image != c.covered_lower.has_value() &&
                  image != c.sharper_bound.has_value() && image != c.covered_holds.has_value() &&
                  image != c.sharper_holds.has_value(),
              slug, "optional fields do not match the cover kind");
  if (!image && (!c.alpha || *c.alpha <= 0 || *c.alpha > 1)) {
    log.fail(slug, "alpha out of (0,1]");
    return log.take();
  }

  // Orbit of y, restricted to Y for the symmetry form.
  auto orbit = [&](const Point& y) {
    std::set<Point> out;
    for (const auto& a : A) {
      auto p = action.act(a, y);
      if (image || Y.contains(p)) out.insert(p);
    }
    return out;
  };

  PointSet covered = Y;
  if (image) {
    std::set<Point> all;
    for (const auto& a : A)
      for (const auto& y : Y) all.insert(action.act(a, y));
    log.require(*c.image_size == all.size(), slug, "recorded |A(Y)| differs");
  } else {
    for (const auto& b : A)
      log.require(meets_fraction(overlap(action, b, Y), *c.alpha, Y.size()), slug,
                  action.format_element(b) + " is not in Sym_alpha(Y)");
    std::vector<Point> popular;
    for (const auto& y : Y) {
      std::uint64_t hits = 0;
      for (const auto& b : A) hits += Y.contains(action.act(b, y));
      if (meets_fraction(2 * hits, *c.alpha, A.size())) popular.push_back(y);
    }
    covered = PointSet(std::move(popular));
    std::set<GroupElement> bb;
    for (const auto& b1 : A)
      for (const auto& b2 : A) bb.insert(action.mul(b1, action.inv(b2)));
    log.require(*c.quotient_product_size == bb.size(), slug, "recorded |BB^-1| differs");
    Rational lower = *c.alpha * big(A.size()) * Y.size() / (2 * big(bb.size()));
    log.require(*c.covered_lower == lower, slug, "recorded lower bound for |Y'| differs");
    log.require(Rational(big(covered.size())) >= lower, slug, "|Y'| >= alpha|B||Y| / (2|BB^-1|) fails");
  }
  log.require(covered == c.covered, slug, "covered set differs from its construction");
  log.require(is_subset(c.centers, covered), slug, "Z is not inside the covered set");

  std::set<Point> seen;
  std::uint64_t orbit_sum = 0;
  log.require(c.orbit_sizes.size() == c.centers.size(), slug, "one orbit size per center required");
  for (std::size_t k = 0; k < c.centers.size(); ++k) {
    auto o = orbit(c.centers[k]);
    orbit_sum += o.size();
    if (k < c.orbit_sizes.size())
      log.require(c.orbit_sizes[k] == o.size(), slug, "orbit size of " + action.format_point(c.centers[k]) + " differs");
    seen.insert(o.begin(), o.end());
  }
  log.require(orbit_sum == seen.size(), slug, "orbits of Z are not pairwise disjoint");
  log.require(c.union_size == seen.size(), slug, "recorded union size differs");

  auto quotients = kernels::serial::quotient_counts(action, A);
  std::set<Point> reach;
  for (const auto& [g, r] : quotients.entries())
    for (const auto& z : c.centers) reach.insert(action.act(g, z));
  for (const auto& y : covered)
    log.require(reach.count(y) > 0, slug, "cover: " + action.format_point(y) + " is not in A^-1A(Z)");
  for (const auto& y : covered) {
    if (c.centers.contains(y)) continue;
    auto o = orbit(y);
    bool touches = std::any_of(o.begin(), o.end(), [&](const Point& p) { return seen.count(p) > 0; });
    log.require(touches, slug, "Z is not maximal at " + action.format_point(y));
  }

  auto s = stabilizer_stats(action, A, c.centers, quotients);
  log.require(c.max_stabilizer == s.max_stabilizer && c.max_shifted_stabilizer == s.max_shifted &&
                  c.stabilizer_repr_sum == s.repr_sum,
              slug, "recorded stabilizer statistics differ");
  CoverCertificate expect = c;
  expect.max_stabilizer = s.max_stabilizer;
  expect.stabilizer_repr_sum = s.repr_sum;
  fill_bounds(expect);
  log.require(c.max_bound == expect.max_bound && c.average_bound == expect.average_bound, slug,
              "recorded bound values differ");
  log.require(expect.max_bound_holds, slug, "max-stabilizer bound on |Z| fails");
  log.require(expect.average_bound_holds, slug, "fixed-point-sum bound on |Z| fails");
  if (!image) {
    log.require(c.sharper_bound == expect.sharper_bound && c.sharper_holds == expect.sharper_holds, slug,
                "recorded sharper bound differs");
  }
  log.require(c.cover_holds && c.disjoint_holds && c.maximal_holds && c.max_bound_holds && c.average_bound_holds &&
                  c.covered_holds.value_or(true),
              slug, "a recorded flag is false");
  return log.take();
}

namespace {

struct Candidate {
  ElementSet set;
  std::uint64_t image = 0;
};

std::vector<ElementSet> selection_family(const ElementSet& A, std::string* name) {
  std::vector<ElementSet> out;
  const auto n = A.size();
  if (n <= kExhaustiveSelectionLimit) {
    *name = "exhaustive";
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<GroupElement> items;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) items.push_back(A[i]);
      out.push_back(ElementSet::from_sorted_unique(std::move(items)));
    }
    return out;
  }
  *name = "singletons-prefixes-full";
  for (const auto& a : A) out.push_back(ElementSet{a});
  for (std::size_t k = 2; k <= n; ++k)
    out.push_back(ElementSet::from_sorted_unique(std::vector<GroupElement>(A.begin(), A.begin() + k)));
  return out;
}

}  // namespace

PetridisSelection petridis_select(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                  const std::vector<ElementSet>& family) {
  require_nonempty(A, "A");
  require_nonempty(Y, "Y");
  PetridisSelection out;
  auto search = selection_family(A, &out.search);
  out.searched = search.size();
  std::optional<Candidate> best;
  for (auto& b : search) {
    std::uint64_t img = image_set(action, b, Y).size();
    if (!best || big(img) * best->set.size() < big(best->image) * b.size() ||
        (big(img) * best->set.size() == big(best->image) * b.size() && b.size() < best->set.size())) {
      best = Candidate{std::move(b), img};
    }
  }
  out.chosen = best->set;
  out.chosen_image = best->image;
  auto chosen_image = image_set(action, out.chosen, Y);
  out.all_hold = true;
  for (const auto& C : family) {
    PetridisSelection::Row row;
    row.c_size = C.size();
    row.product_image = image_set(action, C, chosen_image).size();
    row.c_image = image_set(action, C, Y).size();
    row.holds = big(row.product_image) * out.chosen.size() <= big(out.chosen_image) * row.c_image;
    out.all_hold = out.all_hold && row.holds;
    out.rows.push_back(row);
  }
  return out;
}

std::vector<std::string> check_petridis(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                        const std::vector<ElementSet>& family, const PetridisSelection& c) {
  CheckLog log;
  const std::string slug = "petridis-selection";
  log.require(!c.chosen.empty() && is_subset(c.chosen, A), slug, "chosen set is not a nonempty subset of A");
  std::string name;
  auto search = selection_family(A, &name);
  log.require(name == c.search && search.size() == c.searched, slug, "search family differs");
  auto images_of = [&](const ElementSet& S, const PointSet& P) {
    std::set<Point> out;
    for (const auto& g : S)
      for (const auto& y : P) out.insert(action.act(g, y));
    return PointSet(std::vector<Point>(out.begin(), out.end()));
  };
  auto chosen_image = images_of(c.chosen, Y);
  log.require(chosen_image.size() == c.chosen_image, slug, "recorded |B(Y)| differs");
  if (c.chosen.empty()) return log.take();
  bool in_family = std::find(search.begin(), search.end(), c.chosen) != search.end();
  log.require(in_family, slug, "chosen set is not in the search family");
  for (const auto& b : search) {
    auto img = images_of(b, Y).size();
    if (big(img) * c.chosen.size() < big(chosen_image.size()) * b.size()) {
      log.fail(slug, "chosen set does not minimize |B(Y)|/|B| over the search family");
      break;
    }
  }
  log.require(c.rows.size() == family.size(), slug, "one row per supplied set required");
  bool all = true;
  for (std::size_t k = 0; k < family.size() && k < c.rows.size(); ++k) {
    const auto& row = c.rows[k];
    auto prod = images_of(family[k], chosen_image).size();
    auto cy = images_of(family[k], Y).size();
    bool holds = big(prod) * c.chosen.size() <= big(chosen_image.size()) * cy;
    all = all && holds;
    log.require(row.c_size == family[k].size() && row.product_image == prod && row.c_image == cy &&
                    row.holds == holds,
                slug, "row " + std::to_string(k) + " differs from recomputation");
  }
  log.require(c.all_hold == all, slug, "summary flag differs");
  return log.take();
}

}  // namespace gacomb
