#include "gacomb/bsg.hpp"

#include <algorithm>
#include <unordered_set>

#include "gacomb/cert_io.hpp"
#include "gacomb/check.hpp"
#include "gacomb/core.hpp"
#include "gacomb/error.hpp"
#include "gacomb/kernels.hpp"
#include "gacomb/statistics.hpp"

namespace gacomb {
namespace {

constexpr std::uint32_t kMaxDepth = 8;
constexpr std::uint64_t kPowerWork = 4000000;

void require_nonempty_set(bool empty, const char* what) {
  if (empty) throw InvalidArgument(std::string(what) + " is empty");
}

std::vector<std::uint64_t> require_members(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                           const Rational& alpha) {
  auto counts = kernels::overlaps(action, A, Y);
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (!meets_fraction(counts[i], alpha, Y.size()))
      throw HypothesisNotMet("hypothesis not met: " + action.format_element(A[i]) + " is not in Sym_alpha(Y) (overlap " +
                             std::to_string(counts[i]) + ")");
  }
  return counts;
}

CountMap<GroupElement> overlap_map(const GroupAction& action, const ElementSet& S, const PointSet& Y) {
  auto counts = kernels::overlaps(action, S, Y);
  CountMap<GroupElement> out;
  for (std::size_t i = 0; i < S.size(); ++i) out.add(S[i], counts[i]);
  return out;
}

bool all_meet(const CountMap<GroupElement>& overlaps, const ElementSet& S, const Rational& alpha, std::size_t y) {
  for (const auto& g : S)
    if (!meets_fraction(overlaps.get(g), alpha, y)) return false;
  return true;
}

ElementSet left_translate(const GroupAction& action, const GroupElement& g, const ElementSet& S) {
  std::vector<GroupElement> out;
  out.reserve(S.size());
  for (const auto& s : S) out.push_back(action.mul(g, s));
  return ElementSet(std::move(out));
}

std::uint64_t translate_hits(const GroupAction& action, const ElementSet& A, const GroupElement& g,
                             const ElementSet& S) {
  std::uint64_t n = 0;
  for (const auto& s : S) n += A.contains(action.mul(g, s));
  return n;
}

// Lower bound for ln(x) used by the natural-log sufficient tests.
Rational log_lower(const BigInt& x) {
  unsigned bits = bit_length(x);
  return bits == 0 ? Rational(0) : Rational(BigInt(bits - 1) * 693, BigInt(1000));
}

ClosureCertificate build_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                 const Rational& alpha, bool uniform) {
  require_unit_fraction(alpha);
  require_nonempty_set(A.empty(), "A");
  require_nonempty_set(Y.empty(), "Y");
  require_members(action, A, Y, alpha);

  auto table = kernels::image_table(action, A, Y);
  std::vector<std::vector<std::uint32_t>> family(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = 0; j < Y.size(); ++j) {
      const auto& p = table[i * Y.size() + j];
      auto it = std::lower_bound(Y.begin(), Y.end(), p);
      if (it != Y.end() && *it == p) family[i].push_back(static_cast<std::uint32_t>(it - Y.begin()));
    }
    std::sort(family[i].begin(), family[i].end());
  }
  auto pairs = cs_intersection_pairs(family, Y.size(), alpha);
  std::vector<GroupElement> inv;
  for (const auto& a : A) inv.push_back(action.inv(a));
  std::vector<std::pair<GroupElement, GroupElement>> rel;
  for (const auto& [i, j] : pairs.pairs) {
    rel.emplace_back(inv[i], A[j]);
    rel.emplace_back(inv[j], A[i]);
  }
  ProductRelation E(std::move(rel));

  ClosureCertificate c;
  c.kind = uniform ? "uniform" : "approximate";
  c.alpha = alpha;
  c.level = alpha * alpha / 2;
  c.a_size = A.size();
  c.y_size = Y.size();
  c.pair_count = pairs.pairs.size();
  const BigInt target = BigInt(A.size()) * A.size();

  if (uniform) {
    auto r = count_partial_products(action, E);
    std::vector<std::uint64_t> mass(65, 0);
    for (const auto& [x, k] : r.entries()) mass[bit_length(k) - 1] += k;
    std::uint32_t best = 0;
    for (std::uint32_t j = 1; j < mass.size(); ++j)
      if (mass[j] > mass[best]) best = j;
    std::vector<std::pair<GroupElement, GroupElement>> kept;
    for (const auto& e : E)
      if (bit_length(r.get(action.mul(e.first, e.second))) - 1 == best) kept.push_back(e);
    c.base_relation_size = E.size();
    c.dyadic_level = best;
    E = ProductRelation::from_sorted_unique(std::move(kept));
  }
  c.relation = E;
  c.relation_size = E.size();
  c.product_counts = count_partial_products(action, E);
  c.product = c.product_counts.keys();
  c.overlaps = overlap_map(action, c.product, Y);
  c.symmetric = true;
  for (const auto& [x, y] : E)
    if (!E.contains({action.inv(y), action.inv(x)})) c.symmetric = false;
  c.inverse_closed = inverse_set(action, c.product) == c.product;
  c.members_hold = all_meet(c.overlaps, c.product, c.level, Y.size());
  const Rational need = alpha * alpha * target;
  if (uniform) {
    const unsigned bits = bit_length(std::uint64_t(A.size()));
    c.dyadic_floor = need / (2 * bits);
    c.size_holds = Rational(BigInt(c.relation_size)) >= *c.dyadic_floor;
    std::uint64_t lo = 0;
    for (const auto& [x, k] : c.product_counts.entries()) lo = lo == 0 ? k : std::min(lo, k);
    c.min_repr = lo;
    c.uniform_holds = BigInt(2) * c.product.size() * lo >= BigInt(c.relation_size);
    c.natural_log_holds = Rational(BigInt(c.relation_size)) * (2 + 2 * log_lower(BigInt(A.size()))) >= need;
  } else {
    c.size_holds = Rational(BigInt(2) * c.relation_size) >= need;
  }
  return c;
}

// (A ∪ A⁻¹ ∪ {e})^(2^k) for k = 0, 1, … while the squaring stays under the work cap.
std::vector<ElementSet> dyadic_powers(const GroupAction& action, const ElementSet& A0, std::uint32_t count) {
  std::vector<ElementSet> out{A0};
  while (out.size() < count) {
    const auto& last = out.back();
    if (BigInt(last.size()) * last.size() > kPowerWork) break;
    out.push_back(kernels::product_set(action, last, last));
  }
  return out;
}

}  // namespace

Rational iterated_alpha(const Rational& alpha, std::uint32_t depth) {
  if (depth > kMaxDepth) throw InvalidArgument("J too large");
  return 2 * rational_pow(alpha / 2, 1u << depth);
}

ClosureCertificate approximate_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                       const Rational& alpha) {
  return build_closure(action, A, Y, alpha, false);
}

ClosureCertificate uniform_approximate_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                               const Rational& alpha) {
  return build_closure(action, A, Y, alpha, true);
}

std::vector<std::string> check_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                       const ClosureCertificate& c) {
  CheckLog log;
  const bool uniform = c.kind == "uniform";
  const std::string slug = uniform ? "uniform-closure" : "approximate-closure";
  if (!uniform && c.kind != "approximate") {
    log.fail(slug, "unknown closure kind '" + c.kind + "'");
    return log.take();
  }
  ClosureCertificate fresh;
  try {
    fresh = build_closure(action, A, Y, c.alpha, uniform);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, c, fresh);

  auto inv_a = inverse_set(action, A);
  CountMap<GroupElement> r;
  for (const auto& [x, y] : c.relation) {
    if (!inv_a.contains(x) || !A.contains(y)) {
      log.fail(slug, "pair (" + action.format_element(x) + ", " + action.format_element(y) + ") outside A^-1 x A");
      continue;
    }
    r.add(action.mul(x, y));
    if (!c.relation.contains({action.inv(y), action.inv(x)}))
      log.fail(slug, "relation not symmetric at (" + action.format_element(x) + ", " + action.format_element(y) + ")");
  }
  log.require(r == c.product_counts && r.keys() == c.product, slug, "representation counts differ from relation");
  log.require(c.level == c.alpha * c.alpha / 2, slug, "level is not alpha^2/2");
  log.require(c.relation_size == c.relation.size(), slug, "relation size differs");
  auto counts = kernels::serial::overlaps(action, c.product, Y);
  for (std::size_t i = 0; i < counts.size(); ++i)
    log.require(meets_fraction(counts[i], c.level, Y.size()), slug,
                "product element " + action.format_element(c.product[i]) + " has overlap " + std::to_string(counts[i]) +
                    " below the level");
  log.require(inverse_set(action, c.product) == c.product, slug, "product is not inverse-closed");
  log.require(c.size_holds, slug, "relation below its size floor");
  if (uniform) {
    log.require(c.uniform_holds.value_or(false), slug, "representation floor fails");
    if (c.min_repr && !c.product.empty())
      log.require(BigInt(2) * c.product.size() * *c.min_repr >= BigInt(c.relation_size), slug,
                  "2|P| min r_E < |E|");
  }
  return log.take();
}

StructureTransfer bring_structure_back(const GroupAction& action, const ElementSet& A,
                                       const ClosureCertificate& closure, const ElementSet& S) {
  if (closure.kind != "uniform") throw InvalidArgument("structure transfer needs a uniform closure");
  if (closure.a_size != A.size()) throw InvalidArgument("closure was built for a different set");
  require_nonempty_set(A.empty(), "A");
  StructureTransfer t;
  t.alpha = closure.alpha;
  t.a_size = A.size();
  t.s_size = S.size();
  t.product_size = closure.product.size();
  t.relation_size = closure.relation_size;
  t.product_hits = intersection_size(closure.product, S);
  for (const auto& s : S) t.repr_mass += closure.product_counts.get(s);
  bool first = true;
  for (const auto& a : A) {
    auto h = translate_hits(action, A, a, S);
    t.count_sum += h;
    if (first || h > t.hits) {
      t.hits = h;
      t.anchor = a;
      first = false;
    }
  }
  const BigInt P = t.product_size, E = t.relation_size, n = t.a_size;
  t.count_holds = t.count_sum >= t.repr_mass;
  t.mass_holds = 2 * P * t.repr_mass >= BigInt(t.product_hits) * E;
  t.exact_holds = BigInt(t.hits) * 2 * P * n >= BigInt(t.product_hits) * E;
  const Rational a2 = t.alpha * t.alpha;
  const Rational density = P == 0 ? Rational(0) : Rational(BigInt(t.product_hits), P);
  t.dyadic_bound = a2 / (4 * bit_length(std::uint64_t(t.a_size))) * density;
  const Rational left(BigInt(t.hits), n);
  t.dyadic_holds = left >= t.dyadic_bound;
  const Rational ln = log_lower(floor_of(Rational(n) / t.alpha));
  t.natural_log_holds = left >= a2 / (4 * (1 + ln)) * density;
  return t;
}

std::vector<std::string> check_structure_transfer(const GroupAction& action, const ElementSet& A,
                                                  const ClosureCertificate& closure, const ElementSet& S,
                                                  const StructureTransfer& t) {
  CheckLog log;
  const std::string slug = "bring-structure-back";
  StructureTransfer fresh;
  try {
    fresh = bring_structure_back(action, A, closure, S);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, t, fresh);
  log.require(A.contains(t.anchor), slug, "anchor outside A");
  std::uint64_t best = 0;
  for (const auto& a : A) best = std::max(best, translate_hits(action, A, a, S));
  log.require(best == t.hits && translate_hits(action, A, t.anchor, S) == t.hits, slug,
              "anchor does not attain max |A ∩ aS|");
  log.require(t.count_holds && t.exact_holds && t.dyadic_holds, slug, "counting chain fails");
  if (closure.uniform_holds.value_or(false)) log.require(t.mass_holds, slug, "representation mass below floor");
  return log.take();
}

TriplingCertificate extract_small_tripling(const GroupAction& action, const ElementSet& A, const ElementSet& B,
                                           const ProductRelation& E, const Rational& alpha, const Rational& growth) {
  require_unit_fraction(alpha);
  if (growth <= 0) throw InvalidArgument("K must be positive");
  require_nonempty_set(A.empty(), "A");
  require_nonempty_set(B.empty(), "B");
  for (const auto& [a, b] : E)
    if (!A.contains(a) || !B.contains(b)) throw InvalidArgument("relation pair outside A x B");
  TriplingCertificate c;
  c.alpha = alpha;
  c.growth = growth;
  c.a_size = A.size();
  c.b_size = B.size();
  c.relation_size = E.size();
  const BigInt ab = BigInt(A.size()) * B.size();
  if (!(Rational(BigInt(E.size())) >= alpha * ab))
    throw HypothesisNotMet("hypothesis not met: |E| = " + std::to_string(E.size()) + " is below alpha|A||B|");
  c.product_size = partial_product(action, E).size();
  if (!(Rational(BigInt(c.product_size) * c.product_size) <= growth * growth * ab))
    throw HypothesisNotMet("hypothesis not met: |A *_E B| = " + std::to_string(c.product_size) +
                           " exceeds K sqrt(|A||B|)");

  std::map<GroupElement, std::vector<GroupElement>> partners;
  for (const auto& [a, b] : E) partners[a].push_back(b);
  c.degree_floor = Rational(BigInt(E.size()), BigInt(2) * A.size());
  std::vector<GroupElement> popular;
  for (const auto& [a, nb] : partners)
    if (Rational(BigInt(nb.size())) >= c.degree_floor) popular.push_back(a);
  c.popular = ElementSet::from_sorted_unique(std::move(popular));
  c.anchor = c.popular.front();
  c.common_floor = Rational(BigInt(E.size()) * E.size(), BigInt(8) * A.size() * B.size() * B.size());
  const auto anchor_partners = ElementSet::from_sorted_unique(partners[c.anchor]);
  const auto anchor_inv = action.inv(c.anchor);
  std::vector<GroupElement> s{action.identity()};
  for (const auto& a : c.popular) {
    auto common = intersection_size(anchor_partners, ElementSet::from_sorted_unique(partners[a]));
    if (Rational(BigInt(common)) >= c.common_floor) s.push_back(action.mul(anchor_inv, a));
  }
  c.set = ElementSet(std::move(s));
  c.set_size = c.set.size();
  c.cube_size = power_set(action, c.set, 3).size();
  c.size_ratio = Rational(BigInt(c.set_size), BigInt(A.size()));
  c.tripling_ratio = Rational(BigInt(c.cube_size), BigInt(c.set_size));
  c.subset_holds = true;
  for (const auto& x : c.set) c.subset_holds = c.subset_holds && A.contains(action.mul(c.anchor, x));
  return c;
}

std::vector<std::string> check_tripling(const GroupAction& action, const ElementSet& A, const ElementSet& B,
                                        const ProductRelation& E, const TriplingCertificate& c) {
  CheckLog log;
  const std::string slug = "small-tripling-extraction";
  TriplingCertificate fresh;
  try {
    fresh = extract_small_tripling(action, A, B, E, c.alpha, c.growth);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, c, fresh);
  log.require(!c.set.empty() && c.set_size == c.set.size(), slug, "extracted set empty or miscounted");
  for (const auto& x : c.set)
    log.require(A.contains(action.mul(c.anchor, x)), slug,
                "element " + action.format_element(x) + " not in anchor^-1 A");
  auto sq = kernels::serial::product_set(action, c.set, c.set);
  log.require(kernels::serial::product_set(action, sq, c.set).size() == c.cube_size, slug,
              "|S^3| differs from direct product");
  return log.take();
}

SmallTriplingFromSymmetry extract_from_symmetry(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                        const Rational& alpha, const Rational& growth,
                                        const std::optional<ElementSet>& candidates) {
  require_unit_fraction(alpha);
  require_nonempty_set(A.empty(), "A");
  require_nonempty_set(Y.empty(), "Y");
  require_members(action, A, Y, alpha);
  SmallTriplingFromSymmetry out;
  out.alpha = alpha;
  out.growth = growth;
  out.a_size = A.size();
  const Rational level = alpha * alpha / 2;
  out.sym_size = symmetry_set(action, Y, level, candidates).members.size();
  out.sym_holds = Rational(BigInt(out.sym_size)) <= growth * BigInt(A.size());
  if (!out.sym_holds)
    throw HypothesisNotMet("hypothesis not met: |Sym_{alpha^2/2}(Y)| = " + std::to_string(out.sym_size) +
                           " exceeds K|A|");
  auto inv = inverse_set(action, A);
  out.closure = approximate_closure(action, inv, Y, alpha);
  out.tripling = extract_small_tripling(action, A, inv, out.closure.relation, level, growth);
  out.inclusion_holds = out.tripling.subset_holds && A.contains(out.tripling.anchor);
  return out;
}

std::vector<std::string> check_extract_from_symmetry(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                     const std::optional<ElementSet>& candidates, const SmallTriplingFromSymmetry& c) {
  CheckLog log;
  const std::string slug = "approximate-closure";
  SmallTriplingFromSymmetry fresh;
  try {
    fresh = extract_from_symmetry(action, A, Y, c.alpha, c.growth, candidates);
  } catch (const std::exception& e) {
    log.fail("small-tripling-extraction", std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, "small-tripling-extraction", &action, c, fresh);
  auto inv = inverse_set(action, A);
  log.merge(check_closure(action, inv, Y, c.closure));
  log.merge(check_tripling(action, A, inv, c.closure.relation, c.tripling));
  log.require(c.inclusion_holds, "small-tripling-extraction", "anchor S not inside A");
  return log.take();
}

ApproxGroupCertificate approx_group_close(const GroupAction& action, const ElementSet& A) {
  require_nonempty_set(A.empty(), "A");
  ApproxGroupCertificate c;
  c.a_size = A.size();
  c.cube_size = power_set(action, A, 3).size();
  c.tripling = Rational(BigInt(c.cube_size), BigInt(c.a_size));
  c.closure = symmetrized_power(action, A, 3);
  c.closure_size = c.closure.size();
  c.symmetric = inverse_set(action, c.closure) == c.closure;
  c.has_identity = c.closure.contains(action.identity());
  c.contains_base = is_subset(A, c.closure);
  auto square = kernels::product_set(action, c.closure, c.closure);
  c.square_size = square.size();
  std::unordered_set<std::string> covered;
  std::vector<GroupElement> cover;
  for (const auto& p : square) {
    if (covered.count(p.bytes())) continue;
    cover.push_back(p);
    for (const auto& q : c.closure) covered.insert(action.mul(p, q).bytes());
  }
  c.cover = ElementSet(std::move(cover));
  c.cover_size = c.cover.size();
  c.cover_holds = true;
  for (const auto& p : square) c.cover_holds = c.cover_holds && covered.count(p.bytes());
  c.size_ratio = Rational(BigInt(c.closure_size), BigInt(c.a_size));
  return c;
}

std::vector<std::string> check_approx_group(const GroupAction& action, const ElementSet& A,
                                            const ApproxGroupCertificate& c) {
  CheckLog log;
  const std::string slug = "approximate-group-closure";
  ApproxGroupCertificate fresh;
  try {
    fresh = approx_group_close(action, A);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, c, fresh);
  log.require(c.symmetric && c.has_identity && c.contains_base, slug, "closure not symmetric or missing e or A");
  auto square = kernels::serial::product_set(action, c.closure, c.closure);
  for (const auto& p : square) {
    bool hit = false;
    for (const auto& x : c.cover) {
      if (c.closure.contains(action.mul(action.inv(x), p))) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      log.fail(slug, "element " + action.format_element(p) + " of A_(3)A_(3) not covered by X A_(3)");
      break;
    }
  }
  return log.take();
}

BsgTrace bsg_pipeline(const GroupAction& action, const ElementSet& A, const PointSet& Y, const Rational& alpha,
                      std::uint32_t depth, const BsgOptions& options) {
  require_unit_fraction(alpha);
  if (depth < 1) throw InvalidArgument("J must be at least 1");
  require_nonempty_set(A.empty(), "A");
  require_nonempty_set(Y.empty(), "Y");
  require_members(action, A, Y, alpha);

  BsgTrace t;
  t.mode = "pipeline";
  t.alpha = alpha;
  t.depth = depth;
  t.a_size = A.size();
  t.y_size = Y.size();
  t.final_alpha = iterated_alpha(alpha, depth);
  if (options.sym_upper) {
    t.sym_mode = "upper-bound";
    t.sym_upper = *options.sym_upper;
  } else {
    t.sym_mode = "exact";
    auto sym = symmetry_set(action, Y, t.final_alpha, options.candidates);
    t.sym_size = sym.members.size();
    t.sym_universe = sym.universe;
  }

  const auto A0 = symmetrize(action, A);
  const auto powers = dyadic_powers(action, A0, depth + 2);
  ElementSet cur = A0;
  Rational level_alpha = alpha;
  for (std::uint32_t j = 0; j <= depth; ++j) {
    BsgLevel L;
    L.index = j;
    L.alpha = level_alpha;
    L.set = cur;
    L.size = cur.size();
    L.overlaps = overlap_map(action, cur, Y);
    L.members_hold = all_meet(L.overlaps, cur, level_alpha, Y.size());
    L.inside_hold = j == 0 ? cur == symmetrize(action, A)
                           : is_subset(cur, kernels::product_set(action, t.levels.back().set, t.levels.back().set));
    if (j < powers.size()) L.power_holds = is_subset(cur, powers[j]);
    if (j < depth) {
      L.closure = uniform_approximate_closure(action, cur, Y, level_alpha);
      L.next_size = L.closure->product.size();
      L.ratio = Rational(BigInt(*L.next_size), BigInt(L.size));
      cur = L.closure->product;
      level_alpha = level_alpha * level_alpha / 2;
    }
    t.levels.push_back(std::move(L));
  }
  t.alpha_holds = level_alpha == t.final_alpha;

  const auto& first = t.levels.front();
  const auto& last = t.levels.back();
  t.telescoping = Rational(BigInt(last.size), BigInt(first.size));
  Rational prod = 1;
  t.chosen = 0;
  for (std::uint32_t j = 0; j < depth; ++j) {
    prod *= *t.levels[j].ratio;
    if (*t.levels[j].ratio < *t.levels[t.chosen].ratio) t.chosen = j;
  }
  t.telescoping_holds = prod == t.telescoping;
  const Rational sym_value = t.sym_size ? Rational(BigInt(*t.sym_size)) : *t.sym_upper;
  t.growth_power = sym_value / BigInt(A.size());
  t.statement_holds = t.telescoping <= t.growth_power;
  t.chosen_ratio = *t.levels[t.chosen].ratio;
  t.pigeonhole_holds = rational_pow(t.chosen_ratio, depth) <= t.telescoping;

  const auto& lv = t.levels[t.chosen];
  const auto& E = lv.closure->relation;
  const Rational lemma_alpha(BigInt(E.size()), BigInt(lv.size) * lv.size);
  t.tripling = extract_small_tripling(action, lv.set, lv.set, E, lemma_alpha, t.chosen_ratio);
  const auto& down = t.tripling.anchor;  // g*⁻¹
  t.anchor = action.inv(down);
  t.structured = t.tripling.set;
  t.structured_cube = t.tripling.cube_size;
  t.structured_tripling = t.tripling.tripling_ratio;
  const auto shifted = left_translate(action, down, t.structured);
  auto shifted_overlaps = overlap_map(action, shifted, Y);
  t.shift_holds = lv.set.contains(t.anchor) && is_subset(shifted, lv.set) &&
                  all_meet(shifted_overlaps, shifted, t.final_alpha, Y.size());
  if (depth < powers.size())
    t.shift_power_holds = powers[depth].contains(t.anchor) && is_subset(shifted, powers[depth]);

  // Walk the target back down the levels.
  BsgWalk& w = t.walk;
  w.target = options.target.value_or(t.structured);
  auto part = set_intersection(t.structured, w.target);
  ElementSet T = left_translate(action, down, part);
  w.level_hits.assign(t.chosen + 1, 0);
  w.level_hits[t.chosen] = T.size();
  std::vector<GroupElement> steps(t.chosen);
  std::vector<StructureTransfer> transfers(t.chosen);
  for (std::uint32_t j = t.chosen; j-- > 0;) {
    const auto& Lj = t.levels[j];
    transfers[j] = bring_structure_back(action, Lj.set, *Lj.closure, T);
    steps[j] = transfers[j].anchor;
    T = set_intersection(Lj.set, left_translate(action, steps[j], T));
    w.level_hits[j] = T.size();
  }
  w.steps = steps;
  w.transfers = std::move(transfers);
  GroupElement g = action.identity();
  for (const auto& a : steps) g = action.mul(g, a);
  g = action.mul(g, down);
  w.element = g;
  const auto gS = left_translate(action, g, w.target);
  w.hits = intersection_size(A, gS);
  w.inverse_hits = intersection_size(inverse_set(action, A), gS);
  w.symmetric_hits = intersection_size(A0, gS);
  w.walk_holds = is_subset(T, set_intersection(A0, gS));
  w.count_holds = w.hits + w.inverse_hits + 1 >= w.symmetric_hits;
  if (depth + 1 < powers.size()) w.power_holds = powers[depth + 1].contains(g);

  if (!part.empty()) {
    BsgCover c;
    c.part = part;
    c.rho = Rational(BigInt(part.size()), BigInt(t.structured.size()));
    c.shifted = left_translate(action, down, part);
    c.quotient_size = product_set(action, part, inverse_set(action, part)).size();
    c.cover = cover_symmetry(action, c.shifted, Y, t.final_alpha);
    c.conjugate_holds = c.cover.quotient_product_size == c.quotient_size;
    c.covered_floor = t.final_alpha * BigInt(part.size()) * BigInt(Y.size()) / (2 * BigInt(c.quotient_size));
    c.covered_holds = Rational(BigInt(c.cover.covered.size())) >= c.covered_floor;
    t.cover = std::move(c);
  }
  return t;
}

namespace {

std::uint64_t max_fixed_on(const GroupAction& action, const PointSet& Y, const ElementSet& universe,
                           GroupElement* witness) {
  std::uint64_t best = 0;
  const auto e = action.identity();
  for (const auto& g : universe) {
    if (g == e) continue;
    auto k = fixed_in(action, g, Y).size();
    if (k > best) {
      best = k;
      *witness = g;
    }
  }
  return best;
}

void fill_fix_flags(BsgTrace& t, std::uint32_t n) {
  if (!t.cover) return;
  auto& c = *t.cover;
  const BigInt b = c.part.size();
  const BigInt base = b * c.cover.centers.size();
  const BigInt sum = c.cover.stabilizer_repr_sum;
  if (n == 1) {
    c.free_holds = sum == base;
  } else {
    c.correction_holds = sum - base <= BigInt(n - 1) * (b * b - b);
  }
}

}  // namespace

BsgTrace bsg_free(const GroupAction& action, const ElementSet& A, const PointSet& Y, const Rational& alpha,
                  std::uint32_t depth, const BsgOptions& options) {
  require_unit_fraction(alpha);
  auto final_alpha = iterated_alpha(alpha, depth);
  auto bound = sym_bound_free(action, std::nullopt, Y, final_alpha, options.candidates);
  if (bound.free->max_coset > 1)
    throw HypothesisNotMet("hypothesis not met: action is not free on Y, " + std::to_string(bound.free->max_coset) +
                           " elements map " + action.format_point(bound.free->from) + " to " +
                           action.format_point(bound.free->to));
  BsgOptions opts = options;
  opts.sym_upper = bound.bound;
  auto t = bsg_pipeline(action, A, Y, alpha, depth, opts);
  t.mode = "free";
  t.bound_source = "free";
  t.fix_limit = 1;
  t.bound = std::move(bound);
  t.approx = approx_group_close(action, t.structured);
  fill_fix_flags(t, 1);
  return t;
}

BsgTrace bsg_almost_free(const GroupAction& action, const ElementSet& A, const PointSet& Y, const Rational& alpha,
                         std::uint32_t depth, std::uint32_t n, const BsgOptions& options) {
  require_unit_fraction(alpha);
  if (n < 1) throw InvalidArgument("n must be at least 1");
  auto final_alpha = iterated_alpha(alpha, depth);
  std::string source;
  auto universe = candidate_universe(action, Y, options.candidates, &source);
  GroupElement witness;
  auto fixed = max_fixed_on(action, Y, universe, &witness);
  if (fixed >= n)
    throw HypothesisNotMet("hypothesis not met: " + action.format_element(witness) + " fixes " +
                           std::to_string(fixed) + " points of Y, n = " + std::to_string(n));

  std::optional<SymBoundReport> best;
  std::string best_source;
  try {
    best = sym_bound_almost_free(action, Y, final_alpha, n, options.candidates);
    best_source = "almost-free";
  } catch (const HypothesisNotMet&) {
  }
  try {
    auto generic = sym_bound_free(action, std::nullopt, Y, final_alpha, options.candidates);
    if (!best || generic.bound < best->bound) {
      best = std::move(generic);
      best_source = "free";
    }
  } catch (const CapabilityMissing&) {
  }
  Rational upper;
  auto group = action.elements();
  if (best) upper = best->bound;
  if (group && (!best || Rational(BigInt(group->size())) < upper)) {
    upper = Rational(BigInt(group->size()));
    best.reset();
    best_source = "group-order";
  }
  if (best_source.empty()) throw CapabilityMissing("no certified upper bound on the symmetry set");
  BsgOptions opts = options;
  opts.sym_upper = upper;
  auto t = bsg_pipeline(action, A, Y, alpha, depth, opts);
  t.mode = "almost-free";
  t.bound_source = best_source;
  t.fix_limit = n;
  t.bound = std::move(best);
  fill_fix_flags(t, n);
  return t;
}

std::vector<std::string> check_bsg(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                   const BsgOptions& options, const BsgTrace& t) {
  CheckLog log;
  const std::string slug = t.mode == "free" ? "bsg-free" : t.mode == "almost-free" ? "bsg-almost-free" : "bsg-pipeline";
  BsgTrace fresh;
  try {
    if (t.mode == "free") {
      fresh = bsg_free(action, A, Y, t.alpha, t.depth, options);
    } else if (t.mode == "almost-free") {
      fresh = bsg_almost_free(action, A, Y, t.alpha, t.depth, t.fix_limit.value_or(0), options);
    } else if (t.mode == "pipeline") {
      fresh = bsg_pipeline(action, A, Y, t.alpha, t.depth, options);
    } else {
      log.fail(slug, "unknown mode '" + t.mode + "'");
      return log.take();
    }
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, t, fresh);
  if (t.levels.size() != t.depth + 1 || t.chosen >= t.depth) {
    log.fail(slug, "level records do not match J");
    return log.take();
  }

  log.require(t.final_alpha == iterated_alpha(t.alpha, t.depth), slug, "alpha_J is not 2(alpha/2)^(2^J)");
  Rational a = t.alpha;
  for (const auto& L : t.levels) {
    log.require(L.alpha == a, slug, "level " + std::to_string(L.index) + " alpha breaks the recursion");
    a = a * a / 2;
    auto counts = kernels::serial::overlaps(action, L.set, Y);
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (!meets_fraction(counts[i], L.alpha, Y.size()))
        log.fail(slug, "level " + std::to_string(L.index) + " member " + action.format_element(L.set[i]) +
                           " below alpha_j");
  }
  log.require(t.levels.front().set == symmetrize(action, A), slug, "A_0 is not A ∪ A^-1 ∪ {e}");
  Rational prod = 1, best;
  for (std::uint32_t j = 0; j < t.depth; ++j) {
    const auto& L = t.levels[j];
    if (!L.closure) {
      log.fail(slug, "missing closure at level " + std::to_string(j));
      return log.take();
    }
    log.merge(check_closure(action, L.set, Y, *L.closure));
    log.require(L.closure->product == t.levels[j + 1].set, slug, "A_{j+1} differs from the closure product");
    Rational r(BigInt(t.levels[j + 1].set.size()), BigInt(L.set.size()));
    prod *= r;
    if (j == 0 || r < best) best = r;
  }
  log.require(prod == Rational(BigInt(t.levels.back().set.size()), BigInt(t.levels.front().set.size())), slug,
              "telescoping product fails");
  log.require(t.chosen_ratio == best, slug, "chosen level does not minimize the growth ratio");
  log.require(rational_pow(best, t.depth) <= prod, slug, "pigeonhole inequality fails");
  log.require(t.telescoping <= t.growth_power, slug, "|A_J|/|A_0| exceeds K^J");

  const auto& lv = t.levels[t.chosen];
  log.merge(check_tripling(action, lv.set, lv.set, lv.closure->relation, t.tripling));
  log.require(action.inv(t.anchor) == t.tripling.anchor && t.structured == t.tripling.set, slug,
              "anchor or structured set differs from the extraction");
  log.require(lv.set.contains(t.anchor), slug, "g* outside A_{j*}");
  auto shifted = left_translate(action, action.inv(t.anchor), t.structured);
  log.require(is_subset(shifted, lv.set), slug, "g*^-1 A_* not inside A_{j*}");
  auto counts = kernels::serial::overlaps(action, shifted, Y);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (!meets_fraction(counts[i], t.final_alpha, Y.size()))
      log.fail(slug, "shifted element " + action.format_element(shifted[i]) + " below alpha_J");

  const auto& w = t.walk;
  if (w.steps.size() != t.chosen || w.transfers.size() != t.chosen) {
    log.fail(slug, "walk length differs from j*");
  } else {
    ElementSet T = left_translate(action, action.inv(t.anchor), set_intersection(t.structured, w.target));
    for (std::uint32_t j = t.chosen; j-- > 0;) {
      const auto& Lj = t.levels[j];
      log.require(Lj.set.contains(w.steps[j]), slug, "walk step outside A_j");
      log.merge(check_structure_transfer(action, Lj.set, *Lj.closure, T, w.transfers[j]));
      T = set_intersection(Lj.set, left_translate(action, w.steps[j], T));
    }
    GroupElement g = action.identity();
    for (const auto& s : w.steps) g = action.mul(g, s);
    g = action.mul(g, action.inv(t.anchor));
    log.require(g == w.element, slug, "walk element is not the product of its steps");
    auto gS = left_translate(action, g, w.target);
    log.require(is_subset(T, gS) && is_subset(T, t.levels.front().set), slug, "walked set escapes A_0 ∩ gS");
    log.require(intersection_size(A, gS) == w.hits, slug, "|A ∩ gS| differs");
  }
  if (t.cover) {
    log.merge(check_cover(action, t.cover->shifted, Y, t.cover->cover));
    log.require(t.cover->covered_holds && t.cover->conjugate_holds, slug, "covered part below its floor");
    if (t.cover->free_holds) log.require(*t.cover->free_holds, slug, "stabilizer sum exceeds |B||Z| for a free action");
    if (t.cover->correction_holds)
      log.require(*t.cover->correction_holds, slug, "fixed-point correction exceeds (n-1)(|B|^2-|B|)");
  }
  if (t.bound) log.merge(check_sym_bound(action, std::nullopt, Y, options.candidates, *t.bound));
  if (t.approx) log.merge(check_approx_group(action, t.structured, *t.approx));
  return log.take();
}

}  // namespace gacomb
