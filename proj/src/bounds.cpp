#include "gacomb/bounds.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "gacomb/cert_io.hpp"
#include "gacomb/check.hpp"
#include "gacomb/core.hpp"
#include "gacomb/error.hpp"
#include "gacomb/kernels.hpp"
#include "gacomb/modular.hpp"
#include "gacomb/statistics.hpp"

namespace gacomb {
namespace {

constexpr std::uint64_t kTupleCap = 1000000;
constexpr std::uint64_t kWorkCap = 20000000;

BigInt falling(std::uint64_t n, std::uint32_t k) {
  BigInt out = 1;
  for (std::uint32_t i = 0; i < k; ++i) out *= BigInt(n - i);
  return out;
}

BigInt big_pow(std::uint64_t base, std::uint32_t exp) { return boost::multiprecision::pow(BigInt(base), exp); }

ElementSet members_of(const GroupAction& action, const ElementSet& universe, const PointSet& Y,
                      const Rational& alpha) {
  auto counts = kernels::overlaps(action, universe, Y);
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (meets_fraction(counts[i], alpha, Y.size())) out.push_back(universe[i]);
  return ElementSet::from_sorted_unique(std::move(out));
}

void attach_measured(SymBoundReport& r, ElementSet members, std::string universe) {
  r.universe = std::move(universe);
  r.measured = members.size();
  r.members = std::move(members);
  r.slack = Rational(BigInt(*r.measured)) / r.bound;
  r.holds = Rational(BigInt(*r.measured)) <= r.bound;
}

std::optional<ElementSet> try_universe(const GroupAction& action, const PointSet& Y,
                                       const std::optional<ElementSet>& candidates, std::string* source) {
  try {
    return candidate_universe(action, Y, candidates, source);
  } catch (const CapabilityMissing&) {
    return std::nullopt;
  }
}

void require_points(const PointSet& Y, const char* what) {
  if (Y.empty()) throw InvalidArgument(std::string(what) + ": Y is empty");
}

// Multiplication table of an enumerable group, elements in canonical order.
struct GroupTable {
  std::vector<GroupElement> elems;
  std::vector<std::uint32_t> mul;
  std::vector<std::uint32_t> inv;
  std::uint32_t identity = 0;

  std::uint32_t n() const { return static_cast<std::uint32_t>(elems.size()); }
  std::uint32_t times(std::uint32_t a, std::uint32_t b) const { return mul[std::size_t(a) * elems.size() + b]; }
  std::uint32_t index(const GroupElement& g) const {
    auto it = std::lower_bound(elems.begin(), elems.end(), g);
    if (it == elems.end() || *it != g) throw InvalidArgument("element outside the enumerated group");
    return static_cast<std::uint32_t>(it - elems.begin());
  }

  // Sorted member indices of the closure of gens.
  std::vector<std::uint32_t> closure(const std::vector<std::uint32_t>& gens) const {
    std::vector<char> seen(elems.size(), 0);
    std::vector<std::uint32_t> members{identity};
    seen[identity] = 1;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (auto s : gens) {
        auto x = times(members[i], s);
        if (!seen[x]) {
          seen[x] = 1;
          members.push_back(x);
        }
      }
    }
    std::sort(members.begin(), members.end());
    return members;
  }
};

GroupTable build_table(const GroupAction& action, std::size_t cap) {
  auto all = action.elements();
  if (!all) throw CapabilityMissing("group is not enumerable");
  if (all->size() > cap)
    throw ClosureTooLarge("group order " + std::to_string(all->size()) + " exceeds cap " + std::to_string(cap));
  GroupTable t;
  t.elems = all->items();
  const std::size_t n = t.elems.size();
  t.mul.resize(n * n);
  t.inv.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.mul[i * n + j] = t.index(action.mul(t.elems[i], t.elems[j]));
    t.inv[i] = t.index(action.inv(t.elems[i]));
  }
  t.identity = t.index(action.identity());
  return t;
}

const LinearFpAction& require_sl2(const GroupAction& action, bool small_prime) {
  auto* sl2 = dynamic_cast<const LinearFpAction*>(&action);
  if (!sl2 || sl2->dimension() != 2 || !sl2->special())
    throw InvalidArgument("action must be SL_2(F_p) acting on F_p^2");
  if (small_prime) {
    auto p = sl2->prime();
    if (p != 2 && p != 3 && p != 5 && p != 7) throw InvalidArgument("p must be one of 2, 3, 5, 7");
  }
  return *sl2;
}

std::vector<std::int64_t> residues(std::vector<std::int64_t> v, std::int64_t p, const char* name) {
  for (auto x : v)
    if (x < 0 || x >= p) throw InvalidArgument(std::string(name) + " holds a value outside [0, p)");
  if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end())
    throw InvalidArgument(std::string(name) + " must be sorted and duplicate-free");
  return v;
}

// Rank oracle for subsets of Y under a linear action.
std::function<std::size_t(const std::vector<Point>&)> rank_oracle(const GroupAction& action, std::uint32_t* dim) {
  if (auto* fp = dynamic_cast<const LinearFpAction*>(&action)) {
    *dim = static_cast<std::uint32_t>(fp->dimension());
    return [fp](const std::vector<Point>& pts) {
      MatrixFp rows;
      for (const auto& x : pts) rows.push_back(fp->vector(x));
      return rows.empty() ? std::size_t(0) : rank_fp(rows, fp->prime());
    };
  }
  if (auto* q = dynamic_cast<const LinearQAction*>(&action)) {
    *dim = static_cast<std::uint32_t>(q->dimension());
    return [q](const std::vector<Point>& pts) {
      MatrixQ rows;
      for (const auto& x : pts) rows.push_back(q->vector(x));
      return rows.empty() ? std::size_t(0) : rank_q(rows);
    };
  }
  throw InvalidArgument("linear bound needs a linear action over F_p or Q");
}

// Calls f on every k-subset of {0..n-1} as an index vector.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k) {
  BigInt b = 1;
  for (std::uint64_t i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return b > kTupleCap ? kTupleCap + 1 : static_cast<std::uint64_t>(b);
}

}  // namespace

SymBoundReport sym_bound_free(const GroupAction& action, const std::optional<ElementSet>& A, const PointSet& Y,
                              const Rational& alpha, const std::optional<ElementSet>& candidates) {
  require_unit_fraction(alpha);
  require_points(Y, "free bound");
  FreeBoundDetail d;
  std::optional<ElementSet> group;
  if (A) {
    d.a_source = "supplied";
    d.a_size = A->size();
  } else if ((group = action.elements())) {
    d.a_source = "enumeration";
    d.a_size = group->size();
  } else if (action.has_transporter()) {
    d.a_source = "transporter";
  } else {
    throw CapabilityMissing("free bound needs a supplied set, an enumerable group, or transporters");
  }
  const ElementSet* pool = A ? &*A : (group ? &*group : nullptr);
  bool first = true;
  for (const auto& y : Y) {
    for (const auto& y2 : Y) {
      std::uint64_t count = 0;
      if (action.has_transporter()) {
        auto t = action.transporter(y, y2);
        count = pool ? intersection_size(t, *pool) : t.size();
      } else {
        count = transporter_in(action, *pool, y, y2).size();
      }
      d.incidence_sum = checked_add(d.incidence_sum, count);
      if (first || count > d.max_coset) {
        d.max_coset = count;
        d.from = y;
        d.to = y2;
        first = false;
      }
    }
  }
  SymBoundReport r;
  r.kind = "free";
  r.alpha = alpha;
  r.y_size = Y.size();
  r.bound = Rational(BigInt(Y.size()) * d.max_coset) / alpha;
  if (A) {
    attach_measured(r, members_of(action, *A, Y, alpha), "supplied-set");
  } else {
    std::string source;
    if (auto universe = try_universe(action, Y, candidates, &source))
      attach_measured(r, members_of(action, *universe, Y, alpha), source);
  }
  if (r.measured) d.incidence_holds = alpha * BigInt(Y.size()) * BigInt(*r.measured) <= BigInt(d.incidence_sum);
  if (!A && group) {
    if (auto space = action.points()) {
      PointSet orbit = image_set(action, *group, PointSet{space->front()});
      if (orbit == *space) {
        d.group_size = group->size();
        d.space_size = space->size();
        d.transitive_bound = Rational(BigInt(Y.size()) * group->size(), BigInt(space->size())) / alpha;
        if (r.measured) d.transitive_holds = Rational(BigInt(*r.measured)) <= *d.transitive_bound;
      }
    }
  }
  r.free = std::move(d);
  return r;
}

SymBoundReport sym_bound_almost_free(const GroupAction& action, const PointSet& Y, const Rational& alpha,
                                     std::uint32_t n, const std::optional<ElementSet>& candidates) {
  require_unit_fraction(alpha);
  require_points(Y, "almost-free bound");
  if (n < 1) throw InvalidArgument("n must be at least 1");
  const std::uint64_t ysize = Y.size();
  if (!(alpha * BigInt(ysize) > (1 + alpha) * BigInt(n)))
    throw HypothesisNotMet("hypothesis not met: |Y| = " + std::to_string(ysize) + " must exceed (1 + 1/alpha)n = " +
                           format_rational((1 + 1 / alpha) * BigInt(n)));
  std::string source;
  ElementSet universe = candidate_universe(action, Y, candidates, &source);
  AlmostFreeDetail d;
  d.n = n;
  const auto e = action.identity();
  for (const auto& g : universe) {
    if (g == e) continue;
    std::uint64_t fixed = fixed_in(action, g, Y).size();
    if (!d.fix_witness || fixed > d.max_fixed) {
      d.max_fixed = fixed;
      d.fix_witness = g;
    }
  }
  d.fix_holds = d.max_fixed < n;
  if (!d.fix_holds)
    throw HypothesisNotMet("hypothesis not met: " + action.format_element(*d.fix_witness) + " fixes " +
                           std::to_string(d.max_fixed) + " points of Y, n = " + std::to_string(n));
  d.min_overlap = static_cast<std::uint64_t>(ceil_of(alpha * BigInt(ysize)));
  d.tuple_count = falling(ysize, n);
  d.tuple_alpha = Rational(falling(d.min_overlap, n), d.tuple_count);
  Rational alpha_n = rational_pow(alpha, n);
  d.epsilon = 1 - d.tuple_alpha / alpha_n;
  d.epsilon_cap = Rational(BigInt(n)) / (alpha * BigInt(ysize - n));
  d.epsilon_holds = d.epsilon <= d.epsilon_cap;
  d.tuple_bound = Rational(d.tuple_count) / d.tuple_alpha;

  SymBoundReport r;
  r.kind = "almost-free";
  r.alpha = alpha;
  r.y_size = ysize;
  Rational factor = 1 + Rational(BigInt(n)) / (alpha * BigInt(ysize) - (1 + alpha) * BigInt(n));
  r.bound = factor * Rational(big_pow(ysize, n)) / alpha_n;
  d.closed_form_holds = d.tuple_bound <= r.bound;
  attach_measured(r, members_of(action, universe, Y, alpha), source);
  *r.holds = *r.holds && Rational(BigInt(*r.measured)) <= d.tuple_bound;

  if (d.tuple_count * BigInt(r.members->size() + 1) <= kWorkCap) {
    // Y^(n) as index tuples; g maps a tuple into Y^(n) iff it maps every coordinate into Y.
    const auto& pts = Y.items();
    std::vector<std::uint32_t> tuples;
    std::vector<std::uint32_t> cur;
    std::function<void()> rec = [&] {
      if (cur.size() == n) {
        tuples.insert(tuples.end(), cur.begin(), cur.end());
        return;
      }
      for (std::uint32_t i = 0; i < pts.size(); ++i) {
        if (std::find(cur.begin(), cur.end(), i) != cur.end()) continue;
        cur.push_back(i);
        rec();
        cur.pop_back();
      }
    };
    rec();
    const std::uint64_t count = tuples.size() / n;
    bool ok = true;
    std::vector<char> inside(pts.size());
    for (const auto& g : *r.members) {
      for (std::size_t i = 0; i < pts.size(); ++i) inside[i] = Y.contains(action.act(g, pts[i]));
      std::uint64_t hits = 0;
      for (std::uint64_t t = 0; t < count; ++t) {
        bool all = true;
        for (std::uint32_t k = 0; k < n && all; ++k) all = inside[tuples[t * n + k]];
        hits += all;
      }
      if (!meets_fraction(hits, d.tuple_alpha, count)) ok = false;
    }
    d.inclusion_checked = r.members->size();
    d.inclusion_holds = ok;
  }
  r.almost_free = std::move(d);
  return r;
}

SymBoundReport sym_bound_linear(const GroupAction& action, const PointSet& Y, const Rational& alpha,
                                const Rational& rho, const std::optional<ElementSet>& candidates) {
  require_unit_fraction(alpha);
  require_points(Y, "linear bound");
  LinearDetail d;
  auto rank = rank_oracle(action, &d.dimension);
  const std::uint64_t ysize = Y.size();
  const std::uint32_t n = d.dimension;
  if (!(rho * BigInt(ysize) > 1) || !(rho < alpha)) throw InvalidArgument("rho must satisfy 1/|Y| < rho < alpha");
  d.rho = rho;

  const auto& pts = Y.items();
  std::uint64_t subsets = 0;
  for (std::uint32_t k = 0; k < n; ++k) subsets += binomial_capped(ysize, k);
  if (subsets > kTupleCap) throw InvalidArgument("too many spanning subsets to check the concentration hypothesis");
  bool first = true;
  for (std::uint32_t k = 0; k < n; ++k) {
    for_each_subset(pts.size(), k, [&](const std::vector<std::size_t>& idx) {
      std::vector<Point> span;
      for (auto i : idx) span.push_back(pts[i]);
      auto r0 = rank(span);
      std::uint64_t inside = 0;
      for (const auto& y : pts) {
        span.push_back(y);
        if (rank(span) == r0) ++inside;
        span.pop_back();
      }
      ++d.subspaces_checked;
      if (first || inside > d.max_in_subspace) {
        d.max_in_subspace = inside;
        d.densest_span = PointSet(span);
        first = false;
      }
    });
  }
  d.concentration_holds = Rational(BigInt(d.max_in_subspace)) <= rho * BigInt(ysize);
  if (!d.concentration_holds) {
    std::string names;
    for (const auto& x : d.densest_span) names += (names.empty() ? "" : ", ") + action.format_point(x);
    throw HypothesisNotMet("hypothesis not met: the span of {" + names + "} holds " +
                           std::to_string(d.max_in_subspace) + " points of Y, above rho|Y|");
  }

  BigInt space = big_pow(ysize, n);
  if (space > kTupleCap) throw InvalidArgument("|Y|^n too large to materialize basis tuples");
  d.tuple_space = static_cast<std::uint64_t>(space);
  std::vector<std::vector<std::uint32_t>> basis;
  std::vector<std::uint32_t> idx(n, 0);
  for (std::uint64_t t = 0; t < d.tuple_space; ++t) {
    std::uint64_t v = t;
    for (std::uint32_t i = n; i-- > 0;) {
      idx[i] = static_cast<std::uint32_t>(v % ysize);
      v /= ysize;
    }
    std::vector<Point> tuple;
    for (auto i : idx) tuple.push_back(pts[i]);
    if (rank(tuple) == n) basis.push_back(idx);
  }
  d.basis_tuples = basis.size();
  if (basis.empty()) throw HypothesisNotMet("hypothesis not met: Y does not span the space");
  for (auto i : basis.front()) d.spanning_tuple.push_back(pts[i]);
  if (auto group = action.elements()) {
    d.stabilizer_source = "enumeration";
    for (const auto& g : *group) {
      bool fixes = true;
      for (const auto& x : d.spanning_tuple) fixes = fixes && action.act(g, x) == x;
      if (fixes) ++d.stabilizer_size;
    }
  } else {
    // A matrix fixing a basis is the identity.
    d.stabilizer_source = "matrix";
    d.stabilizer_size = 1;
  }
  Rational inv_y(BigInt(1), BigInt(ysize));
  d.basis_alpha = (alpha - inv_y) * rational_pow(alpha - rho, n - 1);
  d.lemma_bound = Rational(BigInt(d.stabilizer_size) * d.basis_tuples) / d.basis_alpha;

  SymBoundReport r;
  r.kind = "linear";
  r.alpha = alpha;
  r.y_size = ysize;
  r.bound = Rational(space) / d.basis_alpha;
  std::string source;
  if (auto universe = try_universe(action, Y, candidates, &source)) {
    attach_measured(r, members_of(action, *universe, Y, alpha), source);
    d.lemma_holds = Rational(BigInt(*r.measured)) <= d.lemma_bound;
    if (BigInt(basis.size()) * BigInt(r.members->size()) <= kWorkCap) {
      std::uint64_t min_count = 0, sum = 0;
      bool any = false;
      for (const auto& g : *r.members) {
        std::vector<char> in_y(ysize);
        for (std::size_t i = 0; i < ysize; ++i) in_y[i] = Y.contains(action.act(g, pts[i]));
        std::uint64_t count = 0;
        for (const auto& t : basis) {
          bool all = true;
          for (auto i : t) all = all && in_y[i];
          if (all) ++count;
        }
        min_count = any ? std::min(min_count, count) : count;
        any = true;
        sum += count;
      }
      if (any) {
        d.min_member_count = min_count;
        d.member_count_sum = sum;
        d.member_counts_hold = meets_fraction(min_count, d.basis_alpha, d.tuple_space) &&
                               BigInt(sum) <= BigInt(d.stabilizer_size) * d.basis_tuples * d.tuple_space;
      }
    }
  }
  r.linear = std::move(d);
  return r;
}

SymBoundReport affine_incidence_sym_bound(const GroupAction& action, const PointSet& Y, const Rational& alpha) {
  if (!dynamic_cast<const AffineFpAction*>(&action)) throw InvalidArgument("affine incidence bound needs Aff(1, F_p)");
  require_unit_fraction(alpha);
  require_points(Y, "affine incidence bound");
  if (!(alpha * BigInt(Y.size()) > 2)) throw HypothesisNotMet("hypothesis not met: alpha|Y| must exceed 2");
  SymBoundReport r;
  r.kind = "affine-incidence";
  r.alpha = alpha;
  r.y_size = Y.size();
  Rational gap = alpha - Rational(BigInt(2), BigInt(Y.size()));
  r.bound = Rational(BigInt(Y.size()) * Y.size()) / (gap * gap);
  AffineDetail d;
  std::string source;
  if (auto universe = try_universe(action, Y, std::nullopt, &source)) {
    attach_measured(r, members_of(action, *universe, Y, alpha), source);
    auto counts = kernels::overlaps(action, *r.members, Y);
    std::uint64_t incidences = 0;
    for (auto c : counts) incidences += c;
    d.incidences = incidences;
    BigInt s = *r.measured;
    BigInt y2 = BigInt(Y.size()) * Y.size();
    d.rich_holds = alpha * BigInt(Y.size()) * s <= BigInt(incidences);
    BigInt excess = BigInt(incidences) - 2 * s;
    d.incidence_holds = excess <= 0 || excess * excess <= y2 * y2 * s;
  }
  r.affine = std::move(d);
  return r;
}

std::vector<std::string> check_sym_bound(const GroupAction& action, const std::optional<ElementSet>& A,
                                         const PointSet& Y, const std::optional<ElementSet>& candidates,
                                         const SymBoundReport& report) {
  CheckLog log;
  const std::string slug = report.kind == "free"          ? "generic-symmetry-bound"
                           : report.kind == "almost-free" ? "almost-free-bound"
                           : report.kind == "linear"      ? "linear-bound"
                                                          : "affine-incidence-bound";
  SymBoundReport fresh;
  try {
    if (report.kind == "free") {
      fresh = sym_bound_free(action, A, Y, report.alpha, candidates);
    } else if (report.kind == "almost-free") {
      if (!report.almost_free) {
        log.fail(slug, "missing almost-free detail");
        return log.take();
      }
      fresh = sym_bound_almost_free(action, Y, report.alpha, report.almost_free->n, candidates);
    } else if (report.kind == "linear") {
      if (!report.linear) {
        log.fail(slug, "missing linear detail");
        return log.take();
      }
      fresh = sym_bound_linear(action, Y, report.alpha, report.linear->rho, candidates);
    } else if (report.kind == "affine-incidence") {
      fresh = affine_incidence_sym_bound(action, Y, report.alpha);
    } else {
      log.fail(slug, "unknown bound kind " + report.kind);
      return log.take();
    }
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, report, fresh);

  if (report.members) {
    auto counts = kernels::serial::overlaps(action, *report.members, Y);
    for (std::size_t i = 0; i < counts.size(); ++i)
      log.require(meets_fraction(counts[i], report.alpha, Y.size()), slug,
                  "recorded member " + action.format_element((*report.members)[i]) + " has overlap " +
                      std::to_string(counts[i]) + " below alpha|Y|");
    log.require(report.measured == report.members->size(), slug, "measured size differs from member count");
    if (report.measured)
      log.require(Rational(BigInt(*report.measured)) <= report.bound, slug,
                  "measured " + std::to_string(*report.measured) + " exceeds bound " + format_rational(report.bound));
  }
  if (report.free) {
    const auto& d = *report.free;
    log.require(report.bound * report.alpha == BigInt(Y.size()) * d.max_coset, slug, "bound is not |Y|M/alpha");
  }
  if (report.almost_free) {
    const auto& d = *report.almost_free;
    Rational factor =
        1 + Rational(BigInt(d.n)) / (report.alpha * BigInt(Y.size()) - (1 + report.alpha) * BigInt(d.n));
    log.require(report.bound == factor * Rational(big_pow(Y.size(), d.n)) / rational_pow(report.alpha, d.n), slug,
                "bound differs from the closed form");
    log.require(d.epsilon_holds && d.closed_form_holds, slug, "epsilon or tuple comparison fails");
    if (d.inclusion_holds) log.require(*d.inclusion_holds, slug, "a member misses the distinct-tuple symmetry set");
  }
  if (report.linear) {
    const auto& d = *report.linear;
    log.require(report.bound * d.basis_alpha == Rational(big_pow(Y.size(), d.dimension)), slug,
                "bound differs from |Y|^n / alpha_*");
    if (d.member_counts_hold) log.require(*d.member_counts_hold, slug, "a member maps too few basis tuples into Y^n");
    if (d.lemma_holds) log.require(*d.lemma_holds, slug, "measured size exceeds the basis-tuple bound");
  }
  if (report.affine) {
    const auto& d = *report.affine;
    if (d.rich_holds) log.require(*d.rich_holds && *d.incidence_holds, slug, "incidence inequalities fail");
  }
  return log.take();
}

IncidenceScan sl2_incidence_scan(const GroupAction& action, const ElementSet& A, const std::vector<std::int64_t>& xs,
                                 const std::vector<std::int64_t>& ys, const Rational& threshold) {
  const auto& sl2 = require_sl2(action, false);
  const auto p = sl2.prime();
  if (!is_prime(p)) throw InvalidArgument("p must be prime");
  if (threshold <= 0) throw InvalidArgument("threshold must be positive");
  IncidenceScan out;
  out.p = p;
  out.a_size = A.size();
  out.xs = residues(xs, p, "X");
  out.ys = residues(ys, p, "Y");
  out.threshold = threshold;
  ProjectiveSL2Action line(p);
  std::set<std::int64_t> yset(ys.begin(), ys.end());
  out.dual_holds = true;
  std::uint64_t total = 0;
  std::vector<GroupElement> rich;
  for (const auto& g : A) {
    auto m = sl2.matrix(g);
    const auto a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    std::uint64_t curve = 0;
    for (auto x : xs)
      for (auto y : ys)
        if (mod_norm(mod_mul(mod_mul(c, x, p), y, p) - mod_mul(a, x, p) + mod_mul(d, y, p) - b, p) == 0) ++curve;
    auto h = line.element({a, b, c, d});
    std::uint64_t mobius = 0;
    for (auto x : xs) {
      auto v = line.affine_value(line.act(h, line.affine_point(x)));
      if (v && yset.count(*v)) ++mobius;
    }
    out.dual_holds = out.dual_holds && curve == mobius;
    out.curve_count += curve;
    out.mobius_count += mobius;
    out.incidences.add(g, curve);
    total += curve;
    if (Rational(BigInt(curve)) >= threshold) {
      rich.push_back(g);
      out.rich_mass += curve;
    }
  }
  out.rich = ElementSet::from_sorted_unique(std::move(rich));
  const std::uint64_t poor = A.size() - out.rich.size();
  out.mass_holds = poor == 0 ? out.rich_mass == total
                             : Rational(BigInt(total - out.rich_mass)) < threshold * BigInt(poor);
  out.cap_holds = BigInt(out.rich_mass) <= BigInt(out.rich.size()) * std::min(xs.size(), ys.size());
  return out;
}

std::vector<std::string> check_incidence_scan(const GroupAction& action, const ElementSet& A,
                                              const IncidenceScan& c) {
  CheckLog log;
  const std::string slug = "rich-transformations";
  IncidenceScan fresh;
  try {
    fresh = sl2_incidence_scan(action, A, c.xs, c.ys, c.threshold);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, c, fresh);
  log.require(c.curve_count == c.mobius_count && c.dual_holds, slug, "curve and Moebius counts disagree");
  log.require(c.mass_holds && c.cap_holds, slug, "rich-set mass inequality fails");
  std::uint64_t sum = 0;
  for (const auto& [g, k] : c.incidences.entries()) sum += k;
  log.require(sum == c.curve_count, slug, "per-element incidences do not sum to the total");
  return log.take();
}

GrowthReport sl2_growth_check(const GroupAction& action, const ElementSet& A) {
  const auto& sl2 = require_sl2(action, true);
  if (A.empty()) throw InvalidArgument("growth check: A is empty");
  auto group = action.elements();
  GrowthReport r;
  r.p = sl2.prime();
  r.a_size = A.size();
  r.group_size = group->size();
  r.cube_size = power_set(action, A, 3).size();
  r.sym_cube_size = symmetrized_power(action, A, 3).size();
  r.generated_size = generated_subgroup(action, A, group->size()).size();
  r.generates = r.generated_size == r.group_size;
  r.closure_holds = r.sym_cube_size == r.group_size;
  r.growth_holds = big_pow(r.sym_cube_size, kGrowthDenominator) >= big_pow(r.a_size, kGrowthDenominator + 1);
  r.tripling_holds = 27 * big_pow(r.cube_size, 3) >= BigInt(r.sym_cube_size) * r.a_size * r.a_size;
  if (!r.generates) {
    r.branch = "non-generation";
  } else if (r.closure_holds) {
    r.branch = "closure";
  } else if (r.growth_holds && r.tripling_holds) {
    r.branch = "growth";
  } else {
    r.branch = "none";
  }
  return r;
}

std::vector<std::string> check_growth(const GroupAction& action, const ElementSet& A, const GrowthReport& c) {
  CheckLog log;
  const std::string slug = "sl2-growth";
  GrowthReport fresh;
  try {
    fresh = sl2_growth_check(action, A);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, c, fresh);
  auto cube = kernels::serial::product_set(action, kernels::serial::product_set(action, A, A), A);
  log.require(cube.size() == c.cube_size, slug, "|A^3| differs from direct product");
  log.require(c.branch != "none", slug, "no branch of the trichotomy holds");
  log.require(c.tripling_holds, slug, "27|A^3|^3 < |A_(3)||A|^2");
  return log.take();
}

PairCensus sl2_pair_census(const GroupAction& action) {
  const auto& sl2 = require_sl2(action, true);
  auto t = build_table(action, 5000);
  const auto n = t.n();
  PairCensus c;
  c.p = sl2.prime();
  c.group_size = n;
  c.pairs = std::uint64_t(n) * (n - 1) / 2;
  // conj[k][i] = g_k g_i g_k⁻¹
  std::vector<std::uint32_t> conj(std::size_t(n) * n);
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i) conj[std::size_t(k) * n + i] = t.times(t.times(k, i), t.inv[k]);
  std::set<std::pair<std::uint32_t, std::uint32_t>> reps;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      std::pair<std::uint32_t, std::uint32_t> best{n, n};
      for (std::uint32_t k = 0; k < n; ++k) {
        auto a = conj[std::size_t(k) * n + i], b = conj[std::size_t(k) * n + j];
        best = std::min(best, std::pair<std::uint32_t, std::uint32_t>(std::min(a, b), std::max(a, b)));
      }
      reps.insert(best);
    }
  }
  c.classes = reps.size();
  for (const auto& [i, j] : reps) {
    auto r = sl2_growth_check(action, ElementSet{t.elems[i], t.elems[j]});
    if (r.branch == "closure") {
      ++c.closure;
    } else if (r.branch == "growth") {
      ++c.growth;
    } else if (r.branch == "none") {
      ++c.none;
    } else {
      ++c.non_generating;
      c.subgroup_orders.add(r.generated_size);
    }
  }
  return c;
}

ConcentrationReport subgroup_concentration_scan(const GroupAction& action, const ElementSet& A,
                                                std::size_t subgroup_cap) {
  if (A.empty()) throw InvalidArgument("concentration scan: A is empty");
  auto t = build_table(action, subgroup_cap);
  const auto n = t.n();
  std::vector<std::uint32_t> a_idx;
  for (const auto& a : A) a_idx.push_back(t.index(a));

  std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> subgroups;  // members ↦ generators
  auto consider = [&](std::vector<std::uint32_t> gens) {
    auto members = t.closure(gens);
    if (members.size() == n) return;
    subgroups.emplace(std::move(members), std::move(gens));
  };
  for (std::uint32_t i = 0; i < n; ++i) consider({i});
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) consider({i, j});

  ConcentrationReport r;
  r.group_size = n;
  r.a_size = A.size();
  r.subgroups = subgroups.size();
  bool have = false;
  std::uint32_t best_key = 0;
  for (const auto& [members, gens] : subgroups) {
    std::map<std::uint32_t, std::uint64_t> cosets;
    for (auto a : a_idx) {
      std::uint32_t key = n;
      for (auto h : members) key = std::min(key, t.times(a, h));
      ++cosets[key];
    }
    for (const auto& [key, count] : cosets) {
      bool better = !have || count > r.best ||
                    (count == r.best && members.size() < r.subgroup_size);
      if (better) {
        have = true;
        r.best = count;
        r.subgroup_size = members.size();
        best_key = key;
        std::vector<GroupElement> g;
        for (auto i : gens) g.push_back(t.elems[i]);
        r.generators = ElementSet(std::move(g));
      }
    }
  }
  r.coset = t.elems[best_key];
  return r;
}

std::vector<std::string> check_concentration(const GroupAction& action, const ElementSet& A,
                                             const ConcentrationReport& c, std::size_t subgroup_cap) {
  CheckLog log;
  const std::string slug = "subgroup-concentration";
  ConcentrationReport fresh;
  try {
    fresh = subgroup_concentration_scan(action, A, subgroup_cap);
  } catch (const std::exception& e) {
    log.fail(slug, std::string("recomputation failed: ") + e.what());
    return log.take();
  }
  certio::require_recomputed(log, slug, &action, c, fresh);
  try {
    auto H = generated_subgroup(action, c.generators, subgroup_cap);
    log.require(H.size() == c.subgroup_size && H.size() < c.group_size, slug, "subgroup size differs or not proper");
    std::vector<GroupElement> coset;
    for (const auto& h : H) coset.push_back(action.mul(c.coset, h));
    log.require(intersection_size(A, ElementSet(std::move(coset))) == c.best, slug, "|A ∩ gH| differs from record");
  } catch (const std::exception& e) {
    log.fail(slug, e.what());
  }
  return log.take();
}

}  // namespace gacomb
