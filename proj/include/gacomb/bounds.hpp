#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gacomb/action.hpp"
#include "gacomb/actions.hpp"
#include "gacomb/rational.hpp"
#include "gacomb/types.hpp"

namespace gacomb {

/// |Y|·M/α with M = max_{y,y'∈Y} |A ∩ trans(y, y')|.
struct FreeBoundDetail {
  std::string a_source;  // "supplied", "enumeration" or "transporter"
  std::optional<std::uint64_t> a_size;
  std::uint64_t max_coset = 0;
  Point from;
  Point to;
  std::uint64_t incidence_sum = 0;  // Σ_{y,y'} |A ∩ trans(y, y')|
  std::optional<std::uint64_t> group_size;
  std::optional<std::uint64_t> space_size;
  std::optional<Rational> transitive_bound;  // α⁻¹|Y||G|/|X|
  std::optional<bool> incidence_holds;       // α|Y|·|A ∩ Sym| ≤ Σ
  std::optional<bool> transitive_holds;

  template <class V>
  void visit(V& v) {
    v("a_source", a_source);
    v("a_size", a_size);
    v("max_coset", max_coset);
    v("from", from);
    v("to", to);
    v("incidence_sum", incidence_sum);
    v("group_size", group_size);
    v("space_size", space_size);
    v("transitive_bound", transitive_bound);
    v("incidence_holds", incidence_holds);
    v("transitive_holds", transitive_holds);
  }
};

/// Distinct n-tuple comparison behind the almost-free bound.
struct AlmostFreeDetail {
  std::uint32_t n = 0;
  std::uint64_t max_fixed = 0;  // max_{g≠e} |fix(g) ∩ Y| over the universe
  std::optional<GroupElement> fix_witness;
  bool fix_holds = false;
  std::uint64_t min_overlap = 0;  // ⌈α|Y|⌉
  BigInt tuple_count;             // |Y^(n)| = (|Y|)_n
  Rational tuple_alpha;           // (⌈α|Y|⌉)_n / (|Y|)_n
  Rational epsilon;               // 1 − tuple_alpha/αⁿ
  Rational epsilon_cap;           // n / (α(|Y| − n))
  bool epsilon_holds = false;
  Rational tuple_bound;  // (|Y|)_n / tuple_alpha
  bool closed_form_holds = false;
  std::optional<std::uint64_t> inclusion_checked;
  std::optional<bool> inclusion_holds;  // every member is in Sym_{tuple_alpha}(Y^(n))

  template <class V>
  void visit(V& v) {
    v("n", n);
    v("max_fixed", max_fixed);
    v("fix_witness", fix_witness);
    v("fix_holds", fix_holds);
    v("min_overlap", min_overlap);
    v("tuple_count", tuple_count);
    v("tuple_alpha", tuple_alpha);
    v("epsilon", epsilon);
    v("epsilon_cap", epsilon_cap);
    v("epsilon_holds", epsilon_holds);
    v("tuple_bound", tuple_bound);
    v("closed_form_holds", closed_form_holds);
    v("inclusion_checked", inclusion_checked);
    v("inclusion_holds", inclusion_holds);
  }
};

/// Basis-tuple argument for linear actions.
struct LinearDetail {
  std::uint32_t dimension = 0;
  Rational rho;
  std::uint64_t subspaces_checked = 0;
  std::uint64_t max_in_subspace = 0;
  PointSet densest_span;  // points spanning the densest subspace
  bool concentration_holds = false;
  std::uint64_t tuple_space = 0;   // |Y|^n
  std::uint64_t basis_tuples = 0;  // |Y_*|
  Rational basis_alpha;            // (α − 1/|Y|)(α − ρ)^{n−1}
  std::vector<Point> spanning_tuple;
  std::uint64_t stabilizer_size = 0;
  std::string stabilizer_source;  // "enumeration" or "matrix"
  Rational lemma_bound;           // |stab|·|Y_*| / basis_alpha
  std::optional<std::uint64_t> min_member_count;  // min_g #{t ∈ Y_* : g t ∈ Y^n}
  std::optional<std::uint64_t> member_count_sum;
  std::optional<bool> member_counts_hold;
  std::optional<bool> lemma_holds;

  template <class V>
  void visit(V& v) {
    v("dimension", dimension);
    v("rho", rho);
    v("subspaces_checked", subspaces_checked);
    v("max_in_subspace", max_in_subspace);
    v("densest_span", densest_span);
    v("concentration_holds", concentration_holds);
    v("tuple_space", tuple_space);
    v("basis_tuples", basis_tuples);
    v("basis_alpha", basis_alpha);
    v("spanning_tuple", spanning_tuple);
    v("stabilizer_size", stabilizer_size);
    v("stabilizer_source", stabilizer_source);
    v("lemma_bound", lemma_bound);
    v("min_member_count", min_member_count);
    v("member_count_sum", member_count_sum);
    v("member_counts_hold", member_counts_hold);
    v("lemma_holds", lemma_holds);
  }
};

/// Point-line incidences I(Y×Y, lines of Sym_α(Y)) for affine maps.
struct AffineDetail {
  std::optional<std::uint64_t> incidences;
  std::optional<bool> rich_holds;       // α|Y|·|Sym| ≤ I
  std::optional<bool> incidence_holds;  // I ≤ |Y|²|Sym|^{1/2} + 2|Sym|

  template <class V>
  void visit(V& v) {
    v("incidences", incidences);
    v("rich_holds", rich_holds);
    v("incidence_holds", incidence_holds);
  }
};

struct SymBoundReport {
  std::string kind;  // "free", "almost-free", "linear", "affine-incidence"
  Rational alpha;
  std::uint64_t y_size = 0;
  Rational bound;
  std::optional<std::string> universe;
  std::optional<ElementSet> members;  // Sym_α(Y), or A ∩ Sym_α(Y) for a supplied A
  std::optional<std::uint64_t> measured;
  std::optional<Rational> slack;  // measured / bound
  std::optional<bool> holds;
  std::optional<FreeBoundDetail> free;
  std::optional<AlmostFreeDetail> almost_free;
  std::optional<LinearDetail> linear;
  std::optional<AffineDetail> affine;

  template <class V>
  void visit(V& v) {
    v("kind", kind);
    v("alpha", alpha);
    v("y_size", y_size);
    v("bound", bound);
    v("universe", universe);
    v("members", members);
    v("measured", measured);
    v("slack", slack);
    v("holds", holds);
    v("free", free);
    v("almost_free", almost_free);
    v("linear", linear);
    v("affine", affine);
  }
};

/// A defaults to G. Measured when the symmetry universe is computable.
SymBoundReport sym_bound_free(const GroupAction& action, const std::optional<ElementSet>& A, const PointSet& Y,
                              const Rational& alpha, const std::optional<ElementSet>& candidates = std::nullopt);
/// Throws HypothesisNotMet unless |Y| > (1 + α⁻¹)n and |fix(g) ∩ Y| < n for g ≠ e.
SymBoundReport sym_bound_almost_free(const GroupAction& action, const PointSet& Y, const Rational& alpha,
                                     std::uint32_t n, const std::optional<ElementSet>& candidates = std::nullopt);
/// Action must be LinearFpAction or LinearQAction. Throws HypothesisNotMet
/// naming the densest span when some |Y ∩ W| > ρ|Y|.
SymBoundReport sym_bound_linear(const GroupAction& action, const PointSet& Y, const Rational& alpha,
                                const Rational& rho, const std::optional<ElementSet>& candidates = std::nullopt);
/// Action must be AffineFpAction; requires α|Y| > 2.
SymBoundReport affine_incidence_sym_bound(const GroupAction& action, const PointSet& Y, const Rational& alpha);

/// Recomputes the report from its recorded parameters and re-verifies the
/// measured set and every inequality independently.
std::vector<std::string> check_sym_bound(const GroupAction& action, const std::optional<ElementSet>& A,
                                         const PointSet& Y, const std::optional<ElementSet>& candidates,
                                         const SymBoundReport& report);

/// Incidences between X×Y and the curves cxy − ax + dy − b = 0 of g ∈ A ⊆ SL_2(F_p).
struct IncidenceScan {
  std::int64_t p = 0;
  std::uint64_t a_size = 0;
  std::vector<std::int64_t> xs;
  std::vector<std::int64_t> ys;
  Rational threshold;
  std::uint64_t curve_count = 0;
  std::uint64_t mobius_count = 0;  // #{(x, g) : g·x ∈ Y} on the projective line
  bool dual_holds = false;
  CountMap<GroupElement> incidences;  // g ↦ #{(x, y) ∈ Γ_g}
  ElementSet rich;                    // {g : incidences ≥ threshold}
  std::uint64_t rich_mass = 0;
  bool mass_holds = false;  // rich mass > total − threshold·|A \ rich|, strict when A \ rich ≠ ∅
  bool cap_holds = false;   // rich mass ≤ |rich|·min(|X|, |Y|)

  template <class V>
  void visit(V& v) {
    v("p", p);
    v("a_size", a_size);
    v("xs", xs);
    v("ys", ys);
    v("threshold", threshold);
    v("curve_count", curve_count);
    v("mobius_count", mobius_count);
    v("dual_holds", dual_holds);
    v("incidences", incidences);
    v("rich", rich);
    v("rich_mass", rich_mass);
    v("mass_holds", mass_holds);
    v("cap_holds", cap_holds);
  }
};

/// `action` must be SL_2(F_p), i.e. LinearFpAction(p, 2, special).
IncidenceScan sl2_incidence_scan(const GroupAction& action, const ElementSet& A, const std::vector<std::int64_t>& xs,
                                 const std::vector<std::int64_t>& ys, const Rational& threshold);
std::vector<std::string> check_incidence_scan(const GroupAction& action, const ElementSet& A,
                                              const IncidenceScan& c);

/// Trichotomy for growth in SL_2(F_p): closure in three steps, growth with
/// exponent 1/3024, or a proper generated subgroup.
struct GrowthReport {
  std::int64_t p = 0;
  std::uint64_t a_size = 0;
  std::uint64_t cube_size = 0;       // |A³|
  std::uint64_t sym_cube_size = 0;   // |(A ∪ A⁻¹ ∪ {e})³|
  std::uint64_t group_size = 0;
  std::uint64_t generated_size = 0;
  bool generates = false;
  std::string branch;  // "closure", "growth", "non-generation", "none"
  bool closure_holds = false;
  bool growth_holds = false;     // |A_(3)|^3024 ≥ |A|^3025
  bool tripling_holds = false;   // 27|A³|³ ≥ |A_(3)|·|A|²

  template <class V>
  void visit(V& v) {
    v("p", p);
    v("a_size", a_size);
    v("cube_size", cube_size);
    v("sym_cube_size", sym_cube_size);
    v("group_size", group_size);
    v("generated_size", generated_size);
    v("generates", generates);
    v("branch", branch);
    v("closure_holds", closure_holds);
    v("growth_holds", growth_holds);
    v("tripling_holds", tripling_holds);
  }
};

inline constexpr std::uint32_t kGrowthDenominator = 3024;

/// Requires SL_2(F_p) with p ∈ {2, 3, 5, 7}.
GrowthReport sl2_growth_check(const GroupAction& action, const ElementSet& A);
std::vector<std::string> check_growth(const GroupAction& action, const ElementSet& A, const GrowthReport& c);

/// Every 2-element subset of SL_2(F_p), up to simultaneous conjugation.
struct PairCensus {
  std::int64_t p = 0;
  std::uint64_t group_size = 0;
  std::uint64_t pairs = 0;
  std::uint64_t classes = 0;
  std::uint64_t closure = 0;
  std::uint64_t growth = 0;
  std::uint64_t none = 0;
  std::uint64_t non_generating = 0;
  CountMap<std::uint64_t> subgroup_orders;  // order of ⟨g, h⟩ ↦ classes, non-generating only

  template <class V>
  void visit(V& v) {
    v("p", p);
    v("group_size", group_size);
    v("pairs", pairs);
    v("classes", classes);
    v("closure", closure);
    v("growth", growth);
    v("none", none);
    v("non_generating", non_generating);
    v("subgroup_orders", subgroup_orders);
  }
};

PairCensus sl2_pair_census(const GroupAction& action);

/// Largest |A ∩ gH| over proper subgroups H generated by at most two elements.
struct ConcentrationReport {
  std::uint64_t group_size = 0;
  std::uint64_t a_size = 0;
  std::uint64_t subgroups = 0;
  ElementSet generators;  // of the best H
  std::uint64_t subgroup_size = 0;
  GroupElement coset;  // g
  std::uint64_t best = 0;

  template <class V>
  void visit(V& v) {
    v("group_size", group_size);
    v("a_size", a_size);
    v("subgroups", subgroups);
    v("generators", generators);
    v("subgroup_size", subgroup_size);
    v("coset", coset);
    v("best", best);
  }
};

/// Throws ClosureTooLarge when |G| exceeds subgroup_cap.
ConcentrationReport subgroup_concentration_scan(const GroupAction& action, const ElementSet& A,
                                                std::size_t subgroup_cap = 5000);
std::vector<std::string> check_concentration(const GroupAction& action, const ElementSet& A,
                                             const ConcentrationReport& c, std::size_t subgroup_cap = 5000);

}  // namespace gacomb
