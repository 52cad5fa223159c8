#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gacomb/action.hpp"
#include "gacomb/bounds.hpp"
#include "gacomb/covering.hpp"
#include "gacomb/rational.hpp"
#include "gacomb/types.hpp"

namespace gacomb {

/// Relation E ⊆ A⁻¹ × A whose partial product lies in Sym_{α²/2}(Y). The
/// "uniform" kind keeps one dyadic class of the representation function.
struct ClosureCertificate {
  std::string kind;  // "approximate" or "uniform"
  Rational alpha;
  Rational level;  // α²/2
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  std::uint64_t pair_count = 0;  // |P| from the intersection-pair lemma
  ProductRelation relation;      // pairs (x, y) with x ∈ A⁻¹, y ∈ A
  std::uint64_t relation_size = 0;
  ElementSet product;                       // A⁻¹ ∗_E A
  CountMap<GroupElement> product_counts;    // r_E
  CountMap<GroupElement> overlaps;          // |Y ∩ gY| over the product
  bool symmetric = false;       // (x, y) ∈ E ⇔ (y⁻¹, x⁻¹) ∈ E
  bool inverse_closed = false;  // product⁻¹ = product
  bool members_hold = false;    // product ⊆ Sym_{α²/2}(Y)
  bool size_holds = false;      // 2|E| ≥ α²|A|², or the dyadic floor for "uniform"
  std::optional<std::uint32_t> dyadic_level;
  std::optional<std::uint64_t> base_relation_size;
  std::optional<Rational> dyadic_floor;  // α²|A|² / (2·bitlen|A|)
  std::optional<std::uint64_t> min_repr;
  std::optional<bool> uniform_holds;      // 2|product|·min r_E ≥ |E|
  std::optional<bool> natural_log_holds;  // |E|(2 + 2 ln|A|) ≥ α²|A|², sufficient test

  template <class V>
  void visit(V& v) {
    v("kind", kind);
    v("alpha", alpha);
    v("level", level);
    v("a_size", a_size);
    v("y_size", y_size);
    v("pair_count", pair_count);
    v("relation", relation);
    v("relation_size", relation_size);
    v("product", product);
    v("product_counts", product_counts);
    v("overlaps", overlaps);
    v("symmetric", symmetric);
    v("inverse_closed", inverse_closed);
    v("members_hold", members_hold);
    v("size_holds", size_holds);
    v("dyadic_level", dyadic_level);
    v("base_relation_size", base_relation_size);
    v("dyadic_floor", dyadic_floor);
    v("min_repr", min_repr);
    v("uniform_holds", uniform_holds);
    v("natural_log_holds", natural_log_holds);
  }
};

/// Throws HypothesisNotMet naming the first element of A outside Sym_α(Y).
ClosureCertificate approximate_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                       const Rational& alpha);
ClosureCertificate uniform_approximate_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                               const Rational& alpha);
std::vector<std::string> check_closure(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                       const ClosureCertificate& c);

/// a ∈ A maximizing |A ∩ aS|, with the counting chain
/// Σ_a |A ∩ aS| ≥ Σ_{s∈S} r_E(s) ≥ |P ∩ S|·|E| / (2|P|), P the product.
struct StructureTransfer {
  Rational alpha;
  std::uint64_t a_size = 0;
  std::uint64_t s_size = 0;
  std::uint64_t product_size = 0;
  std::uint64_t relation_size = 0;
  std::uint64_t product_hits = 0;  // |P ∩ S|
  std::uint64_t repr_mass = 0;     // Σ_{s∈S} r_E(s)
  std::uint64_t count_sum = 0;     // Σ_a |A ∩ aS|
  GroupElement anchor;
  std::uint64_t hits = 0;  // |A ∩ anchor·S|
  bool count_holds = false;
  bool mass_holds = false;
  bool exact_holds = false;  // hits·2|P||A| ≥ |P ∩ S|·|E|
  Rational dyadic_bound;     // α²/(4·bitlen|A|) · |P ∩ S|/|P|
  bool dyadic_holds = false;
  bool natural_log_holds = false;  // sufficient test for the natural-log form

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("a_size", a_size);
    v("s_size", s_size);
    v("product_size", product_size);
    v("relation_size", relation_size);
    v("product_hits", product_hits);
    v("repr_mass", repr_mass);
    v("count_sum", count_sum);
    v("anchor", anchor);
    v("hits", hits);
    v("count_holds", count_holds);
    v("mass_holds", mass_holds);
    v("exact_holds", exact_holds);
    v("dyadic_bound", dyadic_bound);
    v("dyadic_holds", dyadic_holds);
    v("natural_log_holds", natural_log_holds);
  }
};

/// Requires a "uniform" closure certificate for A.
StructureTransfer bring_structure_back(const GroupAction& action, const ElementSet& A,
                                       const ClosureCertificate& closure, const ElementSet& S);
std::vector<std::string> check_structure_transfer(const GroupAction& action, const ElementSet& A,
                                                  const ClosureCertificate& closure, const ElementSet& S,
                                                  const StructureTransfer& t);

/// Constructive small-tripling extraction from a dense relation with small
/// partial product: popular vertices of A, an anchor, and the quotients of
/// popular vertices sharing many partners with it.
struct TriplingCertificate {
  Rational alpha;
  Rational growth;  // K
  std::uint64_t a_size = 0;
  std::uint64_t b_size = 0;
  std::uint64_t relation_size = 0;
  std::uint64_t product_size = 0;  // |A ∗_E B|
  Rational degree_floor;           // |E| / (2|A|)
  ElementSet popular;
  Rational common_floor;  // |E|² / (8|A||B|²)
  GroupElement anchor;
  ElementSet set;  // S ⊆ anchor⁻¹A
  std::uint64_t set_size = 0;
  std::uint64_t cube_size = 0;  // |S³|
  Rational size_ratio;          // |S|/|A|
  Rational tripling_ratio;      // |S³|/|S|
  bool subset_holds = false;

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("growth", growth);
    v("a_size", a_size);
    v("b_size", b_size);
    v("relation_size", relation_size);
    v("product_size", product_size);
    v("degree_floor", degree_floor);
    v("popular", popular);
    v("common_floor", common_floor);
    v("anchor", anchor);
    v("set", set);
    v("set_size", set_size);
    v("cube_size", cube_size);
    v("size_ratio", size_ratio);
    v("tripling_ratio", tripling_ratio);
    v("subset_holds", subset_holds);
  }
};

/// Throws HypothesisNotMet unless |E| ≥ α|A||B| and |A ∗_E B|² ≤ K²|A||B|.
TriplingCertificate extract_small_tripling(const GroupAction& action, const ElementSet& A, const ElementSet& B,
                                           const ProductRelation& E, const Rational& alpha, const Rational& growth);
std::vector<std::string> check_tripling(const GroupAction& action, const ElementSet& A, const ElementSet& B,
                                        const ProductRelation& E, const TriplingCertificate& c);

struct SmallTriplingFromSymmetry {
  Rational alpha;
  Rational growth;
  std::uint64_t a_size = 0;
  std::uint64_t sym_size = 0;  // |Sym_{α²/2}(Y)|
  bool sym_holds = false;      // ≤ K|A|
  ClosureCertificate closure;  // on A⁻¹
  TriplingCertificate tripling;
  bool inclusion_holds = false;  // anchor·S ⊆ A

  template <class V>
  void visit(V& v) {
    v("alpha", alpha);
    v("growth", growth);
    v("a_size", a_size);
    v("sym_size", sym_size);
    v("sym_holds", sym_holds);
    v("closure", closure);
    v("tripling", tripling);
    v("inclusion_holds", inclusion_holds);
  }
};

/// Throws HypothesisNotMet unless A ⊆ Sym_α(Y) and |Sym_{α²/2}(Y)| ≤ K|A|.
SmallTriplingFromSymmetry extract_from_symmetry(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                        const Rational& alpha, const Rational& growth,
                                        const std::optional<ElementSet>& candidates = std::nullopt);
std::vector<std::string> check_extract_from_symmetry(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                     const std::optional<ElementSet>& candidates, const SmallTriplingFromSymmetry& c);

/// A_(3) = (A ∪ A⁻¹ ∪ {e})³ with a greedy X ⊆ A_(3)A_(3) such that
/// A_(3)A_(3) ⊆ X·A_(3).
struct ApproxGroupCertificate {
  std::uint64_t a_size = 0;
  std::uint64_t cube_size = 0;  // |A³|
  Rational tripling;            // |A³|/|A|
  ElementSet closure;           // A_(3)
  std::uint64_t closure_size = 0;
  bool symmetric = false;
  bool has_identity = false;
  bool contains_base = false;
  std::uint64_t square_size = 0;  // |A_(3)A_(3)|
  ElementSet cover;               // X
  std::uint64_t cover_size = 0;
  bool cover_holds = false;
  Rational size_ratio;  // |A_(3)|/|A|

  template <class V>
  void visit(V& v) {
    v("a_size", a_size);
    v("cube_size", cube_size);
    v("tripling", tripling);
    v("closure", closure);
    v("closure_size", closure_size);
    v("symmetric", symmetric);
    v("has_identity", has_identity);
    v("contains_base", contains_base);
    v("square_size", square_size);
    v("cover", cover);
    v("cover_size", cover_size);
    v("cover_holds", cover_holds);
    v("size_ratio", size_ratio);
  }
};

ApproxGroupCertificate approx_group_close(const GroupAction& action, const ElementSet& A);
std::vector<std::string> check_approx_group(const GroupAction& action, const ElementSet& A,
                                            const ApproxGroupCertificate& c);

struct BsgLevel {
  std::uint32_t index = 0;
  Rational alpha;
  ElementSet set;  // A_j
  std::uint64_t size = 0;
  CountMap<GroupElement> overlaps;
  bool members_hold = false;  // A_j ⊆ Sym_{α_j}(Y)
  bool inside_hold = false;   // A_0 = A ∪ A⁻¹ ∪ {e}, or A_j ⊆ A_{j−1}A_{j−1}
  std::optional<bool> power_holds;  // A_j ⊆ A_(2^j), computed directly under a cap
  std::optional<ClosureCertificate> closure;
  std::optional<std::uint64_t> next_size;
  std::optional<Rational> ratio;  // |A_{j+1}|/|A_j|

  template <class V>
  void visit(V& v) {
    v("index", index);
    v("alpha", alpha);
    v("set", set);
    v("size", size);
    v("overlaps", overlaps);
    v("members_hold", members_hold);
    v("inside_hold", inside_hold);
    v("power_holds", power_holds);
    v("closure", closure);
    v("next_size", next_size);
    v("ratio", ratio);
  }
};

/// Pull-back of a target set to a translate meeting A ∪ A⁻¹ ∪ {e}.
struct BsgWalk {
  ElementSet target;                 // S
  std::vector<GroupElement> steps;   // a_0, …, a_{j*−1}
  std::vector<StructureTransfer> transfers;
  std::vector<std::uint64_t> level_hits;  // |T_j| for j = 0..j*
  GroupElement element;                   // g = a_0⋯a_{j*−1}·g*⁻¹
  std::uint64_t hits = 0;                 // |A ∩ gS|
  std::uint64_t inverse_hits = 0;         // |A⁻¹ ∩ gS|
  std::uint64_t symmetric_hits = 0;       // |A_0 ∩ gS|
  bool walk_holds = false;   // T_0 ⊆ A_0 ∩ gS
  bool count_holds = false;  // hits + inverse_hits + 1 ≥ symmetric_hits
  std::optional<bool> power_holds;  // g ∈ A_(2^{J+1}) directly

  template <class V>
  void visit(V& v) {
    v("target", target);
    v("steps", steps);
    v("transfers", transfers);
    v("level_hits", level_hits);
    v("element", element);
    v("hits", hits);
    v("inverse_hits", inverse_hits);
    v("symmetric_hits", symmetric_hits);
    v("walk_holds", walk_holds);
    v("count_holds", count_holds);
    v("power_holds", power_holds);
  }
};

struct BsgCover {
  ElementSet part;  // B = A_* ∩ S
  Rational rho;     // |B|/|A_*|
  ElementSet shifted;  // g*⁻¹B
  std::uint64_t quotient_size = 0;  // |BB⁻¹|
  CoverCertificate cover;
  bool conjugate_holds = false;  // |g*⁻¹B (g*⁻¹B)⁻¹| = |BB⁻¹|
  Rational covered_floor;        // α_J|B||Y| / (2|BB⁻¹|)
  bool covered_holds = false;
  std::optional<bool> free_holds;        // Σ_z Σ_{stab z} r = |B||Z|
  std::optional<bool> correction_holds;  // Σ − |B||Z| ≤ (n−1)(|B|² − |B|)

  template <class V>
  void visit(V& v) {
    v("part", part);
    v("rho", rho);
    v("shifted", shifted);
    v("quotient_size", quotient_size);
    v("cover", cover);
    v("conjugate_holds", conjugate_holds);
    v("covered_floor", covered_floor);
    v("covered_holds", covered_holds);
    v("free_holds", free_holds);
    v("correction_holds", correction_holds);
  }
};

struct BsgTrace {
  std::string mode;  // "pipeline", "free", "almost-free"
  Rational alpha;
  std::uint32_t depth = 0;  // J
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  Rational final_alpha;  // α_J
  bool alpha_holds = false;
  std::string sym_mode;  // "exact" or "upper-bound"
  std::optional<std::uint64_t> sym_size;
  std::optional<std::string> sym_universe;
  std::optional<Rational> sym_upper;
  std::optional<std::string> bound_source;
  std::optional<std::uint32_t> fix_limit;  // n for almost-free actions
  std::vector<BsgLevel> levels;
  Rational growth_power;  // K^J = |Sym_{α_J}(Y)|/|A| (or the bound over |A|)
  Rational telescoping;   // |A_J|/|A_0|
  bool telescoping_holds = false;
  bool statement_holds = false;  // telescoping ≤ growth_power
  std::uint32_t chosen = 0;      // j*
  Rational chosen_ratio;
  bool pigeonhole_holds = false;  // chosen_ratio^J ≤ telescoping
  TriplingCertificate tripling;
  GroupElement anchor;     // g*
  ElementSet structured;   // A_*
  std::uint64_t structured_cube = 0;
  Rational structured_tripling;
  bool shift_holds = false;  // g* ∈ A_{j*} and g*⁻¹A_* ⊆ A_{j*} ∩ Sym_{α_J}(Y)
  std::optional<bool> shift_power_holds;
  BsgWalk walk;
  std::optional<BsgCover> cover;
  std::optional<SymBoundReport> bound;
  std::optional<ApproxGroupCertificate> approx;

  template <class V>
  void visit(V& v) {
    v("mode", mode);
    v("alpha", alpha);
    v("depth", depth);
    v("a_size", a_size);
    v("y_size", y_size);
    v("final_alpha", final_alpha);
    v("alpha_holds", alpha_holds);
    v("sym_mode", sym_mode);
    v("sym_size", sym_size);
    v("sym_universe", sym_universe);
    v("sym_upper", sym_upper);
    v("bound_source", bound_source);
    v("fix_limit", fix_limit);
    v("levels", levels);
    v("growth_power", growth_power);
    v("telescoping", telescoping);
    v("telescoping_holds", telescoping_holds);
    v("statement_holds", statement_holds);
    v("chosen", chosen);
    v("chosen_ratio", chosen_ratio);
    v("pigeonhole_holds", pigeonhole_holds);
    v("tripling", tripling);
    v("anchor", anchor);
    v("structured", structured);
    v("structured_cube", structured_cube);
    v("structured_tripling", structured_tripling);
    v("shift_holds", shift_holds);
    v("shift_power_holds", shift_power_holds);
    v("walk", walk);
    v("cover", cover);
    v("bound", bound);
    v("approx", approx);
  }
};

/// nullopt selects the exact symmetry-set size; a value is a certified upper
/// bound on |Sym_{α_J}(Y)|.
struct BsgOptions {
  std::optional<Rational> sym_upper;
  std::optional<ElementSet> target;      // S, defaults to A_*
  std::optional<ElementSet> candidates;  // symmetry-set universe
};

BsgTrace bsg_pipeline(const GroupAction& action, const ElementSet& A, const PointSet& Y, const Rational& alpha,
                      std::uint32_t depth, const BsgOptions& options = {});
/// Throws HypothesisNotMet when some g ≠ e fixes a point of Y.
BsgTrace bsg_free(const GroupAction& action, const ElementSet& A, const PointSet& Y, const Rational& alpha,
                  std::uint32_t depth, const BsgOptions& options = {});
/// Throws HypothesisNotMet when some g ≠ e fixes n or more points of Y.
BsgTrace bsg_almost_free(const GroupAction& action, const ElementSet& A, const PointSet& Y, const Rational& alpha,
                         std::uint32_t depth, std::uint32_t n, const BsgOptions& options = {});
std::vector<std::string> check_bsg(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                   const BsgOptions& options, const BsgTrace& trace);

/// α_J = 2(α/2)^{2^J}.
Rational iterated_alpha(const Rational& alpha, std::uint32_t depth);

}  // namespace gacomb
