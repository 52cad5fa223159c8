#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gacomb/action.hpp"
#include "gacomb/rational.hpp"
#include "gacomb/types.hpp"

namespace gacomb {

/// Injection A1 × A2(Y) → A2A1⁻¹ × A1(Y), (a, x) ↦ (a_x a⁻¹, a y_x), where
/// (a_x, y_x) is the first pair of A2 × Y in canonical order with a_x y_x = x.
struct InjectionCertificate {
  struct Representative {
    Point x;
    GroupElement a;
    Point y;
    template <class V>
    void visit(V& v) {
      v("x", x);
      v("a", a);
      v("y", y);
    }
  };
  struct Row {
    GroupElement a;
    Point x;
    GroupElement quotient;  // a_x a⁻¹
    Point image;            // a y_x
    template <class V>
    void visit(V& v) {
      v("a", a);
      v("x", x);
      v("quotient", quotient);
      v("image", image);
    }
  };

  std::uint64_t a1_size = 0;
  std::uint64_t image2_size = 0;    // |A2(Y)|
  std::uint64_t quotient_size = 0;  // |A2 A1⁻¹|
  std::uint64_t image1_size = 0;    // |A1(Y)|
  std::vector<Representative> representatives;
  std::vector<Row> mapping;
  BigInt lhs;
  BigInt rhs;
  bool injective = false;
  bool holds = false;

  template <class V>
  void visit(V& v) {
    v("a1_size", a1_size);
    v("image2_size", image2_size);
    v("quotient_size", quotient_size);
    v("image1_size", image1_size);
    v("representatives", representatives);
    v("mapping", mapping);
    v("lhs", lhs);
    v("rhs", rhs);
    v("injective", injective);
    v("holds", holds);
  }
};

InjectionCertificate ruzsa_triangle(const GroupAction& action, const ElementSet& A1, const ElementSet& A2,
                                    const PointSet& Y);
std::vector<std::string> check_ruzsa_triangle(const GroupAction& action, const ElementSet& A1, const ElementSet& A2,
                                              const PointSet& Y, const InjectionCertificate& c);

/// |π(A)|·|B ∩ H| ≤ |AB| for the quotient map π : G → G/H.
struct SubgroupGrowth {
  std::uint64_t subgroup_size = 0;
  std::uint64_t coset_count = 0;         // |π(A)|
  std::uint64_t subgroup_intersection = 0;  // |B ∩ H|
  std::uint64_t product_size = 0;        // |AB|
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
  bool holds = false;

  template <class V>
  void visit(V& v) {
    v("subgroup_size", subgroup_size);
    v("coset_count", coset_count);
    v("subgroup_intersection", subgroup_intersection);
    v("product_size", product_size);
    v("lhs", lhs);
    v("rhs", rhs);
    v("holds", holds);
  }
};

/// H is generated from `subgroup_generators` (closure capped at `cap`).
/// Throws InvalidArgument when B ∩ H is empty.
SubgroupGrowth growth_in_subgroup(const GroupAction& action, const ElementSet& subgroup_generators,
                                  const ElementSet& A, const ElementSet& B, std::size_t cap = 100000);
std::vector<std::string> check_growth_in_subgroup(const GroupAction& action, const ElementSet& subgroup_generators,
                                                  const ElementSet& A, const ElementSet& B, const SubgroupGrowth& c,
                                                  std::size_t cap = 100000);

/// Greedy maximal family of disjoint approximate orbits and the bounds on its
/// size. `kind` is "image" (covering of Y by A⁻¹A(Z)) or "symmetry" (covering
/// of the popular part Y' of Y by B⁻¹B(Z) for B inside a symmetry set).
struct CoverCertificate {
  std::string kind;
  std::optional<Rational> alpha;
  std::uint64_t a_size = 0;
  std::uint64_t y_size = 0;
  std::optional<std::uint64_t> image_size;             // |A(Y)|
  std::optional<std::uint64_t> quotient_product_size;  // |BB⁻¹|
  PointSet covered;                      // Y, or Y'
  PointSet centers;                      // Z
  std::vector<std::uint64_t> orbit_sizes;  // |A(z)| or |B(z) ∩ Y| per z
  std::uint64_t union_size = 0;          // |A(Z)| or |B(Z) ∩ Y|
  std::uint64_t max_stabilizer = 0;      // max_z |A⁻¹A ∩ stab(z)|
  std::uint64_t max_shifted_stabilizer = 0;  // max_{a,z} |a⁻¹A ∩ stab(z)|
  std::uint64_t stabilizer_repr_sum = 0;     // Σ_z Σ_{g∈stab z} r_{A⁻¹A}(g)
  Rational max_bound;
  Rational average_bound;
  std::optional<Rational> covered_lower;  // α|B||Y| / (2|BB⁻¹|)
  std::optional<Rational> sharper_bound;  // 2|Y|/(α|B|) · Σ/(|B||Z|), reported only
  bool cover_holds = false;
  bool disjoint_holds = false;
  bool maximal_holds = false;
  bool max_bound_holds = false;
  bool average_bound_holds = false;
  std::optional<bool> covered_holds;
  std::optional<bool> sharper_holds;

  template <class V>
  void visit(V& v) {
    v("kind", kind);
    v("alpha", alpha);
    v("a_size", a_size);
    v("y_size", y_size);
    v("image_size", image_size);
    v("quotient_product_size", quotient_product_size);
    v("covered", covered);
    v("centers", centers);
    v("orbit_sizes", orbit_sizes);
    v("union_size", union_size);
    v("max_stabilizer", max_stabilizer);
    v("max_shifted_stabilizer", max_shifted_stabilizer);
    v("stabilizer_repr_sum", stabilizer_repr_sum);
    v("max_bound", max_bound);
    v("average_bound", average_bound);
    v("covered_lower", covered_lower);
    v("sharper_bound", sharper_bound);
    v("cover_holds", cover_holds);
    v("disjoint_holds", disjoint_holds);
    v("maximal_holds", maximal_holds);
    v("max_bound_holds", max_bound_holds);
    v("average_bound_holds", average_bound_holds);
    v("covered_holds", covered_holds);
    v("sharper_holds", sharper_holds);
  }
};

CoverCertificate cover_by_image(const GroupAction& action, const ElementSet& A, const PointSet& Y);
/// Throws HypothesisNotMet naming the first element of B outside Sym_α(Y).
CoverCertificate cover_symmetry(const GroupAction& action, const ElementSet& B, const PointSet& Y,
                                const Rational& alpha);
/// Dispatches on c.kind; for "symmetry" A is B.
std::vector<std::string> check_cover(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                     const CoverCertificate& c);

/// Subset B ⊆ A minimizing |B(Y)|/|B| over the declared search family, and
/// for each C the comparison |C B(Y)|·|B| ≤ |B(Y)|·|C(Y)|.
struct PetridisSelection {
  struct Row {
    std::uint64_t c_size = 0;
    std::uint64_t product_image = 0;  // |C B(Y)|
    std::uint64_t c_image = 0;        // |C(Y)|
    bool holds = false;
    template <class V>
    void visit(V& v) {
      v("c_size", c_size);
      v("product_image", product_image);
      v("c_image", c_image);
      v("holds", holds);
    }
  };
  std::string search;  // "exhaustive" or "singletons-prefixes-full"
  std::uint64_t searched = 0;
  ElementSet chosen;
  std::uint64_t chosen_image = 0;  // |B(Y)|
  std::vector<Row> rows;
  bool all_hold = false;

  template <class V>
  void visit(V& v) {
    v("search", search);
    v("searched", searched);
    v("chosen", chosen);
    v("chosen_image", chosen_image);
    v("rows", rows);
    v("all_hold", all_hold);
  }
};

inline constexpr std::size_t kExhaustiveSelectionLimit = 12;

PetridisSelection petridis_select(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                  const std::vector<ElementSet>& family);
std::vector<std::string> check_petridis(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                        const std::vector<ElementSet>& family, const PetridisSelection& c);

}  // namespace gacomb
