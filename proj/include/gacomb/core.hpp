#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gacomb/action.hpp"
#include "gacomb/types.hpp"

namespace gacomb {

PointSet image_set(const GroupAction& action, const ElementSet& A, const PointSet& Y);
/// {g y : (g, y) ∈ E}.
PointSet partial_image_set(const GroupAction& action, const ImageRelation& E);

ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B);
ElementSet inverse_set(const GroupAction& action, const ElementSet& A);
/// A ∪ A⁻¹ ∪ {e}.
ElementSet symmetrize(const GroupAction& action, const ElementSet& A);
/// (A ∪ A⁻¹ ∪ {e})^k, k ≥ 1.
ElementSet symmetrized_power(const GroupAction& action, const ElementSet& A, unsigned k);
/// A^k by repeated multiplication, k ≥ 1.
ElementSet power_set(const GroupAction& action, const ElementSet& A, unsigned k);
/// {ab : (a, b) ∈ E}.
ElementSet partial_product(const GroupAction& action, const ProductRelation& E);

ElementSet transporter_in(const GroupAction& action, const ElementSet& A, const Point& x, const Point& y);
ElementSet stabilizer_in(const GroupAction& action, const ElementSet& A, const Point& x);
/// {g ∈ A : gY = Y}.
ElementSet set_stabilizer_in(const GroupAction& action, const ElementSet& A, const PointSet& Y);
PointSet fixed_in(const GroupAction& action, const GroupElement& g, const PointSet& Y);

/// |Y ∩ gY|.
std::uint64_t overlap(const GroupAction& action, const GroupElement& g, const PointSet& Y);

/// x ↦ #{(g, y) ∈ E : g y = x}.
CountMap<Point> count_partial_images(const GroupAction& action, const ImageRelation& E);
/// x ↦ #{(a, y) ∈ A×Y : a y = x}.
CountMap<Point> count_images(const GroupAction& action, const ElementSet& A, const PointSet& Y);
/// g ↦ |A ∩ A g| = #{(a1, a2) : a1⁻¹ a2 = g}.
CountMap<GroupElement> count_quotients(const GroupAction& action, const ElementSet& A);
/// x ↦ #{(a, b) ∈ E : ab = x}.
CountMap<GroupElement> count_partial_products(const GroupAction& action, const ProductRelation& E);

/// Elements in which the exact-growth case is checked: if |A(Y)| = |Y| then
/// A⁻¹A stabilizes Y and Y splits into orbits of the subgroup it generates.
struct ExactGrowthCheck {
  bool applies = false;             // |A(Y)| == |Y|
  bool quotients_stabilize = false;  // every g ∈ A⁻¹A has gY = Y
  bool image_of_image = false;       // A⁻¹(A(Y)) = Y
  ElementSet subgroup;               // ⟨A⁻¹A⟩
  std::vector<PointSet> orbits;      // orbits of ⟨A⁻¹A⟩ on Y
  bool orbits_partition = false;     // orbits are disjoint, inside Y, and cover Y

  template <class V>
  void visit(V& v) {
    v("applies", applies);
    v("quotients_stabilize", quotients_stabilize);
    v("image_of_image", image_of_image);
    v("subgroup", subgroup);
    v("orbits", orbits);
    v("orbits_partition", orbits_partition);
  }
};

ExactGrowthCheck check_exact_growth(const GroupAction& action, const ElementSet& A, const PointSet& Y,
                                    std::size_t subgroup_cap = 100000);

/// Closure of gens under multiplication and inversion. Throws ClosureTooLarge
/// once the closure would exceed cap.
ElementSet generated_subgroup(const GroupAction& action, const ElementSet& gens, std::size_t cap);

/// Orbits of the group H on Y, in canonical order of their first point.
/// Precondition: H is a subgroup and Y is H-invariant.
std::vector<PointSet> orbits_on(const GroupAction& action, const ElementSet& H, const PointSet& Y);

}  // namespace gacomb
