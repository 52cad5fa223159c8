#pragma once

#include <cstdint>
#include <vector>

#include "gacomb/action.hpp"
#include "gacomb/types.hpp"

// Counting kernels behind the statistics operations. Each kernel exists in a
// serial reference form and an OpenMP form; both return identical results for
// any thread schedule (integer sums, sorted outputs).
namespace gacomb::kernels {

enum class Backend { serial, parallel };

/// Process-wide default used by the library operations.
void set_backend(Backend backend);
Backend backend();
/// Sets the OpenMP team size (no-op without OpenMP).
void set_threads(int threads);
int max_threads();

/// Row-major |A|×|Y| table of a(y).
using ImageTable = std::vector<Point>;

namespace serial {
ImageTable image_table(const GroupAction& action, const ElementSet& A, const PointSet& Y);
/// |Y ∩ gY| for each candidate g, in candidate order.
std::vector<std::uint64_t> overlaps(const GroupAction& action, const ElementSet& candidates, const PointSet& Y);
/// Σ_{a1,a2∈A} |a1Y ∩ a2Y|.
std::uint64_t pair_overlap_sum(const GroupAction& action, const ElementSet& A, const PointSet& Y);
/// g ↦ #{(a1,a2) ∈ A×A : a1⁻¹a2 = g}.
CountMap<GroupElement> quotient_counts(const GroupAction& action, const ElementSet& A);
ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B);
/// |T_s ∩ T_t| for all s,t; sets given as sorted index lists. Row-major.
std::vector<std::uint64_t> intersection_matrix(const std::vector<std::vector<std::uint32_t>>& family);
}  // namespace serial

namespace parallel {
ImageTable image_table(const GroupAction& action, const ElementSet& A, const PointSet& Y);
std::vector<std::uint64_t> overlaps(const GroupAction& action, const ElementSet& candidates, const PointSet& Y);
std::uint64_t pair_overlap_sum(const GroupAction& action, const ElementSet& A, const PointSet& Y);
CountMap<GroupElement> quotient_counts(const GroupAction& action, const ElementSet& A);
ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B);
std::vector<std::uint64_t> intersection_matrix(const std::vector<std::vector<std::uint32_t>>& family);
}  // namespace parallel

// Dispatch on backend().
ImageTable image_table(const GroupAction& action, const ElementSet& A, const PointSet& Y);
std::vector<std::uint64_t> overlaps(const GroupAction& action, const ElementSet& candidates, const PointSet& Y);
std::uint64_t pair_overlap_sum(const GroupAction& action, const ElementSet& A, const PointSet& Y);
CountMap<GroupElement> quotient_counts(const GroupAction& action, const ElementSet& A);
ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B);
std::vector<std::uint64_t> intersection_matrix(const std::vector<std::vector<std::uint32_t>>& family);

}  // namespace gacomb::kernels
