#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gacomb/kernels.hpp"

namespace gacomb::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::parallel};
}

void set_backend(Backend b) { g_backend.store(b); }
Backend backend() { return g_backend.load(); }

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

ImageTable image_table(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  const auto na = static_cast<std::int64_t>(A.size());
  const std::size_t m = Y.size();
  ImageTable table(A.size() * m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < m; ++j) table[i * m + j] = action.act(A[i], Y[j]);
  return table;
}

std::vector<std::uint64_t> overlaps(const GroupAction& action, const ElementSet& candidates, const PointSet& Y) {
  const auto n = static_cast<std::int64_t>(candidates.size());
  std::vector<std::uint64_t> out(candidates.size(), 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t count = 0;
    for (const auto& y : Y)
      if (Y.contains(action.act(candidates[i], y))) ++count;
    out[i] = count;
  }
  return out;
}

std::uint64_t pair_overlap_sum(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  const auto na = static_cast<std::int64_t>(A.size());
  const std::size_t m = Y.size();
  std::vector<PointSet> images(A.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < na; ++i) {
    std::vector<Point> row;
    row.reserve(m);
    for (const auto& y : Y) row.push_back(action.act(A[i], y));
    images[i] = PointSet(std::move(row));
  }
  std::uint64_t total = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total)
  for (std::int64_t i = 0; i < na; ++i)
    for (std::int64_t j = 0; j < na; ++j) total += intersection_size(images[i], images[j]);
  return total;
}

CountMap<GroupElement> quotient_counts(const GroupAction& action, const ElementSet& A) {
  const auto na = static_cast<std::int64_t>(A.size());
  std::vector<std::vector<GroupElement>> rows(A.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < na; ++i) {
    auto inv = action.inv(A[i]);
    rows[i].reserve(A.size());
    for (const auto& a2 : A) rows[i].push_back(action.mul(inv, a2));
  }
  CountMap<GroupElement> counts;
  for (const auto& row : rows)
    for (const auto& g : row) counts.add(g);
  return counts;
}

ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B) {
  const auto na = static_cast<std::int64_t>(A.size());
  std::vector<GroupElement> out(A.size() * B.size());
  const std::size_t nb = B.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) out[i * nb + j] = action.mul(A[i], B[j]);
  return ElementSet(std::move(out));
}

std::vector<std::uint64_t> intersection_matrix(const std::vector<std::vector<std::uint32_t>>& family) {
  const auto n = static_cast<std::int64_t>(family.size());
  std::vector<std::uint64_t> out(family.size() * family.size(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t s = 0; s < n; ++s) {
    for (std::int64_t t = 0; t < n; ++t) {
      const auto& a = family[s];
      const auto& b = family[t];
      std::uint64_t count = 0;
      std::size_t i = 0, j = 0;
      while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
          ++i;
        } else if (b[j] < a[i]) {
          ++j;
        } else {
          ++count;
          ++i;
          ++j;
        }
      }
      out[s * n + t] = count;
    }
  }
  return out;
}

}  // namespace parallel

#define GACOMB_DISPATCH(name, ...) \
  return backend() == Backend::serial ? serial::name(__VA_ARGS__) : parallel::name(__VA_ARGS__)

ImageTable image_table(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  GACOMB_DISPATCH(image_table, action, A, Y);
}
std::vector<std::uint64_t> overlaps(const GroupAction& action, const ElementSet& candidates, const PointSet& Y) {
  GACOMB_DISPATCH(overlaps, action, candidates, Y);
}
std::uint64_t pair_overlap_sum(const GroupAction& action, const ElementSet& A, const PointSet& Y) {
  GACOMB_DISPATCH(pair_overlap_sum, action, A, Y);
}
CountMap<GroupElement> quotient_counts(const GroupAction& action, const ElementSet& A) {
  GACOMB_DISPATCH(quotient_counts, action, A);
}
ElementSet product_set(const GroupAction& action, const ElementSet& A, const ElementSet& B) {
  GACOMB_DISPATCH(product_set, action, A, B);
}
std::vector<std::uint64_t> intersection_matrix(const std::vector<std::vector<std::uint32_t>>& family) {
  GACOMB_DISPATCH(intersection_matrix, family);
}

#undef GACOMB_DISPATCH

}  // namespace gacomb::kernels
