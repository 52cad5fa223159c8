#include "gacomb/modular.hpp"

#include <utility>

#include "gacomb/error.hpp"

namespace gacomb {

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::int64_t mod_norm(std::int64_t v, std::int64_t m) {
  v %= m;
  return v < 0 ? v + m : v;
}

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t mod_pow(std::int64_t base, std::uint64_t exp, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod_norm(base, m);
  while (exp > 0) {
    if (exp & 1u) result = mod_mul(result, base, m);
    base = mod_mul(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::int64_t mod_inv(std::int64_t a, std::int64_t p) {
  a = mod_norm(a, p);
  if (a == 0) throw InvalidArgument("zero has no inverse mod " + std::to_string(p));
  return mod_pow(a, static_cast<std::uint64_t>(p - 2), p);
}

namespace {

// Row-reduces in place; returns the rank and accumulates the determinant
// factor (product of pivots with sign) for square input.
template <class T, class Ops>
std::size_t eliminate(std::vector<std::vector<T>>& m, const Ops& ops, T& det) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::size_t rank = 0;
  det = ops.one();
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && ops.is_zero(m[pivot][c])) ++pivot;
    if (pivot == rows) {
      det = ops.zero();
      continue;
    }
    if (pivot != rank) {
      std::swap(m[pivot], m[rank]);
      det = ops.neg(det);
    }
    det = ops.mul(det, m[rank][c]);
    T inv = ops.inv(m[rank][c]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || ops.is_zero(m[r][c])) continue;
      T f = ops.mul(m[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) m[r][k] = ops.sub(m[r][k], ops.mul(f, m[rank][k]));
    }
    ++rank;
  }
  if (rank < rows) det = ops.zero();
  return rank;
}

struct FpOps {
  std::int64_t p;
  std::int64_t zero() const { return 0; }
  std::int64_t one() const { return 1; }
  bool is_zero(std::int64_t v) const { return mod_norm(v, p) == 0; }
  std::int64_t neg(std::int64_t v) const { return mod_norm(-v, p); }
  std::int64_t mul(std::int64_t a, std::int64_t b) const { return mod_mul(mod_norm(a, p), mod_norm(b, p), p); }
  std::int64_t sub(std::int64_t a, std::int64_t b) const { return mod_norm(a - b, p); }
  std::int64_t inv(std::int64_t v) const { return mod_inv(v, p); }
};

struct QOps {
  Rational zero() const { return 0; }
  Rational one() const { return 1; }
  bool is_zero(const Rational& v) const { return v == 0; }
  Rational neg(const Rational& v) const { return -v; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational sub(const Rational& a, const Rational& b) const { return a - b; }
  Rational inv(const Rational& v) const { return 1 / v; }
};

template <class T, class Ops>
std::vector<std::vector<T>> invert(const std::vector<std::vector<T>>& m, const Ops& ops) {
  const std::size_t n = m.size();
  {
    auto copy = m;
    T det;
    eliminate(copy, ops, det);
    if (ops.is_zero(det)) throw InvalidArgument("singular matrix");
  }
  std::vector<std::vector<T>> aug(n, std::vector<T>(2 * n, ops.zero()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = ops.one();
  }
  T det;
  eliminate(aug, ops, det);
  std::vector<std::vector<T>> out(n, std::vector<T>(n));
  for (std::size_t i = 0; i < n; ++i) {
    T inv = ops.inv(aug[i][i]);
    for (std::size_t j = 0; j < n; ++j) out[i][j] = ops.mul(aug[i][n + j], inv);
  }
  return out;
}

}  // namespace

std::size_t rank_fp(MatrixFp rows, std::int64_t p) {
  std::int64_t det;
  return eliminate(rows, FpOps{p}, det);
}

std::size_t rank_q(MatrixQ rows) {
  Rational det;
  return eliminate(rows, QOps{}, det);
}

std::int64_t det_fp(MatrixFp m, std::int64_t p) {
  std::int64_t det;
  eliminate(m, FpOps{p}, det);
  return mod_norm(det, p);
}

Rational det_q(MatrixQ m) {
  Rational det;
  eliminate(m, QOps{}, det);
  return det;
}

MatrixFp inverse_fp(const MatrixFp& m, std::int64_t p) {
  auto out = invert(m, FpOps{p});
  for (auto& row : out)
    for (auto& v : row) v = mod_norm(v, p);
  return out;
}

MatrixQ inverse_q(const MatrixQ& m) { return invert(m, QOps{}); }

}  // namespace gacomb
