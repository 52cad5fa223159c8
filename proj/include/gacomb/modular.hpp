#pragma once

#include <cstdint>
#include <vector>

#include "gacomb/rational.hpp"

namespace gacomb {

bool is_prime(std::int64_t n);
/// Representative of v in [0, m).
std::int64_t mod_norm(std::int64_t v, std::int64_t m);
std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t mod_pow(std::int64_t base, std::uint64_t exp, std::int64_t m);
/// Inverse modulo a prime p; precondition a ≢ 0.
std::int64_t mod_inv(std::int64_t a, std::int64_t p);

using MatrixFp = std::vector<std::vector<std::int64_t>>;
using MatrixQ = std::vector<std::vector<Rational>>;

/// Rank of the rows, by Gaussian elimination.
std::size_t rank_fp(MatrixFp rows, std::int64_t p);
std::size_t rank_q(MatrixQ rows);
std::int64_t det_fp(MatrixFp m, std::int64_t p);
Rational det_q(MatrixQ m);
/// Precondition: m invertible.
MatrixFp inverse_fp(const MatrixFp& m, std::int64_t p);
MatrixQ inverse_q(const MatrixQ& m);

}  // namespace gacomb
