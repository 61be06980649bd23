#pragma once

#include <cstddef>
#include <cstdint>

#include "palcanon/matrix.hpp"
#include "palcanon/rng.hpp"

namespace palcanon {

/// Entries with real and imaginary parts independent uniform on [0, 1).
/// The n×n real parts are drawn first (row-major), then the imaginary parts.
CMatrix random_uniform_complex(std::size_t n, RngStream& rng);

/// Diagonal shift t·ln(t)/5 applied to both parts at trial t.
double shifted_integer_diagonal_shift(std::uint64_t trial_index);

/// R1 + s·I + i·(R2 + s·I) with R1, R2 integer-valued uniform on {1, ..., m}
/// and s = shifted_integer_diagonal_shift(trial_index).
CMatrix random_shifted_integer(std::size_t n, std::uint64_t trial_index, std::uint64_t m,
                               RngStream& rng);

/// Random invertible P = H1·D·H2 with H1, H2 Householder reflectors and D
/// diagonal with moduli log-uniform on [1/sqrt(c), sqrt(c)], so that
/// cond_2(P) <= cond_bound. cond_bound == 1 yields a unitary P.
CMatrix random_congruence(std::size_t n, RngStream& rng, double cond_bound);

}  // namespace palcanon
