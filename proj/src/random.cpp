#include "palcanon/random.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

/// I - 2 v v^* / (v^* v) for a random nonzero v.
CMatrix random_reflector(std::size_t n, RngStream& rng) {
  std::vector<Complex> v(n);
  double vv = 0.0;
  do {
    vv = 0.0;
    for (auto& z : v) {
      z = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      vv += std::norm(z);
    }
  } while (vv < 1e-8);
  CMatrix h = CMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) -= 2.0 * v[i] * std::conj(v[j]) / vv;
  return h;
}

}  // namespace

CMatrix random_uniform_complex(std::size_t n, RngStream& rng) {
  if (n == 0) throw ValidationError("random_uniform_complex: n must be >= 1");
  CMatrix a(n, n);
  for (auto& z : a.entries()) z.real(rng.uniform01());
  for (auto& z : a.entries()) z.imag(rng.uniform01());
  return a;
}

double shifted_integer_diagonal_shift(std::uint64_t trial_index) {
  const double t = static_cast<double>(trial_index);
  return t * std::log(t) / 5.0;
}

CMatrix random_shifted_integer(std::size_t n, std::uint64_t trial_index, std::uint64_t m,
                               RngStream& rng) {
  if (n == 0) throw ValidationError("random_shifted_integer: n must be >= 1");
  if (trial_index == 0) throw ValidationError("random_shifted_integer: trial index must be >= 1");
  if (m == 0) throw ValidationError("random_shifted_integer: m must be >= 1");
  CMatrix a(n, n);
  for (auto& z : a.entries()) z.real(static_cast<double>(rng.uniform_int1(m)));
  for (auto& z : a.entries()) z.imag(static_cast<double>(rng.uniform_int1(m)));
  const double shift = shifted_integer_diagonal_shift(trial_index);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += Complex(shift, shift);
  return a;
}

CMatrix random_congruence(std::size_t n, RngStream& rng, double cond_bound) {
  if (n == 0) throw ValidationError("random_congruence: n must be >= 1");
  if (!(cond_bound >= 1.0)) throw ValidationError("random_congruence: cond_bound must be >= 1");
  const double half_log = 0.5 * std::log(cond_bound);
  std::vector<Complex> d(n);
  for (auto& z : d) {
    const double modulus = std::exp(rng.uniform(-half_log, half_log));
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    z = std::polar(modulus, phase);
  }
  return random_reflector(n, rng) * CMatrix::diagonal(d) * random_reflector(n, rng);
}

}  // namespace palcanon
