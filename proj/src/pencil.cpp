#include "palcanon/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "palcanon/eigen.hpp"
#include "palcanon/error.hpp"

namespace palcanon {

namespace {

// Eigenvalues this close to the unit circle get refined on the pencil.
constexpr double kRefineBand = 1e-6;
constexpr int kRefineSteps = 4;

Complex vdot(const CMatrix& x, const CMatrix& y) {
  Complex s{};
  for (std::size_t i = 0; i < x.rows(); ++i) s += std::conj(x(i, 0)) * y(i, 0);
  return s;
}

bool normalize(CMatrix& x) {
  const double s = frobenius_norm(x);
  if (!(s > 0.0) || !std::isfinite(s)) return false;
  x *= 1.0 / s;
  return true;
}

// Two-sided Rayleigh quotient iteration on A + λB started from lambda0.
// The result is kept only if it stays within a quarter of the gap to the
// nearest other eigenvalue.
Complex refine_eigenvalue(const CMatrix& a, const CMatrix& b, const CMatrix& b_adj, Complex lambda0,
                          double gap) {
  const std::size_t n = a.rows();
  CMatrix x(n, 1);
  CMatrix y(n, 1);
  for (std::size_t i = 0; i < n; ++i) x(i, 0) = y(i, 0) = 1.0;
  Complex lambda = lambda0;
  for (int step = 0; step < kRefineSteps; ++step) {
    CMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) shifted(i, j) += lambda * b(i, j);
    LuFactorization f;
    try {
      f = lu_factor(shifted);
    } catch (const SingularMatrix&) {
      return lambda;  // exact eigenvalue
    }
    x = f.solve(b * x);
    y = f.solve_adjoint(b_adj * y);
    if (!normalize(x) || !normalize(y)) return lambda;
    const Complex den = vdot(y, b * x);
    if (den == Complex{}) return lambda;
    const Complex next = -vdot(y, a * x) / den;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) return lambda;
    if (std::abs(next - lambda0) > 0.25 * gap) return lambda;
    const bool settled = std::abs(next - lambda) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next);
    lambda = next;
    if (settled) break;
  }
  return lambda;
}

ModulusLabel label_for(double modulus, double source_norm, UnitTolerance tol) {
  if (is_unit_modulus(modulus, source_norm, tol)) return ModulusLabel::Unit;
  return modulus < 1.0 ? ModulusLabel::Inside : ModulusLabel::Outside;
}

double rel(Complex err, Complex ref) { return std::abs(err) / std::max(1.0, std::abs(ref)); }

}  // namespace

Spectrum pencil_eigenvalues(const CMatrix& a, StarKind star, PencilOptions options) {
  if (!a.square() || a.rows() == 0) throw ValidationError("pencil_eigenvalues: matrix must be square");
  const CMatrix b = star_transpose(a, star);
  const LuFactorization f = lu_factor(b);
  if (f.near_singular) {
    throw NearSingular("pencil_eigenvalues: pivot ratio " + std::to_string(f.min_pivot_ratio) +
                       " below threshold");
  }
  CMatrix m = f.solve(a);
  m *= -1.0;

  Spectrum s;
  s.values = eigenvalues(m);
  s.source_norm = frobenius_norm(a);

  const std::size_t n = s.values.size();
  if (options.refine && n > 1) {
    const CMatrix b_adj = star_transpose(b, StarKind::ConjugateTranspose);
    const std::vector<Complex> raw = s.values;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(std::abs(raw[i]) - 1.0) > kRefineBand) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) gap = std::min(gap, std::abs(raw[i] - raw[j]));
      s.values[i] = refine_eigenvalue(a, b, b_adj, raw[i], gap);
    }
  }

  s.moduli.resize(n);
  s.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.moduli[i] = std::abs(s.values[i]);
    s.labels[i] = label_for(s.moduli[i], s.source_norm, UnitTolerance{});
  }
  return s;
}

bool is_unit_modulus(double modulus, double source_norm, UnitTolerance tol) {
  const double dev = std::abs(modulus - 1.0);
  if (tol.scale_free) return dev <= tol.tol;
  return dev <= tol.tol * source_norm;
}

std::size_t count_unit(Spectrum& s, UnitTolerance tol) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    s.labels[i] = label_for(s.moduli[i], s.source_norm, tol);
    if (s.labels[i] == ModulusLabel::Unit) ++count;
  }
  return count;
}

double pairing_residual(Complex lambda, Complex mu, StarKind star) {
  const double r1 = rel(mu - 1.0 / star_scalar(lambda, star), mu);
  const double r2 = rel(lambda - 1.0 / star_scalar(mu, star), lambda);
  return std::max(r1, r2);
}

PairingReport reciprocal_pairing(const Spectrum& s, StarKind star, double pair_tol) {
  PairingReport report;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    if (s.labels[i] == ModulusLabel::Unit) {
      report.self_paired.push_back(i);
    } else {
      pending.push_back(i);
    }
  }

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t p = 0; p < pending.size(); ++p) {
    for (std::size_t q = p; q < pending.size(); ++q) {
      const std::size_t i = pending[p];
      const std::size_t j = pending[q];
      const double r = pairing_residual(s.values[i], s.values[j], star);
      if (i == j && r > pair_tol) continue;
      candidates.emplace_back(r, i, j);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });

  std::vector<bool> used(s.values.size(), false);
  std::size_t placed = 0;
  for (const auto& [r, i, j] : candidates) {
    if (used[i] || used[j]) continue;
    used[i] = used[j] = true;
    if (i == j) {
      report.self_paired.push_back(i);
      ++placed;
    } else {
      report.pairs.emplace_back(i, j);
      placed += 2;
    }
    report.max_residual = std::max(report.max_residual, r);
  }
  if (placed != pending.size()) {
    throw PairingFailure("reciprocal_pairing: " + std::to_string(pending.size() - placed) +
                         " eigenvalue(s) without a reciprocal partner");
  }
  return report;
}

std::size_t PredictedSpectrum::total_multiplicity() const {
  std::size_t t = 0;
  for (const auto& e : entries) t += e.multiplicity;
  return t;
}

void add_predicted(PredictedSpectrum& p, Complex value, std::size_t multiplicity) {
  for (auto& e : p.entries) {
    if (e.value == value) {
      e.multiplicity += multiplicity;
      return;
    }
  }
  p.entries.push_back({value, multiplicity});
}

PredictedSpectrum predicted_spectrum(const CanonicalFormSpec& spec) {
  PredictedSpectrum p;
  for (const auto& b : spec.blocks) {
    switch (b.type) {
      case BlockType::Type0:
        p.singular = true;
        break;
      case BlockType::TypeI: {
        const Complex sign = b.k % 2 == 0 ? 1.0 : -1.0;
        add_predicted(p, sign * b.param / star_scalar(b.param, spec.star), b.k);
        break;
      }
      case BlockType::TypeII:
        add_predicted(p, -b.param, b.k);
        add_predicted(p, -1.0 / star_scalar(b.param, spec.star), b.k);
        break;
    }
  }
  return p;
}

SpectrumMatch match_spectrum(const PredictedSpectrum& predicted, const std::vector<Complex>& computed) {
  SpectrumMatch out;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  out.assignment.assign(computed.size(), none);

  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  candidates.reserve(predicted.entries.size() * computed.size());
  for (std::size_t e = 0; e < predicted.entries.size(); ++e)
    for (std::size_t c = 0; c < computed.size(); ++c)
      candidates.emplace_back(rel(computed[c] - predicted.entries[e].value, predicted.entries[e].value), e,
                              c);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });

  std::vector<std::size_t> remaining;
  for (const auto& e : predicted.entries) remaining.push_back(e.multiplicity);
  for (const auto& [d, e, c] : candidates) {
    if (out.assignment[c] != none || remaining[e] == 0) continue;
    out.assignment[c] = e;
    --remaining[e];
  }

  out.complete = computed.size() == predicted.total_multiplicity() &&
                 std::all_of(remaining.begin(), remaining.end(), [](std::size_t r) { return r == 0; });

  for (std::size_t e = 0; e < predicted.entries.size(); ++e) {
    const Complex v = predicted.entries[e].value;
    Complex sum{};
    std::size_t members = 0;
    for (std::size_t c = 0; c < computed.size(); ++c) {
      if (out.assignment[c] != e) continue;
      sum += computed[c];
      ++members;
      out.max_cluster_radius = std::max(out.max_cluster_radius, rel(computed[c] - v, v));
    }
    if (members == 0) continue;
    out.max_rel_error = std::max(out.max_rel_error, rel(sum / static_cast<double>(members) - v, v));
  }
  if (!out.complete) out.max_rel_error = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace palcanon
