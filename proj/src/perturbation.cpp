#include "palcanon/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "palcanon/blocks.hpp"
#include "palcanon/error.hpp"

namespace palcanon {

namespace {

void require_unit_alpha(Complex alpha, const char* who) {
  if (std::abs(std::abs(alpha) - 1.0) > kUnitParamTol) throw ValidationError(std::string(who) + ": |alpha| must be 1");
}

void require_positive(const std::vector<double>& eps, const char* who) {
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError(std::string(who) + ": eps must be positive");
}

double sign_pow(std::size_t j) { return j % 2 == 0 ? 1.0 : -1.0; }

// Adds the paired anti-diagonal entries for j = 1..half.
void add_anti_diagonal(CMatrix& g, const std::vector<double>& eps, std::size_t half) {
  const std::size_t k = g.rows();
  for (std::size_t j = 1; j <= half; ++j) {
    g(j - 1, k - j) += sign_pow(j) * eps[2 * j - 1];
    g(k - j, j - 1) += sign_pow(j - 1) * eps[2 * j - 2];
  }
}

void add_pair(PredictedSpectrum& p, Complex lambda, StarKind star) {
  add_predicted(p, lambda, 1);
  add_predicted(p, 1.0 / star_scalar(lambda, star), 1);
}

PredictedSpectrum negated(const PredictedSpectrum& p) {
  PredictedSpectrum q = p;
  for (auto& e : q.entries) e.value = -e.value;
  return q;
}

}  // namespace

std::vector<double> linear_eps(std::size_t count, double delta) {
  std::vector<double> eps(count);
  for (std::size_t j = 0; j < count; ++j) eps[j] = static_cast<double>(j + 1) * delta;
  return eps;
}

std::vector<double> decreasing_eps(std::size_t count, double delta) {
  std::vector<double> eps(count);
  for (std::size_t i = 0; i < count; ++i) eps[i] = static_cast<double>(count - i) * delta;
  return eps;
}

CMatrix gamma_perturbation_even(std::size_t k, Complex alpha, const std::vector<double>& eps) {
  if (k == 0 || k % 2 != 0) throw ValidationError("gamma_perturbation_even: k must be even and positive");
  if (eps.size() != k) throw ValidationError("gamma_perturbation_even: need k eps values");
  require_positive(eps, "gamma_perturbation_even");
  require_unit_alpha(alpha, "gamma_perturbation_even");
  CMatrix g = gamma_block(k);
  add_anti_diagonal(g, eps, k / 2);
  return alpha * g;
}

CMatrix gamma_perturbation_odd(std::size_t k, Complex alpha, const std::vector<double>& eps) {
  if (k < 3 || k % 2 != 1) throw ValidationError("gamma_perturbation_odd: k must be odd and >= 3");
  if (eps.size() != k - 1) throw ValidationError("gamma_perturbation_odd: need k-1 eps values");
  require_positive(eps, "gamma_perturbation_odd");
  require_unit_alpha(alpha, "gamma_perturbation_odd");
  for (std::size_t j = 1; j <= (k - 1) / 2; ++j) {
    const double ratio = std::abs((-1.0 + eps[2 * j - 1]) / (1.0 + eps[2 * j - 2]));
    if (!(ratio > 0.0 && ratio < 1.0)) {
      throw ValidationError("gamma_perturbation_odd: need 0 < |(-1+eps_2j)/(1+eps_2j-1)| < 1");
    }
  }
  CMatrix g = gamma_block(k);
  add_anti_diagonal(g, eps, (k - 1) / 2);
  return alpha * g;
}

CMatrix h_perturbation(std::size_t k, Complex mu, const std::vector<double>& eps) {
  if (k == 0) throw ValidationError("h_perturbation: k must be >= 1");
  if (eps.size() != k) throw ValidationError("h_perturbation: need k eps values");
  require_positive(eps, "h_perturbation");
  for (std::size_t i = 1; i < k; ++i)
    if (!(eps[i] < eps[i - 1])) throw ValidationError("h_perturbation: eps must be strictly decreasing");
  if (std::abs(mu) < 1.0 - kUnitParamTol) throw ValidationError("h_perturbation: |mu| must be >= 1");
  CMatrix h = h_block(k, mu);
  const double phi = std::arg(mu);
  for (std::size_t i = 0; i < k; ++i) h(k + i, i) += std::polar(eps[i], phi);
  return h;
}

CMatrix identity_to_hyperbolic_sequence(std::size_t count, std::size_t k) {
  if (count == 0 || k == 0) throw ValidationError("identity_to_hyperbolic_sequence: count and k must be >= 1");
  std::vector<CMatrix> blocks;
  for (std::size_t j = 1; j <= count; ++j) {
    blocks.push_back(CMatrix{{0.0, 1.0}, {1.0 + 1.0 / static_cast<double>(j * k), 0.0}});
  }
  return direct_sum(blocks);
}

PredictedSpectrum predicted_gamma_even(std::size_t k, Complex alpha, const std::vector<double>& eps, StarKind star) {
  if (k == 0 || k % 2 != 0 || eps.size() != k) throw ValidationError("predicted_gamma_even: bad arguments");
  PredictedSpectrum p;
  const Complex ratio = alpha / star_scalar(alpha, star);
  for (std::size_t j = 1; j <= k / 2; ++j) {
    add_pair(p, ratio * (1.0 + eps[2 * j - 1]) / (1.0 + eps[2 * j - 2]), star);
  }
  return p;
}

PredictedSpectrum predicted_gamma_odd(std::size_t k, Complex alpha, const std::vector<double>& eps, StarKind star) {
  if (k < 3 || k % 2 != 1 || eps.size() != k - 1) throw ValidationError("predicted_gamma_odd: bad arguments");
  PredictedSpectrum p;
  const Complex ratio = alpha / star_scalar(alpha, star);
  for (std::size_t j = 1; j <= (k - 1) / 2; ++j) {
    add_pair(p, ratio * (-1.0 + eps[2 * j - 1]) / (1.0 + eps[2 * j - 2]), star);
  }
  add_predicted(p, -ratio, 1);
  return p;
}

PredictedSpectrum predicted_h(std::size_t k, Complex mu, const std::vector<double>& eps, StarKind star) {
  if (k == 0 || eps.size() != k) throw ValidationError("predicted_h: bad arguments");
  PredictedSpectrum p;
  const double phi = std::arg(mu);
  for (std::size_t i = 0; i < k; ++i) add_pair(p, -std::polar(std::abs(mu) + eps[i], phi), star);
  return p;
}

PerturbationReport verify_prediction(const CMatrix& perturbed, const PredictedSpectrum& predicted, StarKind star,
                                     double tol) {
  PerturbationReport r;
  r.perturbed = perturbed;
  r.computed = pencil_eigenvalues(perturbed, star);
  const SpectrumMatch direct = match_spectrum(predicted, r.computed.values);
  const PredictedSpectrum flipped = negated(predicted);
  const SpectrumMatch neg = match_spectrum(flipped, r.computed.values);
  const bool use_direct = direct.max_rel_error <= neg.max_rel_error;
  const SpectrumMatch& best = use_direct ? direct : neg;
  r.convention = use_direct ? Convention::Direct : Convention::Negated;
  r.predicted = use_direct ? predicted : flipped;
  r.max_rel_error = best.max_rel_error;
  r.max_cluster_radius = best.max_cluster_radius;
  if (!(r.max_rel_error <= 10.0 * tol)) {
    throw PredictionMismatch("verify_prediction: best relative error " + std::to_string(r.max_rel_error) +
                             " exceeds 10*tol");
  }
  r.classified = classify_generic(perturbed, star);
  return r;
}

std::string to_string(Convention c) { return c == Convention::Direct ? "direct" : "negated"; }

}  // namespace palcanon
