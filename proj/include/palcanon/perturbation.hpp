#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "palcanon/classifier.hpp"
#include "palcanon/matrix.hpp"
#include "palcanon/pencil.hpp"

namespace palcanon {

/// eps_j = j·delta, j = 1..count.
std::vector<double> linear_eps(std::size_t count, double delta);

/// eps_i = (count + 1 - i)·delta, strictly decreasing.
std::vector<double> decreasing_eps(std::size_t count, double delta);

/// α(Γ_k + Γ_k(ε)) for even k. Γ_k(ε) lives on the anti-diagonal: going up
/// from the bottom-left, (-1)^{j-1} ε_{2j-1}; going down from the top-right,
/// (-1)^j ε_{2j}. Needs k positive eps and |α| = 1.
CMatrix gamma_perturbation_even(std::size_t k, Complex alpha, const std::vector<double>& eps);

/// α(Γ_k + Γ̂_k(ε)) for odd k >= 3: as above with k-1 eps and a zero centre.
CMatrix gamma_perturbation_odd(std::size_t k, Complex alpha, const std::vector<double>& eps);

/// H_2k(μ) + [[0, 0], [D, 0]] with D = diag(ε_i e^{iφ}), φ = arg μ.
/// Needs |μ| >= 1 and eps strictly decreasing and positive.
CMatrix h_perturbation(std::size_t k, Complex mu, const std::vector<double>& eps);

/// ⊕_{j=1..count} [[0, 1], [1 + 1/(j·k), 0]].
CMatrix identity_to_hyperbolic_sequence(std::size_t count, std::size_t k);

/// λ_j = α(1+ε_{2j}) / (α^⋆(1+ε_{2j-1})) and 1/λ_j^⋆, j = 1..k/2.
PredictedSpectrum predicted_gamma_even(std::size_t k, Complex alpha, const std::vector<double>& eps, StarKind star);

/// λ_j = α(-1+ε_{2j}) / (α^⋆(1+ε_{2j-1})), 1/λ_j^⋆, and -α/α^⋆.
PredictedSpectrum predicted_gamma_odd(std::size_t k, Complex alpha, const std::vector<double>& eps, StarKind star);

/// λ_i = -(|μ| + ε_i) e^{iφ} and 1/λ_i^⋆.
PredictedSpectrum predicted_h(std::size_t k, Complex mu, const std::vector<double>& eps, StarKind star);

/// Which sign convention the computed spectrum matched.
enum class Convention { Direct, Negated };

struct PerturbationReport {
  CMatrix perturbed;
  PredictedSpectrum predicted;
  Spectrum computed;
  double max_rel_error = 0.0;
  double max_cluster_radius = 0.0;
  Convention convention = Convention::Direct;
  BundleClass classified;
};

/// Matches the pencil spectrum of `perturbed` against `predicted` and against
/// the prediction with every value negated, keeping the better fit. Throws
/// PredictionMismatch when neither fits within 10·tol.
PerturbationReport verify_prediction(const CMatrix& perturbed, const PredictedSpectrum& predicted, StarKind star,
                                     double tol);

std::string to_string(Convention c);

}  // namespace palcanon
