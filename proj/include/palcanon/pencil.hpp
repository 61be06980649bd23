#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "palcanon/blocks.hpp"
#include "palcanon/matrix.hpp"

namespace palcanon {

enum class ModulusLabel { Inside, Unit, Outside };

/// Eigenvalues of A + λA^⋆ with modulus labels.
struct Spectrum {
  std::vector<Complex> values;
  std::vector<double> moduli;
  std::vector<ModulusLabel> labels;
  double source_norm = 0.0;  // ||A||_F
};

/// Unit-modulus rule: | |λ| - 1 | <= tol * ||A||_F by default, or
/// | |λ| - 1 | <= tol when scale_free is set.
struct UnitTolerance {
  double tol = 1e-14;
  bool scale_free = false;
};

struct PencilOptions {
  /// Re-solve eigenvalues near the unit circle on the pencil itself with
  /// two-sided Rayleigh quotient iteration.
  bool refine = true;
};

/// Roots of det(A + λA^⋆), computed as eigenvalues of -(A^⋆)^{-1}A.
/// Throws NearSingular if the LU of A^⋆ has a pivot ratio below
/// kNearSingularRatio, SingularMatrix on an exact zero pivot, and
/// NumericalFailure if QR does not converge. Labels use the default
/// UnitTolerance.
Spectrum pencil_eigenvalues(const CMatrix& a, StarKind star, PencilOptions options = {});

bool is_unit_modulus(double modulus, double source_norm, UnitTolerance tol);

/// Number of unit eigenvalues; relabels `s` under `tol`.
std::size_t count_unit(Spectrum& s, UnitTolerance tol = {});

struct PairingReport {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> self_paired;  // unit-labelled, or within pair_tol of 1/λ^⋆
  double max_residual = 0.0;             // over `pairs`
};

/// |μ - 1/λ^⋆| / max(1, |μ|), symmetrized over the two orders.
double pairing_residual(Complex lambda, Complex mu, StarKind star);

/// Greedy minimum-residual matching of the non-unit eigenvalues into pairs
/// (λ, 1/λ^⋆). Throws PairingFailure if one eigenvalue is left over and is
/// not its own partner within pair_tol.
PairingReport reciprocal_pairing(const Spectrum& s, StarKind star, double pair_tol);

struct PredictedEntry {
  Complex value;
  std::size_t multiplicity = 1;
};

struct PredictedSpectrum {
  std::vector<PredictedEntry> entries;
  bool singular = false;

  std::size_t total_multiplicity() const;
};

/// Per block: TypeII(k, μ) gives -μ and -1/μ^⋆, each k times;
/// TypeI(k, α) gives (-1)^k α/α^⋆, k times; Type0 only sets `singular`.
/// Exactly equal values are merged.
PredictedSpectrum predicted_spectrum(const CanonicalFormSpec& spec);

/// Appends (value, multiplicity), merging with an exactly equal entry.
void add_predicted(PredictedSpectrum& p, Complex value, std::size_t multiplicity);

struct SpectrumMatch {
  bool complete = false;             // every predicted slot received a computed value
  double max_rel_error = 0.0;        // |cluster mean - value| / max(1, |value|)
  double max_cluster_radius = 0.0;   // max |member - value| / max(1, |value|)
  std::vector<std::size_t> assignment;  // computed index -> predicted entry index
};

/// Greedy nearest-neighbour matching of computed values to predicted
/// entries, each entry taking as many values as its multiplicity. Entries of
/// multiplicity > 1 are compared by the mean of their members.
SpectrumMatch match_spectrum(const PredictedSpectrum& predicted, const std::vector<Complex>& computed);

}  // namespace palcanon
