#pragma once

#include <cstddef>
#include <vector>

#include "palcanon/matrix.hpp"

namespace palcanon {

struct EigenOptions {
  bool permute = true;  // isolate eigenvalues exposed by a permutation similarity
  bool scale = true;    // power-of-two diagonal balancing
};

/// Eigenvalues of a square complex matrix.
///
/// Pipeline: balancing (permutation + exact power-of-two scaling), Householder
/// reduction to upper Hessenberg form, then implicitly shifted complex QR with
/// Wilkinson shifts and deflation when |h(j+1,j)| <= eps (|h(j,j)| + |h(j+1,j+1)|).
/// Throws NumericalFailure if 30 n^2 QR sweeps do not converge or the input
/// is not finite.
std::vector<Complex> eigenvalues(const CMatrix& a, EigenOptions options = {});

/// Upper Hessenberg matrix unitarily similar to `a` (no balancing).
CMatrix hessenberg(const CMatrix& a);

}  // namespace palcanon
