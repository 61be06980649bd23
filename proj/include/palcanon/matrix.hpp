#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace palcanon {

using Complex = std::complex<double>;

/// Transpose (congruence) or conjugate transpose (*congruence).
enum class StarKind { Transpose, ConjugateTranspose };

/// z^⋆: z itself for the transpose, conj(z) for the conjugate transpose.
inline Complex star_scalar(Complex z, StarKind star) {
  return star == StarKind::ConjugateTranspose ? std::conj(z) : z;
}

/// Dense row-major complex matrix. Every constructor rejects non-finite
/// entries; element access through operator() is unchecked.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

/// Block-diagonal matrix with the blocks in list order.
CMatrix direct_sum(std::span<const CMatrix> blocks);
CMatrix direct_sum(std::initializer_list<CMatrix> blocks);

CMatrix star_transpose(const CMatrix& a, StarKind star);

double frobenius_norm(const CMatrix& a);

/// Largest entry modulus; handy for residual checks in tests.
double max_abs(const CMatrix& a);

/// Pivot ratio below which a matrix counts as near-singular.
inline constexpr double kNearSingularRatio = 1e-13;

/// PA = LU with partial pivoting, L unit lower triangular stored below the
/// diagonal of `lu`.
struct LuFactorization {
  CMatrix lu;
  std::vector<std::size_t> perm;  // row i of PA is row perm[i] of A
  double min_pivot_ratio = 0.0;   // smallest |u_ii| / ||A||_F
  bool near_singular = false;     // min_pivot_ratio < kNearSingularRatio

  CMatrix solve(const CMatrix& b) const;
  /// Solves A^* X = b.
  CMatrix solve_adjoint(const CMatrix& b) const;
};

/// Throws SingularMatrix on an exact zero pivot (including the zero matrix).
LuFactorization lu_factor(const CMatrix& a);

struct LuSolveResult {
  CMatrix x;
  double min_pivot_ratio = 0.0;
  bool near_singular = false;
};

/// Solves a·X = b. Near-singularity is reported, not thrown.
LuSolveResult lu_solve(const CMatrix& a, const CMatrix& b);

}  // namespace palcanon
