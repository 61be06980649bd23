#include "palcanon/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                          std::to_string(b.cols()));
  }
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw ValidationError("CMatrix: expected " + std::to_string(rows * cols) + " entries, got " +
                          std::to_string(data_.size()));
  }
  if (!all_finite()) throw ValidationError("CMatrix: non-finite entry");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ValidationError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  if (!all_finite()) throw ValidationError("CMatrix: non-finite entry");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  if (!m.all_finite()) throw ValidationError("CMatrix: non-finite entry");
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), finite);
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("operator*: inner dimension mismatch");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix direct_sum(std::span<const CMatrix> blocks) {
  if (blocks.empty()) throw ValidationError("direct_sum: empty block list");
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!b.square() || b.rows() == 0) throw ValidationError("direct_sum: non-square block");
    n += b.rows();
  }
  CMatrix out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

CMatrix direct_sum(std::initializer_list<CMatrix> blocks) {
  return direct_sum(std::span<const CMatrix>(blocks.begin(), blocks.size()));
}

CMatrix star_transpose(const CMatrix& a, StarKind star) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = star_scalar(a(i, j), star);
  return t;
}

double frobenius_norm(const CMatrix& a) {
  // Scaled accumulation, as in LAPACK's zlassq, to avoid overflow.
  double scale = 0.0;
  double ssq = 1.0;
  auto accumulate = [&](double v) {
    if (v == 0.0) return;
    const double av = std::abs(v);
    if (scale < av) {
      ssq = 1.0 + ssq * (scale / av) * (scale / av);
      scale = av;
    } else {
      ssq += (av / scale) * (av / scale);
    }
  };
  for (const auto& z : a.entries()) {
    accumulate(z.real());
    accumulate(z.imag());
  }
  return scale * std::sqrt(ssq);
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

LuFactorization lu_factor(const CMatrix& a) {
  if (!a.square()) throw ValidationError("lu_factor: matrix is not square");
  const std::size_t n = a.rows();
  LuFactorization f{a, std::vector<std::size_t>(n), 0.0, false};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  CMatrix& lu = f.lu;
  const double norm = frobenius_norm(a);
  double min_pivot = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      throw SingularMatrix("lu_factor: exact zero pivot in column " + std::to_string(k));
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    min_pivot = std::min(min_pivot, best);
    const Complex pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (lu(i, k) == Complex{}) continue;
      const Complex m = lu(i, k) / pivot;
      lu(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
    }
  }
  f.min_pivot_ratio = min_pivot / norm;
  f.near_singular = f.min_pivot_ratio < kNearSingularRatio;
  return f;
}

CMatrix LuFactorization::solve(const CMatrix& b) const {
  const std::size_t n = lu.rows();
  if (b.rows() != n) throw ValidationError("lu_solve: right-hand side has wrong row count");
  CMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = b(perm[i], j);
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = x(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= lu(i, k) * x(k, c);
      x(i, c) = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= lu(i, k) * x(k, c);
      x(i, c) = s / lu(i, i);
    }
  }
  return x;
}

CMatrix LuFactorization::solve_adjoint(const CMatrix& b) const {
  // A^* = U^* L^* P, so solve U^* w = b, then L^* z = w, then scatter by perm.
  const std::size_t n = lu.rows();
  if (b.rows() != n) throw ValidationError("lu_solve: right-hand side has wrong row count");
  CMatrix z = b;
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = z(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= std::conj(lu(k, i)) * z(k, c);
      z(i, c) = s / std::conj(lu(i, i));
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = z(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(lu(k, i)) * z(k, c);
      z(i, c) = s;
    }
  }
  CMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(perm[i], j) = z(i, j);
  return x;
}

LuSolveResult lu_solve(const CMatrix& a, const CMatrix& b) {
  const LuFactorization f = lu_factor(a);
  return {f.solve(b), f.min_pivot_ratio, f.near_singular};
}

}  // namespace palcanon
