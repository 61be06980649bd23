#include "palcanon/eigen.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

/// Rotation G = [c s; -conj(s) c] with G [a; b] = [r; 0].
struct Givens {
  double c = 1.0;
  Complex s{};
  Complex r{};
};

Givens make_givens(Complex a, Complex b) {
  if (b == Complex{}) return {1.0, Complex{}, a};
  if (a == Complex{}) return {0.0, Complex{1.0, 0.0}, b};
  const double abs_a = std::abs(a);
  const double rho = std::hypot(abs_a, std::abs(b));
  const Complex phase = a / abs_a;
  return {abs_a / rho, phase * std::conj(b) / rho, phase * rho};
}

void swap_rows_cols(CMatrix& a, std::size_t i, std::size_t j) {
  if (i == j) return;
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
  for (std::size_t r = 0; r < n; ++r) std::swap(a(r, i), a(r, j));
}

/// Permutation step of balancing. On return the eigenvalues outside the
/// inclusive window [lo, hi] sit on the diagonal, isolated.
void isolate_by_permutation(CMatrix& a, std::size_t& lo, std::size_t& hi) {
  const std::size_t n = a.rows();
  lo = 0;
  hi = n - 1;

  // Rows whose off-diagonal part (within the window) vanishes go to the bottom.
  bool found = true;
  while (found && hi > lo) {
    found = false;
    for (std::size_t j = hi + 1; j-- > lo;) {
      bool zero_row = true;
      for (std::size_t c = lo; c <= hi && zero_row; ++c)
        if (c != j && a(j, c) != Complex{}) zero_row = false;
      if (zero_row) {
        swap_rows_cols(a, j, hi);
        --hi;
        found = true;
        break;
      }
    }
  }
  // Columns likewise go to the top.
  found = true;
  while (found && hi > lo) {
    found = false;
    for (std::size_t j = lo; j <= hi; ++j) {
      bool zero_col = true;
      for (std::size_t r = lo; r <= hi && zero_col; ++r)
        if (r != j && a(r, j) != Complex{}) zero_col = false;
      if (zero_col) {
        swap_rows_cols(a, j, lo);
        ++lo;
        found = true;
        break;
      }
    }
  }
}

/// Power-of-two diagonal scaling that roughly equalizes row and column norms.
void scale_balance(CMatrix& b) {
  const std::size_t m = b.rows();
  constexpr double kFactor = 0.95;
  for (int sweep = 0; sweep < 200; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < m; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        c += std::abs(b(j, i));
        r += std::abs(b(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      double g = r / 2.0;
      while (c < g && f < 0x1.0p+500) {
        f *= 2.0;
        c *= 2.0;
        r /= 2.0;
        g /= 2.0;
      }
      g = c / 2.0;
      while (g >= r && f > 0x1.0p-500) {
        f /= 2.0;
        c /= 2.0;
        g /= 2.0;
        r *= 2.0;
      }
      if (c + r >= kFactor * s) continue;
      changed = true;
      for (std::size_t j = 0; j < m; ++j) b(i, j) /= f;
      for (std::size_t j = 0; j < m; ++j) b(j, i) *= f;
    }
    if (!changed) break;
  }
}

/// Householder reduction in place. Columns already zero below the
/// subdiagonal are left untouched so exact structure survives.
void reduce_to_hessenberg(CMatrix& h) {
  const std::size_t m = h.rows();
  if (m < 3) return;
  std::vector<Complex> v(m);
  for (std::size_t j = 0; j + 2 < m; ++j) {
    double tail = 0.0;
    for (std::size_t i = j + 2; i < m; ++i) tail += std::norm(h(i, j));
    if (tail == 0.0) continue;
    const Complex x0 = h(j + 1, j);
    const double norm_x = std::sqrt(std::norm(x0) + tail);
    const Complex phase = x0 == Complex{} ? Complex{1.0, 0.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * norm_x;
    // v = x - alpha e1, stored in rows j+1..m-1.
    v[j + 1] = x0 - alpha;
    for (std::size_t i = j + 2; i < m; ++i) v[i] = h(i, j);
    double vv = 0.0;
    for (std::size_t i = j + 1; i < m; ++i) vv += std::norm(v[i]);
    const double beta = 2.0 / vv;
    // Left: rows j+1.., columns j..
    for (std::size_t c = j; c < m; ++c) {
      Complex dot{};
      for (std::size_t i = j + 1; i < m; ++i) dot += std::conj(v[i]) * h(i, c);
      dot *= beta;
      for (std::size_t i = j + 1; i < m; ++i) h(i, c) -= v[i] * dot;
    }
    // Right: all rows, columns j+1..
    for (std::size_t r = 0; r < m; ++r) {
      Complex dot{};
      for (std::size_t i = j + 1; i < m; ++i) dot += h(r, i) * v[i];
      dot *= beta;
      for (std::size_t i = j + 1; i < m; ++i) h(r, i) -= dot * std::conj(v[i]);
    }
    h(j + 1, j) = alpha;
    for (std::size_t i = j + 2; i < m; ++i) h(i, j) = Complex{};
  }
}

/// Eigenvalue of the 2x2 [[a, b], [c, d]] closer to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex p = 0.5 * (a - d);
  const Complex bc = b * c;
  if (bc == Complex{}) return d;
  Complex disc = std::sqrt(p * p + bc);
  if (std::real(std::conj(p) * disc) < 0.0) disc = -disc;
  const Complex denom = p + disc;
  if (denom == Complex{}) return d;
  return d - bc / denom;
}

/// Eigenvalues of an upper Hessenberg matrix (destroyed).
void hessenberg_qr(CMatrix& h, std::vector<Complex>& out) {
  const std::size_t m = h.rows();
  if (m == 0) return;
  const std::size_t max_sweeps = 30 * m * m;
  std::size_t total = 0;
  std::size_t hi = m - 1;
  int its = 0;

  while (true) {
    if (hi == 0) {
      out.push_back(h(0, 0));
      return;
    }
    std::size_t l = hi;
    for (; l > 0; --l) {
      const double sub = std::abs(h(l, l - 1));
      if (sub <= kSafeMin) break;
      double tst = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (tst == 0.0) {
        if (l >= 2) tst += std::abs(h(l - 1, l - 2));
        if (l + 1 <= hi) tst += std::abs(h(l + 1, l));
      }
      if (sub <= kEps * tst) break;
    }
    if (l > 0) h(l, l - 1) = Complex{};
    if (l == hi) {
      out.push_back(h(hi, hi));
      --hi;
      its = 0;
      continue;
    }

    if (++total > max_sweeps) {
      throw NumericalFailure("QR iteration did not converge after " + std::to_string(max_sweeps) +
                             " sweeps");
    }
    ++its;

    Complex shift;
    if (its % 20 == 10) {
      shift = h(l, l) + 0.75 * std::abs(h(l + 1, l).real());
    } else if (its % 20 == 0) {
      shift = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real());
    } else {
      shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    for (std::size_t k = l; k < hi; ++k) {
      Givens g;
      if (k == l) {
        g = make_givens(h(l, l) - shift, h(l + 1, l));
      } else {
        g = make_givens(h(k, k - 1), h(k + 1, k - 1));
        h(k, k - 1) = g.r;
        h(k + 1, k - 1) = Complex{};
      }
      for (std::size_t c = k; c <= hi; ++c) {
        const Complex x = h(k, c);
        const Complex y = h(k + 1, c);
        h(k, c) = g.c * x + g.s * y;
        h(k + 1, c) = -std::conj(g.s) * x + g.c * y;
      }
      const std::size_t last = std::min(k + 2, hi);
      for (std::size_t r = l; r <= last; ++r) {
        const Complex x = h(r, k);
        const Complex y = h(r, k + 1);
        h(r, k) = g.c * x + std::conj(g.s) * y;
        h(r, k + 1) = -g.s * x + g.c * y;
      }
    }
  }
}

}  // namespace

CMatrix hessenberg(const CMatrix& a) {
  if (!a.square()) throw ValidationError("hessenberg: matrix is not square");
  CMatrix h = a;
  reduce_to_hessenberg(h);
  return h;
}

std::vector<Complex> eigenvalues(const CMatrix& a, EigenOptions options) {
  if (!a.square()) throw ValidationError("eigenvalues: matrix is not square");
  if (!a.all_finite()) throw NumericalFailure("eigenvalues: non-finite input");
  const std::size_t n = a.rows();
  std::vector<Complex> out;
  out.reserve(n);
  if (n == 0) return out;

  CMatrix work = a;
  std::size_t lo = 0;
  std::size_t hi = n - 1;
  if (options.permute) isolate_by_permutation(work, lo, hi);
  for (std::size_t i = 0; i < lo; ++i) out.push_back(work(i, i));
  for (std::size_t i = hi + 1; i < n; ++i) out.push_back(work(i, i));

  const std::size_t m = hi - lo + 1;
  CMatrix block(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) block(i, j) = work(lo + i, lo + j);
  if (options.scale && m > 1) scale_balance(block);
  reduce_to_hessenberg(block);
  hessenberg_qr(block, out);

  for (const auto& z : out) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw NumericalFailure("eigenvalues: non-finite eigenvalue");
    }
  }
  return out;
}

}  // namespace palcanon
