#include "palcanon/blocks.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

constexpr double kPi = std::numbers::pi;

Complex minus_one_pow(std::size_t k) { return k % 2 == 0 ? Complex{1.0, 0.0} : Complex{-1.0, 0.0}; }

std::string block_name(const BlockSpec& b) {
  switch (b.type) {
    case BlockType::Type0:
      return "J0(" + std::to_string(b.k) + ")";
    case BlockType::TypeI:
      return "G(" + std::to_string(b.k) + ")*" + format_complex(b.param);
    case BlockType::TypeII:
      return "H(" + std::to_string(b.k) + ")*" + format_complex(b.param);
  }
  return {};
}

double parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError("bad number '" + std::string(s) + "'");
  }
  return v;
}

std::size_t parse_size(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("bad block size '" + std::string(s) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Pencil eigenvalues of a 1×1 or 2×2 generic block; mirrors the predicted
// spectrum rules without depending on the pencil module.
void generic_block_eigenvalues(const BlockSpec& b, StarKind star, std::vector<Complex>& out) {
  if (b.type == BlockType::TypeII) {
    out.push_back(-b.param);
    out.push_back(-1.0 / star_scalar(b.param, star));
  } else {
    out.push_back(-b.param / star_scalar(b.param, star));
  }
}

bool well_separated(const CanonicalFormSpec& spec, double min_gap) {
  std::vector<Complex> ev;
  for (const auto& b : spec.blocks) generic_block_eigenvalues(b, spec.star, ev);
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j)
      if (std::abs(ev[i] - ev[j]) < min_gap) return false;
  return true;
}

}  // namespace

std::size_t CanonicalFormSpec::size() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

bool CanonicalFormSpec::has_type0() const {
  return std::any_of(blocks.begin(), blocks.end(),
                     [](const BlockSpec& b) { return b.type == BlockType::Type0; });
}

CMatrix jordan_zero_block(std::size_t k) {
  if (k == 0) throw ValidationError("jordan_zero_block: k must be >= 1");
  CMatrix j(k, k);
  for (std::size_t i = 0; i + 1 < k; ++i) j(i, i + 1) = 1.0;
  return j;
}

CMatrix gamma_block(std::size_t k) {
  if (k == 0) throw ValidationError("gamma_block: k must be >= 1");
  CMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = (k - i + 1) % 2 == 0 ? 1.0 : -1.0;
    g(i, k - 1 - i) = s;
    if (i >= 1) g(i, k - i) = s;
  }
  return g;
}

CMatrix h_block(std::size_t k, Complex mu) {
  if (k == 0) throw ValidationError("h_block: k must be >= 1");
  CMatrix h(2 * k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    h(i, k + i) = 1.0;
    h(k + i, i) = mu;
    if (i + 1 < k) h(k + i, i + 1) = 1.0;
  }
  if (!h.all_finite()) throw ValidationError("h_block: non-finite mu");
  return h;
}

bool is_upper_unit_arc(Complex mu) {
  return std::abs(std::abs(mu) - 1.0) <= kUnitParamTol && mu.imag() > 0.0;
}

bool is_type2b(const BlockSpec& b) {
  return b.type == BlockType::TypeII && b.param == minus_one_pow(b.k);
}

std::vector<Violation> validate(const CanonicalFormSpec& spec) {
  std::vector<Violation> out;
  const bool transpose = spec.star == StarKind::Transpose;
  if (spec.blocks.empty()) out.push_back({0, "at least one block required"});
  for (std::size_t idx = 0; idx < spec.blocks.size(); ++idx) {
    const BlockSpec& b = spec.blocks[idx];
    if (b.k == 0) out.push_back({idx, "k >= 1 required"});
    if (!std::isfinite(b.param.real()) || !std::isfinite(b.param.imag())) {
      out.push_back({idx, "parameter must be finite"});
      continue;
    }
    if (b.type == BlockType::TypeI) {
      if (transpose) {
        if (b.param != Complex{1.0, 0.0}) out.push_back({idx, "α must be 1 under ⊤"});
      } else if (std::abs(std::abs(b.param) - 1.0) > kUnitParamTol) {
        out.push_back({idx, "|α|=1 required"});
      }
    } else if (b.type == BlockType::TypeII) {
      const double m = std::abs(b.param);
      if (transpose) {
        if (!(m > 1.0 || is_upper_unit_arc(b.param) || is_type2b(b))) {
          out.push_back({idx, "|μ|>1, μ=e^{iθ} with 0<θ<π, or μ=(−1)^k required"});
        }
      } else if (!(m > 1.0)) {
        out.push_back({idx, "|μ|>1 required"});
      }
    }
  }
  return out;
}

CMatrix realize(const CanonicalFormSpec& spec) {
  const auto violations = validate(spec);
  if (!violations.empty()) {
    std::string msg = "invalid canonical form spec:";
    for (const auto& v : violations) {
      msg += " [block " + std::to_string(v.block_index) + ": " + v.constraint + "]";
    }
    throw ValidationError(msg);
  }
  std::vector<CMatrix> mats;
  mats.reserve(spec.blocks.size());
  for (const auto& b : spec.blocks) {
    switch (b.type) {
      case BlockType::Type0:
        mats.push_back(jordan_zero_block(b.k));
        break;
      case BlockType::TypeI:
        mats.push_back(b.param * gamma_block(b.k));
        break;
      case BlockType::TypeII:
        mats.push_back(h_block(b.k, b.param));
        break;
    }
  }
  return direct_sum(mats);
}

Complex normalize_transpose_mu(std::size_t k, Complex mu) {
  if (mu == minus_one_pow(k) || mu == Complex{}) return mu;
  const double m = std::abs(mu);
  if (std::abs(m - 1.0) <= kUnitParamTol) {
    // On the unit circle 1/mu = conj(mu) up to rounding; keep the exact conjugate.
    return mu.imag() < 0.0 ? std::conj(mu) : mu;
  }
  return m < 1.0 ? 1.0 / mu : mu;
}

CanonicalFormSpec normalized(const CanonicalFormSpec& spec) {
  CanonicalFormSpec out = spec;
  if (spec.star != StarKind::Transpose) return out;
  for (auto& b : out.blocks)
    if (b.type == BlockType::TypeII) b.param = normalize_transpose_mu(b.k, b.param);
  return out;
}

bool normal_order_less(const BlockSpec& a, const BlockSpec& b) {
  if (a.type != b.type) return static_cast<int>(a.type) < static_cast<int>(b.type);
  switch (a.type) {
    case BlockType::Type0:
      return a.k > b.k;
    case BlockType::TypeI:
      if (a.k != b.k) return a.k < b.k;
      return std::arg(a.param) < std::arg(b.param);
    case BlockType::TypeII:
      if (a.k != b.k) return a.k < b.k;
      if (a.param.real() != b.param.real()) return a.param.real() < b.param.real();
      return a.param.imag() < b.param.imag();
  }
  return false;
}

CanonicalFormSpec normal_ordered(const CanonicalFormSpec& spec) {
  CanonicalFormSpec out = spec;
  std::stable_sort(out.blocks.begin(), out.blocks.end(), normal_order_less);
  return out;
}

CanonicalFormSpec generic_spec(std::size_t n, std::size_t ell, StarKind star, RngStream& rng) {
  if (n == 0) throw ValidationError("generic_spec: n must be >= 1");
  if (ell > n / 2) throw ValidationError("generic_spec: ell must be <= n/2");
  if (star == StarKind::Transpose && ell != n / 2) {
    throw ValidationError("generic_spec: under transpose ell must equal floor(n/2)");
  }
  constexpr double kMinGap = 1e-3;
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CanonicalFormSpec spec{star, {}};
    for (std::size_t i = 0; i < ell; ++i) {
      Complex mu;
      if (star == StarKind::Transpose && rng.uniform01() < 0.25) {
        mu = std::polar(1.0, rng.uniform(0.1, kPi - 0.1));
      } else {
        const double r = rng.uniform(1.5, 3.0);
        mu = std::polar(r, rng.uniform(0.0, 2.0 * kPi));
      }
      spec.blocks.push_back(BlockSpec::type2(1, mu));
    }
    for (std::size_t j = 0; j < n - 2 * ell; ++j) {
      const Complex alpha =
          star == StarKind::Transpose ? Complex{1.0, 0.0} : std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
      spec.blocks.push_back(BlockSpec::type1(1, alpha));
    }
    if (well_separated(spec, kMinGap)) return spec;
  }
  throw NumericalFailure("generic_spec: could not draw well-separated parameters");
}

Complex parse_complex(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ValidationError("empty complex number");
  if (s.back() != 'i') return {parse_double(s), 0.0};
  s.remove_suffix(1);
  for (std::size_t p = 1; p < s.size(); ++p) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      return {parse_double(s.substr(0, p)), parse_double(s.substr(p))};
    }
  }
  throw ValidationError("bad complex number '" + std::string(text) + "'");
}

std::string format_complex(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%c%.17gi", z.real(), std::signbit(z.imag()) ? '-' : '+',
                std::abs(z.imag()));
  return buf;
}

CanonicalFormSpec parse_spec(std::string_view text, StarKind star) {
  CanonicalFormSpec spec{star, {}};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t semi = std::min(text.find(';', pos), text.size());
    const std::string_view tok = trim(text.substr(pos, semi - pos));
    pos = semi + 1;
    const std::size_t open = tok.find('(');
    const std::size_t close = tok.find(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
      throw ValidationError("bad block '" + std::string(tok) + "'");
    }
    const std::string_view head = tok.substr(0, open);
    const std::size_t k = parse_size(tok.substr(open + 1, close - open - 1));
    const std::string_view rest = tok.substr(close + 1);
    if (head == "J0") {
      if (!rest.empty()) throw ValidationError("bad block '" + std::string(tok) + "'");
      spec.blocks.push_back(BlockSpec::type0(k));
      continue;
    }
    if (rest.empty() || rest.front() != '*') {
      throw ValidationError("bad block '" + std::string(tok) + "'");
    }
    const Complex z = parse_complex(rest.substr(1));
    if (head == "G") {
      spec.blocks.push_back(BlockSpec::type1(k, z));
    } else if (head == "H") {
      spec.blocks.push_back(BlockSpec::type2(k, z));
    } else {
      throw ValidationError("unknown block type '" + std::string(head) + "'");
    }
  }
  return spec;
}

std::string format_spec(const CanonicalFormSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.blocks.size(); ++i) {
    if (i > 0) out += ';';
    out += block_name(spec.blocks[i]);
  }
  return out;
}

}  // namespace palcanon
