#include "palcanon/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "palcanon/error.hpp"

namespace palcanon {

namespace {

constexpr double kTransposePairTol = 1e-6;

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void insert_unique(std::vector<Complex>& set, Complex z) {
  const auto it = std::lower_bound(set.begin(), set.end(), z, lex_less);
  if (it == set.end() || *it != z) set.insert(it, z);
}

bool contains(const std::vector<Complex>& set, Complex z) {
  return std::binary_search(set.begin(), set.end(), z, lex_less);
}

bool intersects(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return std::any_of(a.begin(), a.end(), [&](Complex z) { return contains(b, z); });
}

void require_valid(const CanonicalFormSpec& s, const char* what) {
  const auto v = validate(s);
  if (!v.empty()) {
    throw ValidationError(std::string(what) + ": invalid spec (block " + std::to_string(v.front().block_index) +
                          ": " + v.front().constraint + ")");
  }
}

/// Blocks grouped by parameter value; the signature is the sorted list of
/// per-class sorted size lists, so two forms share a signature iff some
/// size-preserving bijection maps equal parameters to equal parameters.
using ClassSignature = std::vector<std::vector<std::size_t>>;

struct ParamClass {
  Complex key;
  std::vector<std::size_t> sizes;
};

ClassSignature signature_of(std::vector<ParamClass> classes) {
  ClassSignature sig;
  for (auto& c : classes) {
    std::sort(c.sizes.begin(), c.sizes.end());
    sig.push_back(std::move(c.sizes));
  }
  std::sort(sig.begin(), sig.end());
  return sig;
}

void add_to_class(std::vector<ParamClass>& classes, Complex key, std::size_t size) {
  for (auto& c : classes) {
    if (c.key == key) {
      c.sizes.push_back(size);
      return;
    }
  }
  classes.push_back({key, {size}});
}

struct BundleSignature {
  std::vector<std::size_t> type0;
  std::vector<std::size_t> type2b;
  ClassSignature type1;
  ClassSignature type2;

  friend bool operator==(const BundleSignature&, const BundleSignature&) = default;
};

BundleSignature bundle_signature(const CanonicalFormSpec& raw) {
  const CanonicalFormSpec spec = normalized(raw);
  const bool transpose = spec.star == StarKind::Transpose;
  BundleSignature sig;
  std::vector<ParamClass> type1;
  std::vector<ParamClass> type2;
  for (const auto& b : spec.blocks) {
    switch (b.type) {
      case BlockType::Type0:
        sig.type0.push_back(b.k);
        break;
      case BlockType::TypeI: {
        // Under conjugate transpose, blocks i and j must agree on whether
        // (-1)^{k_i} α_i² = (-1)^{k_j} α_j²; this single key encodes both
        // the same-parity and opposite-parity conditions.
        const Complex key = transpose ? Complex{1.0, 0.0} : (b.k % 2 == 0 ? 1.0 : -1.0) * b.param * b.param;
        add_to_class(type1, key, b.k);
        break;
      }
      case BlockType::TypeII:
        if (transpose && is_type2b(b)) {
          sig.type2b.push_back(b.k);
        } else {
          add_to_class(type2, b.param, b.k);
        }
        break;
    }
  }
  std::sort(sig.type0.begin(), sig.type0.end());
  std::sort(sig.type2b.begin(), sig.type2b.end());
  sig.type1 = signature_of(std::move(type1));
  sig.type2 = signature_of(std::move(type2));
  return sig;
}

void write_g17(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

std::string to_string(NonGenericReason r) {
  switch (r) {
    case NonGenericReason::Singular:
      return "Singular";
    case NonGenericReason::RepeatedEigenvalue:
      return "RepeatedEigenvalue";
    case NonGenericReason::UnexpectedUnitCount:
      return "UnexpectedUnitCount";
    case NonGenericReason::PairCollision:
      return "PairCollision";
    case NonGenericReason::NumericalFailure:
      return "NumericalFailure";
  }
  return "?";
}

std::string to_string(const BundleClass& c) {
  switch (c.kind) {
    case BundleClass::Kind::GenericStar:
      return "GenericStar(" + std::to_string(c.ell) + ")";
    case BundleClass::Kind::GenericCongruence:
      return std::string("GenericCongruence(") + (c.n_odd ? "odd" : "even") + ")";
    case BundleClass::Kind::NonGeneric:
      return "NonGeneric(" + to_string(c.reason) + ")";
  }
  return "?";
}

Classification classify(const CMatrix& a, StarKind star, UnitTolerance unit_tol, double distinct_tol) {
  if (!a.square() || a.rows() == 0) throw ValidationError("classify: matrix must be square");
  Classification out;
  out.n = a.rows();
  try {
    out.spectrum = pencil_eigenvalues(a, star);
  } catch (const SingularMatrix&) {
    out.cls = BundleClass::non_generic(NonGenericReason::Singular);
    return out;
  } catch (const NearSingular&) {
    out.cls = BundleClass::non_generic(NonGenericReason::Singular);
    return out;
  } catch (const NumericalFailure&) {
    out.cls = BundleClass::non_generic(NonGenericReason::NumericalFailure);
    return out;
  }
  Spectrum& s = out.spectrum;
  const std::size_t n = out.n;
  out.unit_count = count_unit(s, unit_tol);

  const double scale = *std::max_element(s.moduli.begin(), s.moduli.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s.values[i] - s.values[j]) < distinct_tol * scale) {
        out.cls = BundleClass::non_generic(NonGenericReason::RepeatedEigenvalue);
        return out;
      }
    }
  }

  const std::size_t m = out.unit_count;
  if (m % 2 != n % 2) {
    out.cls = BundleClass::non_generic(NonGenericReason::UnexpectedUnitCount);
    return out;
  }
  if (star == StarKind::ConjugateTranspose) {
    out.cls = BundleClass::generic_star((n - m) / 2);
    return out;
  }

  // Transpose: one eigenvalue at -1 when n is odd; everything else must
  // split into distinct reciprocal pairs (λ, 1/λ).
  std::vector<std::size_t> rest(n);
  for (std::size_t i = 0; i < n; ++i) rest[i] = i;
  if (n % 2 == 1) {
    const auto nearest = std::min_element(rest.begin(), rest.end(), [&](std::size_t x, std::size_t y) {
      return std::abs(s.values[x] + 1.0) < std::abs(s.values[y] + 1.0);
    });
    if (std::abs(s.values[*nearest] + 1.0) > kMinusOneTol) {
      out.cls = BundleClass::non_generic(NonGenericReason::UnexpectedUnitCount);
      return out;
    }
    rest.erase(nearest);
  }
  Spectrum sub;
  sub.source_norm = s.source_norm;
  for (std::size_t i : rest) {
    sub.values.push_back(s.values[i]);
    sub.moduli.push_back(s.moduli[i]);
    sub.labels.push_back(ModulusLabel::Outside);  // no exemptions
  }
  try {
    const PairingReport pr = reciprocal_pairing(sub, star, -1.0);
    if (pr.max_residual > kTransposePairTol) {
      out.cls = BundleClass::non_generic(NonGenericReason::PairCollision);
      return out;
    }
  } catch (const PairingFailure&) {
    out.cls = BundleClass::non_generic(NonGenericReason::PairCollision);
    return out;
  }
  out.cls = BundleClass::generic_congruence(n % 2 == 1);
  return out;
}

BundleClass classify_generic(const CMatrix& a, StarKind star, UnitTolerance unit_tol, double distinct_tol) {
  return classify(a, star, unit_tol, distinct_tol).cls;
}

std::string report_line(const Classification& c) {
  std::string cls = "NG";
  std::string ell = "-";
  std::string reason = "-";
  switch (c.cls.kind) {
    case BundleClass::Kind::GenericStar:
      cls = "G*";
      ell = std::to_string(c.cls.ell);
      break;
    case BundleClass::Kind::GenericCongruence:
      cls = "Gc";
      break;
    case BundleClass::Kind::NonGeneric:
      reason = to_string(c.cls.reason);
      break;
  }
  return "class=" + cls + " ell=" + ell + " n=" + std::to_string(c.n) +
         " unit_count=" + std::to_string(c.unit_count) + " reason=" + reason;
}

void write_eigenvalue_csv(const Spectrum& s, std::ostream& out) {
  out << "index,re,im,modulus,label\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    out << i << ',';
    write_g17(out, s.values[i].real());
    out << ',';
    write_g17(out, s.values[i].imag());
    out << ',';
    write_g17(out, s.moduli[i]);
    const char* label = s.labels[i] == ModulusLabel::Unit     ? "unit"
                        : s.labels[i] == ModulusLabel::Inside ? "inside"
                                                              : "outside";
    out << ',' << label << '\n';
  }
}

ParameterSets parameter_sets(const CanonicalFormSpec& raw) {
  const CanonicalFormSpec spec = normalized(raw);
  ParameterSets ps;
  for (const auto& b : spec.blocks) {
    if (spec.star == StarKind::Transpose) {
      if (b.type == BlockType::TypeII && !is_type2b(b)) insert_unique(ps.s_h_t, b.param);
      continue;
    }
    if (b.type == BlockType::TypeI) {
      insert_unique(ps.s_gamma, b.param);
      insert_unique(ps.s_gamma2, b.param * b.param);
      insert_unique(ps.s_gamma2_neg, -(b.param * b.param));
    } else if (b.type == BlockType::TypeII) {
      insert_unique(ps.s_h_star, b.param);
    }
  }
  return ps;
}

bool bundle_membership(const CanonicalFormSpec& a, const CanonicalFormSpec& c) {
  if (a.star != c.star) throw ValidationError("bundle_membership: star mismatch");
  if (a.size() != c.size()) throw ValidationError("bundle_membership: size mismatch");
  require_valid(a, "bundle_membership");
  require_valid(c, "bundle_membership");
  return bundle_signature(a) == bundle_signature(c);
}

bool bundle_equal(const CanonicalFormSpec& c1, const CanonicalFormSpec& c2) {
  return bundle_membership(c1, c2) && bundle_membership(c2, c1);
}

bool direct_sum_closure_check(std::span<const CanonicalFormSpec> a_specs,
                              std::span<const CanonicalFormSpec> c_specs, StarKind star) {
  if (a_specs.empty() || a_specs.size() != c_specs.size()) {
    throw ValidationError("direct_sum_closure_check: lists must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < a_specs.size(); ++i) {
    if (a_specs[i].star != star || c_specs[i].star != star) {
      throw ValidationError("direct_sum_closure_check: star mismatch");
    }
    if (a_specs[i].size() != c_specs[i].size()) {
      throw ValidationError("direct_sum_closure_check: size mismatch at summand " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < a_specs.size(); ++i)
    if (!bundle_membership(a_specs[i], c_specs[i])) return false;

  std::vector<ParameterSets> sets;
  for (const auto& c : c_specs) sets.push_back(parameter_sets(c));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (i == j) continue;
      if (star == StarKind::Transpose) {
        if (intersects(sets[i].s_h_t, sets[j].s_h_t)) return false;
      } else {
        if (intersects(sets[i].s_gamma2, sets[j].s_gamma2)) return false;
        if (intersects(sets[i].s_gamma2, sets[j].s_gamma2_neg)) return false;
        if (intersects(sets[i].s_h_star, sets[j].s_h_star)) return false;
      }
    }
  }
  return true;
}

std::vector<CanonicalFormSpec> make_parameters_distinct(std::vector<CanonicalFormSpec> specs, std::size_t k) {
  if (k == 0) throw ValidationError("make_parameters_distinct: k must be >= 1");
  for (auto& s : specs) s = normalized(s);
  std::vector<ParameterSets> sets;
  for (const auto& s : specs) sets.push_back(parameter_sets(s));

  auto alpha_collides = [&](std::size_t i, Complex alpha) {
    const Complex a2 = alpha * alpha;
    for (std::size_t j = 0; j < specs.size(); ++j) {
      if (j == i) continue;
      if (contains(sets[j].s_gamma2, a2) || contains(sets[j].s_gamma2_neg, a2)) return true;
    }
    return false;
  };
  auto mu_collides = [&](std::size_t i, Complex mu) {
    for (std::size_t j = 0; j < specs.size(); ++j) {
      if (j == i) continue;
      const auto& other = specs[i].star == StarKind::Transpose ? sets[j].s_h_t : sets[j].s_h_star;
      if (contains(other, mu)) return true;
    }
    return false;
  };

  std::size_t alpha_index = 0;
  std::size_t mu_index = 0;
  std::vector<CanonicalFormSpec> out = specs;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const bool transpose = specs[i].star == StarKind::Transpose;
    std::vector<std::pair<Complex, Complex>> alpha_map;
    std::vector<std::pair<Complex, Complex>> mu_map;
    auto lookup = [](const std::vector<std::pair<Complex, Complex>>& map, Complex z) -> const Complex* {
      for (const auto& [from, to] : map)
        if (from == z) return &to;
      return nullptr;
    };
    for (std::size_t b = 0; b < specs[i].blocks.size(); ++b) {
      const BlockSpec& blk = specs[i].blocks[b];
      if (blk.type == BlockType::TypeI && !transpose && alpha_collides(i, blk.param)) {
        const Complex* hit = lookup(alpha_map, blk.param);
        if (hit == nullptr) {
          ++alpha_index;
          const double angle = 1.0 / static_cast<double>(alpha_index * k);
          alpha_map.emplace_back(blk.param, blk.param * std::polar(1.0, angle));
          hit = &alpha_map.back().second;
        }
        out[i].blocks[b].param = *hit;
      } else if (blk.type == BlockType::TypeII && !(transpose && is_type2b(blk)) &&
                 mu_collides(i, blk.param)) {
        const Complex* hit = lookup(mu_map, blk.param);
        if (hit == nullptr) {
          ++mu_index;
          const double angle = 1.0 / static_cast<double>(mu_index * k);
          Complex rotated = blk.param * std::polar(1.0, angle);
          if (transpose) rotated = normalize_transpose_mu(blk.k, rotated);
          mu_map.emplace_back(blk.param, rotated);
          hit = &mu_map.back().second;
        }
        out[i].blocks[b].param = *hit;
      }
    }
  }
  return out;
}

}  // namespace palcanon
