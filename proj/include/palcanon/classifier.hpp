#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "palcanon/blocks.hpp"
#include "palcanon/pencil.hpp"

namespace palcanon {

enum class NonGenericReason { Singular, RepeatedEigenvalue, UnexpectedUnitCount, PairCollision, NumericalFailure };

struct BundleClass {
  enum class Kind { GenericStar, GenericCongruence, NonGeneric };

  Kind kind = Kind::NonGeneric;
  std::size_t ell = 0;  // GenericStar only
  bool n_odd = false;   // GenericCongruence only
  NonGenericReason reason = NonGenericReason::Singular;  // NonGeneric only

  static BundleClass generic_star(std::size_t ell) { return {Kind::GenericStar, ell, false, {}}; }
  static BundleClass generic_congruence(bool n_odd) { return {Kind::GenericCongruence, 0, n_odd, {}}; }
  static BundleClass non_generic(NonGenericReason r) { return {Kind::NonGeneric, 0, false, r}; }

  friend bool operator==(const BundleClass&, const BundleClass&) = default;
};

std::string to_string(NonGenericReason r);
std::string to_string(const BundleClass& c);

/// Distance of the designated eigenvalue from -1 allowed for odd transpose pencils.
inline constexpr double kMinusOneTol = 1e-6;

struct Classification {
  BundleClass cls;
  std::size_t n = 0;
  std::size_t unit_count = 0;
  Spectrum spectrum;  // empty when the matrix was refused as singular
};

Classification classify(const CMatrix& a, StarKind star, UnitTolerance unit_tol = {},
                        double distinct_tol = 1e-8);

BundleClass classify_generic(const CMatrix& a, StarKind star, UnitTolerance unit_tol = {},
                             double distinct_tol = 1e-8);

/// "class=G*|Gc|NG ell=<int|-> n=<int> unit_count=<int> reason=<tag|->"
std::string report_line(const Classification& c);

/// CSV "index,re,im,modulus,label".
void write_eigenvalue_csv(const Spectrum& s, std::ostream& out);

/// Parameter sets of a canonical form, each sorted by (re, im) without repeats.
struct ParameterSets {
  std::vector<Complex> s_h_t;         // transpose: Type II-(a) mu, normalized
  std::vector<Complex> s_gamma;       // conjugate transpose: TypeI alpha
  std::vector<Complex> s_gamma2;      // alpha^2
  std::vector<Complex> s_gamma2_neg;  // -alpha^2
  std::vector<Complex> s_h_star;      // conjugate transpose: TypeII mu
};

ParameterSets parameter_sets(const CanonicalFormSpec& spec);

/// Whether the form `a` lies in the bundle of the form `c`. Parameters
/// compare by exact equality. Throws ValidationError for invalid specs or
/// mismatched star or size.
bool bundle_membership(const CanonicalFormSpec& a, const CanonicalFormSpec& c);

bool bundle_equal(const CanonicalFormSpec& c1, const CanonicalFormSpec& c2);

/// Sufficient condition for A_1 ⊕ ... ⊕ A_q to lie in the closure of the
/// bundle of C_1 ⊕ ... ⊕ C_q: each A_i in the bundle of C_i, and the
/// parameter sets of distinct C_i disjoint. False means the hypotheses fail.
bool direct_sum_closure_check(std::span<const CanonicalFormSpec> a_specs,
                              std::span<const CanonicalFormSpec> c_specs, StarKind star);

/// Rotates parameters shared between different specs: the j-th colliding
/// alpha (resp. mu) in scan order becomes alpha·e^{i/(jk)} (resp. mu·e^{i/(jk)}).
/// Scan order is spec by spec, block by block; each spec's occurrence of a
/// shared value takes its own index and all its blocks with that value move
/// together.
std::vector<CanonicalFormSpec> make_parameters_distinct(std::vector<CanonicalFormSpec> specs, std::size_t k);

}  // namespace palcanon
