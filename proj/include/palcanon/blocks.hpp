#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "palcanon/matrix.hpp"
#include "palcanon/rng.hpp"

namespace palcanon {

enum class BlockType { Type0, TypeI, TypeII };

/// One summand of a canonical form. `param` is alpha for TypeI and mu for
/// TypeII; it is ignored for Type0.
struct BlockSpec {
  BlockType type = BlockType::Type0;
  std::size_t k = 1;
  Complex param{};

  static BlockSpec type0(std::size_t k) { return {BlockType::Type0, k, Complex{}}; }
  static BlockSpec type1(std::size_t k, Complex alpha) { return {BlockType::TypeI, k, alpha}; }
  static BlockSpec type2(std::size_t k, Complex mu) { return {BlockType::TypeII, k, mu}; }

  /// Matrix dimension contributed: k, or 2k for TypeII.
  std::size_t size() const { return type == BlockType::TypeII ? 2 * k : k; }

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

struct CanonicalFormSpec {
  StarKind star = StarKind::ConjugateTranspose;
  std::vector<BlockSpec> blocks;

  std::size_t size() const;
  bool has_type0() const;

  friend bool operator==(const CanonicalFormSpec&, const CanonicalFormSpec&) = default;
};

/// Tolerance on |alpha| - 1 and on |mu| - 1 for unit-modulus parameters.
inline constexpr double kUnitParamTol = 1e-12;

CMatrix jordan_zero_block(std::size_t k);

/// k×k anti-triangular Γ_k: entries on the anti-diagonal and the diagonal
/// just right of it, in (+1,+1),(-1,-1) pairs going up from the bottom-left.
CMatrix gamma_block(std::size_t k);

/// [[0, I_k], [J_k(mu), 0]].
CMatrix h_block(std::size_t k, Complex mu);

struct Violation {
  std::size_t block_index = 0;  // == blocks.size() for spec-level problems
  std::string constraint;
};

std::vector<Violation> validate(const CanonicalFormSpec& spec);

/// Throws ValidationError listing every violation.
CMatrix realize(const CanonicalFormSpec& spec);

/// True iff mu = e^{iθ} with 0 < θ < π, to kUnitParamTol on the modulus.
bool is_upper_unit_arc(Complex mu);

/// TypeII parameter under transpose congruence is Type II-(b), mu = (-1)^k.
bool is_type2b(const BlockSpec& b);

/// Replaces a transpose-congruence TypeII parameter by mu or 1/mu,
/// whichever lies in the fundamental domain. Identity for (-1)^k.
Complex normalize_transpose_mu(std::size_t k, Complex mu);

/// Spec with every transpose-congruence TypeII parameter normalized.
/// Conjugate-transpose specs are returned unchanged.
CanonicalFormSpec normalized(const CanonicalFormSpec& spec);

/// Type0 by k descending, TypeI by k then arg alpha, TypeII by k then mu
/// lexicographically (re, im); Type0 < TypeI < TypeII.
bool normal_order_less(const BlockSpec& a, const BlockSpec& b);
CanonicalFormSpec normal_ordered(const CanonicalFormSpec& spec);

/// Representative of the generic bundle with `ell` 2×2 hyperbolic blocks.
///
/// Draw order per block: modulus then angle for mu, angle for alpha. Under
/// transpose a mu is taken from the open upper unit arc with probability 1/4.
/// Draws are repeated until all predicted pencil eigenvalues are at least
/// 1e-3 apart.
CanonicalFormSpec generic_spec(std::size_t n, std::size_t ell, StarKind star, RngStream& rng);

/// Spec-string grammar: "J0(2);G(3)*1+0i;H(1)*3+0i".
CanonicalFormSpec parse_spec(std::string_view text, StarKind star);
std::string format_spec(const CanonicalFormSpec& spec);
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

}  // namespace palcanon
