#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "palcanon/blocks.hpp"
#include "palcanon/classifier.hpp"
#include "palcanon/error.hpp"
#include "palcanon/random.hpp"

using namespace palcanon;

namespace {

constexpr StarKind kT = StarKind::Transpose;
constexpr StarKind kH = StarKind::ConjugateTranspose;
const Complex I{0.0, 1.0};
const double kPi = std::numbers::pi;
const Complex kW = std::polar(1.0, kPi / 4);

CMatrix congruent(const CMatrix& a, const CMatrix& p, StarKind star) { return star_transpose(p, star) * a * p; }

// Brute-force oracle for bundle membership: a lies in the bundle of c iff
// some bijection between their blocks preserves type and size and maps
// equal keys to equal keys and distinct keys to distinct keys. Keys are
// (-1)^k α² for TypeI under conjugate transpose, the normalized μ for
// TypeII, a constant for TypeI under transpose, and the size for Type0 and
// Type II-(b) (which carry no free parameter).
struct Keyed {
  BlockType type;
  std::size_t k;
  bool type2b;
  Complex key;
};

std::vector<Keyed> keyed_blocks(const CanonicalFormSpec& s) {
  std::vector<Keyed> out;
  for (const auto& b : s.blocks) {
    Keyed e{b.type, b.k, false, {}};
    if (b.type == BlockType::TypeI && s.star == kH) e.key = (b.k % 2 == 0 ? 1.0 : -1.0) * b.param * b.param;
    if (b.type == BlockType::TypeII) {
      if (s.star == kT && is_type2b(b)) {
        e.type2b = true;
      } else {
        e.key = s.star == kT ? normalize_transpose_mu(b.k, b.param) : b.param;
      }
    }
    out.push_back(e);
  }
  return out;
}

bool brute_force_member(const CanonicalFormSpec& a, const CanonicalFormSpec& c) {
  const auto ka = keyed_blocks(a);
  const auto kc = keyed_blocks(c);
  if (ka.size() != kc.size()) return false;
  std::vector<std::size_t> perm(kc.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < ka.size() && ok; ++i) {
      const Keyed& x = ka[i];
      const Keyed& y = kc[perm[i]];
      ok = x.type == y.type && x.k == y.k && x.type2b == y.type2b;
    }
    for (std::size_t i = 0; i < ka.size() && ok; ++i) {
      for (std::size_t j = 0; j < ka.size() && ok; ++j) {
        if (ka[i].type != ka[j].type || ka[i].type == BlockType::Type0 || ka[i].type2b || ka[j].type2b) continue;
        ok = (ka[i].key == ka[j].key) == (kc[perm[i]].key == kc[perm[j]].key);
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Small random spec whose parameters come from a tiny pool so that
// collisions, squares and negated squares coincide often.
CanonicalFormSpec random_small_spec(std::size_t n, StarKind star, RngStream& rng) {
  const std::vector<Complex> alphas{1.0, -1.0, I, -I, kW, kW * I};
  const std::vector<Complex> mus{2.0, 3.0, -2.0, std::polar(2.0, 1.0)};
  CanonicalFormSpec s{star, {}};
  std::size_t used = 0;
  while (used < n) {
    const std::size_t left = n - used;
    const auto kind = rng.uniform_int1(3);
    const std::size_t k = static_cast<std::size_t>(rng.uniform_int1(std::min<std::size_t>(left, 2)));
    if (kind == 1) {
      s.blocks.push_back(BlockSpec::type0(k));
      used += k;
    } else if (kind == 2) {
      s.blocks.push_back(BlockSpec::type1(k, star == kT ? Complex{1.0} : alphas[rng.uniform_int1(alphas.size()) - 1]));
      used += k;
    } else if (2 * k <= left) {
      Complex mu = mus[rng.uniform_int1(mus.size()) - 1];
      if (star == kT && rng.uniform01() < 0.3) mu = k % 2 == 0 ? 1.0 : -1.0;
      if (star == kT && rng.uniform01() < 0.3) mu = 1.0 / mu;
      s.blocks.push_back(BlockSpec::type2(k, mu));
      used += 2 * k;
    }
  }
  return s;
}

}  // namespace

TEST(Classifier, Examples) {
  EXPECT_EQ(classify_generic(realize({kH, {BlockSpec::type2(1, 3.0), BlockSpec::type1(1, kW)}}), kH),
            BundleClass::generic_star(1));
  EXPECT_EQ(classify_generic(CMatrix{{1.0}}, kT), BundleClass::generic_congruence(true));
  EXPECT_EQ(classify_generic(CMatrix::zeros(3, 3), kH), BundleClass::non_generic(NonGenericReason::Singular));
  EXPECT_EQ(classify_generic(CMatrix::zeros(3, 3), kT), BundleClass::non_generic(NonGenericReason::Singular));
}

TEST(Classifier, NonGenericReasons) {
  // Γ_2 under conjugate transpose: double eigenvalue 1.
  EXPECT_EQ(classify_generic(gamma_block(2), kH), BundleClass::non_generic(NonGenericReason::RepeatedEigenvalue));
  // Two TypeI blocks with equal α: repeated eigenvalue -α².
  EXPECT_EQ(classify_generic(CMatrix::identity(2), kH),
            BundleClass::non_generic(NonGenericReason::RepeatedEigenvalue));
  // Near-singular input.
  EXPECT_EQ(classify_generic(CMatrix{{1.0, 0.0}, {0.0, 1e-15}}, kH),
            BundleClass::non_generic(NonGenericReason::Singular));
  // Transpose with a repeated μ.
  EXPECT_EQ(classify_generic(realize({kT, {BlockSpec::type2(1, 3.0), BlockSpec::type2(1, 3.0)}}), kT),
            BundleClass::non_generic(NonGenericReason::RepeatedEigenvalue));
  // Symmetric A under transpose: every eigenvalue is -1.
  EXPECT_EQ(classify_generic(CMatrix{{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 1.0, 0.0}}, kT),
            BundleClass::non_generic(NonGenericReason::RepeatedEigenvalue));
}

TEST(Classifier, TransposeGeneric) {
  RngStream rng(51, 0);
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto spec = generic_spec(n, n / 2, kT, rng);
    const CMatrix a = congruent(realize(spec), random_congruence(n, rng, 100.0), kT);
    EXPECT_EQ(classify_generic(a, kT), BundleClass::generic_congruence(n % 2 == 1)) << format_spec(spec);
  }
}

TEST(Classifier, RoundTripStar) {
  for (std::size_t n = 1; n <= 24; n += 1) {
    for (std::size_t ell = 0; ell <= n / 2; ell += 1 + n / 8) {
      RngStream rng(52, n * 100 + ell);
      const auto spec = generic_spec(n, ell, kH, rng);
      const CMatrix a = congruent(realize(spec), random_congruence(n, rng, 100.0), kH);
      const Classification c = classify(a, kH);
      EXPECT_EQ(c.cls, BundleClass::generic_star(ell)) << "n=" << n << " ell=" << ell;
      EXPECT_EQ(c.unit_count, n - 2 * ell);
      EXPECT_EQ(c.n, n);
    }
  }
}

TEST(Classifier, CongruenceInvarianceOnRandomInputs) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    RngStream rng(53, t);
    const StarKind star = t % 2 == 0 ? kH : kT;
    const std::size_t n = 2 + t;
    const CMatrix a = random_uniform_complex(n, rng);
    const BundleClass base = classify_generic(a, star);
    EXPECT_NE(base.kind, BundleClass::Kind::NonGeneric);
    EXPECT_EQ(classify_generic(congruent(a, random_congruence(n, rng, 100.0), star), star), base);
  }
}

TEST(Classifier, ReportLineAndCsv) {
  const Classification c = classify(CMatrix::zeros(2, 2), kH);
  EXPECT_EQ(report_line(c), "class=NG ell=- n=2 unit_count=0 reason=Singular");
  const Classification g = classify(realize({kH, {BlockSpec::type2(1, 3.0), BlockSpec::type1(1, kW)}}), kH);
  EXPECT_EQ(report_line(g), "class=G* ell=1 n=3 unit_count=1 reason=-");
  const Classification t = classify(CMatrix{{1.0}}, kT);
  EXPECT_EQ(report_line(t), "class=Gc ell=- n=1 unit_count=1 reason=-");

  std::ostringstream out;
  write_eigenvalue_csv(g.spectrum, out);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("index,re,im,modulus,label\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find(",unit\n"), std::string::npos);
}

TEST(Classifier, ParameterSetsExamples) {
  const auto p1 = parameter_sets({kH, {BlockSpec::type1(1, I), BlockSpec::type1(2, I)}});
  EXPECT_EQ(p1.s_gamma, std::vector<Complex>{I});
  ASSERT_EQ(p1.s_gamma2.size(), 1u);
  EXPECT_NEAR(std::abs(p1.s_gamma2[0] + 1.0), 0.0, 1e-15);
  ASSERT_EQ(p1.s_gamma2_neg.size(), 1u);
  EXPECT_NEAR(std::abs(p1.s_gamma2_neg[0] - 1.0), 0.0, 1e-15);

  const auto p2 = parameter_sets({kT, {BlockSpec::type2(1, -1.0), BlockSpec::type2(1, 2.0)}});
  EXPECT_EQ(p2.s_h_t, std::vector<Complex>{2.0});

  const auto p3 = parameter_sets({kH, {BlockSpec::type2(1, 3.0), BlockSpec::type2(1, 3.0)}});
  EXPECT_EQ(p3.s_h_star, std::vector<Complex>{3.0});
}

TEST(Classifier, ExampleMembershipFixtures) {
  const CanonicalFormSpec c{kH, {BlockSpec::type2(1, 3.0), BlockSpec::type1(1, 1.0), BlockSpec::type2(2, 5.0),
                                 BlockSpec::type1(1, kW)}};
  const CanonicalFormSpec bad{kH, {BlockSpec::type2(1, 3.0), BlockSpec::type1(1, 1.0), BlockSpec::type2(2, 3.0),
                                   BlockSpec::type1(1, 1.0)}};
  EXPECT_TRUE(bundle_membership(c, c));
  EXPECT_FALSE(bundle_membership(c, bad));
  EXPECT_TRUE(bundle_equal({kH, {BlockSpec::type2(2, 3.0), BlockSpec::type1(1, 1.0)}},
                           {kH, {BlockSpec::type2(2, 5.0), BlockSpec::type1(1, kW)}}));
  EXPECT_FALSE(bundle_equal({kH, {BlockSpec::type2(1, 3.0), BlockSpec::type1(2, 1.0)}},
                            {kH, {BlockSpec::type2(2, 3.0)}}));
  EXPECT_TRUE(bundle_equal({kT, {BlockSpec::type2(1, 2.0), BlockSpec::type2(1, 3.0)}},
                           {kT, {BlockSpec::type2(1, 5.0), BlockSpec::type2(1, 7.0)}}));
}

TEST(Classifier, MembershipTypeIKeyedBySignedSquare) {
  // Γ_1 and i·Γ_2 share the key (-1)^k α² = -1.
  const CanonicalFormSpec c{kH, {BlockSpec::type1(1, 1.0), BlockSpec::type1(2, I)}};
  const CanonicalFormSpec a_same{kH, {BlockSpec::type1(1, kW), BlockSpec::type1(2, kW * I)}};
  const CanonicalFormSpec a_split{kH, {BlockSpec::type1(1, 1.0), BlockSpec::type1(2, 1.0)}};
  EXPECT_EQ(bundle_membership(a_same, c), brute_force_member(a_same, c));
  EXPECT_EQ(bundle_membership(a_split, c), brute_force_member(a_split, c));
  EXPECT_NE(bundle_membership(a_same, c), bundle_membership(a_split, c));
}

TEST(Classifier, MembershipMatchesBruteForce) {
  std::size_t agree_true = 0;
  for (std::uint64_t t = 0; t < 3000; ++t) {
    RngStream rng(54, t);
    const StarKind star = t % 2 == 0 ? kH : kT;
    const std::size_t n = 1 + t % 6;
    const auto a = random_small_spec(n, star, rng);
    const auto c = random_small_spec(n, star, rng);
    if (!validate(a).empty() || !validate(c).empty()) continue;
    const bool expected = brute_force_member(a, c);
    EXPECT_EQ(bundle_membership(a, c), expected) << format_spec(a) << " vs " << format_spec(c);
    if (expected) ++agree_true;
  }
  EXPECT_GT(agree_true, 50u);
}

TEST(Classifier, MembershipReflexiveAndPermutationInvariant) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    RngStream rng(55, t);
    const StarKind star = t % 2 == 0 ? kH : kT;
    auto a = random_small_spec(1 + t % 8, star, rng);
    if (!validate(a).empty()) continue;
    EXPECT_TRUE(bundle_membership(a, a));
    auto b = a;
    std::reverse(b.blocks.begin(), b.blocks.end());
    EXPECT_TRUE(bundle_membership(a, b));
    EXPECT_TRUE(bundle_membership(b, a));
  }
}

TEST(Classifier, BundleEqualIsEquivalence) {
  for (std::uint64_t t = 0; t < 1000; ++t) {
    RngStream rng(56, t);
    const StarKind star = t % 2 == 0 ? kH : kT;
    const std::size_t n = 1 + t % 4;
    const auto a = random_small_spec(n, star, rng);
    const auto b = random_small_spec(n, star, rng);
    const auto c = random_small_spec(n, star, rng);
    if (!validate(a).empty() || !validate(b).empty() || !validate(c).empty()) continue;
    EXPECT_EQ(bundle_equal(a, b), bundle_equal(b, a));
    if (bundle_equal(a, b) && bundle_equal(b, c)) EXPECT_TRUE(bundle_equal(a, c));
  }
}

TEST(Classifier, MembershipErrors) {
  const CanonicalFormSpec h1{kH, {BlockSpec::type1(1, 1.0)}};
  const CanonicalFormSpec t1{kT, {BlockSpec::type1(1, 1.0)}};
  const CanonicalFormSpec h2{kH, {BlockSpec::type2(1, 3.0)}};
  EXPECT_THROW(bundle_membership(h1, t1), ValidationError);
  EXPECT_THROW(bundle_membership(h1, h2), ValidationError);
  EXPECT_THROW(bundle_membership({kH, {BlockSpec::type2(1, 0.5)}}, h2), ValidationError);
}

TEST(Classifier, DirectSumClosure) {
  const std::vector<CanonicalFormSpec> cs{{kH, {BlockSpec::type2(1, 3.0), BlockSpec::type1(1, 1.0)}},
                                          {kH, {BlockSpec::type2(2, 5.0), BlockSpec::type1(1, kW)}}};
  EXPECT_TRUE(direct_sum_closure_check(cs, cs, kH));
  const std::vector<CanonicalFormSpec> same{{kH, {BlockSpec::type2(1, 3.0)}}, {kH, {BlockSpec::type2(1, 3.0)}}};
  EXPECT_FALSE(direct_sum_closure_check(same, same, kH));
  // One summand: plain membership.
  const std::vector<CanonicalFormSpec> a1{cs[0]};
  const std::vector<CanonicalFormSpec> c1{{kH, {BlockSpec::type2(1, 7.0), BlockSpec::type1(1, I)}}};
  EXPECT_EQ(direct_sum_closure_check(a1, c1, kH), bundle_membership(a1[0], c1[0]));
  // α² of one summand equals -α² of the other.
  const std::vector<CanonicalFormSpec> sq{{kH, {BlockSpec::type1(1, 1.0)}}, {kH, {BlockSpec::type1(1, I)}}};
  EXPECT_FALSE(direct_sum_closure_check(sq, sq, kH));
  const std::vector<CanonicalFormSpec> tt{{kT, {BlockSpec::type2(1, 2.0)}}, {kT, {BlockSpec::type2(1, 2.0)}}};
  EXPECT_FALSE(direct_sum_closure_check(tt, tt, kT));
}

TEST(Classifier, MakeParametersDistinct) {
  const std::size_t k = 5;
  const std::vector<CanonicalFormSpec> in{{kH, {BlockSpec::type2(1, 3.0)}}, {kH, {BlockSpec::type2(1, 3.0)}}};
  const auto out = make_parameters_distinct(in, k);
  ASSERT_EQ(out.size(), 2u);
  const Complex m1 = 3.0 * std::exp(I / 5.0);
  const Complex m2 = 3.0 * std::exp(I / 10.0);
  EXPECT_NEAR(std::abs(out[0].blocks[0].param - m1), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out[1].blocks[0].param - m2), 0.0, 1e-15);

  const std::vector<CanonicalFormSpec> clean{{kH, {BlockSpec::type2(1, 3.0)}}, {kH, {BlockSpec::type2(1, 4.0)}}};
  EXPECT_EQ(make_parameters_distinct(clean, k), clean);
}

TEST(Classifier, MakeParametersDistinctRestoresHypotheses) {
  const std::vector<Complex> pool{1.0, I, kW};
  for (std::uint64_t t = 0; t < 200; ++t) {
    RngStream rng(57, t);
    const StarKind star = t % 2 == 0 ? kH : kT;
    std::vector<CanonicalFormSpec> specs;
    std::size_t total = 0;
    while (total < 8) {
      const std::size_t n = std::min<std::size_t>(8 - total, 1 + rng.uniform_int1(3));
      CanonicalFormSpec s{star, {}};
      for (std::size_t used = 0; used < n;) {
        if (n - used >= 2 && rng.uniform01() < 0.5) {
          s.blocks.push_back(BlockSpec::type2(1, 2.0 + static_cast<double>(rng.uniform_int1(2))));
          used += 2;
        } else {
          s.blocks.push_back(BlockSpec::type1(1, star == kT ? Complex{1.0} : pool[rng.uniform_int1(3) - 1]));
          used += 1;
        }
      }
      total += n;
      specs.push_back(s);
    }
    const auto out = make_parameters_distinct(specs, 20);
    for (const auto& s : out) EXPECT_TRUE(validate(s).empty()) << format_spec(s);
    EXPECT_TRUE(direct_sum_closure_check(out, out, star)) << t;
  }
}
