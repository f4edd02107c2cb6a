#include <gtest/gtest.h>

#include <cmath>

#include "purity/errors.hpp"
#include "purity/weingarten.hpp"

namespace purity::wg {
namespace {

using sym::Partition;
using sym::Permutation;

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

Rational p_max_mixed(int n, int j) { return Rational(1) / rpow(Rational(n), static_cast<unsigned>(j - 1)); }

TEST(BipartitionDims, Validation) {
  EXPECT_NO_THROW(BipartitionDims(1, 1));
  EXPECT_THROW(BipartitionDims(3, 2), ValidationError);
  EXPECT_THROW(BipartitionDims(0, 2), ValidationError);
}

TEST(Weingarten, DegreeTwoExamples) {
  EXPECT_EQ(weingarten_coefficient(P({1, 1}), 4), Rational(1, 15));
  EXPECT_EQ(weingarten_coefficient(P({2}), 4), Rational(-1, 60));
}

TEST(Weingarten, MatchesClosedForms) {
  for (int n = 2; n <= 12; ++n) {
    for (const auto& cls : sym::all_partitions(2)) {
      EXPECT_EQ(weingarten_coefficient(cls, n), closed_form_coefficient(cls, n)) << cls.to_string() << " N=" << n;
    }
  }
  for (int n = 4; n <= 12; ++n) {
    for (const auto& cls : sym::all_partitions(4)) {
      EXPECT_EQ(weingarten_coefficient(cls, n), closed_form_coefficient(cls, n)) << cls.to_string() << " N=" << n;
    }
  }
}

TEST(Weingarten, FourCycleAtFive) {
  // -5/((N-3)(N-2)(N-1)N(N+1)(N+2)(N+3)) at N = 5.
  EXPECT_EQ(weingarten_coefficient(P({4}), 5), Rational(-5, 2 * 3 * 4 * 5 * 6 * 7 * 8));
}

TEST(Weingarten, Poles) {
  EXPECT_THROW(weingarten_coefficient(P({1, 1}), 1), DegenerateDimensionError);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_THROW(weingarten_coefficient(P({2, 2}), n), DegenerateDimensionError);
    EXPECT_THROW(closed_form_coefficient(P({2, 2}), n), DegenerateDimensionError);
  }
  EXPECT_THROW(closed_form_coefficient(P({3}), 5), ValidationError);
  EXPECT_THROW(weingarten_coefficient(P({1}), 0), ValidationError);
}

TEST(Weingarten, ConvolutionWithGramIsDelta) {
  // Σ_σ C[σ] N^{c(σ^{-1}π)} = δ(π, id) for N >= n.
  for (const int n : {2, 3, 4}) {
    const int dim = n + 1;
    const auto table = WeingartenTable::build(n, dim);
    const auto perms = sym::all_permutations(n);
    for (const auto& pi : perms) {
      Rational total = 0;
      for (const auto& sigma : perms) {
        const int c = sym::compose(sigma.inverse(), pi).cycle_count();
        total += table.at(sym::cycle_type(sigma)) * ipow(dim, static_cast<unsigned>(c));
      }
      EXPECT_EQ(total, pi == Permutation::identity(n) ? Rational(1) : Rational(0));
    }
  }
}

TEST(FCount, Examples) {
  const BipartitionDims dims(2, 3);
  EXPECT_EQ(f_count(Permutation::identity(2), dims), 2 * 2 * 3);
  EXPECT_EQ(f_count(Permutation({2, 1}), dims), 2 * 3 * 3);
  for (const auto& tau : sym::all_permutations(4)) EXPECT_EQ(f_count(tau, BipartitionDims(1, 1)), 1);
  EXPECT_THROW(f_count(Permutation::identity(3), dims), ValidationError);
}

TEST(Monomial, DropsOnes) {
  EXPECT_EQ(make_monomial(P({3, 1, 1})), (Monomial{3}));
  EXPECT_EQ(make_monomial(P({1, 1})), Monomial{});
  EXPECT_EQ(make_monomial(P({2, 2})), (Monomial{2, 2}));
}

TEST(MomentPolynomial, FirstMomentShape) {
  for (int na = 1; na <= 4; ++na) {
    for (int nb = std::max(na, 2); nb <= 5; ++nb) {
      const BipartitionDims dims(na, nb);
      const auto poly = moment_polynomial(1, dims);
      const Rational n2 = Rational(na * nb) * (na * nb);
      PowerSumPolynomial expected(dims);
      expected.add({}, Rational(na) * (nb * nb - 1) / (n2 - 1));
      expected.add({2}, Rational(nb) * (na * na - 1) / (n2 - 1));
      EXPECT_EQ(poly, expected) << na << "x" << nb;
      EXPECT_EQ(poly.evaluate_pure(), Rational(na + nb, na * nb + 1));
    }
  }
}

TEST(MomentPolynomial, SecondMomentMatchesClosedForm) {
  for (const auto& [na, nb] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {2, 5}, {1, 4}}) {
    const BipartitionDims dims(na, nb);
    EXPECT_TRUE((moment_polynomial(2, dims) - closed_m2_polynomial(dims)).is_zero()) << na << "x" << nb;
  }
}

TEST(MomentPolynomial, SecondMomentPoleBelowFour) {
  EXPECT_THROW(moment_polynomial(2, BipartitionDims(1, 3)), DegenerateDimensionError);
  EXPECT_THROW(closed_m2_polynomial(BipartitionDims(1, 2)), DegenerateDimensionError);
}

TEST(MomentPolynomial, MaximallyMixedIsDeterministic) {
  for (const auto& [na, nb] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 4}}) {
    const BipartitionDims dims(na, nb);
    for (int k = 1; k <= 2; ++k) {
      EXPECT_EQ(moment_polynomial(k, dims).evaluate_maximally_mixed(), Rational(1) / ipow(na, static_cast<unsigned>(k)));
    }
  }
}

TEST(MomentPolynomial, ThirdMomentSanity) {
  const BipartitionDims dims(2, 4);
  const auto poly = moment_polynomial(3, dims);
  EXPECT_EQ(poly.max_index(), 6);
  EXPECT_EQ(poly.evaluate_maximally_mixed(), Rational(1, 8));
  const Rational m1 = moment_polynomial(1, dims).evaluate_pure();
  const Rational m3 = poly.evaluate_pure();
  EXPECT_GE(m3, m1 * m1 * m1);
  EXPECT_LE(m3, 1);
}

TEST(MomentPolynomial, ThreadCountDoesNotChangeResult) {
  const BipartitionDims dims(2, 3);
  MomentOptions four;
  four.threads = 4;
  EXPECT_EQ(moment_polynomial(2, dims), moment_polynomial(2, dims, four));
}

TEST(MomentPolynomial, ArgumentChecks) {
  EXPECT_THROW(moment_polynomial(0, BipartitionDims(2, 2)), ValidationError);
  EXPECT_THROW(moment_polynomial(4, BipartitionDims(2, 2)), ValidationError);
  const auto wrong = WeingartenTable::build(2, 5);
  MomentOptions opt;
  opt.table = &wrong;
  EXPECT_THROW(moment_polynomial(1, BipartitionDims(2, 2), opt), ValidationError);
}

TEST(MomentPolynomial, JsonRoundTrip) {
  const auto poly = moment_polynomial(2, BipartitionDims(2, 3));
  const auto j = poly.to_json();
  EXPECT_EQ(j["context"]["NA"], 2);
  EXPECT_EQ(PowerSumPolynomial::from_json(j), poly);
  EXPECT_EQ(PowerSumPolynomial::from_json(nlohmann::json::parse(j.dump())), poly);
}

TEST(MomentPolynomial, EvaluateOnSpectrum) {
  const BipartitionDims dims(2, 2);
  const std::vector<double> spectrum{0.4, 0.3, 0.2, 0.1};
  EXPECT_NEAR(moment_polynomial(1, dims).evaluate(spectrum), 0.52, 1e-14);
  EXPECT_NEAR(closed_m2_polynomial(dims).evaluate(spectrum), 1353.0 / 5000.0, 1e-14);
}

TEST(ClosedM1, Examples) {
  EXPECT_EQ(closed_m1(BipartitionDims(2, 2), 1), Rational(4, 5));
  EXPECT_EQ(closed_m1(BipartitionDims(2, 3), 1), Rational(5, 7));
  for (const auto& [na, nb] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 5}}) {
    EXPECT_EQ(closed_m1(BipartitionDims(na, nb), Rational(1, na * nb)), Rational(1, na));
  }
  EXPECT_THROW(closed_m1(BipartitionDims(2, 2), 0), ValidationError);
  EXPECT_THROW(closed_m1(BipartitionDims(2, 2), Rational(11, 10)), ValidationError);
}

TEST(ClosedM2, MaximallyMixed) {
  for (const auto& [na, nb] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
    const int n = na * nb;
    EXPECT_EQ(closed_m2_spectrum(BipartitionDims(na, nb), p_max_mixed(n, 2), p_max_mixed(n, 3), p_max_mixed(n, 4)),
              Rational(1, na * na));
  }
}

TEST(Cumulant2, PureAndMaximallyMixed) {
  const BipartitionDims dims(2, 3);
  const Rational m1 = closed_m1(dims, 1);
  EXPECT_EQ(cumulant2(dims, Rational(1), Rational(1), Rational(1)), closed_m2_spectrum(dims, 1, 1, 1) - m1 * m1);
  EXPECT_EQ(cumulant2(dims, Rational(1, 6), Rational(1, 36), Rational(1, 216)), Rational(0));
  EXPECT_NEAR(cumulant2(dims, 1.0 / 6, 1.0 / 36, 1.0 / 216), 0.0, 1e-15);
}

TEST(Cumulant2, CoefficientsReproduceVarianceOfFixedPoint) {
  // With p3, p4 taken at a single spectrum the cumulant is M2 − M1² at that spectrum.
  const BipartitionDims dims(2, 2);
  const Rational p2(3, 10), p3(1, 10), p4(354, 10000);
  const Rational m1 = closed_m1(dims, p2);
  EXPECT_EQ(cumulant2(dims, p2, p3, p4), closed_m2_spectrum(dims, p2, p3, p4) - m1 * m1);
}

TEST(HighTemperature, Limits) {
  const BipartitionDims dims(2, 2);
  EXPECT_DOUBLE_EQ(m1_high_temperature(dims, 0.6, 0.0, 0.3, 0.2), to_double(closed_m1(dims, parse_rational("0.6"))));
  for (const double beta : {-3.0, 0.5, 7.0}) {
    EXPECT_NEAR(m1_high_temperature(dims, 0.25, beta, 1.0 / 16, 1.0 / 64), 0.5, 1e-15);
  }
}

TEST(HighTemperature, ThermodynamicLimitSlope) {
  // For balanced dims the β-slope approaches −2x²/N² at large N.
  for (const int na : {8, 16}) {
    const BipartitionDims dims(na, na);
    const int n = na * na;
    const double x = 1.0;
    const double slope = (m1_high_temperature(dims, x, 1e-3, 1.0, 1.0) - m1_high_temperature(dims, x, 0.0, 1.0, 1.0)) / 1e-3;
    EXPECT_NEAR(slope / (-2.0 * x * x / (double(n) * n)), 1.0, 10.0 / n);
  }
}

TEST(Asymptotic, Examples) {
  EXPECT_DOUBLE_EQ(m1_balanced_asymptotic(4, 1.0), 0.8);
  for (const int n : {4, 9, 16, 100}) EXPECT_NEAR(m1_balanced_asymptotic(n, 1.0 / n), 1.0 / std::sqrt(n), 1e-15);
  EXPECT_NEAR(m1_balanced_asymptotic(10000, 0.5), 0.015, 1e-4);
  EXPECT_THROW(m1_balanced_asymptotic(5, 0.5), ValidationError);
  EXPECT_EQ(exact_sqrt(49), 7);
  EXPECT_EQ(exact_sqrt(50), -1);
}

TEST(Asymptotic, BalancedFirstMomentIsExact) {
  for (const int na : {2, 4, 6, 8}) {
    const BipartitionDims dims(na, na);
    for (const Rational& x : {Rational(1, na * na), Rational(1, 2), Rational(1)}) {
      EXPECT_NEAR(to_double(closed_m1(dims, x)), m1_balanced_asymptotic(na * na, to_double(x)), 1e-15);
    }
  }
}

TEST(BetaCritical, Scale) {
  EXPECT_DOUBLE_EQ(beta_critical(4, 1.0), 8.0);
  EXPECT_TRUE(std::isinf(beta_critical(4, 0.0)));
}

}  // namespace
}  // namespace purity::wg
