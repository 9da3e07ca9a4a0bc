#include <gtest/gtest.h>

#include "entest/bayes.hpp"
#include "entest/povm.hpp"
#include "entest/prior.hpp"
#include "entest/spin_spectrum.hpp"

#include <cmath>

using namespace entest;

// Reference values computed independently with 50-digit quadrature.
TEST(AverageGain, FrozenTwoCopyQuadratic) {
  const auto r = average_gain(Spectrum(2), PriorDensity::quadratic());
  EXPECT_NEAR(r.average_gain, 0.03750556828779775, 1e-10);
  ASSERT_EQ(r.outcome_gains.size(), 2u);
  // Per-outcome gains carry the quadrature error divided by p(k).
  EXPECT_NEAR(r.outcome_gains[0], 0.003855259906793, 1e-9);
  EXPECT_NEAR(r.outcome_gains[1], 0.340358343716838, 1e-8);
  EXPECT_NEAR(r.marginals[0], 0.9, 1e-15);
  EXPECT_NEAR(r.marginals[1], 0.1, 1e-15);
  ASSERT_TRUE(r.exact_marginals.has_value());
  EXPECT_EQ((*r.exact_marginals)[1], Rational(1, 10));
  EXPECT_LT(r.quad_error, 1e-8);
  EXPECT_EQ(r.copies, 2);
}

TEST(AverageGain, FrozenTwoCopyUniform) {
  const auto r = average_gain(Spectrum(2), PriorDensity::uniform());
  EXPECT_NEAR(r.average_gain, 0.0348087077705334, 1e-10);
  EXPECT_EQ((*r.exact_marginals)[0], Rational(5, 6));
}

TEST(AverageGain, SingleCopyIsExactlyZero) {
  const auto r = average_gain(Spectrum(1), PriorDensity::quadratic());
  EXPECT_EQ(r.average_gain, 0.0);
  EXPECT_EQ(r.quad_error, 0.0);
  EXPECT_EQ(r.marginals, std::vector<double>{1.0});
}

TEST(AverageGain, TableValues) {
  const std::pair<int, double> table[] = {{1, 0.0},       {2, 0.03751},  {3, 0.08397},  {4, 0.13259},
                                          {5, 0.18059},   {10, 0.39245}, {20, 0.69639}, {40, 1.07422},
                                          {60, 1.32005},  {80, 1.50261}};
  const auto prior = PriorDensity::quadratic();
  double previous = -1.0;
  for (auto [n, expected] : table) {
    const double g = average_gain(Spectrum(n), prior).average_gain;
    EXPECT_NEAR(g, expected, 1e-4) << "N=" << n;
    EXPECT_GT(g, previous);
    previous = g;
  }
  EXPECT_NEAR(std::round(average_gain(Spectrum(2), prior).average_gain * 1e4) / 1e4, 0.0375, 1e-12);
  EXPECT_NEAR(std::round(average_gain(Spectrum(3), prior).average_gain * 1e3) / 1e3, 0.084, 1e-12);
}

TEST(AverageGain, GainBoundedByPriorEntropyGap) {
  // Outcome gains are KL divergences: nonnegative; their average is the
  // mutual information, at most log2(outcome count).
  const auto prior = PriorDensity::uniform();
  for (int n : {2, 5, 9, 30}) {
    const auto r = average_gain(Spectrum(n), prior);
    for (double k : r.outcome_gains) EXPECT_GE(k, 0.0);
    EXPECT_LE(r.average_gain, std::log2(static_cast<double>(r.marginals.size())) + 1e-12);
  }
}

TEST(AverageGain, NonPolynomialPriorUsesQuadratureMarginals) {
  const auto exact = PriorDensity::quadratic();
  const auto generic = PriorDensity::generic([](double b) { return 3 * b * b; }, 3.0, "quadratic-generic");
  const auto a = average_gain(Spectrum(6), exact);
  const auto b = average_gain(Spectrum(6), generic);
  EXPECT_FALSE(b.exact_marginals.has_value());
  EXPECT_NEAR(a.average_gain, b.average_gain, 1e-10);
  for (std::size_t k = 0; k < a.marginals.size(); ++k) EXPECT_NEAR(a.marginals[k], b.marginals[k], 1e-13);
}

TEST(Posterior, TwoCopyExactPolynomial) {
  const auto post = posterior(PriorDensity::quadratic(), Spectrum(2), 1);
  ASSERT_TRUE(post.is_polynomial());
  EXPECT_EQ(post.coefficients(), RationalPolynomial({0, 0, Rational(15, 2), 0, Rational(-15, 2)}));
  EXPECT_EQ(post.coefficients().moment(), Rational(1));
  for (double b : {0.1, 0.5, 0.9}) EXPECT_NEAR(post(b), 7.5 * (b * b - b * b * b * b), 1e-14);
}

TEST(Posterior, IntegratesToOne) {
  const auto prior = PriorDensity::quadratic();
  const auto& rule = gauss_legendre(400);
  for (int n : {3, 10, 60}) {
    const Spectrum spec(n);
    for (std::size_t k = 0; k < spec.outcome_count(); ++k) {
      const auto post = posterior(prior, spec, k);
      double mass = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) mass += rule.weights[i] * post(rule.nodes[i]);
      EXPECT_NEAR(mass, 1.0, 1e-10) << "N=" << n << " k=" << k;
    }
  }
}

TEST(Posterior, ZeroMarginalThrows) {
  const Spectrum spec(2);
  AbstractPOVM povm{Eigen::MatrixXd::Zero(2, 2)};
  povm.q(0, 0) = 9.0;
  povm.q(0, 1) = 1.0;  // second row never fires
  const PovmModel model(povm, spec);
  EXPECT_THROW(posterior(PriorDensity::quadratic(), model, 1), UndefinedPosteriorError);
  EXPECT_THROW(outcome_probability(model, 2, 0.5), std::out_of_range);
}

TEST(OutcomeGain, IdenticalDensitiesGiveZero) {
  const auto f = PriorDensity::uniform();
  EXPECT_NEAR(outcome_gain(f, f), 0.0, 1e-15);
}

TEST(OutcomeGain, KnownDivergence) {
  // K[3b^2, 1] = int 3b^2 ln(3b^2) = ln 3 - 2/3 nats.
  EXPECT_NEAR(outcome_gain(PriorDensity::uniform(), PriorDensity::quadratic()) * nats_per_bit,
              std::log(3.0) - 2.0 / 3.0, 1e-9);
}

TEST(OutcomeGain, RequiresAbsoluteContinuity) {
  const auto half = PriorDensity::generic([](double b) { return b < 0.5 ? 2.0 : 0.0; }, 2.0, "half");
  EXPECT_THROW(outcome_gain(half, PriorDensity::uniform()), DomainError);
}

TEST(Prior, Validation) {
  EXPECT_THROW(PriorDensity::polynomial(RationalPolynomial({2})), ValidationError);
  EXPECT_THROW(PriorDensity::polynomial(RationalPolynomial({3, -4})), ValidationError);  // 3 - 4b, mass 1, negative
  EXPECT_THROW(PriorDensity::generic([](double) { return 2.0; }, 2.0), ValidationError);
  EXPECT_NO_THROW(PriorDensity::polynomial(RationalPolynomial({Rational(1, 2), 1})));
}

TEST(Prior, SamplingMatchesMean) {
  Rng rng(5);
  for (const auto& prior : {PriorDensity::quadratic(), PriorDensity::uniform(),
                            PriorDensity::polynomial(RationalPolynomial({Rational(1, 2), 1}), "lin")}) {
    const double mean = to_double(prior.coefficients().moment(1));
    const int n = 200000;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double b = prior.sample(rng);
      ASSERT_GE(b, 0.0);
      ASSERT_LE(b, 1.0);
      s += b;
    }
    EXPECT_NEAR(s / n, mean, 5 * 0.3 / std::sqrt(n)) << prior.name();
  }
}

namespace {

// Forwards the spectrum without its exact interface.
struct NumericOnly {
  const Spectrum& spec;
  std::size_t outcome_count() const { return spec.outcome_count(); }
  void outcome_probabilities(double b, std::span<double> out) const { spec.outcome_probabilities(b, out); }
};

}  // namespace

TEST(Marginals, ExactAndNumericAgree) {
  const auto prior = PriorDensity::quadratic();
  const Spectrum spec(15);
  static_assert(ExactOutcomeModel<Spectrum>);
  static_assert(OutcomeModel<NumericOnly> && !ExactOutcomeModel<NumericOnly>);
  const auto exact = marginal_probabilities(spec, prior);
  const auto numeric = marginal_probabilities(NumericOnly{spec}, prior);
  for (std::size_t k = 0; k < exact.size(); ++k) {
    ASSERT_TRUE(exact[k].exact.has_value());
    EXPECT_FALSE(numeric[k].exact.has_value());
    EXPECT_NEAR(exact[k].value, numeric[k].value, 1e-14);
  }
  EXPECT_NEAR(average_gain(spec, prior).average_gain, average_gain(NumericOnly{spec}, prior).average_gain, 1e-12);
}
