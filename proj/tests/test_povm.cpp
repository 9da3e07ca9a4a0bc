#include <gtest/gtest.h>

#include "entest/povm.hpp"

using namespace entest;

TEST(Povm, BlockProjectiveIsOptimalModel) {
  const auto prior = PriorDensity::quadratic();
  for (int n : {2, 3, 4, 7}) {
    const Spectrum spec(n);
    const auto povm = AbstractPOVM::block_projective(spec);
    EXPECT_NO_THROW(validate(povm, spec));
    EXPECT_NEAR(povm_gain(povm, spec, prior), average_gain(spec, prior).average_gain, 1e-12);
  }
}

TEST(Povm, TrivialMeasurementGainsNothing) {
  const Spectrum spec(5);
  EXPECT_EQ(povm_gain(AbstractPOVM::trivial(spec), spec, PriorDensity::quadratic()), 0.0);
}

TEST(Povm, RandomNeverBeatsOptimum) {
  const auto prior = PriorDensity::quadratic();
  Rng rng(2024);
  for (int n : {2, 3, 4, 6}) {
    const Spectrum spec(n);
    const double best = average_gain(spec, prior).average_gain;
    for (int i = 0; i < 40; ++i) {
      const auto povm = AbstractPOVM::random(spec, 1 + static_cast<std::size_t>(i % 6), rng);
      ASSERT_NO_THROW(validate(povm, spec));
      const double g = povm_gain(povm, spec, prior);
      EXPECT_GE(g, -1e-12);
      EXPECT_LE(g, best + 1e-9);
    }
  }
}

TEST(Povm, RefiningOptimalOutcomesChangesNothing) {
  // Splitting an outcome in proportional parts leaves every posterior alone.
  const auto prior = PriorDensity::quadratic();
  const Spectrum spec(4);
  const auto opt = AbstractPOVM::block_projective(spec);
  const Eigen::Index m = opt.q.rows();
  AbstractPOVM fine{Eigen::MatrixXd::Zero(3 * m, opt.q.cols())};
  for (Eigen::Index k = 0; k < m; ++k) {
    fine.q.row(3 * k) = 0.5 * opt.q.row(k);
    fine.q.row(3 * k + 1) = 0.3 * opt.q.row(k);
    fine.q.row(3 * k + 2) = 0.2 * opt.q.row(k);
  }
  validate(fine, spec);
  EXPECT_NEAR(povm_gain(fine, spec, prior), povm_gain(opt, spec, prior), 1e-12);
}

TEST(Povm, CoarseGrainingLosesInformation) {
  const auto prior = PriorDensity::quadratic();
  const Spectrum spec(6);
  const auto opt = AbstractPOVM::block_projective(spec);
  AbstractPOVM merged{Eigen::MatrixXd::Zero(opt.q.rows() - 1, opt.q.cols())};
  merged.q.topRows(opt.q.rows() - 2) = opt.q.topRows(opt.q.rows() - 2);
  merged.q.row(opt.q.rows() - 2) = opt.q.row(opt.q.rows() - 2) + opt.q.row(opt.q.rows() - 1);
  validate(merged, spec);
  EXPECT_LT(povm_gain(merged, spec, prior), povm_gain(opt, spec, prior));
}

TEST(Povm, ValidationRejectsBadMatrices) {
  const Spectrum spec(3);
  auto povm = AbstractPOVM::block_projective(spec);
  povm.q(0, 0) += 0.5;
  EXPECT_THROW(validate(povm, spec), ValidationError);
  povm = AbstractPOVM::block_projective(spec);
  povm.q(0, 1) = -1.0;
  povm.q(1, 1) = 5.0;
  EXPECT_THROW(validate(povm, spec), ValidationError);
  AbstractPOVM wrong_shape{Eigen::MatrixXd::Ones(2, 3)};
  EXPECT_THROW(validate(wrong_shape, spec), ValidationError);
}

TEST(Povm, NeverFiringOutcomeIsHarmless) {
  const auto prior = PriorDensity::quadratic();
  const Spectrum spec(3);
  const auto opt = AbstractPOVM::block_projective(spec);
  AbstractPOVM padded{Eigen::MatrixXd::Zero(opt.q.rows() + 1, opt.q.cols())};
  padded.q.topRows(opt.q.rows()) = opt.q;
  const auto r = average_gain(PovmModel(padded, spec), prior);
  EXPECT_EQ(r.marginals.back(), 0.0);
  EXPECT_EQ(r.outcome_gains.back(), 0.0);
  EXPECT_NEAR(r.average_gain, povm_gain(opt, spec, prior), 1e-12);
}
