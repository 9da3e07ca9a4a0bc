#include <gtest/gtest.h>

#include "entest/reparametrization.hpp"
#include "entest/spin_spectrum.hpp"

#include <cmath>

using namespace entest;

TEST(Reparametrization, GainIsInvariant) {
  const auto prior = PriorDensity::quadratic();
  for (int n : {1, 2, 3, 5, 8, 13, 20}) {
    const Spectrum spec(n);
    const double g = average_gain(spec, prior).average_gain;
    for (const auto& h : {Reparametrization::identity(), Reparametrization::entanglement_of_formation(),
                          Reparametrization::schmidt_monotone(), Reparametrization::amplitude_entropy()})
      EXPECT_NEAR(reparametrized_gain(spec, prior, h), g, 1e-8) << h.name << " N=" << n;
  }
}

TEST(Reparametrization, NumericDerivativeAndInverse) {
  // Map given without derivative or inverse: both are computed.
  const auto prior = PriorDensity::uniform();
  const Spectrum spec(6);
  const Reparametrization cubic{[](double b) { return b * b * b + b; }, nullptr, nullptr, "cubic"};
  EXPECT_NEAR(reparametrized_gain(spec, prior, cubic), average_gain(spec, prior).average_gain, 1e-8);
}

TEST(Reparametrization, SquareRootConcurrenceForm) {
  // Concurrence-style map sqrt(1 - b^2), decreasing, with a vertical
  // tangent at b = 1.
  const auto prior = PriorDensity::quadratic();
  const Spectrum spec(4);
  const Reparametrization conc{[](double b) { return std::sqrt(std::max(0.0, 1.0 - b * b)); }, nullptr, nullptr,
                               "concurrence"};
  EXPECT_NEAR(reparametrized_gain(spec, prior, conc), average_gain(spec, prior).average_gain, 1e-8);
}

TEST(Reparametrization, EntanglementOfFormationValues) {
  const auto h = Reparametrization::entanglement_of_formation();
  EXPECT_NEAR(h.map(0.0), 1.0, 1e-15);
  EXPECT_NEAR(h.map(1.0), 0.0, 1e-15);
  EXPECT_NEAR(h.map(0.6), -(0.8 * std::log2(0.8) + 0.2 * std::log2(0.2)), 1e-15);
  EXPECT_NEAR(h.derivative(0.3), detail::numeric_derivative(h.map, 0.3), 1e-8);
}

TEST(Reparametrization, SchmidtMonotoneInverse) {
  const auto h = Reparametrization::schmidt_monotone();
  for (double b : {0.0, 0.3, 0.99, 1.0}) EXPECT_NEAR(h.inverse(h.map(b)), b, 1e-14);
  EXPECT_NEAR(h.derivative(0.3), detail::numeric_derivative(h.map, 0.3), 1e-8);
}

TEST(Reparametrization, RejectsNonMonotone) {
  const Reparametrization bump{[](double b) { return b * (1 - b); }, nullptr, nullptr, "bump"};
  EXPECT_THROW(check_monotone(bump), DomainError);
  EXPECT_THROW(reparametrized_gain(Spectrum(2), PriorDensity::uniform(), bump), DomainError);
  const Reparametrization flat{[](double) { return 1.0; }, nullptr, nullptr, "flat"};
  EXPECT_THROW(check_monotone(flat), DomainError);
}
