#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "entest/errors.hpp"
#include "entest/exact.hpp"
#include "entest/rng.hpp"

namespace entest {

/// Probability density on b in [0, 1].
///
/// Polynomial densities keep their exact rational coefficients so that
/// marginals and normalizations can be computed without rounding; every
/// density also carries a double-precision evaluator, which for posteriors
/// is the numerically stable product form rather than the expanded
/// polynomial.
class PriorDensity {
 public:
  using Density = std::function<double(double)>;

  /// Polynomial density with exact coefficients (ascending powers of b).
  /// Requires exact unit mass and nonnegativity on [0, 1].
  static PriorDensity polynomial(RationalPolynomial coefficients, std::string name = "polynomial") {
    if (coefficients.moment() != 1)
      throw ValidationError("polynomial prior must integrate to 1 on [0,1], got " +
                            coefficients.moment().str());
    for (int i = 0; i <= 2000; ++i)
      if (coefficients(i / 2000.0) < -1e-12)
        throw ValidationError("polynomial prior is negative at b = " + std::to_string(i / 2000.0));
    const double bound = to_double(coefficients.absolute_sum());
    auto poly = coefficients;
    PriorDensity out([poly](double b) { return poly(b); }, std::move(coefficients), bound,
                     nullptr, std::move(name));
    return out;
  }

  /// f(b) = 3 b^2, the density induced on b by the unitarily invariant
  /// measure on two-qubit pure states.
  static PriorDensity quadratic() {
    auto p = polynomial(RationalPolynomial({0, 0, 3}), "quadratic");
    p.inverse_cdf_ = [](double u) { return std::cbrt(u); };
    return p;
  }

  static PriorDensity uniform() {
    auto p = polynomial(RationalPolynomial({1}), "uniform");
    p.inverse_cdf_ = [](double u) { return u; };
    return p;
  }

  /// Arbitrary density; `bound` must dominate it on [0, 1] (used for
  /// rejection sampling). Normalization is checked to 1e-10.
  static PriorDensity generic(Density density, double bound, std::string name = "generic") {
    if (!density) throw ValidationError("generic prior needs a density function");
    if (!(bound > 0.0) || !std::isfinite(bound))
      throw ValidationError("generic prior needs a finite positive bound");
    for (int i = 0; i <= 2000; ++i) {
      const double v = density(i / 2000.0);
      if (!(v >= 0.0)) throw ValidationError("generic prior is negative or NaN at b = " + std::to_string(i / 2000.0));
      if (v > bound * (1.0 + 1e-12)) throw ValidationError("generic prior exceeds its stated bound");
    }
    double error = 0.0;
    const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        density, 0.0, 1.0, 20, 1e-14, &error);
    if (std::abs(mass - 1.0) > 1e-10)
      throw ValidationError("generic prior must integrate to 1, got " + std::to_string(mass));
    return PriorDensity(std::move(density), std::nullopt, bound, nullptr, std::move(name));
  }

  /// Assembles a density without validation. Used for posteriors, whose
  /// normalization follows from the construction.
  static PriorDensity unchecked(Density density, std::optional<RationalPolynomial> exact,
                                double bound, std::string name) {
    return PriorDensity(std::move(density), std::move(exact), bound, nullptr, std::move(name));
  }

  double operator()(double b) const { return density_(b); }

  bool is_polynomial() const { return exact_.has_value(); }
  const RationalPolynomial& coefficients() const {
    if (!exact_) throw std::logic_error("prior '" + name_ + "' has no exact polynomial form");
    return *exact_;
  }
  const std::string& name() const { return name_; }
  double bound() const { return bound_; }

  /// Draws b by inverse CDF when available, otherwise by rejection
  /// against the bound.
  double sample(Rng& rng) const {
    if (inverse_cdf_) return inverse_cdf_(rng.uniform());
    if (!(bound_ > 0.0)) throw std::logic_error("prior '" + name_ + "' cannot be sampled");
    for (;;) {
      const double b = rng.uniform();
      if (rng.uniform() * bound_ < density_(b)) return b;
    }
  }

 private:
  PriorDensity(Density density, std::optional<RationalPolynomial> exact, double bound,
               std::function<double(double)> inverse_cdf, std::string name)
      : density_(std::move(density)),
        exact_(std::move(exact)),
        bound_(bound),
        inverse_cdf_(std::move(inverse_cdf)),
        name_(std::move(name)) {}

  Density density_;
  std::optional<RationalPolynomial> exact_;
  double bound_ = 0.0;
  std::function<double(double)> inverse_cdf_;
  std::string name_;
};

}  // namespace entest
