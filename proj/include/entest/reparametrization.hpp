#pragma once

// Information gain expressed in a different entanglement parameter
// b' = h(b). The prior is carried to b' with its Jacobian, p(k|b') is
// p(k|h^{-1}(b')), and everything is integrated over b' directly. The
// Kullback information is invariant under any bijection, so the result
// must match average_gain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "entest/bayes.hpp"
#include "entest/errors.hpp"

namespace entest {

/// Strictly monotone map of [0, 1]. `derivative` and `inverse` are
/// optional; missing ones are computed numerically.
struct Reparametrization {
  std::function<double(double)> map;
  std::function<double(double)> derivative;
  std::function<double(double)> inverse;
  std::string name;

  static Reparametrization identity() {
    return {[](double b) { return b; }, [](double) { return 1.0; }, [](double v) { return v; }, "identity"};
  }

  /// Entanglement of formation of the pure state: the binary entropy (bits)
  /// of its Schmidt weights (1 +- b)/2.
  static Reparametrization entanglement_of_formation() {
    auto entropy = [](double b) {
      const double p = 0.5 * (1.0 + b);
      const double q = 0.5 * (1.0 - b);
      double h = 0.0;
      if (p > 0.0) h -= p * std::log2(p);
      if (q > 0.0) h -= q * std::log2(q);
      return h;
    };
    auto slope = [](double b) {
      if (b >= 1.0) return -std::numeric_limits<double>::infinity();
      return 0.5 * std::log2((1.0 - b) / (1.0 + b));
    };
    return {entropy, slope, nullptr, "entanglement-of-formation"};
  }

  /// -sum c log2 c over the Schmidt amplitudes c = sqrt((1 +- b)/2).
  /// Strictly decreasing on [0, 1]; derivative and inverse are numeric.
  static Reparametrization amplitude_entropy() {
    auto f = [](double b) {
      double h = 0.0;
      for (double c : {std::sqrt(0.5 * (1.0 + b)), std::sqrt(0.5 * (1.0 - b))})
        if (c > 0.0) h -= c * std::log2(c);
      return h;
    };
    return {f, nullptr, nullptr, "amplitude-entropy"};
  }

  /// Smallest Schmidt amplitude sqrt((1 - b)/2), an entanglement monotone
  /// for single copies.
  static Reparametrization schmidt_monotone() {
    return {[](double b) { return std::sqrt(0.5 * (1.0 - b)); },
            [](double b) {
              if (b >= 1.0) return -std::numeric_limits<double>::infinity();
              return -0.25 / std::sqrt(0.5 * (1.0 - b));
            },
            [](double v) { return 1.0 - 2.0 * v * v; }, "schmidt-monotone"};
  }
};

namespace detail {

/// Fourth-order central difference. The step stays a small fraction of the
/// distance to the ends of [0, 1], where maps such as sqrt(1 - b) are
/// singular; at the ends themselves it falls back to a one-sided difference.
inline double numeric_derivative(const std::function<double(double)>& f, double x) {
  const double room = std::min(x, 1.0 - x);
  const double h = std::min(1e-3, 1e-2 * room);
  if (h > 1e-13) return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
  constexpr double edge = 1e-9;
  if (x + edge <= 1.0) return (f(x + edge) - f(x)) / edge;
  return (f(x) - f(x - edge)) / edge;
}

}  // namespace detail

/// Rejects maps that are not strictly monotone on a 4097-point grid.
inline void check_monotone(const Reparametrization& h) {
  if (!h.map) throw DomainError("reparametrization has no map");
  constexpr int grid = 4096;
  double previous = h.map(0.0);
  int direction = 0;
  for (int i = 1; i <= grid; ++i) {
    const double value = h.map(static_cast<double>(i) / grid);
    if (!std::isfinite(value)) throw DomainError("reparametrization '" + h.name + "' is not finite");
    const int step = value > previous ? 1 : (value < previous ? -1 : 0);
    if (step == 0 || (direction != 0 && step != direction))
      throw DomainError("reparametrization '" + h.name + "' is not strictly monotone on [0,1]");
    direction = step;
    previous = value;
  }
}

/// Kbar (bits) computed entirely in the parameter b' = h(b).
template <OutcomeModel M>
double reparametrized_gain(const M& model, const PriorDensity& prior, const Reparametrization& h,
                           double tolerance = 1e-13) {
  check_monotone(h);
  const double at0 = h.map(0.0);
  const double at1 = h.map(1.0);
  const bool increasing = at1 > at0;
  const double lo = std::min(at0, at1);
  const double hi = std::max(at0, at1);

  auto invert = [&](double v) -> double {
    if (h.inverse) return std::clamp(h.inverse(v), 0.0, 1.0);
    if (v <= lo) return increasing ? 0.0 : 1.0;
    if (v >= hi) return increasing ? 1.0 : 0.0;
    auto residual = [&](double b) { return h.map(b) - v; };
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        residual, 0.0, 1.0, at0 - v, at1 - v, boost::math::tools::eps_tolerance<double>(52), iterations);
    return 0.5 * (bracket.first + bracket.second);
  };
  auto slope = [&](double b) { return h.derivative ? h.derivative(b) : detail::numeric_derivative(h.map, b); };

  // Transformed prior g(b') = f(b) / |h'(b)| at b = h^{-1}(b').
  const std::size_t m = model.outcome_count();
  auto transformed = [&](double v, std::vector<double>& w) {
    const double b = invert(v);
    const double jac = std::abs(slope(b));
    model.outcome_probabilities(b, w);
    const double g = prior(b) / jac;
    return std::isfinite(g) ? g : 0.0;
  };

  boost::math::quadrature::tanh_sinh<double> integrator;
  std::vector<double> marginals(m);
  for (std::size_t k = 0; k < m; ++k) {
    marginals[k] = integrator.integrate(
        [&](double v) {
          std::vector<double> w(m);
          const double g = transformed(v, w);
          return g * w[k];
        },
        lo, hi, tolerance);
  }
  // Outcome probabilities sum to 1, so the marginals sum to the computed
  // mass of the transformed prior; dividing by it cancels the quadrature
  // error common to all terms.
  double mass = 0.0;
  for (double p : marginals) mass += p;
  for (double& p : marginals) p /= mass;
  const double total = integrator.integrate(
      [&](double v) {
        std::vector<double> w(m);
        const double g = transformed(v, w);
        if (g == 0.0) return 0.0;
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k)
          if (w[k] > 0.0 && marginals[k] > 0.0) s += w[k] * std::log(w[k] / marginals[k]);
        return g * s;
      },
      lo, hi, tolerance);
  return total / mass / nats_per_bit;
}

}  // namespace entest
