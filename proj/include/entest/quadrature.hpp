#pragma once

// Gauss-Legendre rules mapped to [0, 1].

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "entest/errors.hpp"

namespace entest {

struct QuadratureRule {
  std::vector<double> nodes;    // in (0, 1), ascending
  std::vector<double> weights;  // sum to 1
  std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline QuadratureRule build_gauss_legendre(int n) {
  // boost returns the nonnegative zeros of P_n in ascending order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(n));
  rule.weights.reserve(static_cast<std::size_t>(n));
  auto weight_at = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 1.0 / ((1.0 - x * x) * dp * dp);  // half the [-1,1] weight
  };
  // Negative zeros (mirror), from most negative upward.
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    rule.nodes.push_back(0.5 * (1.0 - *it));
    rule.weights.push_back(weight_at(*it));
  }
  for (double z : zeros) {
    rule.nodes.push_back(0.5 * (1.0 + z));
    rule.weights.push_back(weight_at(z));
  }
  return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [0, 1]; rules are built once and cached.
inline const QuadratureRule& gauss_legendre(int n) {
  if (n < 2) throw ValidationError("quadrature needs at least 2 nodes");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(detail::build_gauss_legendre(n));
  return *slot;
}

}  // namespace entest
