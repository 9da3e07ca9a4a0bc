#pragma once

// Bayesian information gain of a measurement on N copies.
//
// A measurement is described by its outcome model: for each value of the
// parameter b it yields the outcome distribution p(k|b). Given a prior f,
//   p(k)      = int f(b) p(k|b) db
//   f_k(b)    = p(k|b) f(b) / p(k)
//   K[f_k,f]  = int f_k ln(f_k / f) db
//   Kbar      = sum_k p(k) K[f_k,f] = sum_k int f p(k|b) ln(p(k|b)/p(k)) db.
// All gains leave this header in bits.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entest/errors.hpp"
#include "entest/exact.hpp"
#include "entest/prior.hpp"
#include "entest/quadrature.hpp"

namespace entest {

inline constexpr double nats_per_bit = std::numbers::ln2;

template <class M>
concept OutcomeModel = requires(const M& m, double b, std::span<double> out) {
  { m.outcome_count() } -> std::convertible_to<std::size_t>;
  m.outcome_probabilities(b, out);
};

/// Outcome model whose p(k|b) are polynomials with exact coefficients.
template <class M>
concept ExactOutcomeModel =
    OutcomeModel<M> && requires(const M& m, const RationalPolynomial& prior, std::size_t k) {
      { m.exact_marginals(prior) } -> std::convertible_to<std::vector<Rational>>;
      { m.exact_outcome_polynomial(k) } -> std::convertible_to<RationalPolynomial>;
    };

struct QuadratureOptions {
  int initial_nodes = 200;
  int max_nodes = 25600;
  /// Node doubling stops once successive gains differ by less than this (bits).
  double tolerance = 1e-9;
};

struct GainReport {
  int copies = 0;  // N; 0 when the model does not know it
  std::vector<double> marginals;
  std::optional<std::vector<Rational>> exact_marginals;
  std::vector<double> outcome_gains;  // K[f_k, f], bits
  double average_gain = 0.0;          // bits
  double quad_error = 0.0;            // |Kbar(n) - Kbar(n/2)|, bits
  int nodes = 0;                      // Gauss-Legendre nodes of the final pass
};

struct Marginal {
  double value = 0.0;
  std::optional<Rational> exact;
};

namespace detail {

template <OutcomeModel M>
int model_copies(const M& model) {
  if constexpr (requires { model.copies(); })
    return static_cast<int>(model.copies());
  else
    return 0;
}

/// Row-major table of p(k|b) at the rule's nodes.
template <OutcomeModel M>
std::vector<double> tabulate(const M& model, const QuadratureRule& rule) {
  const std::size_t m = model.outcome_count();
  std::vector<double> table(rule.size() * m);
  for (std::size_t i = 0; i < rule.size(); ++i)
    model.outcome_probabilities(rule.nodes[i], std::span<double>(table.data() + i * m, m));
  return table;
}

inline std::vector<double> marginals_from_table(std::span<const double> table, std::size_t m,
                                                const QuadratureRule& rule, const PriorDensity& prior) {
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double fw = rule.weights[i] * prior(rule.nodes[i]);
    for (std::size_t k = 0; k < m; ++k) out[k] += fw * table[i * m + k];
  }
  return out;
}

/// I_k = int f p(k|b) ln(p(k|b)/p(k)) db, nats; 0 ln 0 := 0.
inline std::vector<double> information_from_table(std::span<const double> table, std::size_t m,
                                                  const QuadratureRule& rule, const PriorDensity& prior,
                                                  std::span<const double> marginals) {
  std::vector<double> out(m, 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double fw = rule.weights[i] * prior(rule.nodes[i]);
    if (fw == 0.0) continue;
    for (std::size_t k = 0; k < m; ++k) {
      const double p = table[i * m + k];
      if (p > 0.0 && marginals[k] > 0.0) out[k] += fw * p * std::log(p / marginals[k]);
    }
  }
  return out;
}

template <OutcomeModel M>
std::optional<std::vector<Rational>> exact_marginals_if_available(const M& model, const PriorDensity& prior) {
  if constexpr (ExactOutcomeModel<M>) {
    if (prior.is_polynomial()) return model.exact_marginals(prior.coefficients());
  }
  return std::nullopt;
}

template <OutcomeModel M>
void check_index(const M& model, std::size_t k) {
  if (k >= model.outcome_count())
    throw std::out_of_range("outcome index " + std::to_string(k) + " out of range (" +
                            std::to_string(model.outcome_count()) + " outcomes)");
}

}  // namespace detail

/// p(k|b) for a single outcome (zero-based k).
template <OutcomeModel M>
double outcome_probability(const M& model, std::size_t k, double b) {
  detail::check_index(model, k);
  std::vector<double> out(model.outcome_count());
  model.outcome_probabilities(b, out);
  return out[k];
}

/// All marginals p(k); exact when the model and the prior are polynomial.
template <OutcomeModel M>
std::vector<Marginal> marginal_probabilities(const M& model, const PriorDensity& prior, int nodes = 400) {
  const std::size_t m = model.outcome_count();
  std::vector<Marginal> out(m);
  if (auto exact = detail::exact_marginals_if_available(model, prior)) {
    for (std::size_t k = 0; k < m; ++k) out[k] = Marginal{to_double((*exact)[k]), (*exact)[k]};
    return out;
  }
  const auto& rule = gauss_legendre(nodes);
  const auto table = detail::tabulate(model, rule);
  const auto values = detail::marginals_from_table(table, m, rule, prior);
  for (std::size_t k = 0; k < m; ++k) out[k].value = values[k];
  return out;
}

template <OutcomeModel M>
Marginal marginal_probability(const M& model, std::size_t k, const PriorDensity& prior) {
  detail::check_index(model, k);
  return marginal_probabilities(model, prior)[k];
}

/// Bayes update f(b|k) = p(k|b) f(b) / p(k).
template <OutcomeModel M>
PriorDensity posterior(const PriorDensity& prior, const M& model, std::size_t k) {
  const Marginal pk = marginal_probability(model, k, prior);
  if ((pk.exact && *pk.exact == 0) || !(pk.value > 0.0))
    throw UndefinedPosteriorError("outcome " + std::to_string(k) + " has zero marginal probability");
  std::optional<RationalPolynomial> exact;
  if constexpr (ExactOutcomeModel<M>) {
    if (prior.is_polynomial() && pk.exact)
      exact = model.exact_outcome_polynomial(k) * prior.coefficients() * (Rational(1) / *pk.exact);
  }
  const double norm = pk.value;
  auto density = [model, prior, k, norm](double b) {
    std::vector<double> w(model.outcome_count());
    model.outcome_probabilities(b, w);
    return w[k] * prior(b) / norm;
  };
  return PriorDensity::unchecked(std::move(density), std::move(exact), prior.bound() / norm,
                                 prior.name() + "|k=" + std::to_string(k));
}

/// Kullback information int f' ln(f'/f) db in bits, with 0 ln 0 := 0.
inline double outcome_gain(const PriorDensity& prior, const PriorDensity& updated,
                           const QuadratureOptions& options = {}) {
  auto pass = [&](int n) {
    const auto& rule = gauss_legendre(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double b = rule.nodes[i];
      const double q = updated(b);
      if (q <= 0.0) continue;
      const double p = prior(b);
      if (!(p > 0.0))
        throw DomainError("updated density is not absolutely continuous w.r.t. the prior at b = " +
                          std::to_string(b));
      acc += rule.weights[i] * q * std::log(q / p);
    }
    return acc / nats_per_bit;
  };
  int n = options.initial_nodes;
  double previous = pass(n);
  while (2 * n <= options.max_nodes) {
    n *= 2;
    const double current = pass(n);
    const bool done = std::abs(current - previous) < options.tolerance;
    previous = current;
    if (done) break;
  }
  return previous;
}

/// Expected information gain of the measurement described by `model`.
/// For the spin-block projective measurement this is the optimal value.
template <OutcomeModel M>
GainReport average_gain(const M& model, const PriorDensity& prior, const QuadratureOptions& options = {}) {
  const std::size_t m = model.outcome_count();
  GainReport report;
  report.copies = detail::model_copies(model);
  report.exact_marginals = detail::exact_marginals_if_available(model, prior);

  if (m == 1) {
    // A one-outcome measurement has p(1|b) = 1 identically.
    report.marginals = {1.0};
    report.outcome_gains = {0.0};
    report.nodes = 0;
    return report;
  }

  struct Pass {
    std::vector<double> marginals;
    std::vector<double> information;  // nats
    double total = 0.0;               // bits
  };
  auto run = [&](int n) {
    const auto& rule = gauss_legendre(n);
    const auto table = detail::tabulate(model, rule);
    Pass pass;
    if (report.exact_marginals) {
      for (const auto& r : *report.exact_marginals) pass.marginals.push_back(to_double(r));
    } else {
      pass.marginals = detail::marginals_from_table(table, m, rule, prior);
    }
    pass.information = detail::information_from_table(table, m, rule, prior, pass.marginals);
    for (double v : pass.information) pass.total += v;
    pass.total /= nats_per_bit;
    return pass;
  };

  int n = options.initial_nodes;
  Pass current = run(n);
  double error = std::numeric_limits<double>::infinity();
  while (2 * n <= options.max_nodes) {
    Pass next = run(2 * n);
    n *= 2;
    error = std::abs(next.total - current.total);
    current = std::move(next);
    if (error < options.tolerance) break;
  }

  report.marginals = current.marginals;
  report.outcome_gains.resize(m, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    if (current.marginals[k] > 0.0)
      report.outcome_gains[k] = current.information[k] / current.marginals[k] / nats_per_bit;
  report.average_gain = current.total;
  report.quad_error = error;
  report.nodes = n;
  return report;
}

}  // namespace entest
