#pragma once

// Monte Carlo replay of the estimation experiment: draw b from the prior,
// draw the measurement outcome from p(k|b), report the Bayes update.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "entest/bayes.hpp"
#include "entest/errors.hpp"
#include "entest/rng.hpp"

namespace entest {

struct SimulationOptions {
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  /// Sample every trial at this b instead of drawing it from the prior.
  std::optional<double> fixed_parameter;
  /// Keep per-trial records (summaries are always produced).
  bool keep_trace = true;
};

struct TrialRecord {
  std::uint64_t trial = 0;
  double b_true = 0.0;
  std::size_t outcome = 0;     // zero-based
  double posterior_mean = 0.0;
  double posterior_sd = 0.0;
  double gain = 0.0;           // K[f_k, f], bits
};

struct OutcomeSummary {
  double marginal = 0.0;  // p(k) under the prior
  double posterior_mean = 0.0;
  double posterior_sd = 0.0;
  double gain = 0.0;      // bits; 0 for outcomes with p(k) = 0
};

struct SimulationResult {
  std::vector<TrialRecord> trace;
  std::vector<OutcomeSummary> outcomes;
  std::vector<std::uint64_t> counts;
  std::uint64_t trials = 0;
  double mean_gain = 0.0;      // empirical average of K[f_k, f], bits
  double expected_gain = 0.0;  // Kbar, bits

  double frequency(std::size_t k) const {
    return trials == 0 ? 0.0 : static_cast<double>(counts.at(k)) / static_cast<double>(trials);
  }
};

template <OutcomeModel M>
SimulationResult simulate_experiment(const M& model, const PriorDensity& prior, const SimulationOptions& options) {
  if (options.trials < 1) throw ValidationError("simulation needs at least one trial");
  if (options.fixed_parameter && !(*options.fixed_parameter >= 0.0 && *options.fixed_parameter <= 1.0))
    throw DomainError("fixed parameter must lie in [0, 1]");

  const std::size_t m = model.outcome_count();
  const GainReport report = average_gain(model, prior);

  SimulationResult result;
  result.trials = options.trials;
  result.expected_gain = report.average_gain;
  result.counts.assign(m, 0);
  result.outcomes.resize(m);
  const auto& rule = gauss_legendre(400);
  for (std::size_t k = 0; k < m; ++k) {
    auto& s = result.outcomes[k];
    s.marginal = report.marginals[k];
    s.gain = report.outcome_gains[k];
    if (!(s.marginal > 0.0)) continue;
    const PriorDensity post = m == 1 ? prior : posterior(prior, model, k);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double b = rule.nodes[i];
      const double wf = rule.weights[i] * post(b);
      mean += wf * b;
      second += wf * b * b;
    }
    s.posterior_mean = mean;
    s.posterior_sd = std::sqrt(std::max(0.0, second - mean * mean));
  }

  Rng rng(options.seed);
  std::vector<double> probs(m);
  if (options.keep_trace) result.trace.reserve(static_cast<std::size_t>(options.trials));
  double gain_sum = 0.0;
  for (std::uint64_t t = 0; t < options.trials; ++t) {
    const double b = options.fixed_parameter ? *options.fixed_parameter : prior.sample(rng);
    model.outcome_probabilities(b, probs);
    // Inverse-CDF draw over outcomes; a zero-probability outcome is never hit.
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t k = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (probs[i] <= 0.0) continue;
      cumulative += probs[i];
      k = i;
      if (u < cumulative) break;
    }
    ++result.counts[k];
    gain_sum += result.outcomes[k].gain;
    if (options.keep_trace)
      result.trace.push_back(TrialRecord{t, b, k, result.outcomes[k].posterior_mean,
                                         result.outcomes[k].posterior_sd, result.outcomes[k].gain});
  }
  result.mean_gain = gain_sum / static_cast<double>(options.trials);
  return result;
}

}  // namespace entest
