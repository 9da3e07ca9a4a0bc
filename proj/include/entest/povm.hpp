#pragma once

// Arbitrary measurements reduced to their block traces.
//
// Because the effective state is lambda_j(b) times the identity on block j,
// any POVM element M^(k) only matters through q_j^(k) = tr(M^(k) P_j), and
//   p(k|b) = sum_j lambda_j(b) q_j^(k).
// Completeness of the POVM on the support forces sum_k q_j^(k) = n_j.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entest/bayes.hpp"
#include "entest/errors.hpp"
#include "entest/rng.hpp"
#include "entest/spin_spectrum.hpp"

namespace entest {

/// Rows are outcomes k, columns are spectrum blocks j.
struct AbstractPOVM {
  Eigen::MatrixXd q;

  std::size_t outcome_count() const { return static_cast<std::size_t>(q.rows()); }

  /// The minimal optimal measurement: one projector per block.
  static AbstractPOVM block_projective(const Spectrum& spec) {
    const auto m = static_cast<Eigen::Index>(spec.outcome_count());
    AbstractPOVM povm{Eigen::MatrixXd::Zero(m, m)};
    for (Eigen::Index j = 0; j < m; ++j)
      povm.q(j, j) = static_cast<double>(spec.block(static_cast<std::size_t>(j)).block_dim);
    return povm;
  }

  /// The measurement with a single outcome (the identity).
  static AbstractPOVM trivial(const Spectrum& spec) {
    const auto m = static_cast<Eigen::Index>(spec.outcome_count());
    AbstractPOVM povm{Eigen::MatrixXd::Zero(1, m)};
    for (Eigen::Index j = 0; j < m; ++j)
      povm.q(0, j) = static_cast<double>(spec.block(static_cast<std::size_t>(j)).block_dim);
    return povm;
  }

  /// Random valid POVM with `outcomes` rows: iid exponential entries,
  /// columns rescaled to n_j.
  static AbstractPOVM random(const Spectrum& spec, std::size_t outcomes, Rng& rng) {
    const auto m = static_cast<Eigen::Index>(spec.outcome_count());
    const auto rows = static_cast<Eigen::Index>(outcomes);
    AbstractPOVM povm{Eigen::MatrixXd(rows, m)};
    for (Eigen::Index j = 0; j < m; ++j) {
      for (Eigen::Index k = 0; k < rows; ++k) povm.q(k, j) = -std::log(rng.uniform_open_low());
      povm.q.col(j) *= static_cast<double>(spec.block(static_cast<std::size_t>(j)).block_dim) /
                       povm.q.col(j).sum();
    }
    return povm;
  }
};

/// Checks nonnegativity and sum_k q_j^(k) = n_j to 1e-10 (relative to n_j).
inline void validate(const AbstractPOVM& povm, const Spectrum& spec) {
  if (povm.q.rows() < 1) throw ValidationError("POVM needs at least one outcome");
  if (static_cast<std::size_t>(povm.q.cols()) != spec.outcome_count())
    throw ValidationError("POVM has " + std::to_string(povm.q.cols()) + " block columns, spectrum has " +
                          std::to_string(spec.outcome_count()));
  if (!povm.q.allFinite()) throw ValidationError("POVM entries must be finite");
  if ((povm.q.array() < 0.0).any()) throw ValidationError("POVM block traces must be nonnegative");
  for (Eigen::Index j = 0; j < povm.q.cols(); ++j) {
    const double n_j = static_cast<double>(spec.block(static_cast<std::size_t>(j)).block_dim);
    if (std::abs(povm.q.col(j).sum() - n_j) > 1e-10 * n_j)
      throw ValidationError("POVM column " + std::to_string(j) + " sums to " +
                            std::to_string(povm.q.col(j).sum()) + ", expected " + std::to_string(n_j));
  }
}

/// Outcome model p(k|b) = sum_j lambda_j(b) q_j^(k) of an abstract POVM.
class PovmModel {
 public:
  PovmModel(AbstractPOVM povm, Spectrum spec) : povm_(std::move(povm)), spec_(std::move(spec)) {
    validate(povm_, spec_);
    lambda_scale_.resize(spec_.outcome_count());
    for (std::size_t j = 0; j < lambda_scale_.size(); ++j)
      lambda_scale_[j] = 1.0 / static_cast<double>(spec_.block(j).block_dim);
  }

  int copies() const { return spec_.copies(); }
  std::size_t outcome_count() const { return povm_.outcome_count(); }

  void outcome_probabilities(double b, std::span<double> out) const {
    std::vector<double> w(spec_.outcome_count());
    spec_.outcome_probabilities(b, w);
    for (std::size_t k = 0; k < outcome_count(); ++k) {
      double p = 0.0;
      for (std::size_t j = 0; j < w.size(); ++j)
        p += povm_.q(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) * lambda_scale_[j] * w[j];
      out[k] = p;
    }
  }

 private:
  AbstractPOVM povm_;
  Spectrum spec_;
  std::vector<double> lambda_scale_;
};

/// Expected information gain (bits) of an arbitrary measurement. Never
/// exceeds average_gain(spec, prior) beyond quadrature error.
inline double povm_gain(const AbstractPOVM& povm, const Spectrum& spec, const PriorDensity& prior,
                        const QuadratureOptions& options = {}) {
  return average_gain(PovmModel(povm, spec), prior, options).average_gain;
}

}  // namespace entest
