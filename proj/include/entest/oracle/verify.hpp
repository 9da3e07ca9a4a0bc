#pragma once

// Optimal POVM extraction from the oracle state and cross-checks of the
// closed-form spectrum against it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entest/errors.hpp"
#include "entest/half_spin.hpp"
#include "entest/oracle/haar.hpp"
#include "entest/oracle/linalg.hpp"
#include "entest/spin_spectrum.hpp"

namespace entest::oracle {

struct ProjectivePOVM {
  std::vector<CMatrix> projectors;
  std::vector<CMatrix> bases;  // orthonormal columns spanning each projector
  std::vector<int> block_dims;
  std::vector<double> eigenvalues;  // cluster means, for diagnostics

  std::size_t size() const { return projectors.size(); }
};

/// Clusters the nonzero spectrum of `rho` by relative gap and returns one
/// projector per cluster, largest block first. Eigenvalues at or below
/// `null_tolerance` are treated as the kernel and dropped.
inline ProjectivePOVM extract_povm(const DensityOperator& rho, double cluster_tol = 1e-6,
                                   double null_tolerance = 1e-10) {
  if (!(cluster_tol > 0.0)) throw ValidationError("cluster tolerance must be positive");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix);
  const auto& values = es.eigenvalues();
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = values.size() - 1; i >= 0; --i)
    if (values(i) > null_tolerance) order.push_back(i);
  if (order.empty()) throw ValidationError("density operator has no support");

  std::vector<std::vector<Eigen::Index>> clusters{{order.front()}};
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double prev = values(order[i - 1]);
    const double gap = (prev - values(order[i])) / prev;
    if (gap > cluster_tol && gap < 10.0 * cluster_tol)
      throw AmbiguousClusteringError("eigenvalue gap " + std::to_string(gap) +
                                     " is within a decade of the cluster tolerance; choose another reference b");
    if (gap <= cluster_tol)
      clusters.back().push_back(order[i]);
    else
      clusters.push_back({order[i]});
  }
  std::stable_sort(clusters.begin(), clusters.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  ProjectivePOVM povm;
  for (const auto& cluster : clusters) {
    CMatrix basis(rho.dim(), static_cast<Eigen::Index>(cluster.size()));
    double mean = 0.0;
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cluster[c]);
      mean += values(cluster[c]);
    }
    povm.projectors.push_back(basis * basis.adjoint());
    povm.bases.push_back(std::move(basis));
    povm.block_dims.push_back(static_cast<int>(cluster.size()));
    povm.eigenvalues.push_back(mean / static_cast<double>(cluster.size()));
  }
  return povm;
}

/// Largest deviation from P_k^2 = P_k, P_k P_l = 0 and sum_k P_k = `support`.
inline double projective_defect(const ProjectivePOVM& povm, const CMatrix& support) {
  double defect = 0.0;
  CMatrix sum = CMatrix::Zero(support.rows(), support.cols());
  for (std::size_t k = 0; k < povm.size(); ++k) {
    const auto& p = povm.projectors[k];
    defect = std::max(defect, (p * p - p).cwiseAbs().maxCoeff());
    for (std::size_t l = k + 1; l < povm.size(); ++l)
      defect = std::max(defect, (p * povm.projectors[l]).cwiseAbs().maxCoeff());
    sum += p;
  }
  return std::max(defect, (sum - support).cwiseAbs().maxCoeff());
}

struct BlockCheck {
  HalfSpin spin{0};
  int block_dim = 0;
  double closed_form = 0.0;     // w_j(b)
  double trace = 0.0;           // tr(P_j rho)
  double eigen_sum = 0.0;       // sum of eigenvalues of rho compressed to block j
  double eigen_spread = 0.0;    // max - min of those eigenvalues
  double eigen_deviation = 0.0; // max |eigenvalue - w_j / n_j|
  double eigen_tolerance = 0.0;
  double standard_error = 0.0;  // of `trace`; 0 for quadrature
  double deviation = 0.0;       // |trace - closed_form|
  double tolerance = 0.0;
  bool passed = false;
};

struct ParameterCheck {
  double b = 0.0;
  std::vector<BlockCheck> blocks;
  double leakage = 0.0;  // weight outside the symmetric subspace
  bool passed = false;
};

struct SpectrumVerification {
  int n = 0;
  AverageMethod method = AverageMethod::euler_quadrature;
  std::uint64_t budget = 0;
  std::vector<ParameterCheck> points;
  double max_deviation = 0.0;
  double max_standard_error = 0.0;
  double max_eigen_deviation = 0.0;
  bool structure_matches = false;  // cluster count and dimensions
  bool passed = false;
};

/// Pass thresholds: quadrature deviations within 1e-8; Monte Carlo within
/// 3 standard errors, floored at 1e-12 for rounding in noiseless blocks.
/// Each Monte Carlo sample puts exactly w_j(b) into block j (the blocks are
/// invariant), so the block traces are nearly noiseless; the eigenvalues
/// inside a block carry the sampling noise and are checked against the
/// Frobenius standard error of the whole matrix, which bounds them.
inline constexpr double quadrature_tolerance = 1e-8;
inline constexpr double mc_sigmas = 3.0;
inline constexpr double mc_rounding_floor = 1e-12;
inline constexpr double leakage_tolerance = 1e-10;

/// Compares the oracle state against the closed-form block weights.
/// Projectors are extracted once from the exact quadrature state at
/// `reference_b`; for each b the state is then built with `method`.
inline SpectrumVerification verify_spectrum(int n, const std::vector<double>& b_list, AverageMethod method,
                                            std::uint64_t budget, std::uint64_t seed = 0,
                                            double reference_b = 0.3) {
  detail::check_pair_copies(n);
  const Spectrum spec(n);
  const auto reference = haar_average_state(n, reference_b, AverageMethod::euler_quadrature, 0);
  const ProjectivePOVM povm = extract_povm(reference);

  SpectrumVerification report;
  report.n = n;
  report.method = method;
  report.budget = budget;
  report.structure_matches = povm.size() == spec.outcome_count();
  for (std::size_t k = 0; report.structure_matches && k < povm.size(); ++k)
    report.structure_matches = static_cast<std::uint64_t>(povm.block_dims[k]) == spec.block(k).block_dim;
  report.passed = report.structure_matches;
  if (!report.structure_matches) return report;

  const std::size_t m = spec.outcome_count();
  for (double b : b_list) {
    ParameterCheck point;
    point.b = b;
    DensityOperator rho;
    std::vector<double> mean(m, 0.0), second(m, 0.0);
    if (method == AverageMethod::monte_carlo) {
      if (budget < 2) throw ValidationError("Monte Carlo verification needs at least 2 samples");
      OuterProductAccumulator acc(Eigen::Index{1} << (2 * n), true);
      for_each_haar_batch(n, b, budget, seed, [&](const CMatrix& x) {
        acc.add_batch(x);
        for (std::size_t k = 0; k < m; ++k) {
          const Eigen::VectorXd overlap = (povm.bases[k].adjoint() * x).colwise().squaredNorm();
          mean[k] += overlap.sum();
          second[k] += overlap.squaredNorm();
        }
      });
      rho = acc.mean();
    } else {
      rho = haar_average_state(n, b, method, budget);
    }
    point.leakage = symmetric_leakage(rho, n);
    point.passed = std::abs(point.leakage) < leakage_tolerance;

    const auto weights = spec.weights(b);
    for (std::size_t k = 0; k < m; ++k) {
      BlockCheck check;
      check.spin = spec.block(k).spin;
      check.block_dim = povm.block_dims[k];
      check.closed_form = weights[k];
      const CMatrix compressed = povm.bases[k].adjoint() * rho.matrix * povm.bases[k];
      Eigen::SelfAdjointEigenSolver<CMatrix> es(compressed, Eigen::EigenvaluesOnly);
      check.eigen_sum = es.eigenvalues().sum();
      check.eigen_spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
      const double lambda = weights[k] / static_cast<double>(check.block_dim);
      check.eigen_deviation = (es.eigenvalues().array() - lambda).abs().maxCoeff();
      if (method == AverageMethod::monte_carlo) {
        const double count = static_cast<double>(budget);
        check.trace = mean[k] / count;
        const double var = std::max(0.0, second[k] / count - check.trace * check.trace);
        check.standard_error = std::sqrt(var / (count - 1.0));
        check.tolerance = std::max(mc_sigmas * check.standard_error, mc_rounding_floor);
        check.deviation = std::abs(check.trace - check.closed_form);
        check.eigen_tolerance = std::max(mc_sigmas * rho.standard_error, mc_rounding_floor);
        check.passed = check.deviation <= check.tolerance && check.eigen_deviation <= check.eigen_tolerance;
      } else {
        check.trace = check.eigen_sum;
        check.tolerance = quadrature_tolerance;
        check.deviation = std::max(std::abs(check.trace - check.closed_form), check.eigen_spread);
        check.eigen_tolerance = quadrature_tolerance;
        check.passed = check.deviation <= check.tolerance && check.eigen_deviation <= check.eigen_tolerance;
      }
      report.max_deviation = std::max(report.max_deviation, std::abs(check.trace - check.closed_form));
      report.max_standard_error = std::max({report.max_standard_error, check.standard_error, rho.standard_error});
      report.max_eigen_deviation = std::max(report.max_eigen_deviation, check.eigen_deviation);
      point.passed = point.passed && check.passed;
      point.blocks.push_back(check);
    }
    report.passed = report.passed && point.passed;
    report.points.push_back(std::move(point));
  }
  return report;
}

struct CommutatorReport {
  double norm = 0.0;         // spectral norm of [rho(b1), rho(b2)]
  double error_scale = 0.0;  // Monte Carlo noise scale; 0 for quadrature
};

/// ||[rho(b1), rho(b2)]||. Both states use the same seed, so Monte Carlo
/// runs share their random unitaries. The noise scale is
/// 2 (||rho1|| se2 + ||rho2|| se1), the first-order bound on the commutator
/// of two estimates with Frobenius errors se1, se2.
inline CommutatorReport commutator_check(int n, double b1, double b2, AverageMethod method,
                                         std::uint64_t budget, std::uint64_t seed = 0) {
  const auto r1 = haar_average_state(n, b1, method, budget, seed);
  const auto r2 = haar_average_state(n, b2, method, budget, seed);
  const CMatrix c = r1.matrix * r2.matrix - r2.matrix * r1.matrix;
  // i [A, B] is Hermitian for Hermitian A, B.
  const CMatrix h = Complex(0.0, 1.0) * c;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  CommutatorReport report;
  report.norm = es.eigenvalues().cwiseAbs().maxCoeff();
  auto top = [](const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> s(a, Eigen::EigenvaluesOnly);
    return s.eigenvalues().cwiseAbs().maxCoeff();
  };
  report.error_scale = 2.0 * (top(r1.matrix) * r2.standard_error + top(r2.matrix) * r1.standard_error);
  return report;
}

}  // namespace entest::oracle
