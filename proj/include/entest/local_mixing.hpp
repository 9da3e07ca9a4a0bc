#pragma once

// Estimating the degree of mixing b of a single-qubit state
// rho_A(b) = diag((1+b)/2, (1-b)/2), rotated by an unknown SU(2) element,
// from N copies. Twirling rho_A(b)^(x N) leaves lambda_j^L(b) times the
// identity on every spin-j irrep of (C^2)^(x N); all d_j equivalent copies
// share the eigenvalue.
//
// The sector weights here come from a recursion over the coupling chain:
// adding one qubit maps the diagonal of the coupled-basis state through
// squared Clebsch-Gordan coefficients. This is independent of the
// binomial closed form used for the two-qubit spectrum.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "entest/bayes.hpp"
#include "entest/errors.hpp"
#include "entest/exact.hpp"
#include "entest/half_spin.hpp"
#include "entest/oracle/haar.hpp"
#include "entest/oracle/linalg.hpp"
#include "entest/rng.hpp"
#include "entest/spin_spectrum.hpp"

namespace entest {

struct LocalSpectralBlock {
  HalfSpin spin;
  BigInt copies;  // d_j
  int copy_dim;   // 2j + 1
};

/// Local spectrum as an outcome model: outcome k is spin N/2 - k.
class LocalSpectrum {
 public:
  explicit LocalSpectrum(int n) : n_(n) {
    detail::check_copies(n);
    for (int tj = n; tj >= 0; tj -= 2) {
      const HalfSpin j(tj);
      blocks_.push_back(LocalSpectralBlock{j, path_multiplicity(n, j), j.multiplet_size()});
    }
  }

  int copies() const { return n_; }
  std::size_t outcome_count() const { return blocks_.size(); }
  const std::vector<LocalSpectralBlock>& blocks() const { return blocks_; }

  /// out[k] = sum over all d_j copies of tr(P rho_A(b)^(x N)) for spin
  /// j = N/2 - k, i.e. n_j^L lambda_j^L(b).
  void outcome_probabilities(double b, std::span<double> out) const {
    detail::check_parameter(b);
    const double x = 0.5 * (1.0 + b);
    const double y = 0.5 * (1.0 - b);
    // table[J][M]: summed diagonal weight of coupled states with 2j = J,
    // 2m = M, stored at offset (M + J) / 2.
    std::vector<std::vector<double>> table(static_cast<std::size_t>(n_) + 1);
    table[1] = {y, x};
    for (int step = 2; step <= n_; ++step) {
      std::vector<std::vector<double>> next(static_cast<std::size_t>(n_) + 1);
      for (int jt = step % 2; jt <= step; jt += 2) next[jt].assign(static_cast<std::size_t>(jt) + 1, 0.0);
      for (int jp = (step - 1) % 2; jp <= step - 1; jp += 2) {
        const auto& prev = table[jp];
        const double denom = 2.0 * (jp + 1);
        for (int mp = -jp; mp <= jp; mp += 2) {
          const double w = prev[(mp + jp) / 2];
          if (w == 0.0) continue;
          for (int sigma : {1, -1}) {
            const int mt = mp + sigma;
            const double spin_weight = sigma == 1 ? x : y;
            // Couple up: j = j' + 1/2.
            {
              const int jt = jp + 1;
              const double cg2 = (jp + sigma * mt + 1) / denom;
              next[jt][(mt + jt) / 2] += cg2 * w * spin_weight;
            }
            // Couple down: j = j' - 1/2.
            if (jp >= 1 && std::abs(mt) <= jp - 1) {
              const int jt = jp - 1;
              const double cg2 = (jp - sigma * mt + 1) / denom;
              next[jt][(mt + jt) / 2] += cg2 * w * spin_weight;
            }
          }
        }
      }
      table = std::move(next);
    }
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const auto& row = table[blocks_[k].spin.twice()];
      double s = 0.0;
      for (double v : row) s += v;
      out[k] = s;
    }
  }

  std::vector<double> weights(double b) const {
    std::vector<double> out(blocks_.size());
    outcome_probabilities(b, out);
    return out;
  }

 private:
  int n_;
  std::vector<LocalSpectralBlock> blocks_;
};

inline LocalSpectrum local_spectrum(int n) { return LocalSpectrum(n); }

/// Optimal expected gain (bits) about the mixing parameter from N copies.
inline GainReport local_gain(int n, const PriorDensity& prior, const QuadratureOptions& options = {}) {
  return average_gain(LocalSpectrum(n), prior, options);
}

namespace oracle {

/// Largest N for single-qubit copies (dimension 2^N = 256).
inline constexpr int max_local_copies = 8;

/// SU(2) twirl of rho_A(b)^(x N), by quadrature (budget = grid points per
/// Euler angle, at least N + 1) or Monte Carlo (budget = samples).
inline DensityOperator local_haar_average(int n, double b, std::uint64_t budget,
                                          AverageMethod method = AverageMethod::euler_quadrature,
                                          std::uint64_t seed = 0) {
  if (n < 1) throw DomainError("number of copies must be positive");
  if (n > max_local_copies)
    throw DimensionLimitError("local oracle supports N <= " + std::to_string(max_local_copies) +
                              " (matrix dimension 2^N <= 256), got N = " + std::to_string(n));
  entest::detail::check_parameter(b);
  CMatrix single = CMatrix::Zero(2, 2);
  single(0, 0) = 0.5 * (1.0 + b);
  single(1, 1) = 0.5 * (1.0 - b);
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix sum = CMatrix::Zero(dim, dim);
  if (method == AverageMethod::monte_carlo) {
    if (budget < 1) throw ValidationError("Monte Carlo average needs samples");
    for (std::uint64_t s = 0; s < budget; ++s) {
      Rng rng(seed, s);
      const CMatrix u = random_su2(rng);
      sum += tensor_power(CMatrix(u * single * u.adjoint()), n);
    }
    return DensityOperator{sum / static_cast<double>(budget), 0.0, budget};
  }
  const SU2Grid grid = su2_grid(std::max<int>(static_cast<int>(std::min<std::uint64_t>(budget, 64)), n + 1));
  for (std::size_t i = 0; i < grid.elements.size(); ++i) {
    const CMatrix u = grid.elements[i];
    sum += grid.weights[i] * tensor_power(CMatrix(u * single * u.adjoint()), n);
  }
  return DensityOperator{sum, 0.0, grid.elements.size()};
}

/// Projector onto total spin j of N qubits.
inline CMatrix local_spin_projector(int n, HalfSpin j) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
  return total_spin_projector(n, all, j);
}

}  // namespace oracle
}  // namespace entest
