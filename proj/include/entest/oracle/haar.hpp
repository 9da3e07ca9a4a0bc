#pragma once

// Brute-force construction of the effective N-copy state
//   rho^(N)(b) = int dg (D(g) M(b) D(g)^dagger)^(x N),  g in SU(2) x SU(2),
// with M(b) = |psi(b)><psi(b)|, |psi(b)> = c+ |00> + c- |11>. Either by
// Haar Monte Carlo or by an exact product quadrature over Euler angles.
// The register layout is copy-major: copy 1 is the most significant
// 4-dimensional factor, and within a copy qubit A precedes qubit B.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entest/errors.hpp"
#include "entest/oracle/linalg.hpp"
#include "entest/rng.hpp"
#include "entest/quadrature.hpp"
#include "entest/spin_spectrum.hpp"

namespace entest::oracle {

/// Largest N for two-qubit copies (dimension 4^N = 256).
inline constexpr int max_pair_copies = 4;

enum class AverageMethod { monte_carlo, euler_quadrature };

inline std::string to_string(AverageMethod method) {
  return method == AverageMethod::monte_carlo ? "monte-carlo" : "euler-quadrature";
}

/// Spinor pointing along `n` on the Bloch sphere and its antipode.
inline Eigen::Vector2cd bloch_spinor(const Eigen::Vector3d& n) {
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  return {Complex(std::cos(theta / 2)), std::polar(std::sin(theta / 2), phi)};
}

inline Eigen::Vector2cd antipodal_spinor(const Eigen::Vector3d& n) {
  const double theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double phi = std::atan2(n.y(), n.x());
  return {-std::polar(std::sin(theta / 2), -phi), Complex(std::cos(theta / 2))};
}

namespace detail {

inline Eigen::Vector3d unit_direction(Eigen::Vector3d v, const char* which) {
  const double len = v.norm();
  if (!(len > 0.0)) throw DomainError(std::string(which) + " direction must be nonzero");
  if (std::abs(len - 1.0) > 1e-8)
    std::clog << "warning: " << which << " direction has norm " << len << "; normalizing\n";
  return v / len;
}

inline void check_pair_copies(int n) {
  if (n < 1) throw DomainError("number of copies must be positive");
  if (n > max_pair_copies)
    throw DimensionLimitError("dense oracle supports N <= " + std::to_string(max_pair_copies) +
                              " two-qubit copies (matrix dimension 4^N <= 256), got N = " + std::to_string(n));
}

}  // namespace detail

/// c+ |a> |b> + c- e^{i alpha} |-a> |-b>  with c+- = sqrt((1 +- b)/2).
inline PureState schmidt_state(double b, const Eigen::Vector3d& a_hat, const Eigen::Vector3d& b_hat, double alpha) {
  entest::detail::check_parameter(b);
  const Eigen::Vector3d a = detail::unit_direction(a_hat, "a_hat");
  const Eigen::Vector3d bb = detail::unit_direction(b_hat, "b_hat");
  const double cp = std::sqrt(0.5 * (1.0 + b));
  const double cm = std::sqrt(0.5 * (1.0 - b));
  const CVector up = kron(CVector(bloch_spinor(a)), CVector(bloch_spinor(bb)));
  const CVector down = kron(CVector(antipodal_spinor(a)), CVector(antipodal_spinor(bb)));
  return PureState{cp * up + cm * std::polar(1.0, alpha) * down};
}

/// Reference state c+ |00> + c- |11>.
inline CVector reference_state(double b) {
  entest::detail::check_parameter(b);
  CVector psi = CVector::Zero(4);
  psi(0) = std::sqrt(0.5 * (1.0 + b));
  psi(3) = std::sqrt(0.5 * (1.0 - b));
  return psi;
}

/// Haar-random SU(2) element from a uniform unit quaternion.
inline Eigen::Matrix2cd random_su2(Rng& rng) {
  double q[4];
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : q) {
      c = rng.normal();
      norm += c * c;
    }
  } while (norm < 1e-300);
  norm = std::sqrt(norm);
  const Complex u(q[0] / norm, q[1] / norm);
  const Complex v(q[2] / norm, q[3] / norm);
  Eigen::Matrix2cd m;
  m << u, v, -std::conj(v), std::conj(u);
  return m;
}

/// Rz(alpha) Ry(beta) Rz(gamma).
inline Eigen::Matrix2cd euler_su2(double alpha, double beta, double gamma) {
  Eigen::Matrix2cd rz_a, ry, rz_g;
  rz_a << std::polar(1.0, -alpha / 2), 0, 0, std::polar(1.0, alpha / 2);
  ry << std::cos(beta / 2), -std::sin(beta / 2), std::sin(beta / 2), std::cos(beta / 2);
  rz_g << std::polar(1.0, -gamma / 2), 0, 0, std::polar(1.0, gamma / 2);
  return rz_a * ry * rz_g;
}

/// Weighted SU(2) grid: trapezoid in alpha and gamma, Gauss-Legendre in
/// cos(beta). With `points` >= d + 1 it integrates every polynomial of
/// degree d in the entries of U and d in those of U* exactly. The gamma
/// range is [0, 2pi): such integrands are invariant under U -> -U.
struct SU2Grid {
  std::vector<Eigen::Matrix2cd> elements;
  std::vector<double> weights;
};

inline SU2Grid su2_grid(int points) {
  if (points < 2) throw ValidationError("Euler grid needs at least 2 points per angle");
  const auto& rule = gauss_legendre(points);  // on [0, 1]; t = 2s - 1 = cos(beta)
  SU2Grid grid;
  const double step = 2.0 * std::numbers::pi / points;
  for (int ia = 0; ia < points; ++ia)
    for (std::size_t ib = 0; ib < rule.size(); ++ib)
      for (int ig = 0; ig < points; ++ig) {
        const double beta = std::acos(2.0 * rule.nodes[ib] - 1.0);
        grid.elements.push_back(euler_su2(ia * step, beta, ig * step));
        grid.weights.push_back(rule.weights[ib] / (static_cast<double>(points) * points));
      }
  return grid;
}

/// Accumulates E[Phi Phi^dagger] and the entrywise second moments needed
/// for a Monte Carlo standard error. Batches can be merged by addition.
class OuterProductAccumulator {
 public:
  explicit OuterProductAccumulator(Eigen::Index dim, bool track_error)
      : sum_(CMatrix::Zero(dim, dim)), track_error_(track_error) {
    if (track_error_) second_ = Eigen::MatrixXd::Zero(dim, dim);
  }

  /// Adds the columns of `batch` with equal weight 1.
  void add_batch(const CMatrix& batch) {
    sum_.selfadjointView<Eigen::Lower>().rankUpdate(batch);
    if (track_error_) {
      const Eigen::MatrixXd mag = batch.cwiseAbs2();
      second_.selfadjointView<Eigen::Lower>().rankUpdate(mag);
    }
    count_ += static_cast<std::uint64_t>(batch.cols());
  }

  /// Adds a single weighted state.
  void add_weighted(const CVector& phi, double weight) {
    sum_.selfadjointView<Eigen::Lower>().rankUpdate(phi, weight);
    ++count_;
  }

  void merge(const OuterProductAccumulator& other) {
    sum_ += other.sum_;
    if (track_error_) second_ += other.second_;
    count_ += other.count_;
  }

  /// Mean matrix (Monte Carlo) with its Frobenius standard error.
  DensityOperator mean() const {
    const double n = static_cast<double>(count_);
    CMatrix full = sum_.selfadjointView<Eigen::Lower>();
    DensityOperator rho{full / n, 0.0, count_};
    if (track_error_ && count_ > 1) {
      Eigen::MatrixXd second = second_.selfadjointView<Eigen::Lower>();
      const double variance_sum = (second / n - rho.matrix.cwiseAbs2()).sum();
      rho.standard_error = std::sqrt(std::max(0.0, variance_sum) / (n - 1.0));
    }
    return rho;
  }

  /// Weighted sum as is (quadrature).
  DensityOperator total() const {
    CMatrix full = sum_.selfadjointView<Eigen::Lower>();
    return DensityOperator{full, 0.0, count_};
  }

 private:
  CMatrix sum_;
  Eigen::MatrixXd second_;
  bool track_error_;
  std::uint64_t count_ = 0;
};

inline constexpr Eigen::Index mc_batch_size = 256;

/// Streams Haar samples Phi = ((U_A (x) U_B) psi(b))^(x N) in batches of
/// columns. Batch i draws from stream i of `seed`, so batches are
/// independent and the result does not depend on how they are scheduled.
inline void for_each_haar_batch(int n, double b, std::uint64_t samples, std::uint64_t seed,
                                const std::function<void(const CMatrix&)>& sink) {
  detail::check_pair_copies(n);
  const CVector psi = reference_state(b);
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  std::uint64_t done = 0;
  for (std::uint64_t batch = 0; done < samples; ++batch) {
    const auto size = static_cast<Eigen::Index>(std::min<std::uint64_t>(mc_batch_size, samples - done));
    Rng rng(seed, batch);
    CMatrix x(dim, size);
    for (Eigen::Index s = 0; s < size; ++s) {
      const Eigen::Matrix2cd ua = random_su2(rng);
      const Eigen::Matrix2cd ub = random_su2(rng);
      const CVector phi = kron(CMatrix(ua), CMatrix(ub)) * psi;
      x.col(s) = tensor_power(phi, n);
    }
    sink(x);
    done += static_cast<std::uint64_t>(size);
  }
}

/// rho^(N)(b). `budget` is the sample count (Monte Carlo) or the number of
/// grid points per Euler angle (quadrature; raised to N + 1 when smaller,
/// which is the least that is exact).
inline DensityOperator haar_average_state(int n, double b, AverageMethod method, std::uint64_t budget,
                                          std::uint64_t seed = 0) {
  detail::check_pair_copies(n);
  entest::detail::check_parameter(b);
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  if (method == AverageMethod::monte_carlo) {
    if (budget < 2) throw ValidationError("Monte Carlo average needs at least 2 samples");
    OuterProductAccumulator acc(dim, true);
    for_each_haar_batch(n, b, budget, seed, [&](const CMatrix& x) { acc.add_batch(x); });
    return acc.mean();
  }
  const int points = std::max<int>(static_cast<int>(std::min<std::uint64_t>(budget, 64)), n + 1);
  const SU2Grid grid = su2_grid(points);
  const CVector psi = reference_state(b);
  OuterProductAccumulator acc(dim, false);
  for (std::size_t i = 0; i < grid.elements.size(); ++i) {
    const CMatrix ua = grid.elements[i];
    for (std::size_t k = 0; k < grid.elements.size(); ++k) {
      const CVector phi = kron(ua, CMatrix(grid.elements[k])) * psi;
      acc.add_weighted(tensor_power(phi, n), grid.weights[i] * grid.weights[k]);
    }
  }
  return acc.total();
}

/// Same average, parameterized by the Schmidt form with random Bloch
/// directions and an explicit random phase (Monte Carlo only).
inline DensityOperator schmidt_average_state(int n, double b, std::uint64_t samples, std::uint64_t seed) {
  detail::check_pair_copies(n);
  if (samples < 2) throw ValidationError("Monte Carlo average needs at least 2 samples");
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  OuterProductAccumulator acc(dim, true);
  std::uint64_t done = 0;
  for (std::uint64_t batch = 0; done < samples; ++batch) {
    const auto size = static_cast<Eigen::Index>(std::min<std::uint64_t>(mc_batch_size, samples - done));
    Rng rng(seed, batch);
    CMatrix x(dim, size);
    for (Eigen::Index s = 0; s < size; ++s) {
      Eigen::Vector3d a, c;
      do a = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()); while (a.norm() < 1e-12);
      do c = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()); while (c.norm() < 1e-12);
      const double alpha = 2.0 * std::numbers::pi * rng.uniform();
      x.col(s) = tensor_power(schmidt_state(b, a.normalized(), c.normalized(), alpha).amplitudes, n);
    }
    acc.add_batch(x);
    done += static_cast<std::uint64_t>(size);
  }
  return acc.mean();
}

/// int dg D(g)^(x N) op D(g)^dagger(x N) over SU(2) x SU(2), exact quadrature.
inline CMatrix twirl(const CMatrix& op, int n, int points = 0) {
  detail::check_pair_copies(n);
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  if (op.rows() != dim || op.cols() != dim) throw ValidationError("twirl operand has the wrong dimension");
  const SU2Grid grid = su2_grid(std::max(points, n + 1));
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < grid.elements.size(); ++i)
    for (std::size_t k = 0; k < grid.elements.size(); ++k) {
      const CMatrix d = tensor_power(kron(CMatrix(grid.elements[i]), CMatrix(grid.elements[k])), n);
      out += grid.weights[i] * grid.weights[k] * (d * op * d.adjoint());
    }
  return out;
}

/// Permutes the N four-dimensional copies of basis index `index`.
inline Eigen::Index permute_copies(Eigen::Index index, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int c = n - 1; c >= 0; --c) {
    digits[c] = static_cast<int>(index & 3);
    index >>= 2;
  }
  Eigen::Index out = 0;
  for (int c = 0; c < n; ++c) out = (out << 2) | digits[perm[c]];
  return out;
}

/// Projector onto the permutation-symmetric subspace of (C^4)^(x N).
inline CMatrix symmetric_projector(int n) {
  detail::check_pair_copies(n);
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  CMatrix out = CMatrix::Zero(dim, dim);
  double count = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) out(permute_copies(i, perm), i) += 1.0;
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out / count;
}

/// tr((1 - P_sym) rho): weight outside the symmetric subspace.
inline double symmetric_leakage(const DensityOperator& rho, int n) {
  detail::check_pair_copies(n);
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  if (rho.dim() != dim) throw ValidationError("density operator does not match N");
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double symmetric = 0.0, count = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) symmetric += rho.matrix(permute_copies(i, perm), i).real();
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rho.matrix.trace().real() - symmetric / count;
}

/// Projector onto the block {j (x) j}_sym: symmetric subspace intersected
/// with total spin j on Alice's N qubits.
inline CMatrix pair_block_projector(int n, HalfSpin j) {
  detail::check_pair_copies(n);
  std::vector<int> alice;
  for (int c = 0; c < n; ++c) alice.push_back(2 * c);
  return symmetric_projector(n) * total_spin_projector(2 * n, alice, j);
}

}  // namespace entest::oracle
