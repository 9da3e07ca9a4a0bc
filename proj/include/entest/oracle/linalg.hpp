#pragma once

// Dense complex linear algebra for the brute-force oracle: states,
// density operators, spin operators on qubit registers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entest/errors.hpp"
#include "entest/half_spin.hpp"

namespace entest::oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct PureState {
  CVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

struct DensityOperator {
  CMatrix matrix;
  /// Monte Carlo standard error of the matrix in Frobenius norm; 0 when
  /// the operator comes from an exact quadrature.
  double standard_error = 0.0;
  /// Samples (Monte Carlo) or grid points (quadrature) behind the estimate.
  std::uint64_t samples = 0;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Hermitian to 1e-12, unit trace to 1e-10, eigenvalues >= -1e-10.
inline void validate(const DensityOperator& rho) {
  if (rho.matrix.rows() != rho.matrix.cols()) throw ValidationError("density operator must be square");
  if ((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("density operator is not Hermitian");
  const Complex tr = rho.matrix.trace();
  if (std::abs(tr - Complex(1.0)) > 1e-10)
    throw ValidationError("density operator trace is " + std::to_string(tr.real()));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw ValidationError("density operator has a negative eigenvalue");
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// v^(x n); the first factor is the most significant index.
inline CVector tensor_power(const CVector& v, int n) {
  CVector out = CVector::Ones(1);
  for (int c = 0; c < n; ++c) out = kron(out, v);
  return out;
}

inline CMatrix tensor_power(const CMatrix& a, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int c = 0; c < n; ++c) out = kron(out, a);
  return out;
}

inline Eigen::Matrix2cd pauli(int axis) {
  Eigen::Matrix2cd s;
  const Complex i(0.0, 1.0);
  switch (axis) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

/// Operator `op` acting on qubit `position` of a `qubits`-qubit register
/// (position 0 is the most significant).
inline CMatrix embed_qubit_operator(const Eigen::Matrix2cd& op, int position, int qubits) {
  const Eigen::Index left = Eigen::Index{1} << position;
  const Eigen::Index right = Eigen::Index{1} << (qubits - position - 1);
  return kron(kron(CMatrix::Identity(left, left), CMatrix(op)), CMatrix::Identity(right, right));
}

/// Projector onto total spin j of the spin-1/2 qubits at `positions`,
/// built from the Casimir J^2 by Lagrange interpolation over its spectrum.
inline CMatrix total_spin_projector(int qubits, const std::vector<int>& positions, HalfSpin j) {
  const int count = static_cast<int>(positions.size());
  if (!j.compatible_with(count))
    throw DomainError("spin " + j.to_string() + " does not occur for " + std::to_string(count) + " qubits");
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  CMatrix casimir = CMatrix::Zero(dim, dim);
  for (int axis = 0; axis < 3; ++axis) {
    CMatrix component = CMatrix::Zero(dim, dim);
    for (int p : positions) component += 0.5 * embed_qubit_operator(pauli(axis), p, qubits);
    casimir += component * component;
  }
  auto eigenvalue = [](int twice_j) { return 0.25 * twice_j * (twice_j + 2); };
  CMatrix projector = CMatrix::Identity(dim, dim);
  const double target = eigenvalue(j.twice());
  for (int tj = count % 2; tj <= count; tj += 2) {
    if (tj == j.twice()) continue;
    const double other = eigenvalue(tj);
    projector = projector * (casimir - other * CMatrix::Identity(dim, dim)) / (target - other);
  }
  return projector;
}

/// Orthonormal basis of the range of a projector (eigenvalue ~ 1 columns).
inline CMatrix range_basis(const CMatrix& projector) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (projector + projector.adjoint()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  CMatrix basis(projector.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
  return basis;
}

/// Sum_i e_i (x) e_i over the columns of `basis`.
inline CVector basis_pair_sum(const CMatrix& basis) {
  CVector out = CVector::Zero(basis.rows() * basis.rows());
  for (Eigen::Index i = 0; i < basis.cols(); ++i) out += kron(CVector(basis.col(i)), CVector(basis.col(i)));
  return out;
}

/// Reduced state of the first qubit of a two-qubit pure state.
inline Eigen::Matrix2cd reduced_first_qubit(const CVector& psi) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int bq = 0; bq < 2; ++bq) rho(a, a2) += psi(2 * a + bq) * std::conj(psi(2 * a2 + bq));
  return rho;
}

/// Reduced state of the second qubit of a two-qubit pure state.
inline Eigen::Matrix2cd reduced_second_qubit(const CVector& psi) {
  Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
  for (int bq = 0; bq < 2; ++bq)
    for (int b2 = 0; b2 < 2; ++b2)
      for (int a = 0; a < 2; ++a) rho(bq, b2) += psi(2 * a + bq) * std::conj(psi(2 * a + b2));
  return rho;
}

inline Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& rho) {
  return {(rho * pauli(0)).trace().real(), (rho * pauli(1)).trace().real(), (rho * pauli(2)).trace().real()};
}

/// Largest singular value.
inline double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace entest::oracle
