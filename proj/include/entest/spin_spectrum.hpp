#pragma once

// Irrep decomposition of the N-copy effective state.
//
// Spin-j blocks run from j = N/2 down to (N mod 2)/2. Block j carries
//   d_j = C(N, N/2 - j) - C(N, N/2 - j - 1)   equivalent spin-j paths,
//   n_j = (2j + 1)^2                           dimensions,
//   w_j(b) = d_j * sum_{m=-j..j} x^(N/2+m) y^(N/2-m),  x = (1+b)/2, y = (1-b)/2,
// where w_j(b) = n_j * lambda_j(b) is the probability of landing in block j.
// The weight is evaluated from the nonnegative (x, y) monomials; expanding
// it in powers of b produces huge alternating coefficients.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entest/errors.hpp"
#include "entest/exact.hpp"
#include "entest/half_spin.hpp"

namespace entest {

/// Largest copy number accepted; d_j stays below the double range.
inline constexpr int max_copies = 1000;

namespace detail {

inline void check_copies(int n) {
  if (n < 1 || n > max_copies)
    throw DomainError("number of copies must lie in [1, " + std::to_string(max_copies) +
                      "], got " + std::to_string(n));
}

inline void check_spin(int n, HalfSpin j) {
  check_copies(n);
  if (!j.compatible_with(n))
    throw DomainError("spin " + j.to_string() + " does not occur for N = " + std::to_string(n));
}

inline void check_parameter(double b) {
  if (!(b >= 0.0 && b <= 1.0))
    throw DomainError("entanglement parameter must lie in [0, 1], got " + std::to_string(b));
}

/// out[t] = x^t y^(n-t) for t = 0..n.
inline void binary_monomials(int n, double b, std::span<double> out) {
  const double x = 0.5 * (1.0 + b);
  const double y = 0.5 * (1.0 - b);
  for (int t = 0; t <= n; ++t) out[t] = std::pow(x, t) * std::pow(y, n - t);
}

/// Integer coefficients (ascending in b) of (1 + b)^t (1 - b)^(n - t).
inline std::vector<BigInt> signed_binomial_product(const std::vector<std::vector<BigInt>>& pascal,
                                                   int n, int t) {
  const auto& plus = pascal[t];
  const auto& minus = pascal[n - t];
  std::vector<BigInt> out(static_cast<std::size_t>(n) + 1);
  for (int a = 0; a <= t; ++a)
    for (int c = 0; c <= n - t; ++c) {
      if (c % 2 == 0)
        out[a + c] += plus[a] * minus[c];
      else
        out[a + c] -= plus[a] * minus[c];
    }
  return out;
}

}  // namespace detail

/// Number of equivalent spin-j irreps in the coupling of n spin-1/2 systems.
inline BigInt path_multiplicity(int n, HalfSpin j) {
  detail::check_spin(n, j);
  const long k = (n - j.twice()) / 2;
  return binomial(n, k) - binomial(n, k - 1);
}

/// Dimension (2j+1)^2 of the block {j x j}_sym.
constexpr std::uint64_t block_dimension(HalfSpin j) {
  const auto s = static_cast<std::uint64_t>(j.multiplet_size());
  return s * s;
}

/// Dimension of the symmetric subspace of (C^4)^(x n).
inline std::uint64_t symmetric_dimension(int n) {
  if (n < 1) throw DomainError("number of copies must be positive");
  const auto m = static_cast<std::uint64_t>(n);
  return (m + 3) * (m + 2) * (m + 1) / 6;
}

/// n_j * lambda_j(b): probability that N copies project onto block j.
inline double block_weight(int n, HalfSpin j, double b) {
  detail::check_spin(n, j);
  detail::check_parameter(b);
  const double x = 0.5 * (1.0 + b);
  const double y = 0.5 * (1.0 - b);
  double sum = 0.0;
  for (int t = (n - j.twice()) / 2; t <= (n + j.twice()) / 2; ++t)
    sum += std::pow(x, t) * std::pow(y, n - t);
  return to_double(path_multiplicity(n, j)) * sum;
}

struct SpectralBlock {
  HalfSpin spin;
  BigInt copies;             // d_j
  std::uint64_t block_dim;   // n_j
  int n;                     // number of copies the block belongs to

  double weight(double b) const { return block_weight(n, spin, b); }
  double eigenvalue(double b) const { return weight(b) / static_cast<double>(block_dim); }
};

/// Ordered spectrum of the N-copy effective state, j descending.
/// Block index k is zero-based: k = 0 is the fully symmetric spin N/2.
class Spectrum {
 public:
  explicit Spectrum(int n) : n_(n) {
    detail::check_copies(n);
    blocks_.reserve(static_cast<std::size_t>(n / 2 + 1));
    for (int tj = n; tj >= 0; tj -= 2) {
      const HalfSpin j(tj);
      blocks_.push_back(SpectralBlock{j, path_multiplicity(n, j), block_dimension(j), n});
      copies_value_.push_back(to_double(blocks_.back().copies));
    }
  }

  int copies() const { return n_; }
  std::size_t outcome_count() const { return blocks_.size(); }
  const std::vector<SpectralBlock>& blocks() const { return blocks_; }

  const SpectralBlock& block(std::size_t k) const {
    if (k >= blocks_.size())
      throw std::out_of_range("block index " + std::to_string(k) + " out of range for N = " +
                              std::to_string(n_));
    return blocks_[k];
  }

  /// All block weights at b in O(N): out[k] = w_k(b).
  void outcome_probabilities(double b, std::span<double> out) const {
    detail::check_parameter(b);
    std::vector<double> mono(static_cast<std::size_t>(n_) + 1);
    detail::binary_monomials(n_, b, mono);
    const int last = static_cast<int>(blocks_.size()) - 1;
    // Innermost block first; each outer block adds the two extreme m terms.
    double shell = 0.0;
    for (int t = last; t <= n_ - last; ++t) shell += mono[t];
    out[last] = copies_value_[last] * shell;
    for (int k = last - 1; k >= 0; --k) {
      shell += mono[k] + mono[n_ - k];
      out[k] = copies_value_[k] * shell;
    }
  }

  std::vector<double> weights(double b) const {
    std::vector<double> out(blocks_.size());
    outcome_probabilities(b, out);
    return out;
  }

  /// w_k(b) expanded in powers of b with exact rational coefficients.
  /// Exact, but do not evaluate it in floating point for large N.
  RationalPolynomial exact_outcome_polynomial(std::size_t k) const {
    const auto& blk = block(k);
    const auto pascal = pascal_rows(n_);
    std::vector<BigInt> acc(static_cast<std::size_t>(n_) + 1);
    for (int t = static_cast<int>(k); t <= n_ - static_cast<int>(k); ++t) {
      const auto poly = detail::signed_binomial_product(pascal, n_, t);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += poly[i];
    }
    const Rational scale(blk.copies, BigInt{1} << n_);
    std::vector<Rational> coeffs(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) coeffs[i] = Rational(acc[i]) * scale;
    return RationalPolynomial(std::move(coeffs));
  }

  /// p(k) = integral of prior(b) w_k(b) over [0, 1], exactly.
  std::vector<Rational> exact_marginals(const RationalPolynomial& prior) const {
    std::vector<Rational> moments(static_cast<std::size_t>(n_) + 1);
    for (std::size_t i = 0; i < moments.size(); ++i) moments[i] = prior.moment(i);
    const auto pascal = pascal_rows(n_);
    // per_monomial[t] = integral of prior * (1+b)^t (1-b)^(n-t)
    std::vector<Rational> per_monomial(static_cast<std::size_t>(n_) + 1);
    for (int t = 0; t <= n_; ++t) {
      const auto poly = detail::signed_binomial_product(pascal, n_, t);
      Rational s = 0;
      for (std::size_t i = 0; i < poly.size(); ++i)
        if (poly[i] != 0) s += Rational(poly[i]) * moments[i];
      per_monomial[t] = s;
    }
    const Rational scale(BigInt{1}, BigInt{1} << n_);
    std::vector<Rational> out(blocks_.size());
    const int last = static_cast<int>(blocks_.size()) - 1;
    Rational shell = 0;
    for (int t = last; t <= n_ - last; ++t) shell += per_monomial[t];
    out[last] = Rational(blocks_[last].copies) * shell * scale;
    for (int k = last - 1; k >= 0; --k) {
      shell += per_monomial[k] + per_monomial[n_ - k];
      out[k] = Rational(blocks_[k].copies) * shell * scale;
    }
    return out;
  }

 private:
  int n_;
  std::vector<SpectralBlock> blocks_;
  std::vector<double> copies_value_;
};

inline Spectrum spectrum(int n) { return Spectrum(n); }

}  // namespace entest
