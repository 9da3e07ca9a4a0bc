#pragma once

// Exact integer / rational arithmetic used for multiplicities and moments.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "entest/errors.hpp"

namespace entest {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C(n, k); zero outside 0 <= k <= n.
inline BigInt binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return BigInt{0};
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (long i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;  // exact: result is C(n-k+i, i) here
  }
  return result;
}

/// Rows 0..n of Pascal's triangle.
inline std::vector<std::vector<BigInt>> pascal_rows(int n) {
  std::vector<std::vector<BigInt>> rows(static_cast<std::size_t>(n) + 1);
  rows[0] = {BigInt{1}};
  for (int r = 1; r <= n; ++r) {
    auto& row = rows[r];
    row.resize(static_cast<std::size_t>(r) + 1);
    row.front() = row.back() = 1;
    for (int k = 1; k < r; ++k) row[k] = rows[r - 1][k - 1] + rows[r - 1][k];
  }
  return rows;
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

/// Parses "3", "-2", "1/3" or a terminating decimal such as "0.25".
inline Rational parse_rational(const std::string& text) {
  try {
    if (auto dot = text.find('.'); dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      std::string sign;
      if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        if (digits[0] == '-') sign = "-";
        digits.erase(0, 1);
      }
      if (digits.empty()) throw ValidationError("empty number");
      // A leading zero would make the integer parser read octal.
      digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
      digits = sign + digits;
      BigInt denom = boost::multiprecision::pow(BigInt{10}, static_cast<unsigned>(text.size() - dot - 1));
      return Rational(BigInt(digits), denom);
    }
    return Rational(text);
  } catch (const std::exception&) {
    throw ValidationError("not a rational number: '" + text + "'");
  }
}

/// Polynomial in b with exact rational coefficients, ascending powers.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients)
      : coefficients_(std::move(coefficients)) {
    trim();
  }

  const std::vector<Rational>& coefficients() const { return coefficients_; }
  std::size_t degree() const { return coefficients_.empty() ? 0 : coefficients_.size() - 1; }
  bool is_zero() const { return coefficients_.empty(); }

  /// Horner evaluation in double precision. Only well-conditioned for
  /// low-degree polynomials with moderate coefficients.
  double operator()(double b) const {
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it)
      acc = acc * b + to_double(*it);
    return acc;
  }

  Rational evaluate(const Rational& b) const {
    Rational acc = 0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * b + *it;
    return acc;
  }

  /// Integral over [0, 1] times b^power.
  Rational moment(std::size_t power = 0) const {
    Rational acc = 0;
    for (std::size_t i = 0; i < coefficients_.size(); ++i)
      acc += coefficients_[i] / Rational(static_cast<long>(i + power + 1));
    return acc;
  }

  /// Antiderivative vanishing at b = 0.
  RationalPolynomial antiderivative() const {
    std::vector<Rational> out(coefficients_.size() + 1);
    for (std::size_t i = 0; i < coefficients_.size(); ++i)
      out[i + 1] = coefficients_[i] / Rational(static_cast<long>(i + 1));
    return RationalPolynomial(std::move(out));
  }

  /// Sum of absolute coefficients; an upper bound of |p| on [0, 1].
  Rational absolute_sum() const {
    Rational acc = 0;
    for (const auto& c : coefficients_) acc += abs(c);
    return acc;
  }

  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coefficients_.size() + b.coefficients_.size() - 1);
    for (std::size_t i = 0; i < a.coefficients_.size(); ++i)
      for (std::size_t k = 0; k < b.coefficients_.size(); ++k)
        out[i + k] += a.coefficients_[i] * b.coefficients_[k];
    return RationalPolynomial(std::move(out));
  }

  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) {
    for (auto& c : a.coefficients_) c *= s;
    a.trim();
    return a;
  }

  friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

 private:
  void trim() {
    while (!coefficients_.empty() && coefficients_.back() == 0) coefficients_.pop_back();
  }

  std::vector<Rational> coefficients_;
};

}  // namespace entest
