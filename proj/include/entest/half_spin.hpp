#pragma once

#include <compare>
#include <string>

#include "entest/errors.hpp"

namespace entest {

/// SU(2) total-spin label j, stored as the integer 2j.
class HalfSpin {
 public:
  constexpr explicit HalfSpin(int twice_j) : twice_j_(twice_j) {
    if (twice_j < 0) throw DomainError("spin label 2j must be nonnegative");
  }

  constexpr int twice() const { return twice_j_; }
  constexpr double value() const { return 0.5 * twice_j_; }
  /// 2j + 1
  constexpr int multiplet_size() const { return twice_j_ + 1; }

  /// Spin j appears in the coupling of n spin-1/2 systems.
  constexpr bool compatible_with(int n) const {
    return n >= 1 && twice_j_ <= n && (n - twice_j_) % 2 == 0;
  }

  std::string to_string() const {
    if (twice_j_ % 2 == 0) return std::to_string(twice_j_ / 2);
    return std::to_string(twice_j_) + "/2";
  }

  constexpr auto operator<=>(const HalfSpin&) const = default;

 private:
  int twice_j_;
};

/// Highest spin N/2 reachable with n spin-1/2 systems.
constexpr HalfSpin top_spin(int n) { return HalfSpin(n); }

}  // namespace entest
