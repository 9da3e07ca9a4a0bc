#pragma once

#include <cmath>
#include <set>
#include <span>
#include <utility>

#include "entest/errors.hpp"

namespace entest {

struct AsymptoteFit {
  double slope = 0.0;      // bits per log2 N
  double intercept = 0.0;  // bits
  std::size_t points = 0;
};

struct GainPoint {
  int copies = 0;
  double gain = 0.0;  // bits
};

/// Least-squares line Kbar = slope * log2 N + intercept.
inline AsymptoteFit fit_asymptote(std::span<const GainPoint> table) {
  std::set<int> distinct;
  for (const auto& p : table) {
    if (p.copies < 1) throw ValidationError("fit points need N >= 1");
    distinct.insert(p.copies);
  }
  if (distinct.size() < 2) throw ValidationError("asymptote fit needs at least two distinct N values");

  const double count = static_cast<double>(table.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : table) {
    mx += std::log2(p.copies);
    my += p.gain;
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : table) {
    const double dx = std::log2(p.copies) - mx;
    sxx += dx * dx;
    sxy += dx * (p.gain - my);
  }
  AsymptoteFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = table.size();
  return fit;
}

}  // namespace entest
