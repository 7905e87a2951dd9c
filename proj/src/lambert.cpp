#include "mmb/lambert.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mmb {

namespace {

// 1/e split into a double head and tail so that x + 1/e keeps full precision
// when x is close to -1/e.
constexpr double kInvEHi = 0.36787944117144233;
constexpr double kInvELo = -1.2428753672788363e-17;
constexpr double kBranchTolerance = 1e-15;

// Coefficients of W_{-1} as a power series in p = -sqrt(2(1 + e x)).
constexpr double kBranchSeries[] = {
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680863.0 / 43545600.0,
    -1963.0 / 204120.0,
    226287557.0 / 37623398400.0,
};

double branch_series(double p) {
  double acc = 0.0;
  for (int k = static_cast<int>(std::size(kBranchSeries)) - 1; k >= 0; --k) {
    acc = acc * p + kBranchSeries[k];
  }
  return acc;
}

}  // namespace

double branch_distance(double x) {
  return std::numbers::e * ((x + kInvEHi) + kInvELo);
}

LambertResult lambert_w_m1_detailed(double x) {
  if (!(x < 0.0)) {
    throw std::domain_error("lambert_w_m1: argument must be negative, got " + std::to_string(x));
  }
  const double dist = branch_distance(x);
  if (dist < -kBranchTolerance * std::numbers::e) {
    throw std::domain_error("lambert_w_m1: argument below -1/e");
  }

  LambertResult out;
  out.near_branch_point = dist <= kBranchTolerance * std::numbers::e;
  if (dist <= 0.0) {
    out.value = -1.0;
    return out;
  }

  const double p = -std::sqrt(2.0 * dist);
  // The truncated series is accurate to ~1e-22 here; Halley steps on the
  // flat residual would only add rounding noise.
  if (p > -1e-2) {
    out.value = branch_series(p);
    return out;
  }

  double w;
  if (p > -1.0) {
    w = branch_series(p);
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 1; it <= 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    out.iterations = it;
    if (std::abs(step) < 1e-15 * std::abs(w)) break;
  }
  // Rounding can push w across -1 right next to the branch point.
  out.value = std::min(w, -1.0);
  return out;
}

}  // namespace mmb
