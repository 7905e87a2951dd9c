#pragma once

namespace mmb {

/// Result of evaluating the lower real branch W_{-1}.
struct LambertResult {
  double value{-1.0};
  int iterations{0};
  /// Set when x lies within 1e-15 of the branch point -1/e.
  bool near_branch_point{false};
};

/// Lower real branch W_{-1}(x) on (-1/e, 0): the solution w <= -1 of w*e^w = x.
///
/// Arguments within 1e-15 of -1/e are accepted and flagged; anything at or
/// beyond 0, or further below -1/e, throws std::domain_error.
LambertResult lambert_w_m1_detailed(double x);

inline double lambert_w_m1(double x) { return lambert_w_m1_detailed(x).value; }

/// 1 + e*x evaluated without cancellation near the branch point.
double branch_distance(double x);

}  // namespace mmb
