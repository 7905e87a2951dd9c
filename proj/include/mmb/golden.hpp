#pragma once

#include <cmath>
#include <utility>

namespace mmb {

struct ScalarOptimum {
  double x{0.0};
  double value{0.0};
  int evaluations{0};
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than tol.
template <class F>
ScalarOptimum golden_section_max(F&& f, double lo, double hi, double tol, int max_iter = 500) {
  constexpr double kInvPhi = 0.6180339887498948482;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  int evals = 2;
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
    ++evals;
  }
  return f1 >= f2 ? ScalarOptimum{x1, f1, evals} : ScalarOptimum{x2, f2, evals};
}

}  // namespace mmb
