#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

inline constexpr long double kE = 2.718281828459045235360287471352662498L;

// W_{-1}(x) by bisection in t = -1 - w on log1p(t) - t = log(-e x), in long double.
inline double lambert_w_m1(double x) {
  const long double d = 1.0L + kE * static_cast<long double>(x);  // 1 + e x
  // log(-e x): via 1 + e x near the branch point, directly elsewhere.
  const long double rhs = d < 0.5L ? std::log1p(-d) : 1.0L + std::log(-static_cast<long double>(x));
  long double lo = 0.0L, hi = 80.0L;
  for (int i = 0; i < 300; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (std::log1p(mid) - mid > rhs) lo = mid; else hi = mid;
  }
  return static_cast<double>(-1.0L - 0.5L * (lo + hi));
}

// Maximizer of phi(g, eps) = eps (g-1)^2 / (g^2 log(g/eps)) by a dense scan and
// ternary refinement on log g.
inline double gamma_argmax(double eps) {
  auto f = [eps](long double lg) {
    const long double g = std::exp(lg);
    return (g - 1) * (g - 1) / (g * g * std::log(g / eps));
  };
  const long double lo0 = std::log(std::max(1.0L, kE * eps)) + 1e-9L, hi0 = std::log(1e6L);
  long double best = lo0;
  long double bv = -1;
  for (int i = 0; i <= 4000; ++i) {
    const long double lg = lo0 + (hi0 - lo0) * i / 4000.0L;
    if (f(lg) > bv) { bv = f(lg); best = lg; }
  }
  const long double step = (hi0 - lo0) / 4000.0L;
  long double a = std::max(lo0, best - step), b = std::min(hi0, best + step);
  for (int i = 0; i < 200; ++i) {
    const long double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) < f(m2)) a = m1; else b = m2;
  }
  return static_cast<double>(std::exp(0.5L * (a + b)));
}

// Exact law of the missing mass by enumerating all N^n ordered samples.
inline std::map<double, double> missing_mass_by_sequences(const std::vector<double>& w, int n) {
  std::map<double, double> law;
  const std::size_t N = w.size();
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    double p = 1.0;
    std::vector<bool> seen(N, false);
    for (int j = 0; j < n; ++j) { p *= w[idx[j]]; seen[idx[j]] = true; }
    double y = 0.0;
    for (std::size_t i = 0; i < N; ++i) if (!seen[i]) y += w[i];
    bool merged = false;
    for (auto& [v, q] : law) {
      if (std::abs(v - y) <= 1e-13) { q += p; merged = true; break; }
    }
    if (!merged) law[y] += p;
    int k = 0;
    while (k < n && ++idx[k] == N) idx[k++] = 0;
    if (k == n) break;
  }
  return law;
}

inline double log_binom_pmf(int n, int k, double p) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace oracle
