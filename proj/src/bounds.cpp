#include "mmb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mmb/lambert.hpp"

namespace mmb {

namespace {

const double kSqrtE = std::sqrt(std::numbers::e);

void require_epsilon(double epsilon, const char* who) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError(std::string(who) + ": epsilon must lie in (0,1)");
  }
}

void require_n(long long n, const char* who) {
  if (n < 1) throw DomainError(std::string(who) + ": n must be positive");
}

BoundReport new_bound_skeleton(BoundMethod method, long long n, double epsilon,
                               TailDirection direction, const char* who) {
  require_n(n, who);
  require_epsilon(epsilon, who);
  BoundReport r;
  r.method = method;
  r.n = n;
  r.epsilon = epsilon;
  r.direction = direction;
  r.gamma = gamma_eps(epsilon);
  const GammaDomain dom = gamma_domain(n, epsilon);
  if (!(r.gamma > dom.lower)) {
    std::ostringstream os;
    os.precision(10);
    os << who << ": gamma_eps = " << r.gamma << " violates gamma > max(1, e*eps) = " << dom.lower;
    throw DomainError(os.str());
  }
  r.a = std::log(r.gamma / epsilon);
  if (!(r.a < static_cast<double>(n))) {
    std::ostringstream os;
    os.precision(10);
    os << who << ": gamma_eps = " << r.gamma << " violates gamma < e^n * eps (threshold a = "
       << r.a << " must be below n = " << n << ")";
    throw DomainError(os.str());
  }
  r.tau = r.a / static_cast<double>(n);
  return r;
}

}  // namespace

std::string_view to_string(TailDirection d) {
  switch (d) {
    case TailDirection::Upper: return "upper";
    case TailDirection::Lower: return "lower";
    case TailDirection::TwoSided: return "two-sided";
  }
  return "?";
}

std::string_view to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::LinearNew: return "linear_new";
    case BoundMethod::QuadraticNew: return "quadratic_new";
    case BoundMethod::Theorem1Generic: return "generic_threshold";
    case BoundMethod::Bernstein: return "bernstein";
    case BoundMethod::McDiarmid: return "mcdiarmid";
    case BoundMethod::BaselinePrior: return "baseline_prior";
  }
  return "?";
}

TailDirection parse_direction(std::string_view s) {
  if (s == "upper") return TailDirection::Upper;
  if (s == "lower") return TailDirection::Lower;
  if (s == "two-sided" || s == "two_sided" || s == "both-sides") return TailDirection::TwoSided;
  throw std::invalid_argument("unknown tail direction '" + std::string(s) + "'");
}

double gamma_eps(double epsilon) {
  require_epsilon(epsilon, "gamma_eps");
  return -2.0 * lambert_w_m1(-epsilon / (2.0 * kSqrtE));
}

double c_eps(double epsilon) {
  const double g = gamma_eps(epsilon);
  return (g - 1.0) / (g * g);
}

bool GammaDomain::contains(double gamma) const {
  return gamma > lower && std::log(gamma) < log_upper;
}

GammaDomain gamma_domain(long long n, double epsilon) {
  require_n(n, "gamma_domain");
  require_epsilon(epsilon, "gamma_domain");
  return {std::max(1.0, std::numbers::e * epsilon), static_cast<double>(n) + std::log(epsilon)};
}

void apply_direction(BoundReport& report, double one_sided_exponent) {
  double exponent = one_sided_exponent;
  if (report.direction == TailDirection::TwoSided) {
    exponent = std::max(0.0, one_sided_exponent - std::numbers::ln2);
  }
  report.exponent = exponent;
  report.bound = std::exp(-exponent);
}

BoundReport linear_bound(long long n, double epsilon, TailDirection direction) {
  BoundReport r = new_bound_skeleton(BoundMethod::LinearNew, n, epsilon, direction, "linear_bound");
  r.c_coeff = (r.gamma - 1.0) / (r.gamma * r.gamma);
  apply_direction(r, 0.75 * r.c_coeff * static_cast<double>(n) * epsilon);
  return r;
}

BoundReport quadratic_bound(long long n, double epsilon, TailDirection direction) {
  BoundReport r =
      new_bound_skeleton(BoundMethod::QuadraticNew, n, epsilon, direction, "quadratic_bound");
  r.c_coeff = (r.gamma - 1.0) / (r.gamma * r.gamma);
  apply_direction(r, 4.0 * r.c_coeff * static_cast<double>(n) * epsilon * epsilon);
  return r;
}

BoundReport theorem1_generic(long long n, double epsilon, double gamma,
                             const std::function<double(double)>& f_inverse, double scale,
                             GenericRoute route, TailDirection direction) {
  require_n(n, "theorem1_generic");
  require_epsilon(epsilon, "theorem1_generic");
  if (!(gamma > 1.0)) throw DomainError("theorem1_generic: gamma must exceed 1");
  if (!(scale > 0.0)) throw DomainError("theorem1_generic: scale must be positive");
  const double a = f_inverse(epsilon / gamma);
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("theorem1_generic: f^{-1}(eps/gamma) must be positive and finite");
  }
  BoundReport r;
  r.method = BoundMethod::Theorem1Generic;
  r.n = n;
  r.epsilon = epsilon;
  r.gamma = gamma;
  r.a = a;
  r.tau = a / static_cast<double>(n);
  r.direction = direction;
  const double shrink = (gamma - 1.0) / gamma;
  const double base = static_cast<double>(n) * epsilon * epsilon * shrink * shrink / (scale * a);
  if (route == GenericRoute::Bernstein) {
    r.c_coeff = 3.0 / 8.0;
    r.note = "route constant 3/8 (Bernstein route, instantiated for the missing mass)";
  } else {
    r.c_coeff = 2.0;
    r.note = "route constant 2 (McDiarmid route, instantiated for the missing mass)";
  }
  apply_direction(r, r.c_coeff * base);
  return r;
}

double compensation_gap(double epsilon) {
  require_epsilon(epsilon, "compensation_gap");
  return kSqrtE * std::exp(lambert_w_m1(-epsilon / (2.0 * kSqrtE)));
}

double bernstein_exponent(double epsilon, double variance, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("bernstein: alpha must be positive");
  if (!(variance >= 0.0)) throw DomainError("bernstein: variance must be nonnegative");
  if (!(epsilon > 0.0)) throw DomainError("bernstein: epsilon must be positive");
  return epsilon * epsilon / (2.0 * (variance + alpha * epsilon / 3.0));
}

double bernstein_bound(double epsilon, double variance, double alpha) {
  return std::exp(-bernstein_exponent(epsilon, variance, alpha));
}

double bernstein_mean_exponent(long long n, double epsilon, double sigma2, double alpha) {
  require_n(n, "bernstein_mean_exponent");
  return static_cast<double>(n) * bernstein_exponent(epsilon, sigma2, alpha);
}

double mcdiarmid_exponent(double epsilon, double c_sum) {
  if (!(c_sum > 0.0)) throw DomainError("mcdiarmid: C must be positive");
  if (!(epsilon > 0.0)) throw DomainError("mcdiarmid: epsilon must be positive");
  return 2.0 * epsilon * epsilon / c_sum;
}

double mcdiarmid_bound(double epsilon, double c_sum) {
  return std::exp(-mcdiarmid_exponent(epsilon, c_sum));
}

double baseline_prior_constant(TailDirection direction) {
  switch (direction) {
    case TailDirection::Lower: return 1.92;
    case TailDirection::Upper: return 1.0;
    case TailDirection::TwoSided: return 1.0;
  }
  return 1.0;
}

BoundReport baseline_prior_bound(long long n, double epsilon, TailDirection direction) {
  require_n(n, "baseline_prior_bound");
  require_epsilon(epsilon, "baseline_prior_bound");
  BoundReport r;
  r.method = BoundMethod::BaselinePrior;
  r.n = n;
  r.epsilon = epsilon;
  r.direction = direction;
  // The two-sided form takes the weaker (upper) constant before doubling.
  r.c_coeff = baseline_prior_constant(direction);
  r.note = "prior-work comparison constant";
  apply_direction(r, r.c_coeff * static_cast<double>(n) * epsilon * epsilon);
  return r;
}

}  // namespace mmb
