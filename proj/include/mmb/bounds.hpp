#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mmb {

enum class TailDirection { Upper, Lower, TwoSided };

enum class BoundMethod { LinearNew, QuadraticNew, Theorem1Generic, Bernstein, McDiarmid, BaselinePrior };

std::string_view to_string(TailDirection d);
std::string_view to_string(BoundMethod m);
TailDirection parse_direction(std::string_view s);

/// Raised when a parameter falls outside the admissible region of a bound.
/// The message names the violated constraint.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// One evaluated tail bound. `bound` is always exp(-exponent); the exponent is
/// kept so that callers can work in log space once exp underflows.
struct BoundReport {
  BoundMethod method{BoundMethod::LinearNew};
  long long n{0};
  double epsilon{0.0};
  double gamma{0.0};
  double a{0.0};
  double tau{0.0};
  double c_coeff{0.0};
  double exponent{0.0};
  double bound{1.0};
  TailDirection direction{TailDirection::Upper};
  std::string note;
};

/// gamma_eps = -2 W_{-1}(-eps / (2 sqrt(e))), the maximizer of
/// (gamma-1)^2 / (gamma^2 log(gamma/eps)).
double gamma_eps(double epsilon);

/// c(eps) = (gamma_eps - 1) / gamma_eps^2.
double c_eps(double epsilon);

/// Admissible gamma range (max(1, e*eps), e^n * eps), upper end in log form.
struct GammaDomain {
  double lower{1.0};
  double log_upper{0.0};
  bool contains(double gamma) const;
};
GammaDomain gamma_domain(long long n, double epsilon);

/// exp(-(3/4) c(eps) n eps). Same exponent for both directions; TwoSided
/// applies the union bound.
BoundReport linear_bound(long long n, double epsilon, TailDirection direction);

/// exp(-4 c(eps) n eps^2).
BoundReport quadratic_bound(long long n, double epsilon, TailDirection direction);

enum class GenericRoute { Bernstein, McDiarmid };

/// General threshold bound for a caller-supplied f^{-1}.
///
/// The leading constants are not fixed in general; this uses the values that
/// come out of the missing-mass derivation (3/8 for the Bernstein route, 2 for
/// the McDiarmid route). `scale` multiplies the denominator: the weighted
/// variance cap for the Bernstein route, the bounded-differences cap
/// (sum of w_i) for the McDiarmid route. The missing mass uses scale = eps and
/// scale = 1 respectively.
BoundReport theorem1_generic(long long n, double epsilon, double gamma,
                             const std::function<double(double)>& f_inverse, double scale,
                             GenericRoute route, TailDirection direction = TailDirection::Upper);

/// sqrt(e) exp(W_{-1}(-eps / (2 sqrt e))) = eps / gamma_eps.
double compensation_gap(double epsilon);

/// eps^2 / (2 (V + alpha eps / 3)).
double bernstein_exponent(double epsilon, double variance, double alpha);
double bernstein_bound(double epsilon, double variance, double alpha);
/// Mean form: deviation eps of an average of n terms with per-term variance
/// proxy sigma2: n eps^2 / (2 (sigma2 + alpha eps / 3)).
double bernstein_mean_exponent(long long n, double epsilon, double sigma2, double alpha);

/// 2 eps^2 / C with C = sum of squared bounded differences.
double mcdiarmid_exponent(double epsilon, double c_sum);
double mcdiarmid_bound(double epsilon, double c_sum);

/// Prior-work comparison form exp(-k n eps^2), k = 1.92 (lower) or 1.0 (upper).
BoundReport baseline_prior_bound(long long n, double epsilon, TailDirection direction);

/// Constant of the prior-work comparison form for a single direction.
double baseline_prior_constant(TailDirection direction);

/// Fills exponent/bound for a one-sided exponent, doubling for TwoSided.
void apply_direction(BoundReport& report, double one_sided_exponent);

}  // namespace mmb
