#ifndef FRACHK_SPECIAL_HPP
#define FRACHK_SPECIAL_HPP

namespace frachk {

/// Gamma function for strictly positive arguments, Lanczos approximation
/// (g = 7, 9 coefficients, Godfrey's set). Relative accuracy is better than
/// 1e-13 on (0, 10] and stays near machine precision well beyond that.
double gamma_fn(double x);

/// log(Gamma(x)) for x > 0; same Lanczos kernel, safe for large arguments
/// where gamma_fn would overflow.
double log_gamma(double x);

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) by direct series
/// summation, truncated when the term magnitude drops below 1e-16 of the
/// partial sum. Terms are evaluated in log space, so large intermediate
/// Gamma values cannot overflow. The tail is dominated by a geometric
/// series once alpha*k + beta is large, which justifies the stopping rule.
///
/// Arguments with |z| above `budget` are rejected: the alternating series
/// loses too many digits to cancellation there.
double mittag_leffler(double alpha, double beta, double z, double budget = 50.0);

} // namespace frachk

#endif
