#pragma once

namespace surv {

/// Regularized lower incomplete gamma P(a, x); series for small x,
/// continued fraction otherwise. Accurate to ~1e-12.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-square distribution with k degrees of
/// freedom, P(X > x).
double chi_square_sf(double x, double k);

/// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double regularized_beta(double x, double a, double b);

/// Two-sided p-value of a Student-t statistic with nu degrees of freedom.
double student_t_two_sided_p(double t, double nu);

}  // namespace surv
