#pragma once

#include <span>

namespace sirpinn {

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-sided, Student-t with n-2 degrees of freedom
};

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, long df);

/// Sample Pearson correlation with the exact small-n t-test p-value
/// (n = 16 here, so a normal approximation would visibly distort p).
/// Throws InputError for n < 3 or length mismatch, StatsError for zero
/// variance.
Correlation pearson(std::span<const double> x, std::span<const double> y);

}  // namespace sirpinn
