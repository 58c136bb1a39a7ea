#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tsxfer {

double mean(std::span<const double> v);

/// Median; an even count averages the two central values. Requires non-empty input.
double median(std::vector<double> v);

/// Sample variance (n-1). Requires at least 2 values.
double sample_variance(std::span<const double> v);

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Two-sided p-value of the slope under a t distribution with n-2 dof.
    double p_value = 1.0;
    double t_stat = 0.0;
    std::size_t n = 0;
    /// Residuals vanished while the slope did not; p_value is reported as 0.
    bool exact_fit = false;
};

/// Least-squares line y = intercept + slope x. A flat response gives
/// slope 0 and p = 1. Throws InsufficientPoints (n < 3 or length mismatch)
/// and DegenerateX (zero variance in x).
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

/// CDF of Student's t with `dof` degrees of freedom, via the regularized
/// incomplete beta function.
double student_t_cdf(double t, double dof);

}  // namespace tsxfer
