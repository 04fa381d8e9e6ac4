#pragma once

#include <cstddef>

#include "ddcor/matrix.hpp"

namespace ddcor {

/// Plug-in pieces of the asymptotic null variance of sqrt(n) * DDC_n:
/// sigma_hat_sq = dvar_sq / delta_hat^2.
struct VarianceEstimate {
    double dvar_sq;      // sample squared distance variance V_n^2
    double delta_hat;    // Gini mean difference
    double sigma_hat_sq; // dvar_sq / delta_hat^2
    std::size_t n;
};

/// Sample squared distance variance V_n^2 = (1/n^2) sum_{kl} A_kl^2 with A the
/// double-centered distance matrix of x. O(n log n) when p = 1, streamed
/// O(n^2 p) otherwise; always >= 0 up to rounding.
double distance_variance_sq(const RealMatrix& x);

/// Assembles the variance estimate; O(n log n) total when p = 1.
/// Throws degenerate_sample_error when all rows of x are equal.
VarianceEstimate ddc_variance_estimate(const RealMatrix& x);

/// One-sided upper-tail p-value 1 - Phi(sqrt(n) * ddc_value / sigma_hat).
double ddc_asymptotic_pvalue(double ddc_value, const VarianceEstimate& variance);

/// One-sided p-value 1 - Phi(sqrt(n) * xi / sqrt(2/5)) for Chatterjee's
/// coefficient under independence with continuous response.
double chatterjee_asymptotic_pvalue(double xi_value, std::size_t n);

enum class ReferenceDistribution { StandardNormal, StandardUniform };

/// Closed-form asymptotic null variance of sqrt(n) * DDC_n when the vector
/// argument is univariate: pi/3 - sqrt(3) + 1 for N(0,1), 2/5 for U(0,1).
double reference_sigma_sq(ReferenceDistribution dist);

/// Standard normal CDF via erfc; absolute error <= 1e-12 over the real line.
double normal_cdf(double z);
/// 1 - Phi(z) without cancellation for large z.
double normal_upper_tail(double z);

} // namespace ddcor
