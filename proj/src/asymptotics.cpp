#include "ddcor/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "ddcor/errors.hpp"
#include "ddcor/measures.hpp"

namespace ddcor {

namespace {

/// Univariate V_n^2 in O(n log n): row sums of the distance matrix follow
/// from prefix sums of the order statistics,
///   s_k = (2k - n) x_(k) - 2 P_k + T,
/// and sum_{kl} d_kl^2 = 2 n sum x^2 - 2 T^2.
double distance_variance_sq_sorted(const std::vector<double>& values) {
    const std::size_t n = values.size();
    const double dn = static_cast<double>(n);
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());

    double total = 0, sum_sq = 0;
    for (double v : sorted) {
        total += v;
        sum_sq += v * v;
    }

    double prefix = 0, row_total = 0, row_sq = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double v = sorted[k - 1];
        prefix += v;
        const double s = (2.0 * static_cast<double>(k) - dn) * v - 2.0 * prefix + total;
        row_total += s;
        row_sq += s * s;
    }

    const double pair_sq = 2.0 * dn * sum_sq - 2.0 * total * total;
    const double v2 = pair_sq / (dn * dn) - 2.0 * row_sq / (dn * dn * dn) +
                      (row_total / (dn * dn)) * (row_total / (dn * dn));
    return std::max(0.0, v2);
}

double distance_variance_sq_streamed(const RealMatrix& x) {
    const std::size_t n = x.rows();
    const double dn = static_cast<double>(n);
    std::vector<double> row_sum(n, 0.0);
    double sum_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean_distance(xi, x.row(j));
            row_sum[i] += d;
            row_sum[j] += d;
            sum_sq += 2.0 * d * d;
        }
    }
    double cross = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cross += row_sum[i] * row_sum[i];
        total += row_sum[i];
    }
    const double v2 =
        sum_sq / (dn * dn) - 2.0 * cross / (dn * dn * dn) + (total / (dn * dn)) * (total / (dn * dn));
    return std::max(0.0, v2);
}

} // namespace

double distance_variance_sq(const RealMatrix& x) {
    const std::size_t n = x.rows();
    if (n < 2) throw insufficient_sample_error("distance_variance_sq: need n >= 2");
    require_finite(x, "distance_variance_sq");
    if (x.cols() == 1) return distance_variance_sq_sorted(x.data());
    return distance_variance_sq_streamed(x);
}

VarianceEstimate ddc_variance_estimate(const RealMatrix& x) {
    const std::size_t n = x.rows();
    if (n < 2) throw insufficient_sample_error("ddc_variance_estimate: need n >= 2");
    const double delta = gini_mean_difference(x);
    if (delta <= 0) {
        throw degenerate_sample_error(
            "ddc_variance_estimate: all rows equal, sigma^2 undefined");
    }
    const double v2 = distance_variance_sq(x);
    return VarianceEstimate{v2, delta, v2 / (delta * delta), n};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double ddc_asymptotic_pvalue(double ddc_value, const VarianceEstimate& variance) {
    if (variance.n < 2) {
        throw insufficient_sample_error("ddc_asymptotic_pvalue: need n >= 2");
    }
    if (variance.sigma_hat_sq <= 0) {
        throw degenerate_variance_error("ddc_asymptotic_pvalue: estimated variance is zero");
    }
    const double z =
        std::sqrt(static_cast<double>(variance.n)) * ddc_value / std::sqrt(variance.sigma_hat_sq);
    return normal_upper_tail(z);
}

double chatterjee_asymptotic_pvalue(double xi_value, std::size_t n) {
    if (n < 2) throw insufficient_sample_error("chatterjee_asymptotic_pvalue: need n >= 2");
    const double z = std::sqrt(static_cast<double>(n)) * xi_value / std::sqrt(0.4);
    return normal_upper_tail(z);
}

double reference_sigma_sq(ReferenceDistribution dist) {
    switch (dist) {
        case ReferenceDistribution::StandardNormal:
            return std::numbers::pi / 3.0 - std::numbers::sqrt3 + 1.0;
        case ReferenceDistribution::StandardUniform:
            return 0.4;
    }
    return 0.4;
}

} // namespace ddcor
