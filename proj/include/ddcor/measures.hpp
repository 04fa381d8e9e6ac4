#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ddcor/matrix.hpp"
#include "ddcor/sample.hpp"

namespace ddcor {

enum class Method { DDC, Chatterjee, DC, HSIC, PCor };

std::string method_name(Method m);
Method method_from_name(const std::string& name); // case-insensitive

/// Gaussian kernel bandwidth used by HSIC unless overridden.
inline const double kDefaultHsicBandwidth = 0.70710678118654752; // sqrt(1/2)
/// Offset sigma^2 in the arccos kernel of the projection correlation.
inline constexpr double kDefaultPcorSigmaSq = 1.0;

/// Optional parameters of the comparison coefficients.
struct MeasureParams {
    double hsic_bandwidth = kDefaultHsicBandwidth;
    double pcor_sigma_sq = kDefaultPcorSigmaSq;
};

/// A named measure's value plus the metadata needed to reproduce it.
struct CoefficientEstimate {
    Method method;
    double value;
    std::size_t n;
    std::size_t p;
    std::map<std::string, double> params;
};

/// Mean Euclidean distance between distinct rows:
///   C(n,2)^-1 * sum_{i>j} ||x_i - x_j||.
/// For p = 1 this uses the sorted order-statistic form in O(n log n);
/// otherwise the pairwise sum is streamed in O(n^2 p) with O(1) extra memory.
double gini_mean_difference(const RealMatrix& x);

/// Differential distance correlation of the sample's vector part given its
/// scalar part:
///   1 - n * sum_i ||x_(i) - x_(i+1)|| / sum_{i,j} ||x_i - x_j||
/// with rows ordered by y (ties broken uniformly at random by tie_seed).
/// Returns exactly 0 when all rows of x are identical. Always <= 1; may be
/// slightly negative in finite samples under independence.
double ddc(const PairedSample& sample, std::uint64_t tie_seed);
double ddc(const SortedPairedSample& sorted);

/// Chatterjee's rank correlation of y on x: sorts by x (random tie breaks),
/// then 1 - n * sum|r_{i+1} - r_i| / (2 * sum l_i (n - l_i)) on the y ranks.
/// Throws degenerate_response_error when all y are equal.
double chatterjee_xi(const std::vector<double>& x, const std::vector<double>& y,
                     std::uint64_t tie_seed);

/// Squared sample distance correlation: dCov_n^2 / sqrt(dVar_n^2(x) * dVar_n^2(y))
/// from double-centered distance matrices, 0 when either distance variance
/// vanishes. Value is clamped to [0, 1].
double distance_correlation(const RealMatrix& x, const RealMatrix& y);

/// Gaussian-kernel HSIC, biased V-statistic form trace(KHLH) / n^2 with
/// k(a, b) = exp(-||a-b||^2 / (2 * bandwidth^2)) on both arguments.
double hsic(const RealMatrix& x, const RealMatrix& y,
            double bandwidth = kDefaultHsicBandwidth);

/// Projection correlation PCov(x,y) / sqrt(PCov(x,x) * PCov(y,y)) built on the
/// arccos kernel A(z1, z2) = arccos{(s + <z1,z2>) / sqrt((s + <z1,z1>)(s + <z2,z2>))},
/// s = sigma_sq. The three U-statistic moments are assembled from row sums of
/// the kernel matrices in O(n^2); arccos arguments are clamped to [-1, 1].
/// Returns 0 when either self-PCov is <= 0.
double projection_correlation(const RealMatrix& x, const RealMatrix& y,
                              double sigma_sq = kDefaultPcorSigmaSq);

namespace detail {

/// sum_{i<j} ||x_i - x_j||; sorted O(n log n) form when p = 1.
double pairwise_distance_sum(const RealMatrix& x);

/// sum_k ||x_{order[k]} - x_{order[k+1]}||.
double adjacent_distance_sum(const RealMatrix& x, const std::vector<std::size_t>& order);

/// DDC from precomputed pieces; applies the all-rows-equal convention.
double ddc_from_sums(std::size_t n, double adjacent_sum, double pair_sum);

/// Chatterjee numerator ranks: r[i] = #{k : y[k] <= y[i]} and the
/// (permutation-invariant) denominator 2 * sum l_i (n - l_i).
std::vector<double> y_leq_ranks(const std::vector<double>& y);
double chatterjee_denominator(const std::vector<double>& y);

/// One-pass accumulators over unordered row pairs of (x, y): row sums of the
/// two distance matrices, their total products and squares. Shared by the
/// distance correlation and distance variance estimators.
struct CenteredDistanceStats {
    std::vector<double> row_sum_x; // s^a_i = sum_j ||x_i - x_j||
    std::vector<double> row_sum_y;
    double sum_xx = 0; // sum_{ij} a_ij^2  (ordered pairs)
    double sum_yy = 0;
    double sum_xy = 0; // sum_{ij} a_ij b_ij
};
CenteredDistanceStats centered_distance_stats(const RealMatrix& x, const RealMatrix& y);

/// (1/n^2) sum_{ij} A_ij B_ij for double-centered A, B given the accumulators.
double centered_product(std::size_t n, const std::vector<double>& row_sum_a,
                        const std::vector<double>& row_sum_b, double sum_ab);

/// U-statistic projection covariance from arccos-kernel accumulators:
/// sum_prod = sum_{ij} Au_ij Av_ij, cross = sum_i Ru_i Rv_i, row-sum totals.
double pcov_from_sums(std::size_t n, double sum_prod, double cross, double total_u,
                      double total_v);

} // namespace detail

} // namespace ddcor
