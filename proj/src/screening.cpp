#include "ddcor/screening.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ddcor/errors.hpp"
#include "ddcor/parallel.hpp"
#include "ddcor/rng.hpp"

namespace ddcor {

std::size_t screening_selected_size(std::size_t n) {
    if (n < 2) throw insufficient_sample_error("screening_selected_size: need n >= 2");
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) /
                                               std::log(static_cast<double>(n))));
}

namespace {

bool is_constant(const std::vector<double>& v) {
    for (double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

/// Response-side structures shared across all predictors of one draw.
struct ResponseCache {
    std::size_t n = 0;
    // DDC
    double pair_sum = 0;
    // DC
    std::vector<double> dist;     // raw n x n distances of y
    std::vector<double> row_sum;  // distance row sums
    double sum_sq = 0;            // ordered sum of squared distances
    double dvar = 0;
    // HSIC
    std::vector<double> kernel;   // raw Gaussian kernel of y
    std::vector<double> kernel_row;
    // PCor
    std::vector<double> acos_kernel;
    std::vector<double> acos_row;
    double acos_total = 0;
    double pcov_self = 0;
};

ResponseCache build_response_cache(const RealMatrix& y, Method method,
                                   const MeasureParams& params) {
    const std::size_t n = y.rows();
    ResponseCache c;
    c.n = n;
    switch (method) {
        case Method::DDC:
        case Method::Chatterjee:
            c.pair_sum = detail::pairwise_distance_sum(y);
            break;
        case Method::DC: {
            c.dist.assign(n * n, 0.0);
            c.row_sum.assign(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto yi = y.row(i);
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double d = euclidean_distance(yi, y.row(j));
                    c.dist[i * n + j] = d;
                    c.dist[j * n + i] = d;
                    c.row_sum[i] += d;
                    c.row_sum[j] += d;
                    c.sum_sq += 2.0 * d * d;
                }
            }
            c.dvar = detail::centered_product(n, c.row_sum, c.row_sum, c.sum_sq);
            break;
        }
        case Method::HSIC: {
            const double inv_two_h_sq =
                1.0 / (2.0 * params.hsic_bandwidth * params.hsic_bandwidth);
            c.kernel.assign(n * n, 1.0);
            c.kernel_row.assign(n, 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                const auto yi = y.row(i);
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double k = std::exp(-squared_distance(yi, y.row(j)) * inv_two_h_sq);
                    c.kernel[i * n + j] = k;
                    c.kernel[j * n + i] = k;
                    c.kernel_row[i] += k;
                    c.kernel_row[j] += k;
                }
            }
            break;
        }
        case Method::PCor: {
            const double sigma_sq = params.pcor_sigma_sq;
            std::vector<double> q(n);
            for (std::size_t i = 0; i < n; ++i) q[i] = sigma_sq + dot(y.row(i), y.row(i));
            c.acos_kernel.assign(n * n, 0.0);
            c.acos_row.assign(n, 0.0);
            double prod = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto yi = y.row(i);
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double cosv = std::clamp(
                        (sigma_sq + dot(yi, y.row(j))) / std::sqrt(q[i] * q[j]), -1.0, 1.0);
                    const double a = std::acos(cosv);
                    c.acos_kernel[i * n + j] = a;
                    c.acos_kernel[j * n + i] = a;
                    c.acos_row[i] += a;
                    c.acos_row[j] += a;
                    prod += 2.0 * a * a;
                }
            }
            double cross = 0;
            for (std::size_t i = 0; i < n; ++i) {
                cross += c.acos_row[i] * c.acos_row[i];
                c.acos_total += c.acos_row[i];
            }
            c.pcov_self = detail::pcov_from_sums(n, prod, cross, c.acos_total, c.acos_total);
            break;
        }
    }
    return c;
}

double predictor_coefficient(const std::vector<double>& col, const RealMatrix& y,
                             Method method, const ResponseCache& cache,
                             std::uint64_t tie_seed, const MeasureParams& params) {
    const std::size_t n = col.size();
    const double dn = static_cast<double>(n);
    // A constant predictor carries no ordering or metric information; report
    // the degenerate value instead of a tie-break-dependent one.
    if (is_constant(col)) return 0.0;

    switch (method) {
        case Method::DDC: {
            const auto order = y_order(col, tie_seed);
            const double adjacent = detail::adjacent_distance_sum(y, order);
            return detail::ddc_from_sums(n, adjacent, cache.pair_sum);
        }
        case Method::Chatterjee:
            return chatterjee_xi(col, y.column_values(0), tie_seed);
        case Method::DC: {
            if (cache.dvar <= 0) return 0.0;
            std::vector<double> row_sum_x(n, 0.0);
            double sum_xx = 0, sum_xy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double a = std::fabs(col[i] - col[j]);
                    row_sum_x[i] += a;
                    row_sum_x[j] += a;
                    sum_xx += 2.0 * a * a;
                    sum_xy += 2.0 * a * cache.dist[i * n + j];
                }
            }
            const double dvar_x = detail::centered_product(n, row_sum_x, row_sum_x, sum_xx);
            if (dvar_x <= 0) return 0.0;
            const double dcov = detail::centered_product(n, row_sum_x, cache.row_sum, sum_xy);
            return std::clamp(dcov / std::sqrt(dvar_x * cache.dvar), 0.0, 1.0);
        }
        case Method::HSIC: {
            const double inv_two_h_sq =
                1.0 / (2.0 * params.hsic_bandwidth * params.hsic_bandwidth);
            std::vector<double> krow(n, 1.0);
            double sum_kl = dn; // diagonal K_ii * L_ii = 1
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double d = col[i] - col[j];
                    const double k = std::exp(-d * d * inv_two_h_sq);
                    krow[i] += k;
                    krow[j] += k;
                    sum_kl += 2.0 * k * cache.kernel[i * n + j];
                }
            }
            double cross = 0, total_k = 0, total_l = 0;
            for (std::size_t i = 0; i < n; ++i) {
                cross += krow[i] * cache.kernel_row[i];
                total_k += krow[i];
                total_l += cache.kernel_row[i];
            }
            const double trace = sum_kl - 2.0 / dn * cross + total_k * total_l / (dn * dn);
            return std::max(0.0, trace / (dn * dn));
        }
        case Method::PCor: {
            if (cache.pcov_self <= 0) return 0.0;
            const double sigma_sq = params.pcor_sigma_sq;
            std::vector<double> q(n), rx(n, 0.0);
            for (std::size_t i = 0; i < n; ++i) q[i] = sigma_sq + col[i] * col[i];
            double prod_xx = 0, prod_xy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const double cosv = std::clamp(
                        (sigma_sq + col[i] * col[j]) / std::sqrt(q[i] * q[j]), -1.0, 1.0);
                    const double a = std::acos(cosv);
                    rx[i] += a;
                    rx[j] += a;
                    prod_xx += 2.0 * a * a;
                    prod_xy += 2.0 * a * cache.acos_kernel[i * n + j];
                }
            }
            double cross_xx = 0, cross_xy = 0, total_x = 0;
            for (std::size_t i = 0; i < n; ++i) {
                cross_xx += rx[i] * rx[i];
                cross_xy += rx[i] * cache.acos_row[i];
                total_x += rx[i];
            }
            const double pcov_xx =
                detail::pcov_from_sums(n, prod_xx, cross_xx, total_x, total_x);
            if (pcov_xx <= 0) return 0.0;
            const double pcov_xy = detail::pcov_from_sums(n, prod_xy, cross_xy, total_x,
                                                          cache.acos_total);
            return pcov_xy / std::sqrt(pcov_xx * cache.pcov_self);
        }
    }
    return 0.0;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0;
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sample_sd(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n < 2) return 0;
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

} // namespace

std::vector<RankedFeature> rank_features(const MultiResponseDraw& draw, Method method,
                                         std::uint64_t seed, const MeasureParams& params,
                                         unsigned threads) {
    const std::size_t n = draw.x.rows();
    const std::size_t p = draw.x.cols();
    if (draw.y.rows() != n) throw invalid_data_error("rank_features: x and y row counts differ");
    if (n < 4) throw insufficient_sample_error("rank_features: need n >= 4");
    if (method == Method::Chatterjee && draw.y.cols() != 1) {
        throw invalid_dimension_error("rank_features: chatterjee needs a univariate response");
    }
    require_finite(draw.x, "rank_features x");
    require_finite(draw.y, "rank_features y");

    const ResponseCache cache = build_response_cache(draw.y, method, params);
    std::vector<double> values(p, 0.0);
    parallel_for(p, threads, [&](std::size_t j) {
        values[j] = predictor_coefficient(draw.x.column_values(j), draw.y, method, cache,
                                          derive_seed(seed, j), params);
    });

    std::vector<RankedFeature> ranking(p);
    for (std::size_t j = 0; j < p; ++j) ranking[j] = RankedFeature{j, values[j]};
    std::stable_sort(ranking.begin(), ranking.end(),
                     [](const RankedFeature& a, const RankedFeature& b) {
                         return a.value > b.value;
                     });
    return ranking;
}

std::size_t minimal_model_size(const std::vector<RankedFeature>& ranking,
                               const std::set<std::size_t>& active) {
    if (active.empty()) throw invalid_input_error("minimal_model_size: active set is empty");
    std::set<std::size_t> remaining(active);
    for (std::size_t k = 0; k < ranking.size(); ++k) {
        remaining.erase(ranking[k].index);
        if (remaining.empty()) return k + 1;
    }
    throw invalid_input_error("minimal_model_size: active index missing from ranking");
}

ScreeningReport screening_report(const SimulationSpec& spec, Method method,
                                 const MeasureParams& params, unsigned threads) {
    if (spec.model != Model::MultiResponse) {
        throw invalid_parameter_error("screening_report: spec.model must be MultiResponse");
    }
    if (spec.reps < 1) throw invalid_parameter_error("screening_report: need reps >= 1");

    const auto active = multi_response_active_set();
    const std::set<std::size_t> active_set(active.begin(), active.end());
    const std::size_t selected = screening_selected_size(spec.n);

    std::vector<std::size_t> mms(spec.reps, 0);
    std::vector<std::vector<char>> hits(spec.reps, std::vector<char>(active.size(), 0));
    parallel_for(spec.reps, threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(spec.seed, r);
        const MultiResponseDraw draw = generate_example2(spec.rho, spec.n, spec.p, rep_seed);
        const auto ranking =
            rank_features(draw, method, derive_seed(rep_seed, 13), params, 1);
        std::vector<std::size_t> position(spec.p, 0);
        for (std::size_t k = 0; k < ranking.size(); ++k) position[ranking[k].index] = k + 1;
        for (std::size_t a = 0; a < active.size(); ++a) {
            hits[r][a] = position[active[a]] <= selected;
        }
        mms[r] = minimal_model_size(ranking, active_set);
    });

    ScreeningReport report;
    report.method = method;
    report.rho = spec.rho;
    report.reps = spec.reps;
    report.selected_size = selected;
    report.mms_values = mms;
    report.per_predictor_proportion.assign(active.size(), 0.0);
    for (std::size_t a = 0; a < active.size(); ++a) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < spec.reps; ++r) count += hits[r][a] != 0;
        report.per_predictor_proportion[a] =
            static_cast<double>(count) / static_cast<double>(spec.reps);
    }
    std::vector<double> mms_d(mms.begin(), mms.end());
    report.mms_median = median_of(mms_d);
    report.mms_sd = sample_sd(mms_d);
    return report;
}

Table screening_power_table(const SimulationSpec& spec, const std::vector<Method>& methods,
                            double level, const TestConfig& config,
                            const std::vector<std::size_t>& predictors) {
    if (spec.model != Model::MultiResponse) {
        throw invalid_parameter_error("screening_power_table: spec.model must be MultiResponse");
    }
    if (spec.reps < 1) throw invalid_parameter_error("screening_power_table: need reps >= 1");
    for (std::size_t j : predictors) {
        if (j >= spec.p) {
            throw invalid_input_error("screening_power_table: predictor index out of range");
        }
    }

    const std::size_t cells = methods.size() * predictors.size();
    std::vector<std::vector<char>> rejected(spec.reps, std::vector<char>(cells, 0));
    parallel_for(spec.reps, config.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(spec.seed, r);
        const MultiResponseDraw draw = generate_example2(spec.rho, spec.n, spec.p, rep_seed);
        std::optional<VarianceEstimate> var_y;
        std::optional<double> pair_sum_y;
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const Method method = methods[mi];
            for (std::size_t pi = 0; pi < predictors.size(); ++pi) {
                const std::size_t j = predictors[pi];
                const auto col = draw.x.column_values(j);
                double pvalue;
                if (method == Method::DDC) {
                    if (!var_y) var_y = ddc_variance_estimate(draw.y);
                    if (!pair_sum_y) pair_sum_y = detail::pairwise_distance_sum(draw.y);
                    const auto order = y_order(col, derive_seed(rep_seed, 101 + j));
                    const double value = detail::ddc_from_sums(
                        draw.y.rows(), detail::adjacent_distance_sum(draw.y, order),
                        *pair_sum_y);
                    pvalue = ddc_asymptotic_pvalue(value, *var_y);
                } else if (method == Method::Chatterjee) {
                    throw invalid_dimension_error(
                        "screening_power_table: chatterjee needs a univariate response");
                } else {
                    pvalue = permutation_pvalue_xy(
                        method, RealMatrix::column(col), draw.y, config.permutations,
                        derive_seed(derive_seed(rep_seed, 31 + mi), j), config.params, 1);
                }
                rejected[r][mi * predictors.size() + pi] = pvalue <= level;
            }
        }
    });

    Table t;
    t.columns = {"method", "rho", "predictor", "power"};
    t.set_meta("n", std::to_string(spec.n));
    t.set_meta("p", std::to_string(spec.p));
    t.set_meta("reps", std::to_string(spec.reps));
    t.set_meta("level", format_double(level));
    t.set_meta("permutations", std::to_string(config.permutations));
    t.set_meta("seed", std::to_string(spec.seed));
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        for (std::size_t pi = 0; pi < predictors.size(); ++pi) {
            std::size_t count = 0;
            for (std::size_t r = 0; r < spec.reps; ++r) {
                count += rejected[r][mi * predictors.size() + pi] != 0;
            }
            t.add_row({method_name(methods[mi]), spec.rho,
                       "X" + std::to_string(predictors[pi] + 1),
                       static_cast<double>(count) / static_cast<double>(spec.reps)});
        }
    }
    return t;
}

} // namespace ddcor
