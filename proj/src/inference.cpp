#include "ddcor/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ddcor/errors.hpp"
#include "ddcor/parallel.hpp"
#include "ddcor/rng.hpp"

namespace ddcor {

std::string p_source_name(PValueSource s) {
    return s == PValueSource::Asymptotic ? "asymptotic" : "permutation";
}

namespace {

std::vector<double> distance_matrix(const RealMatrix& x) {
    const std::size_t n = x.rows();
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean_distance(xi, x.row(j));
            m[i * n + j] = d;
            m[j * n + i] = d;
        }
    }
    return m;
}

std::vector<double> gaussian_kernel_matrix(const RealMatrix& x, double bandwidth) {
    const std::size_t n = x.rows();
    const double inv_two_h_sq = 1.0 / (2.0 * bandwidth * bandwidth);
    std::vector<double> m(n * n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::exp(-squared_distance(xi, x.row(j)) * inv_two_h_sq);
            m[i * n + j] = k;
            m[j * n + i] = k;
        }
    }
    return m;
}

std::vector<double> arccos_kernel_matrix(const RealMatrix& x, double sigma_sq) {
    const std::size_t n = x.rows();
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = sigma_sq + dot(x.row(i), x.row(i));
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c =
                std::clamp((sigma_sq + dot(xi, x.row(j))) / std::sqrt(q[i] * q[j]), -1.0, 1.0);
            const double a = std::acos(c);
            m[i * n + j] = a;
            m[j * n + i] = a;
        }
    }
    return m;
}

/// Double-centers a symmetric matrix in place and returns (1/n^2) sum A_ij^2.
double double_center(std::vector<double>& m, std::size_t n) {
    const double dn = static_cast<double>(n);
    std::vector<double> mean(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += m[i * n + j];
        mean[i] = s / dn;
    }
    double grand = 0;
    for (double v : mean) grand += v;
    grand /= dn;
    double sum_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = m[i * n + j] - mean[i] - mean[j] + grand;
            m[i * n + j] = c;
            sum_sq += c * c;
        }
    }
    return sum_sq / (dn * dn);
}

double gathered_product(const std::vector<double>& a, const std::vector<double>& b,
                        std::span<const std::size_t> perm, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* arow = a.data() + i * n;
        const double* brow = b.data() + perm[i] * n;
        for (std::size_t j = 0; j < n; ++j) s += arow[j] * brow[perm[j]];
    }
    return s;
}

RealMatrix permuted_rows(const RealMatrix& m, std::span<const std::size_t> perm) {
    RealMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto src = m.row(perm[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

} // namespace

struct PermutationEngine::Impl {
    Method method = Method::DDC;
    std::size_t n = 0;
    MeasureParams params{};

    // DDC: chain through the vector-slot rows in permuted-y order.
    RealMatrix ddc_x;
    std::vector<std::size_t> ddc_order; // tie-broken sort order of the observed y
    double ddc_pair_sum = 0;

    // Chatterjee: ranks are a function of the (permutation-invariant) y multiset.
    std::vector<std::size_t> xi_order; // sort order by x
    std::vector<double> xi_ranks;      // r[i] = #{k : y_k <= y_i}
    double xi_den = 0;

    // DC / HSIC / PCor with materialized n x n matrices.
    bool materialized = false;
    std::vector<double> gx, gy;
    double dc_denom = 0; // sqrt(dvar_x * dvar_y)
    std::vector<double> pcor_rx, pcor_ry;
    double pcor_tot_x = 0, pcor_tot_y = 0;
    double pcor_self_x = 0, pcor_self_y = 0;

    // Streamed fallback when n exceeds the materialization cap.
    RealMatrix raw_x, raw_y;

    std::vector<std::size_t> identity;

    double evaluate(std::span<const std::size_t> perm) const;
};

double PermutationEngine::Impl::evaluate(std::span<const std::size_t> perm) const {
    const double dn = static_cast<double>(n);
    switch (method) {
        case Method::DDC: {
            // Position i carries y[perm[i]], so the sorted chain visits
            // inv_perm[ddc_order[k]].
            std::vector<std::size_t> inv(n);
            for (std::size_t i = 0; i < n; ++i) inv[perm[i]] = i;
            double adjacent = 0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                adjacent += euclidean_distance(ddc_x.row(inv[ddc_order[k]]),
                                               ddc_x.row(inv[ddc_order[k + 1]]));
            }
            return detail::ddc_from_sums(n, adjacent, ddc_pair_sum);
        }
        case Method::Chatterjee: {
            double num = 0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                num += std::fabs(xi_ranks[perm[xi_order[k + 1]]] -
                                 xi_ranks[perm[xi_order[k]]]);
            }
            return 1.0 - dn * num / xi_den;
        }
        case Method::DC: {
            if (!materialized) {
                return distance_correlation(raw_x, permuted_rows(raw_y, perm));
            }
            if (dc_denom <= 0) return 0.0;
            const double dcov = gathered_product(gx, gy, perm, n) / (dn * dn);
            return std::clamp(dcov / dc_denom, 0.0, 1.0);
        }
        case Method::HSIC: {
            if (!materialized) {
                return hsic(raw_x, permuted_rows(raw_y, perm), params.hsic_bandwidth);
            }
            const double trace = gathered_product(gx, gy, perm, n);
            return std::max(0.0, trace / (dn * dn));
        }
        case Method::PCor: {
            if (!materialized) {
                return projection_correlation(raw_x, permuted_rows(raw_y, perm),
                                              params.pcor_sigma_sq);
            }
            if (pcor_self_x <= 0 || pcor_self_y <= 0) return 0.0;
            const double sum_prod = gathered_product(gx, gy, perm, n);
            double cross = 0;
            for (std::size_t i = 0; i < n; ++i) cross += pcor_rx[i] * pcor_ry[perm[i]];
            const double pcov =
                detail::pcov_from_sums(n, sum_prod, cross, pcor_tot_x, pcor_tot_y);
            return pcov / std::sqrt(pcor_self_x * pcor_self_y);
        }
    }
    return 0.0;
}

PermutationEngine::PermutationEngine(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
PermutationEngine::PermutationEngine(PermutationEngine&&) noexcept = default;
PermutationEngine& PermutationEngine::operator=(PermutationEngine&&) noexcept = default;
PermutationEngine::~PermutationEngine() = default;

std::size_t PermutationEngine::n() const { return impl_->n; }

PermutationEngine PermutationEngine::for_sample(Method method, const PairedSample& sample,
                                                std::uint64_t tie_seed,
                                                const MeasureParams& params,
                                                std::size_t materialize_cap) {
    const std::size_t n = sample.n();
    if (method == Method::DDC) {
        if (n < 2) throw insufficient_sample_error("permutation engine: need n >= 2");
        auto impl = std::make_unique<Impl>();
        impl->method = method;
        impl->n = n;
        impl->params = params;
        impl->ddc_x = sample.x;
        impl->ddc_order = y_order(sample.y, tie_seed);
        impl->ddc_pair_sum = detail::pairwise_distance_sum(sample.x);
        impl->identity.resize(n);
        std::iota(impl->identity.begin(), impl->identity.end(), std::size_t{0});
        return PermutationEngine(std::move(impl));
    }
    if (method == Method::Chatterjee) {
        if (sample.p() != 1) {
            throw invalid_dimension_error("chatterjee: vector argument must be univariate");
        }
        if (n < 2) throw insufficient_sample_error("permutation engine: need n >= 2");
        auto impl = std::make_unique<Impl>();
        impl->method = method;
        impl->n = n;
        impl->params = params;
        impl->xi_den = detail::chatterjee_denominator(sample.y);
        if (impl->xi_den <= 0) {
            throw degenerate_response_error("chatterjee: y is constant");
        }
        impl->xi_order = y_order(sample.x.column_values(0), tie_seed);
        impl->xi_ranks = detail::y_leq_ranks(sample.y);
        impl->identity.resize(n);
        std::iota(impl->identity.begin(), impl->identity.end(), std::size_t{0});
        return PermutationEngine(std::move(impl));
    }
    return for_matrices(method, sample.x, RealMatrix::column(sample.y), params,
                        materialize_cap);
}

PermutationEngine PermutationEngine::for_matrices(Method method, RealMatrix x, RealMatrix y,
                                                  const MeasureParams& params,
                                                  std::size_t materialize_cap) {
    if (method == Method::DDC || method == Method::Chatterjee) {
        throw invalid_parameter_error(
            "permutation engine: use for_sample for ddc and chatterjee");
    }
    const std::size_t n = x.rows();
    if (y.rows() != n) throw invalid_data_error("permutation engine: row counts differ");
    const std::size_t min_n = method == Method::DC ? 2 : 4;
    if (n < min_n) throw insufficient_sample_error("permutation engine: sample too small");
    require_finite(x, "permutation engine x");
    require_finite(y, "permutation engine y");
    if (method == Method::HSIC && params.hsic_bandwidth <= 0) {
        throw invalid_parameter_error("hsic: bandwidth must be positive");
    }
    if (method == Method::PCor && params.pcor_sigma_sq <= 0) {
        throw invalid_parameter_error("projection correlation: sigma_sq must be positive");
    }

    auto impl = std::make_unique<Impl>();
    impl->method = method;
    impl->n = n;
    impl->params = params;
    impl->identity.resize(n);
    std::iota(impl->identity.begin(), impl->identity.end(), std::size_t{0});

    if (n > materialize_cap) {
        impl->raw_x = std::move(x);
        impl->raw_y = std::move(y);
        return PermutationEngine(std::move(impl));
    }
    impl->materialized = true;
    switch (method) {
        case Method::DC: {
            impl->gx = distance_matrix(x);
            impl->gy = distance_matrix(y);
            const double dvar_x = double_center(impl->gx, n);
            const double dvar_y = double_center(impl->gy, n);
            impl->dc_denom = (dvar_x <= 0 || dvar_y <= 0) ? 0.0 : std::sqrt(dvar_x * dvar_y);
            break;
        }
        case Method::HSIC: {
            impl->gx = gaussian_kernel_matrix(x, params.hsic_bandwidth);
            impl->gy = gaussian_kernel_matrix(y, params.hsic_bandwidth);
            double_center(impl->gx, n);
            break;
        }
        case Method::PCor: {
            impl->gx = arccos_kernel_matrix(x, params.pcor_sigma_sq);
            impl->gy = arccos_kernel_matrix(y, params.pcor_sigma_sq);
            impl->pcor_rx.assign(n, 0.0);
            impl->pcor_ry.assign(n, 0.0);
            double prod_xx = 0, prod_yy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    impl->pcor_rx[i] += impl->gx[i * n + j];
                    impl->pcor_ry[i] += impl->gy[i * n + j];
                    prod_xx += impl->gx[i * n + j] * impl->gx[i * n + j];
                    prod_yy += impl->gy[i * n + j] * impl->gy[i * n + j];
                }
            }
            double cross_xx = 0, cross_yy = 0;
            for (std::size_t i = 0; i < n; ++i) {
                cross_xx += impl->pcor_rx[i] * impl->pcor_rx[i];
                cross_yy += impl->pcor_ry[i] * impl->pcor_ry[i];
                impl->pcor_tot_x += impl->pcor_rx[i];
                impl->pcor_tot_y += impl->pcor_ry[i];
            }
            impl->pcor_self_x =
                detail::pcov_from_sums(n, prod_xx, cross_xx, impl->pcor_tot_x, impl->pcor_tot_x);
            impl->pcor_self_y =
                detail::pcov_from_sums(n, prod_yy, cross_yy, impl->pcor_tot_y, impl->pcor_tot_y);
            break;
        }
        default:
            break;
    }
    return PermutationEngine(std::move(impl));
}

double PermutationEngine::statistic(std::span<const std::size_t> perm) const {
    return impl_->evaluate(perm);
}

double PermutationEngine::observed() const { return impl_->evaluate(impl_->identity); }

namespace {

double permutation_pvalue_engine(const PermutationEngine& engine, std::size_t B,
                                 std::uint64_t seed, unsigned threads) {
    if (B < 1) throw invalid_parameter_error("permutation_pvalue: need B >= 1");
    const double observed = engine.observed();
    const std::size_t n = engine.n();
    std::vector<char> exceeds(B, 0);
    parallel_for(B, threads, [&](std::size_t b) {
        auto rng = make_rng(derive_seed(seed, b + 1));
        const auto perm = random_permutation(n, rng);
        exceeds[b] = engine.statistic(perm) >= observed;
    });
    std::size_t count = 0;
    for (char c : exceeds) count += c != 0;
    return static_cast<double>(1 + count) / static_cast<double>(B + 1);
}

} // namespace

double permutation_pvalue(Method method, const PairedSample& sample, std::size_t B,
                          std::uint64_t seed, const MeasureParams& params,
                          unsigned threads) {
    const auto engine =
        PermutationEngine::for_sample(method, sample, derive_seed(seed, 0), params);
    return permutation_pvalue_engine(engine, B, seed, threads);
}

double permutation_pvalue_xy(Method method, const RealMatrix& x, const RealMatrix& y,
                             std::size_t B, std::uint64_t seed,
                             const MeasureParams& params, unsigned threads) {
    const auto engine = PermutationEngine::for_matrices(method, x, y, params);
    return permutation_pvalue_engine(engine, B, seed, threads);
}

TestResult independence_test(Method method, const PairedSample& sample,
                             const TestConfig& config) {
    TestResult result;
    result.level = config.level;
    result.seed = config.seed;
    result.estimate.method = method;
    result.estimate.n = sample.n();
    result.estimate.p = sample.p();

    const std::uint64_t tie_seed = derive_seed(config.seed, 0);
    switch (method) {
        case Method::DDC: {
            result.estimate.value = ddc(sample, tie_seed);
            const auto variance = ddc_variance_estimate(sample.x);
            result.p_value = ddc_asymptotic_pvalue(result.estimate.value, variance);
            result.p_source = PValueSource::Asymptotic;
            result.permutations = 0;
            return result;
        }
        case Method::Chatterjee: {
            if (sample.p() != 1) {
                throw invalid_dimension_error("chatterjee: vector argument must be univariate");
            }
            result.estimate.value = chatterjee_xi(sample.x.column_values(0), sample.y, tie_seed);
            result.p_value = chatterjee_asymptotic_pvalue(result.estimate.value, sample.n());
            result.p_source = PValueSource::Asymptotic;
            result.permutations = 0;
            return result;
        }
        case Method::DC:
            result.estimate.value = distance_correlation(sample.x, RealMatrix::column(sample.y));
            break;
        case Method::HSIC:
            result.estimate.value =
                hsic(sample.x, RealMatrix::column(sample.y), config.params.hsic_bandwidth);
            result.estimate.params["bandwidth"] = config.params.hsic_bandwidth;
            result.estimate.params["v_statistic"] = 1.0;
            break;
        case Method::PCor:
            result.estimate.value = projection_correlation(sample.x, RealMatrix::column(sample.y),
                                                           config.params.pcor_sigma_sq);
            result.estimate.params["sigma_sq"] = config.params.pcor_sigma_sq;
            break;
    }
    result.p_value = permutation_pvalue(method, sample, config.permutations, config.seed,
                                        config.params, config.threads);
    result.p_source = PValueSource::Permutation;
    result.permutations = config.permutations;
    return result;
}

PairedSample oriented_sample(const PairedSample& draw, Method method,
                             DdcOrientation orientation) {
    const bool swap =
        (method == Method::DDC && orientation == DdcOrientation::ResponseGivenCovariate) ||
        (method == Method::Chatterjee && orientation == DdcOrientation::CovariateGivenResponse);
    if (!swap) return draw;
    if (draw.p() != 1) {
        throw invalid_dimension_error("oriented_sample: orientation swap needs a univariate draw");
    }
    return PairedSample(RealMatrix::column(draw.y), draw.x.column_values(0));
}

double power_estimate(const SimulationSpec& spec, Method method, double level,
                      std::size_t reps, const TestConfig& config,
                      DdcOrientation orientation) {
    if (reps < 1) throw invalid_parameter_error("power_estimate: need reps >= 1");
    if (spec.model == Model::MultiResponse) {
        throw invalid_parameter_error(
            "power_estimate: use screening_power_table for the multi-response model");
    }
    std::vector<char> rejected(reps, 0);
    parallel_for(reps, config.threads, [&](std::size_t r) {
        const std::uint64_t rep_seed = derive_seed(spec.seed, r);
        const PairedSample draw = generate_example1(spec.model, spec.lambda, spec.n, rep_seed);
        TestConfig tc = config;
        tc.level = level;
        tc.seed = derive_seed(rep_seed, 7);
        tc.threads = 1;
        rejected[r] =
            independence_test(method, oriented_sample(draw, method, orientation), tc).reject();
    });
    std::size_t count = 0;
    for (char c : rejected) count += c != 0;
    return static_cast<double>(count) / static_cast<double>(reps);
}

} // namespace ddcor
