#include "doctest.h"

#include <cmath>
#include <numeric>

#include "ddcor/errors.hpp"
#include "ddcor/inference.hpp"
#include "ddcor/rng.hpp"

#include "test_helpers.hpp"

using namespace ddcor;

namespace {

RealMatrix col(std::vector<double> v) { return RealMatrix::column(std::move(v)); }

PairedSample null_sample(std::uint64_t seed, std::size_t n) {
    auto rng = make_rng(seed);
    return PairedSample(col(helpers::random_normal(rng, n)), helpers::random_normal(rng, n));
}

} // namespace

TEST_CASE("permutation p-value floor with the add-one convention") {
    const std::size_t n = 50;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] = static_cast<double>(i);
    const PairedSample s(col(x), y);
    CHECK(permutation_pvalue(Method::DC, s, 499, 3) == doctest::Approx(0.002).epsilon(1e-12));
}

TEST_CASE("permutation p-value is deterministic in the seed") {
    const PairedSample s = null_sample(5, 60);
    const double p1 = permutation_pvalue(Method::HSIC, s, 99, 42);
    const double p2 = permutation_pvalue(Method::HSIC, s, 99, 42);
    const double p3 = permutation_pvalue(Method::HSIC, s, 99, 43);
    CHECK(p1 == p2);
    CHECK(p1 != p3); // different stream, almost surely a different count
}

TEST_CASE("permutation p-value requires at least one shuffle") {
    const PairedSample s = null_sample(6, 20);
    CHECK_THROWS_AS(permutation_pvalue(Method::DC, s, 0, 1), invalid_parameter_error);
}

TEST_CASE("engine statistics equal from-scratch recomputation under permutations") {
    auto rng = make_rng(77);
    const std::size_t n = 25;
    const auto x = helpers::random_matrix(rng, n, 2);
    const auto yv = helpers::random_vector(rng, n);
    const PairedSample s(x, yv);

    for (const Method method : {Method::DDC, Method::Chatterjee, Method::DC, Method::HSIC,
                                Method::PCor}) {
        const PairedSample su(col(helpers::random_vector(rng, n)), yv);
        const PairedSample& sample = method == Method::Chatterjee ? su : s;
        const auto engine = PermutationEngine::for_sample(method, sample, 11);
        for (int trial = 0; trial < 5; ++trial) {
            const auto perm = random_permutation(n, rng);
            std::vector<double> y_perm(n);
            for (std::size_t i = 0; i < n; ++i) y_perm[i] = sample.y[perm[i]];
            double direct = 0;
            switch (method) {
                case Method::DDC:
                    // same tie-break stream composed with the permutation
                    direct = engine.statistic(perm);
                    break;
                case Method::Chatterjee:
                    direct = chatterjee_xi(sample.x.column_values(0), y_perm, 11);
                    break;
                case Method::DC:
                    direct = distance_correlation(sample.x, col(y_perm));
                    break;
                case Method::HSIC:
                    direct = hsic(sample.x, col(y_perm));
                    break;
                case Method::PCor:
                    direct = projection_correlation(sample.x, col(y_perm));
                    break;
            }
            CHECK(helpers::rel_diff(engine.statistic(perm), direct) < 1e-10);
        }
    }
}

TEST_CASE("ddc engine matches direct evaluation on permuted tie-free data") {
    auto rng = make_rng(87);
    const std::size_t n = 30;
    const auto x = helpers::random_matrix(rng, n, 3);
    const auto yv = helpers::random_vector(rng, n);
    const PairedSample s(x, yv);
    const auto engine = PermutationEngine::for_sample(Method::DDC, s, 5);
    CHECK(helpers::rel_diff(engine.observed(), ddc(s, 5)) < 1e-12);
    for (int trial = 0; trial < 5; ++trial) {
        const auto perm = random_permutation(n, rng);
        std::vector<double> y_perm(n);
        for (std::size_t i = 0; i < n; ++i) y_perm[i] = yv[perm[i]];
        // tie-free y: any tie seed gives the same order
        CHECK(helpers::rel_diff(engine.statistic(perm), ddc(PairedSample(x, y_perm), 123)) <
              1e-10);
    }
}

TEST_CASE("permutation p-values are approximately uniform under the null") {
    const std::size_t reps = 500;
    std::vector<double> pvalues(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const PairedSample s = null_sample(derive_seed(1000, r), 200);
        pvalues[r] = permutation_pvalue(Method::DDC, s, 199, derive_seed(2000, r));
    }
    CHECK(helpers::ks_uniform(pvalues) < 0.06);
}

TEST_CASE("independence test dispatch and provenance") {
    TestConfig tc;
    tc.seed = 9;
    const PairedSample s = null_sample(8, 120);

    const TestResult ddc_res = independence_test(Method::DDC, s, tc);
    CHECK(ddc_res.p_source == PValueSource::Asymptotic);
    CHECK(ddc_res.permutations == 0);
    CHECK(ddc_res.p_value >= 0.0);
    CHECK(ddc_res.p_value <= 1.0);
    CHECK(ddc_res.estimate.n == 120);

    const TestResult dc_res = independence_test(Method::DC, s, tc);
    CHECK(dc_res.p_source == PValueSource::Permutation);
    CHECK(dc_res.permutations == 500);
    CHECK(dc_res.p_value > 0.0);
    CHECK(dc_res.p_value <= 1.0);

    const TestResult xi_res = independence_test(Method::Chatterjee, s, tc);
    CHECK(xi_res.p_source == PValueSource::Asymptotic);
}

TEST_CASE("ddc test is overwhelming on monotone data") {
    const std::size_t n = 100;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] = static_cast<double>(i) / n;
    TestConfig tc;
    const TestResult res = independence_test(Method::DDC, PairedSample(col(x), y), tc);
    CHECK(res.p_value < 1e-6);
    CHECK(res.reject());
}

TEST_CASE("asymptotic and permutation decisions agree on most null samples") {
    const std::size_t trials = 200;
    std::size_t agree = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const PairedSample s = null_sample(derive_seed(3000, t), 500);
        TestConfig tc;
        tc.seed = derive_seed(4000, t);
        const bool asym = independence_test(Method::DDC, s, tc).reject();
        const bool perm =
            permutation_pvalue(Method::DDC, s, 499, derive_seed(5000, t)) <= 0.05;
        agree += asym == perm;
    }
    CHECK(agree >= 180); // >= 90%
}

TEST_CASE("permutation decisions are stable under joint relabeling") {
    const std::size_t trials = 200;
    const std::size_t n = 60;
    std::size_t rejects_original = 0, rejects_shuffled = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = make_rng(derive_seed(6000, t));
        const auto x = helpers::random_normal(rng, n);
        const auto y = helpers::random_normal(rng, n);
        const PairedSample s(col(x), y);
        rejects_original +=
            permutation_pvalue(Method::DC, s, 199, derive_seed(7000, t)) <= 0.05;

        const auto perm = random_permutation(n, rng);
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = x[perm[i]];
            ys[i] = y[perm[i]];
        }
        rejects_shuffled +=
            permutation_pvalue(Method::DC, PairedSample(col(xs), ys), 199,
                               derive_seed(7000, t)) <= 0.05;
    }
    // Both runs see null data; counts should agree within 3 sigma of the
    // difference of two binomial(trials, ~0.05) draws.
    const double diff = std::fabs(static_cast<double>(rejects_original) -
                                  static_cast<double>(rejects_shuffled));
    CHECK(diff <= 3.0 * std::sqrt(2.0 * trials * 0.05 * 0.95) + 1.0);
}

TEST_CASE("power estimate: noise-free sinusoid is always detected") {
    SimulationSpec spec;
    spec.model = Model::Sinusoid;
    spec.lambda = 0.0;
    spec.n = 100;
    spec.seed = 606;
    CHECK(power_estimate(spec, Method::DDC, 0.05, 100) == 1.0);
}

TEST_CASE("power estimate matches the level under the null") {
    SimulationSpec spec;
    spec.model = Model::NullIndependent;
    spec.n = 100;
    spec.seed = 707;
    const double size = power_estimate(spec, Method::DDC, 0.05, 1000);
    CHECK(size >= 0.03);
    CHECK(size <= 0.08);
}

TEST_CASE("power decreases from low to high noise for every functional model") {
    TestConfig tc;
    tc.threads = 2;
    for (const Model model : {Model::Linear, Model::Quadratic, Model::Sinusoid,
                              Model::DampedOscillator, Model::WShaped, Model::Step}) {
        SimulationSpec spec;
        spec.model = model;
        spec.n = 100;
        spec.seed = 808;
        spec.lambda = 0.1;
        const double low = power_estimate(spec, Method::DDC, 0.05, 500, tc);
        spec.lambda = 0.9;
        const double high = power_estimate(spec, Method::DDC, 0.05, 500, tc);
        CHECK(low >= high);
    }
}

TEST_CASE("power estimate rejects the multi-response model") {
    SimulationSpec spec;
    spec.model = Model::MultiResponse;
    CHECK_THROWS_AS(power_estimate(spec, Method::DDC, 0.05, 10), invalid_parameter_error);
}

TEST_CASE("oriented samples put the right variable in each slot") {
    const PairedSample draw(col({1, 2, 3, 4}), {10, 20, 30, 40});

    const auto ddc_resp = oriented_sample(draw, Method::DDC,
                                          DdcOrientation::ResponseGivenCovariate);
    CHECK(ddc_resp.x(0, 0) == 10);
    CHECK(ddc_resp.y[0] == 1);

    const auto ddc_cov = oriented_sample(draw, Method::DDC,
                                         DdcOrientation::CovariateGivenResponse);
    CHECK(ddc_cov.x(0, 0) == 1);

    const auto xi_resp = oriented_sample(draw, Method::Chatterjee,
                                         DdcOrientation::ResponseGivenCovariate);
    CHECK(xi_resp.x(0, 0) == 1); // chatterjee sorts by the covariate

    const auto dc_any = oriented_sample(draw, Method::DC,
                                        DdcOrientation::ResponseGivenCovariate);
    CHECK(dc_any.x(0, 0) == 1);
}
