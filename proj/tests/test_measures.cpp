#include "doctest.h"

#include <cmath>
#include <numeric>

#include "ddcor/errors.hpp"
#include "ddcor/measures.hpp"
#include "ddcor/rng.hpp"
#include "ddcor/sample.hpp"

#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace ddcor;

namespace {

RealMatrix col(std::vector<double> v) { return RealMatrix::column(std::move(v)); }

} // namespace

TEST_CASE("gini mean difference on known inputs") {
    CHECK(gini_mean_difference(col({1, 2, 3})) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));

    RealMatrix constant(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        constant(i, 0) = 2.5;
        constant(i, 1) = -1.0;
    }
    CHECK(gini_mean_difference(constant) == 0.0);

    CHECK_THROWS_AS(gini_mean_difference(col({1.0})), insufficient_sample_error);
    CHECK_THROWS_AS(gini_mean_difference(col({1.0, std::nan("")})), invalid_data_error);
}

TEST_CASE("gini mean difference of U(0,1) approaches 1/3") {
    auto rng = make_rng(11);
    const auto x = helpers::random_vector(rng, 100000, 0.0, 1.0);
    CHECK(gini_mean_difference(col(x)) == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("gini fast path matches the pairwise sum") {
    auto rng = make_rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        std::uniform_int_distribution<std::size_t> size(10, 800);
        const std::size_t n = size(rng);
        const auto x = helpers::random_vector(rng, n, -5.0, 5.0);
        const double fast = gini_mean_difference(col(x));
        const double naive = oracle::gini(col(x));
        CHECK(helpers::rel_diff(fast, naive) < 1e-10);
    }
}

TEST_CASE("ddc on equally spaced monotone data") {
    const PairedSample s(col({1, 2, 3, 4, 5}), {1, 2, 3, 4, 5});
    CHECK(ddc(s, 0) == doctest::Approx(0.5).epsilon(1e-14)); // 1 - 3/(n+1)
}

TEST_CASE("ddc is zero when all rows are identical") {
    RealMatrix x(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = -2.0;
        x(i, 2) = 0.5;
    }
    const PairedSample s(x, {5, 1, 4, 2, 3});
    CHECK(ddc(s, 99) == 0.0);
}

TEST_CASE("ddc needs at least two observations") {
    CHECK_THROWS_AS(ddc(PairedSample(col({1.0}), {1.0}), 0), insufficient_sample_error);
}

TEST_CASE("ddc approaches 1 - sqrt(1 - rho^2) for bivariate normal") {
    auto rng = make_rng(21);
    for (const double rho : {0.3, 0.6, 0.9}) {
        auto [x, y] = helpers::bivariate_normal(rng, 20000, rho);
        const double value = ddc(PairedSample(col(x), y), 5);
        CHECK(std::fabs(value - (1.0 - std::sqrt(1.0 - rho * rho))) < 0.015);
    }
}

TEST_CASE("ddc is invariant under scale, rotation, shift and monotone y maps") {
    auto rng = make_rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 30;
        const std::size_t p = 3;
        const auto x = helpers::random_matrix(rng, n, p);
        const auto y = helpers::random_vector(rng, n);
        const double base = ddc(PairedSample(x, y), 7);

        const double a = std::uniform_real_distribution<double>(0.2, 4.0)(rng);
        const auto c = helpers::random_orthonormal(rng, p);
        const auto b = helpers::random_vector(rng, p, -2.0, 2.0);
        const auto tx = helpers::affine_transform(x, a, c, b);

        std::vector<double> y_inc(n), y_dec(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_inc[i] = std::exp(y[i]) + y[i];      // strictly increasing
            y_dec[i] = -y[i] * y[i] * y[i] - y[i]; // strictly decreasing
        }
        CHECK(helpers::rel_diff(ddc(PairedSample(tx, y_inc), 7), base) < 1e-10);
        CHECK(helpers::rel_diff(ddc(PairedSample(tx, y_dec), 7), base) < 1e-10);
    }
}

TEST_CASE("ddc is invariant under joint re-ordering of the observations") {
    auto rng = make_rng(41);
    const std::size_t n = 40;
    const auto x = helpers::random_matrix(rng, n, 2);
    const auto y = helpers::random_vector(rng, n);
    const double base = ddc(PairedSample(x, y), 3);

    const auto perm = random_permutation(n, rng);
    RealMatrix xs(n, 2);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs(i, 0) = x(perm[i], 0);
        xs(i, 1) = x(perm[i], 1);
        ys[i] = y[perm[i]];
    }
    CHECK(ddc(PairedSample(xs, ys), 3) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("sort_by_y produces a nondecreasing bijection") {
    auto rng = make_rng(51);
    std::vector<double> y = {3, 1, 2, 2, 2, 0, 3};
    const auto sorted = sort_by_y(PairedSample(col({1, 2, 3, 4, 5, 6, 7}), y), 17);
    REQUIRE(sorted.permutation.size() == y.size());
    std::vector<char> seen(y.size(), 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        seen[sorted.permutation[i]] = 1;
        if (i + 1 < y.size()) {
            CHECK(y[sorted.permutation[i]] <= y[sorted.permutation[i + 1]]);
        }
    }
    for (char c : seen) CHECK(c == 1);
}

TEST_CASE("chatterjee on monotone and reversed data") {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    CHECK(chatterjee_xi(x, x, 0) == doctest::Approx(0.5).epsilon(1e-14));
    const std::vector<double> y_rev = {5, 4, 3, 2, 1};
    CHECK(chatterjee_xi(x, y_rev, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("chatterjee near zero under independence") {
    auto rng = make_rng(61);
    const auto x = helpers::random_vector(rng, 10000);
    const auto y = helpers::random_normal(rng, 10000);
    CHECK(std::fabs(chatterjee_xi(x, y, 1)) < 0.03);
}

TEST_CASE("chatterjee rejects a constant response") {
    CHECK_THROWS_AS(chatterjee_xi({1, 2, 3, 4}, {7, 7, 7, 7}, 0), degenerate_response_error);
}

TEST_CASE("chatterjee equals the tie-free simplified form") {
    auto rng = make_rng(71);
    const std::size_t n = 200;
    const auto x = helpers::random_vector(rng, n);
    const auto y = helpers::random_vector(rng, n);
    // 1 - 3 sum|r_{i+1} - r_i| / (n^2 - 1) with ranks along the x order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t k = 0; k < n; ++k) r += y[k] <= y[order[i]];
        rank[i] = static_cast<double>(r);
    }
    double num = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) num += std::fabs(rank[i + 1] - rank[i]);
    const double simplified = 1.0 - 3.0 * num / (static_cast<double>(n) * n - 1.0);
    CHECK(chatterjee_xi(x, y, 9) == doctest::Approx(simplified).epsilon(1e-14));
}

TEST_CASE("distance correlation basic values") {
    const std::vector<double> x = {0.3, -1.2, 2.0, 0.7, -0.5};
    CHECK(distance_correlation(col(x), col(x)) == doctest::Approx(1.0).epsilon(1e-12));

    RealMatrix constant(5, 1);
    for (std::size_t i = 0; i < 5; ++i) constant(i, 0) = 3.0;
    CHECK(distance_correlation(constant, col(x)) == 0.0);
}

TEST_CASE("distance correlation matches the double-centered oracle") {
    const std::vector<double> x = {0, 1, 2, 3, 4};
    const std::vector<double> y = {2, 0, 4, 1, 3}; // independent-ish grid
    const double value = distance_correlation(col(x), col(y));
    CHECK(helpers::rel_diff(value, oracle::distance_correlation(col(x), col(y))) < 1e-12);
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
}

TEST_CASE("hsic basic values and errors") {
    auto rng = make_rng(81);
    const auto y = helpers::random_vector(rng, 6);
    RealMatrix constant(6, 1);
    for (std::size_t i = 0; i < 6; ++i) constant(i, 0) = 1.0;
    CHECK(hsic(constant, col(y)) == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS_AS(hsic(col({1, 2, 3, 4}), col({1, 2, 3, 4}), 0.0), invalid_parameter_error);
    CHECK_THROWS_AS(hsic(col({1, 2, 3}), col({1, 2, 3})), insufficient_sample_error);
}

TEST_CASE("hsic matches trace(KHLH)/n^2 on a fixed input") {
    const std::vector<double> x = {0.1, -0.4, 0.9, 0.3};
    const std::vector<double> y = {1.0, 0.2, -0.3, 0.8};
    const double value = hsic(col(x), col(y));
    CHECK(helpers::rel_diff(value, oracle::hsic(col(x), col(y), kDefaultHsicBandwidth)) < 1e-12);
}

TEST_CASE("hsic near zero under independence") {
    auto rng = make_rng(91);
    const auto x = helpers::random_vector(rng, 10000);
    const auto y = helpers::random_normal(rng, 10000);
    CHECK(hsic(col(x), col(y)) < 0.01);
}

TEST_CASE("projection correlation basic values and errors") {
    const std::vector<double> x = {0.3, -1.2, 2.0, 0.7, -0.5};
    CHECK(projection_correlation(col(x), col(x)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(projection_correlation(col(x), col(x), -1.0), invalid_parameter_error);
    CHECK_THROWS_AS(projection_correlation(col({1, 2, 3}), col({1, 2, 3})),
                    insufficient_sample_error);
}

TEST_CASE("projection correlation matches the exhaustive tuple oracle") {
    const std::vector<double> x = {0.1, -0.4, 0.9, 0.3};
    const std::vector<double> y = {1.0, 0.2, -0.3, 0.8};
    const double value = projection_correlation(col(x), col(y));
    CHECK(helpers::rel_diff(value, oracle::projection_correlation(col(x), col(y), 1.0)) <
          1e-12);
}

TEST_CASE("projection correlation near zero under independence") {
    auto rng = make_rng(101);
    const auto x = helpers::random_vector(rng, 5000);
    const auto y = helpers::random_normal(rng, 5000);
    CHECK(std::fabs(projection_correlation(col(x), col(y))) < 0.02);
}

TEST_CASE("all coefficients agree with their oracles on random instances") {
    auto rng = make_rng(111);
    std::uniform_int_distribution<std::size_t> size(4, 12);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = size(rng);
        const std::size_t p = trial % 2 == 0 ? 1 : 3;
        const auto x = helpers::random_matrix(rng, n, p);
        const auto yv = helpers::random_vector(rng, n);
        const auto y = col(yv);

        CHECK(helpers::rel_diff(ddc(PairedSample(x, yv), 1), oracle::ddc(x, yv)) < 1e-10);
        CHECK(helpers::rel_diff(distance_correlation(x, y), oracle::distance_correlation(x, y)) <
              1e-10);
        CHECK(helpers::rel_diff(hsic(x, y), oracle::hsic(x, y, kDefaultHsicBandwidth)) < 1e-10);
        CHECK(helpers::rel_diff(projection_correlation(x, y),
                                oracle::projection_correlation(x, y, 1.0)) < 1e-10);
        if (p == 1) {
            CHECK(helpers::rel_diff(chatterjee_xi(x.column_values(0), yv, 1),
                                    oracle::chatterjee(x.column_values(0), yv)) < 1e-10);
        }
    }
}

TEST_CASE("method names round-trip") {
    for (const Method m : {Method::DDC, Method::Chatterjee, Method::DC, Method::HSIC,
                           Method::PCor}) {
        CHECK(method_from_name(method_name(m)) == m);
    }
    CHECK_THROWS_AS(method_from_name("nope"), config_error);
}
