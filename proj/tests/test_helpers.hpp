#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ddcor/matrix.hpp"
#include "ddcor/rng.hpp"

namespace helpers {

inline ddcor::RealMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t p,
                                       double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ddcor::RealMatrix m(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) m(i, j) = dist(rng);
    }
    return m;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

inline std::vector<double> random_normal(std::mt19937_64& rng, std::size_t n,
                                         double mean = 0.0, double sd = 1.0) {
    std::normal_distribution<double> dist(mean, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

/// (x, y) rows of a bivariate standard normal with correlation rho.
inline std::pair<std::vector<double>, std::vector<double>> bivariate_normal(
    std::mt19937_64& rng, std::size_t n, double rho) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n), y(n);
    const double tail = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = gauss(rng);
        y[i] = rho * x[i] + tail * gauss(rng);
    }
    return {std::move(x), std::move(y)};
}

/// Random orthonormal p x p matrix via Gram-Schmidt on a Gaussian matrix,
/// with one re-orthogonalization pass.
inline ddcor::RealMatrix random_orthonormal(std::mt19937_64& rng, std::size_t p) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> q(p, std::vector<double>(p));
    for (auto& row : q) {
        for (auto& v : row) v = gauss(rng);
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < i; ++k) {
                double proj = 0;
                for (std::size_t j = 0; j < p; ++j) proj += q[i][j] * q[k][j];
                for (std::size_t j = 0; j < p; ++j) q[i][j] -= proj * q[k][j];
            }
        }
        double norm = 0;
        for (double v : q[i]) norm += v * v;
        norm = std::sqrt(norm);
        for (auto& v : q[i]) v /= norm;
    }
    ddcor::RealMatrix m(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) m(i, j) = q[i][j];
    }
    return m;
}

/// apply a * C * x_row + b to every row.
inline ddcor::RealMatrix affine_transform(const ddcor::RealMatrix& x, double a,
                                          const ddcor::RealMatrix& c,
                                          const std::vector<double>& b) {
    const std::size_t n = x.rows(), p = x.cols();
    ddcor::RealMatrix out(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            double s = 0;
            for (std::size_t k = 0; k < p; ++k) s += c(r, k) * x(i, k);
            out(i, r) = a * s + b[r];
        }
    }
    return out;
}

/// |a - b| measured against max(1, |a|, |b|).
inline double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Kolmogorov distance between the sample and the U(0,1) CDF.
inline double ks_uniform(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - values[i];
        const double lo = values[i] - static_cast<double>(i) / n;
        d = std::max({d, hi, lo});
    }
    return d;
}

} // namespace helpers
