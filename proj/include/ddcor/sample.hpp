#pragma once

#include <cstdint>
#include <vector>

#include "ddcor/matrix.hpp"

namespace ddcor {

/// n observations of (vector in R^p, scalar conditioning variable).
/// Construction validates finiteness and that x has one row per y value.
struct PairedSample {
    RealMatrix x;
    std::vector<double> y;

    PairedSample(RealMatrix x_in, std::vector<double> y_in);

    std::size_t n() const { return x.rows(); }
    std::size_t p() const { return x.cols(); }
};

/// A sample together with the permutation that sorts it by y. Ties among
/// equal y values are broken uniformly at random, driven by tie_seed.
struct SortedPairedSample {
    PairedSample sample;
    std::vector<std::size_t> permutation; // y[permutation[i]] nondecreasing
    std::uint64_t tie_seed;
};

SortedPairedSample sort_by_y(PairedSample sample, std::uint64_t tie_seed);

/// Indices that sort y nondecreasing, ties broken uniformly at random.
std::vector<std::size_t> y_order(const std::vector<double>& y, std::uint64_t tie_seed);

} // namespace ddcor
