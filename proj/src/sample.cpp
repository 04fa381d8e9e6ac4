#include "ddcor/sample.hpp"

#include <algorithm>
#include <numeric>

#include "ddcor/errors.hpp"
#include "ddcor/rng.hpp"

namespace ddcor {

PairedSample::PairedSample(RealMatrix x_in, std::vector<double> y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {
    if (x.rows() != y.size()) {
        throw invalid_data_error("paired sample: x row count does not match y length");
    }
    require_finite(x, "paired sample x");
    require_finite(std::span<const double>(y), "paired sample y");
}

std::vector<std::size_t> y_order(const std::vector<double>& y, std::uint64_t tie_seed) {
    std::vector<std::size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // A random pre-shuffle followed by a stable sort makes the order within
    // each tied block uniformly random.
    auto rng = make_rng(tie_seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
    return idx;
}

SortedPairedSample sort_by_y(PairedSample sample, std::uint64_t tie_seed) {
    auto perm = y_order(sample.y, tie_seed);
    return SortedPairedSample{std::move(sample), std::move(perm), tie_seed};
}

} // namespace ddcor
