#include "ddcor/rng.hpp"

#include <algorithm>
#include <numeric>

namespace ddcor {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t key, std::uint64_t index) {
    std::uint64_t state = key + (index + 1) * 0x9E3779B97F4A7C15ULL;
    splitmix64_next(state);
    return splitmix64_next(state);
}

std::mt19937_64 make_rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    const std::uint64_t a = splitmix64_next(state);
    const std::uint64_t b = splitmix64_next(state);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

} // namespace ddcor
