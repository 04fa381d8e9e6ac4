#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ddcor {

/// One splitmix64 step; advances the state and returns the next output.
std::uint64_t splitmix64_next(std::uint64_t& state);

/// Derives an independent stream seed from (key, index). Streams derived
/// this way are order-independent, so replications keyed by index can be
/// evaluated in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t key, std::uint64_t index);

std::mt19937_64 make_rng(std::uint64_t seed);

std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng);

} // namespace ddcor
