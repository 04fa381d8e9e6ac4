#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "ddcor/asymptotics.hpp"
#include "ddcor/measures.hpp"
#include "ddcor/sample.hpp"
#include "ddcor/simulation.hpp"

namespace ddcor {

enum class PValueSource { Asymptotic, Permutation };

std::string p_source_name(PValueSource s);

struct TestResult {
    CoefficientEstimate estimate;
    double p_value = 1.0;
    PValueSource p_source = PValueSource::Asymptotic;
    std::size_t permutations = 0; // 0 for asymptotic results
    double level = 0.05;
    std::uint64_t seed = 0;

    bool reject() const { return p_value <= level; }
};

struct TestConfig {
    double level = 0.05;
    std::size_t permutations = 500;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    MeasureParams params{};
};

/// Evaluates a method's statistic under row permutations of its second
/// argument. Construction precomputes whatever the method allows (distance /
/// kernel matrices when n <= materialize_cap), so each permutation costs O(n)
/// for DDC and Chatterjee and O(n^2) for DC, HSIC and PCor.
class PermutationEngine {
public:
    /// DDC / Chatterjee on a paired sample (y is the scalar conditioner).
    static PermutationEngine for_sample(Method method, const PairedSample& sample,
                                        std::uint64_t tie_seed,
                                        const MeasureParams& params = {},
                                        std::size_t materialize_cap = 20000);
    /// DC / HSIC / PCor between row-matched matrices.
    static PermutationEngine for_matrices(Method method, RealMatrix x, RealMatrix y,
                                          const MeasureParams& params = {},
                                          std::size_t materialize_cap = 20000);

    /// Statistic with y rows relabeled as y[perm[i]].
    double statistic(std::span<const std::size_t> perm) const;
    /// Statistic of the unpermuted data.
    double observed() const;

    std::size_t n() const;

    PermutationEngine(PermutationEngine&&) noexcept;
    PermutationEngine& operator=(PermutationEngine&&) noexcept;
    ~PermutationEngine();

private:
    struct Impl;
    explicit PermutationEngine(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

/// Add-one permutation p-value (1 + #{b : T_b >= T_0}) / (B + 1) with B
/// uniform permutations of y drawn from seed-derived streams.
double permutation_pvalue(Method method, const PairedSample& sample, std::size_t B,
                          std::uint64_t seed, const MeasureParams& params = {},
                          unsigned threads = 1);

/// Same contract for the matrix-pair surface used by multi-response screening.
double permutation_pvalue_xy(Method method, const RealMatrix& x, const RealMatrix& y,
                             std::size_t B, std::uint64_t seed,
                             const MeasureParams& params = {}, unsigned threads = 1);

/// Unified test: DDC and Chatterjee get asymptotic p-values, DC/HSIC/PCor get
/// permutation p-values with config.permutations shuffles.
TestResult independence_test(Method method, const PairedSample& sample,
                             const TestConfig& config = {});

/// Fraction of `reps` replications of the generator in which the independence
/// test rejects at `level`. Replication r draws with seed derive(spec.seed, r).
/// The functional models orient DDC/Chatterjee per `orientation`.
double power_estimate(const SimulationSpec& spec, Method method, double level,
                      std::size_t reps, const TestConfig& config = {},
                      DdcOrientation orientation = DdcOrientation::ResponseGivenCovariate);

/// Builds the sample a method should see for a univariate (covariate,
/// response) draw under the given orientation. DDC puts the determined
/// variable in the vector slot; Chatterjee sorts by the determining variable;
/// the symmetric methods get the draw unchanged.
PairedSample oriented_sample(const PairedSample& draw, Method method,
                             DdcOrientation orientation);

} // namespace ddcor
