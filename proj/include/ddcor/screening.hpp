#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "ddcor/inference.hpp"
#include "ddcor/simulation.hpp"
#include "ddcor/table.hpp"

namespace ddcor {

struct RankedFeature {
    std::size_t index; // 0-based predictor index
    double value;      // coefficient between the predictor and the response
};

struct ScreeningReport {
    std::vector<double> per_predictor_proportion; // active predictors, index order
    std::vector<std::size_t> mms_values;          // minimal model size per replication
    double mms_median = 0;
    double mms_sd = 0;
    std::size_t selected_size = 0; // floor(n / ln n)
    Method method = Method::DDC;
    double rho = 0;
    std::size_t reps = 0;
};

/// floor(n / ln n), the predictive model size.
std::size_t screening_selected_size(std::size_t n);

/// Coefficient between every predictor column and the response, sorted
/// descending (ties by predictor index). DDC puts the multivariate response in
/// the vector slot and the scalar predictor in the conditioning slot; constant
/// predictor columns get the method's degenerate value (0 for DDC). Chatterjee
/// requires a univariate response.
std::vector<RankedFeature> rank_features(const MultiResponseDraw& draw, Method method,
                                         std::uint64_t seed = 0,
                                         const MeasureParams& params = {},
                                         unsigned threads = 1);

/// Smallest k such that the top-k of the ranking contains every active index.
std::size_t minimal_model_size(const std::vector<RankedFeature>& ranking,
                               const std::set<std::size_t>& active);

/// Selection proportions P_j of the active predictors in the top-[n/ln n],
/// plus the minimal-model-size distribution, over spec.reps replications of
/// the multi-response model.
ScreeningReport screening_report(const SimulationSpec& spec, Method method,
                                 const MeasureParams& params = {},
                                 unsigned threads = 1);

/// Rejection frequency of the independence test between each listed predictor
/// and the 3-dim response (DDC asymptotic; DC/HSIC/PCor permutation with
/// config.permutations shuffles). Columns: method, rho, predictor, power.
Table screening_power_table(const SimulationSpec& spec, const std::vector<Method>& methods,
                            double level, const TestConfig& config = {},
                            const std::vector<std::size_t>& predictors = {0, 1, 2, 3});

} // namespace ddcor
