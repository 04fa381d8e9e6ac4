#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddcor/measures.hpp"
#include "ddcor/sample.hpp"
#include "ddcor/table.hpp"

namespace ddcor {

enum class Model {
    Linear,
    Quadratic,
    Sinusoid,
    DampedOscillator,
    WShaped,
    Step,
    MultiResponse,
    NullIndependent,
};

std::string model_name(Model m);
Model model_from_name(const std::string& name); // case-insensitive

/// Which variable the asymmetric coefficients (DDC, Chatterjee) treat as
/// functionally determined. ResponseGivenCovariate detects y = f(x).
enum class DdcOrientation { ResponseGivenCovariate, CovariateGivenResponse };

std::string orientation_name(DdcOrientation o);
DdcOrientation orientation_from_name(const std::string& name);

struct SimulationSpec {
    Model model = Model::Linear;
    double lambda = 0.0; // noise level of the functional models, in [0, 1]
    double rho = 0.0;    // predictor equicorrelation of the multi-response model
    std::size_t n = 100;
    std::size_t p = 1; // predictor dimension of the multi-response model
    std::uint64_t seed = 0;
    std::size_t reps = 1;
};

struct MultiResponseDraw {
    RealMatrix x; // n x p predictors
    RealMatrix y; // n x 3 responses
};

/// Functional-model draw: x ~ U(-1,1) i.i.d., y = f(x) + c * lambda * eps with
/// eps ~ N(0,1) and the model's fixed noise multiplier c. NullIndependent
/// draws y = eps independent of x (lambda ignored).
PairedSample generate_example1(Model model, double lambda, std::size_t n,
                               std::uint64_t seed);

/// Noise-free mean of a functional model at a point.
double example1_mean(Model model, double x);
/// The model's noise multiplier c.
double example1_noise_multiplier(Model model);

/// Multi-response regression draw: predictor rows i.i.d. N(0, Sigma) with unit
/// diagonal and off-diagonal rho; three responses driven by the first four
/// predictors plus a unit-vector bump Z * f(x4) and N(0, I3)/2 noise. The bump
/// coordinate Z is drawn uniformly from {e1, e2, e3} once per dataset.
MultiResponseDraw generate_example2(double rho, std::size_t n, std::size_t p,
                                    std::uint64_t seed);

/// The oscillatory bump: 0.5 cos(2 pi x) + cos^2(2 pi x) - 1.5 sin^3(2 pi x).
double multi_response_f(double x);

/// Response row given predictors, the categorical z draw and the noise vector.
/// Depends on x_row[0..3] only.
std::array<double, 3> multi_response_row(std::span<const double> x_row,
                                         std::size_t z_index,
                                         const std::array<double, 3>& noise);

/// Active predictor indices of the multi-response model (0-based).
std::vector<std::size_t> multi_response_active_set();

struct ExperimentConfig {
    double level = 0.05;
    std::size_t permutations = 500;
    unsigned threads = 1;
    DdcOrientation orientation = DdcOrientation::ResponseGivenCovariate;
    MeasureParams params{};
};

/// Mean coefficient per (model, lambda, method) over `reps` fresh draws of
/// size n; all methods are evaluated on the same draws. Columns:
/// model, lambda, method, mean_value.
Table coefficient_mean_table(const std::vector<Model>& models,
                             const std::vector<double>& lambdas,
                             const std::vector<Method>& methods, std::size_t n,
                             std::size_t reps, std::uint64_t seed,
                             const ExperimentConfig& config = {});

/// Rejection frequency per (model, lambda, method) at config.level; methods
/// share draws within a replication. Columns: model, lambda, method, power.
Table power_curve(const std::vector<Model>& models, const std::vector<double>& lambdas,
                  const std::vector<Method>& methods, std::size_t n, std::size_t reps,
                  std::uint64_t seed, const ExperimentConfig& config = {});

/// The lambda grid used when none is specified: 0, 0.1, ..., 1.0.
std::vector<double> default_lambda_grid();

} // namespace ddcor
