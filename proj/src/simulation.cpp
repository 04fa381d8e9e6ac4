#include "ddcor/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "ddcor/errors.hpp"
#include "ddcor/inference.hpp"
#include "ddcor/parallel.hpp"
#include "ddcor/rng.hpp"

namespace ddcor {

std::string model_name(Model m) {
    switch (m) {
        case Model::Linear: return "linear";
        case Model::Quadratic: return "quadratic";
        case Model::Sinusoid: return "sinusoid";
        case Model::DampedOscillator: return "damped_oscillator";
        case Model::WShaped: return "w_shaped";
        case Model::Step: return "step";
        case Model::MultiResponse: return "multi_response";
        case Model::NullIndependent: return "null_independent";
    }
    return "linear";
}

Model model_from_name(const std::string& name) {
    std::string lower;
    for (char c : name) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "linear") return Model::Linear;
    if (lower == "quadratic") return Model::Quadratic;
    if (lower == "sinusoid") return Model::Sinusoid;
    if (lower == "damped_oscillator" || lower == "dampedoscillator") return Model::DampedOscillator;
    if (lower == "w_shaped" || lower == "wshaped") return Model::WShaped;
    if (lower == "step") return Model::Step;
    if (lower == "multi_response" || lower == "multiresponse") return Model::MultiResponse;
    if (lower == "null_independent" || lower == "nullindependent") return Model::NullIndependent;
    throw config_error("unknown model '" + name + "'");
}

std::string orientation_name(DdcOrientation o) {
    return o == DdcOrientation::ResponseGivenCovariate ? "response_given_covariate"
                                                       : "covariate_given_response";
}

DdcOrientation orientation_from_name(const std::string& name) {
    std::string lower;
    for (char c : name) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "response_given_covariate" || lower == "response") {
        return DdcOrientation::ResponseGivenCovariate;
    }
    if (lower == "covariate_given_response" || lower == "covariate") {
        return DdcOrientation::CovariateGivenResponse;
    }
    throw config_error("unknown orientation '" + name + "'");
}

double example1_noise_multiplier(Model model) {
    switch (model) {
        case Model::Linear: return 3.0;
        case Model::Quadratic: return 2.0;
        case Model::Sinusoid: return 3.0;
        case Model::DampedOscillator: return 4.0;
        case Model::WShaped: return 0.75;
        case Model::Step: return 10.0;
        default:
            throw invalid_parameter_error("noise multiplier: not a functional model");
    }
}

double example1_mean(Model model, double x) {
    switch (model) {
        case Model::Linear: return x;
        case Model::Quadratic: return x * x;
        case Model::Sinusoid: return std::cos(8.0 * std::numbers::pi * x);
        case Model::DampedOscillator: return std::exp(-2.0 * x) * std::sin(10.0 * x);
        case Model::WShaped: return x < 0 ? std::fabs(x + 0.5) : std::fabs(x - 0.5);
        case Model::Step:
            if (x < -0.5) return -3.0;
            if (x < 0.0) return 2.0;
            if (x < 0.5) return -4.0;
            return -3.0;
        default:
            throw invalid_parameter_error("example1_mean: not a functional model");
    }
}

PairedSample generate_example1(Model model, double lambda, std::size_t n,
                               std::uint64_t seed) {
    if (model == Model::MultiResponse) {
        throw invalid_parameter_error("generate_example1: use generate_example2 for the "
                                      "multi-response model");
    }
    if (lambda < 0) throw invalid_parameter_error("generate_example1: lambda must be >= 0");

    auto rng = make_rng(seed);
    std::uniform_real_distribution<double> covariate(-1.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<double> x(n);
    for (auto& v : x) v = covariate(rng);

    std::vector<double> y(n);
    if (model == Model::NullIndependent) {
        for (auto& v : y) v = noise(rng);
    } else {
        const double mult = example1_noise_multiplier(model);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = example1_mean(model, x[i]) + mult * lambda * noise(rng);
        }
    }
    return PairedSample(RealMatrix::column(std::move(x)), std::move(y));
}

double multi_response_f(double x) {
    const double c = std::cos(2.0 * std::numbers::pi * x);
    const double s = std::sin(2.0 * std::numbers::pi * x);
    return 0.5 * c + c * c - 1.5 * s * s * s;
}

std::array<double, 3> multi_response_row(std::span<const double> x_row,
                                         std::size_t z_index,
                                         const std::array<double, 3>& noise) {
    const double x1 = x_row[0], x2 = x_row[1], x3 = x_row[2], x4 = x_row[3];
    const double two_pi = 2.0 * std::numbers::pi;
    std::array<double, 3> y{
        0.2 * x1 + 0.2 * x2 * x2 + std::sin(2.0 * two_pi * x3),
        0.4 * x1 + 0.3 * x2 * x2 + std::cos(4.0 * two_pi * x3),
        0.6 * x1 - 0.5 * x2 * x2 - std::cos(2.0 * two_pi * x3 * x3),
    };
    const double bump = multi_response_f(x4);
    for (std::size_t k = 0; k < 3; ++k) {
        y[k] += (k == z_index ? bump : 0.0) + 0.5 * noise[k];
    }
    return y;
}

std::vector<std::size_t> multi_response_active_set() { return {0, 1, 2, 3}; }

namespace {

/// Lower Cholesky factor of the equicorrelation matrix (1-rho) I + rho J.
RealMatrix equicorrelation_cholesky(double rho, std::size_t p) {
    RealMatrix a(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) a(i, j) = i == j ? 1.0 : rho;
    }
    RealMatrix l(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0) {
                    throw invalid_parameter_error(
                        "generate_example2: equicorrelation matrix is not positive definite");
                }
                l(i, j) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

} // namespace

MultiResponseDraw generate_example2(double rho, std::size_t n, std::size_t p,
                                    std::uint64_t seed) {
    if (p < 4) throw invalid_dimension_error("generate_example2: need p >= 4");
    if (!(std::fabs(rho) < 1.0)) {
        throw invalid_parameter_error("generate_example2: need |rho| < 1");
    }

    auto rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    RealMatrix x(n, p);
    if (rho >= 0) {
        const double sr = std::sqrt(rho);
        const double sq = std::sqrt(1.0 - rho);
        for (std::size_t i = 0; i < n; ++i) {
            const double shared = gauss(rng);
            for (std::size_t j = 0; j < p; ++j) x(i, j) = sr * shared + sq * gauss(rng);
        }
    } else {
        const RealMatrix l = equicorrelation_cholesky(rho, p);
        std::vector<double> z(p);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& v : z) v = gauss(rng);
            for (std::size_t j = 0; j < p; ++j) {
                double s = 0;
                for (std::size_t k = 0; k <= j; ++k) s += l(j, k) * z[k];
                x(i, j) = s;
            }
        }
    }

    // The bump coordinate is drawn once per dataset; reproduces the reported
    // selection proportions, which a per-observation draw does not.
    std::uniform_int_distribution<int> z_draw(0, 2);
    const auto z_index = static_cast<std::size_t>(z_draw(rng));
    RealMatrix y(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<double, 3> noise{gauss(rng), gauss(rng), gauss(rng)};
        const auto row = multi_response_row(x.row(i), z_index, noise);
        for (std::size_t k = 0; k < 3; ++k) y(i, k) = row[k];
    }
    return MultiResponseDraw{std::move(x), std::move(y)};
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * i);
    return grid;
}

namespace {

double evaluate_coefficient(Method method, const PairedSample& draw, std::uint64_t seed,
                            const ExperimentConfig& config) {
    switch (method) {
        case Method::DDC:
            return ddc(oriented_sample(draw, Method::DDC, config.orientation), seed);
        case Method::Chatterjee: {
            const PairedSample s = oriented_sample(draw, Method::Chatterjee, config.orientation);
            return chatterjee_xi(s.x.column_values(0), s.y, seed);
        }
        case Method::DC:
            return distance_correlation(draw.x, RealMatrix::column(draw.y));
        case Method::HSIC:
            return hsic(draw.x, RealMatrix::column(draw.y), config.params.hsic_bandwidth);
        case Method::PCor:
            return projection_correlation(draw.x, RealMatrix::column(draw.y),
                                          config.params.pcor_sigma_sq);
    }
    throw invalid_parameter_error("unknown method");
}

void set_experiment_meta(Table& t, std::size_t n, std::size_t reps, std::uint64_t seed,
                         const ExperimentConfig& config) {
    t.set_meta("n", std::to_string(n));
    t.set_meta("reps", std::to_string(reps));
    t.set_meta("seed", std::to_string(seed));
    t.set_meta("orientation", orientation_name(config.orientation));
}

} // namespace

Table coefficient_mean_table(const std::vector<Model>& models,
                             const std::vector<double>& lambdas,
                             const std::vector<Method>& methods, std::size_t n,
                             std::size_t reps, std::uint64_t seed,
                             const ExperimentConfig& config) {
    if (reps < 1) throw invalid_parameter_error("coefficient_mean_table: need reps >= 1");
    Table t;
    t.columns = {"model", "lambda", "method", "mean_value"};
    set_experiment_meta(t, n, reps, seed, config);

    std::uint64_t combo = 0;
    for (const Model model : models) {
        for (const double lambda : lambdas) {
            const std::uint64_t combo_seed = derive_seed(seed, combo++);
            std::vector<std::vector<double>> values(reps,
                                                    std::vector<double>(methods.size(), 0.0));
            parallel_for(reps, config.threads, [&](std::size_t r) {
                const std::uint64_t rep_seed = derive_seed(combo_seed, r);
                const PairedSample draw = generate_example1(model, lambda, n, rep_seed);
                for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                    values[r][mi] = evaluate_coefficient(methods[mi], draw,
                                                         derive_seed(rep_seed, 11 + mi), config);
                }
            });
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                double sum = 0;
                for (std::size_t r = 0; r < reps; ++r) sum += values[r][mi];
                t.add_row({model_name(model), lambda, method_name(methods[mi]),
                           sum / static_cast<double>(reps)});
            }
        }
    }
    return t;
}

Table power_curve(const std::vector<Model>& models, const std::vector<double>& lambdas,
                  const std::vector<Method>& methods, std::size_t n, std::size_t reps,
                  std::uint64_t seed, const ExperimentConfig& config) {
    if (reps < 1) throw invalid_parameter_error("power_curve: need reps >= 1");
    Table t;
    t.columns = {"model", "lambda", "method", "power"};
    set_experiment_meta(t, n, reps, seed, config);
    t.set_meta("level", format_double(config.level));
    t.set_meta("permutations", std::to_string(config.permutations));

    std::uint64_t combo = 0;
    for (const Model model : models) {
        for (const double lambda : lambdas) {
            const std::uint64_t combo_seed = derive_seed(seed, combo++);
            std::vector<std::vector<char>> rejected(reps,
                                                    std::vector<char>(methods.size(), 0));
            parallel_for(reps, config.threads, [&](std::size_t r) {
                const std::uint64_t rep_seed = derive_seed(combo_seed, r);
                const PairedSample draw = generate_example1(model, lambda, n, rep_seed);
                for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                    TestConfig tc;
                    tc.level = config.level;
                    tc.permutations = config.permutations;
                    tc.seed = derive_seed(rep_seed, 7 + mi);
                    tc.threads = 1;
                    tc.params = config.params;
                    const PairedSample oriented =
                        oriented_sample(draw, methods[mi], config.orientation);
                    rejected[r][mi] = independence_test(methods[mi], oriented, tc).reject();
                }
            });
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                std::size_t count = 0;
                for (std::size_t r = 0; r < reps; ++r) count += rejected[r][mi] != 0;
                t.add_row({model_name(model), lambda, method_name(methods[mi]),
                           static_cast<double>(count) / static_cast<double>(reps)});
            }
        }
    }
    return t;
}

} // namespace ddcor
