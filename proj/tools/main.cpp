// ddcor: dependence coefficients, independence tests, feature screening and
// simulation experiments over CSV inputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ddcor/csv.hpp"
#include "ddcor/errors.hpp"
#include "ddcor/inference.hpp"
#include "ddcor/measures.hpp"
#include "ddcor/parallel.hpp"
#include "ddcor/rng.hpp"
#include "ddcor/screening.hpp"
#include "ddcor/simulation.hpp"
#include "ddcor/table.hpp"

namespace {

using namespace ddcor;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;      // configuration / parse errors
constexpr int kExitDegenerate = 3; // numerical degeneracy

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Method> parse_methods(const std::string& text) {
    if (text == "all") {
        return {Method::DDC, Method::Chatterjee, Method::DC, Method::HSIC, Method::PCor};
    }
    std::vector<Method> out;
    for (const auto& name : split_list(text)) out.push_back(method_from_name(name));
    if (out.empty()) throw config_error("empty method list");
    return out;
}

struct IoOptions {
    std::string input;
    std::string delimiter = ",";
    bool no_header = false;
    std::string response;
    std::string predictors; // empty = all non-response columns
    std::string format = "csv";
    std::string output; // empty = stdout
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t permutations = 500;
    double level = 0.05;
    unsigned threads = 0;
    double hsic_bandwidth = kDefaultHsicBandwidth;
    double pcor_sigma_sq = kDefaultPcorSigmaSq;

    MeasureParams params() const { return MeasureParams{hsic_bandwidth, pcor_sigma_sq}; }
};

char delimiter_char(const IoOptions& io) {
    if (io.delimiter.size() != 1) {
        throw config_error("--delimiter must be a single character");
    }
    return io.delimiter[0];
}

struct LoadedData {
    std::vector<std::string> response_names;
    std::vector<std::string> predictor_names;
    RealMatrix y; // n x q
    RealMatrix x; // n x p
};

LoadedData load_data(const IoOptions& io, bool standardize_data) {
    const Dataset ds = read_delimited(io.input, delimiter_char(io), !io.no_header);

    LoadedData data;
    data.response_names = split_list(io.response);
    if (data.response_names.empty()) {
        throw config_error("--response is required and must name at least one column");
    }
    const std::set<std::string> response_set(data.response_names.begin(),
                                             data.response_names.end());
    if (io.predictors.empty()) {
        for (const auto& c : ds.columns) {
            if (!response_set.count(c)) data.predictor_names.push_back(c);
        }
    } else {
        data.predictor_names = split_list(io.predictors);
    }
    if (data.predictor_names.empty()) {
        throw config_error("no predictor columns selected");
    }
    for (const auto& name : data.predictor_names) {
        if (response_set.count(name)) {
            throw config_error("column '" + name + "' used as both response and predictor");
        }
    }

    data.y = ds.numeric_columns(data.response_names);
    data.x = ds.numeric_columns(data.predictor_names);
    if (data.x.rows() < 2) throw insufficient_sample_error("need at least 2 rows");
    if (standardize_data) {
        standardize_columns(data.x);
        standardize_columns(data.y);
    }
    return data;
}

void emit(const Table& table, const IoOptions& io) {
    const std::string text = io.format == "json" ? to_json(table) : to_csv(table);
    if (io.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(io.output, std::ios::binary);
        if (!out) throw config_error("cannot open output file '" + io.output + "'");
        out << text;
    }
}

double compute_coefficient(Method method, const LoadedData& data, std::uint64_t tie_seed,
                           const MeasureParams& params) {
    const std::vector<double> y0 = data.y.column_values(0);
    switch (method) {
        case Method::DDC:
            return ddc(PairedSample(data.x, y0), tie_seed);
        case Method::Chatterjee:
            if (data.x.cols() != 1) {
                throw invalid_dimension_error("chatterjee requires exactly one predictor column");
            }
            return chatterjee_xi(data.x.column_values(0), y0, tie_seed);
        case Method::DC:
            return distance_correlation(data.x, data.y);
        case Method::HSIC:
            return hsic(data.x, data.y, params.hsic_bandwidth);
        case Method::PCor:
            return projection_correlation(data.x, data.y, params.pcor_sigma_sq);
    }
    throw config_error("unknown method");
}

int cmd_compute(const IoOptions& io, const RunOptions& run, const std::string& methods_text,
                bool standardize_data) {
    const auto methods = parse_methods(methods_text);
    const LoadedData data = load_data(io, standardize_data);
    if (data.y.cols() != 1) {
        throw config_error("compute expects exactly one response column");
    }

    Table t;
    t.columns = {"method", "value", "n", "p"};
    t.set_meta("input", io.input);
    t.set_meta("seed", std::to_string(run.seed));
    t.set_meta("standardize", standardize_data ? "true" : "false");
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const double value = compute_coefficient(methods[mi], data,
                                                 derive_seed(run.seed, mi), run.params());
        t.add_row({method_name(methods[mi]), value,
                   static_cast<std::int64_t>(data.x.rows()),
                   static_cast<std::int64_t>(data.x.cols())});
    }
    emit(t, io);
    return kExitOk;
}

int cmd_test(const IoOptions& io, const RunOptions& run, const std::string& methods_text,
             bool standardize_data) {
    const auto methods = parse_methods(methods_text);
    const LoadedData data = load_data(io, standardize_data);
    if (data.y.cols() != 1) {
        throw config_error("test expects exactly one response column");
    }
    const PairedSample sample(data.x, data.y.column_values(0));

    Table t;
    t.columns = {"method", "value", "p_value", "p_source", "permutations",
                 "level",  "reject", "n",      "p"};
    t.set_meta("input", io.input);
    t.set_meta("seed", std::to_string(run.seed));
    t.set_meta("standardize", standardize_data ? "true" : "false");
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        TestConfig tc;
        tc.level = run.level;
        tc.permutations = run.permutations;
        tc.seed = derive_seed(run.seed, mi);
        tc.threads = resolve_threads(run.threads);
        tc.params = run.params();
        const TestResult res = independence_test(methods[mi], sample, tc);
        t.add_row({method_name(methods[mi]), res.estimate.value, res.p_value,
                   p_source_name(res.p_source), static_cast<std::int64_t>(res.permutations),
                   res.level, std::string(res.reject() ? "true" : "false"),
                   static_cast<std::int64_t>(res.estimate.n),
                   static_cast<std::int64_t>(res.estimate.p)});
    }
    emit(t, io);
    return kExitOk;
}

int cmd_screen(const IoOptions& io, const RunOptions& run, const std::string& method_text,
               bool standardize_data, const std::string& scatter_path) {
    const Method method = method_from_name(method_text);
    const LoadedData data = load_data(io, standardize_data);
    const std::size_t n = data.x.rows();
    const std::size_t p = data.x.cols();
    if (method == Method::Chatterjee && data.y.cols() != 1) {
        throw config_error("chatterjee screening needs exactly one response column");
    }

    const MultiResponseDraw draw{data.x, data.y};
    const auto ranking =
        rank_features(draw, method, derive_seed(run.seed, 0), run.params(),
                      resolve_threads(run.threads));

    // p-values in predictor order, then reported in ranking order.
    std::vector<double> pvalues(p, 1.0);
    PValueSource source = PValueSource::Asymptotic;
    if (method == Method::DDC) {
        const VarianceEstimate var_y = ddc_variance_estimate(data.y);
        for (const auto& rf : ranking) {
            pvalues[rf.index] = ddc_asymptotic_pvalue(rf.value, var_y);
        }
    } else if (method == Method::Chatterjee) {
        for (const auto& rf : ranking) {
            pvalues[rf.index] = chatterjee_asymptotic_pvalue(rf.value, n);
        }
    } else {
        source = PValueSource::Permutation;
        parallel_for(p, resolve_threads(run.threads), [&](std::size_t j) {
            pvalues[j] = permutation_pvalue_xy(
                method, RealMatrix::column(data.x.column_values(j)), data.y,
                run.permutations, derive_seed(run.seed, 1 + j), run.params(), 1);
        });
    }

    Table t;
    t.columns = {"rank", "predictor", "value", "p_value", "significant"};
    t.set_meta("input", io.input);
    t.set_meta("method", method_name(method));
    t.set_meta("p_source", p_source_name(source));
    t.set_meta("level", format_double(run.level));
    t.set_meta("permutations",
               std::to_string(source == PValueSource::Permutation ? run.permutations : 0));
    t.set_meta("standardize", standardize_data ? "true" : "false");
    t.set_meta("seed", std::to_string(run.seed));
    t.set_meta("n", std::to_string(n));
    t.set_meta("p", std::to_string(p));
    std::size_t significant = 0;
    for (std::size_t k = 0; k < ranking.size(); ++k) {
        const bool sig = pvalues[ranking[k].index] <= run.level;
        significant += sig;
        t.add_row({static_cast<std::int64_t>(k + 1), data.predictor_names[ranking[k].index],
                   ranking[k].value, pvalues[ranking[k].index],
                   std::string(sig ? "true" : "false")});
    }
    t.set_meta("significant", std::to_string(significant));
    emit(t, io);

    if (!scatter_path.empty()) {
        Table scatter;
        scatter.columns = {"predictor", "row", "x"};
        for (const auto& rn : data.response_names) scatter.columns.push_back(rn);
        scatter.set_meta("input", io.input);
        scatter.set_meta("standardize", standardize_data ? "true" : "false");
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<Cell> row{data.predictor_names[j],
                                      static_cast<std::int64_t>(i + 1), data.x(i, j)};
                for (std::size_t q = 0; q < data.y.cols(); ++q) row.push_back(data.y(i, q));
                scatter.add_row(std::move(row));
            }
        }
        std::ofstream out(scatter_path, std::ios::binary);
        if (!out) throw config_error("cannot open scatter output file '" + scatter_path + "'");
        out << (io.format == "json" ? to_json(scatter) : to_csv(scatter));
    }
    return kExitOk;
}

// ----- simulate ------------------------------------------------------------

struct Overrides {
    std::map<std::string, std::string> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    }
    std::size_t get_count(const std::string& key, std::size_t fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        return static_cast<std::size_t>(std::stoull(it->second));
    }
    std::vector<double> get_reals(const std::string& key,
                                  const std::vector<double>& fallback) const {
        auto it = values.find(key);
        if (it == values.end()) return fallback;
        std::vector<double> out;
        for (const auto& s : split_list(it->second)) out.push_back(std::stod(s));
        if (out.empty()) throw config_error("empty list for key '" + key + "'");
        return out;
    }
};

Overrides parse_overrides(const std::vector<std::string>& sets,
                          const std::vector<std::string>& valid_keys) {
    Overrides o;
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw config_error("override '" + kv + "' is not of the form key=value");
        }
        const std::string key = kv.substr(0, eq);
        bool known = false;
        for (const auto& k : valid_keys) known = known || k == key;
        if (!known) {
            std::string keys;
            for (const auto& k : valid_keys) {
                if (!keys.empty()) keys += ", ";
                keys += k;
            }
            throw config_error("unknown override key '" + key + "' (valid keys: " + keys + ")");
        }
        o.values[key] = kv.substr(eq + 1);
    }
    return o;
}

std::vector<Model> parse_models(const std::string& text) {
    std::vector<Model> out;
    for (const auto& name : split_list(text)) out.push_back(model_from_name(name));
    if (out.empty()) throw config_error("empty model list");
    return out;
}

std::string joined_names(const std::vector<Model>& models) {
    std::string out;
    for (const auto& m : models) {
        if (!out.empty()) out += ",";
        out += model_name(m);
    }
    return out;
}

std::string joined_names(const std::vector<Method>& methods) {
    std::string out;
    for (const auto& m : methods) {
        if (!out.empty()) out += ",";
        out += method_name(m);
    }
    return out;
}

int cmd_simulate(const IoOptions& io, const RunOptions& run, const std::string& experiment,
                 const std::vector<std::string>& sets, const std::string& orientation_text,
                 bool wide) {
    std::string exp;
    for (char c : experiment) exp.push_back(static_cast<char>(std::tolower(c)));

    ExperimentConfig config;
    config.level = run.level;
    config.permutations = run.permutations;
    config.threads = resolve_threads(run.threads);
    config.orientation = orientation_from_name(orientation_text);
    config.params = run.params();

    Table t;
    if (exp == "example1means" || exp == "example1power") {
        const Overrides o =
            parse_overrides(sets, {"n", "reps", "models", "lambdas", "methods"});
        const std::size_t n = o.get_count("n", 100);
        const std::size_t reps = o.get_count("reps", 500);
        const auto methods = parse_methods(o.get("methods", "all"));
        if (exp == "example1means") {
            const auto models =
                parse_models(o.get("models", "quadratic,sinusoid,step"));
            const auto lambdas = o.get_reals("lambdas", {0.1, 0.3, 0.5, 0.7, 0.9});
            t = coefficient_mean_table(models, lambdas, methods, n, reps, run.seed, config);
            t.set_meta("experiment", "Example1Means");
            t.set_meta("models", joined_names(models));
        } else {
            const auto models = parse_models(o.get(
                "models", "linear,quadratic,sinusoid,damped_oscillator,w_shaped,step"));
            const auto lambdas = o.get_reals("lambdas", default_lambda_grid());
            t = power_curve(models, lambdas, methods, n, reps, run.seed, config);
            t.set_meta("experiment", "Example1Power");
            t.set_meta("models", joined_names(models));
        }
        t.set_meta("methods", joined_names(parse_methods(o.get("methods", "all"))));
        if (wide) {
            t = pivot_wide(t, {"model", "method"}, "lambda",
                           exp == "example1means" ? "mean_value" : "power");
        }
    } else if (exp == "example2screening") {
        const Overrides o = parse_overrides(sets, {"n", "p", "reps", "rhos", "methods"});
        SimulationSpec spec;
        spec.model = Model::MultiResponse;
        spec.n = o.get_count("n", 200);
        spec.p = o.get_count("p", 500);
        spec.reps = o.get_count("reps", 100);
        spec.seed = run.seed;
        const auto methods = parse_methods(o.get("methods", "ddc,dc,pcor,hsic"));
        const auto rhos = o.get_reals("rhos", {0.3});

        t.columns = {"method", "rho",       "P1",          "P2",  "P3", "P4",
                     "mms_median", "mms_sd", "selected_size"};
        t.set_meta("experiment", "Example2Screening");
        t.set_meta("n", std::to_string(spec.n));
        t.set_meta("p", std::to_string(spec.p));
        t.set_meta("reps", std::to_string(spec.reps));
        t.set_meta("seed", std::to_string(run.seed));
        t.set_meta("methods", joined_names(methods));
        for (const double rho : rhos) {
            spec.rho = rho;
            for (const Method method : methods) {
                const ScreeningReport rep =
                    screening_report(spec, method, run.params(), config.threads);
                t.add_row({method_name(method), rho, rep.per_predictor_proportion[0],
                           rep.per_predictor_proportion[1], rep.per_predictor_proportion[2],
                           rep.per_predictor_proportion[3], rep.mms_median, rep.mms_sd,
                           static_cast<std::int64_t>(rep.selected_size)});
            }
        }
    } else if (exp == "example2power") {
        const Overrides o =
            parse_overrides(sets, {"n", "p", "reps", "rhos", "methods", "predictors"});
        SimulationSpec spec;
        spec.model = Model::MultiResponse;
        spec.n = o.get_count("n", 200);
        spec.p = o.get_count("p", 500);
        spec.reps = o.get_count("reps", 100);
        spec.seed = run.seed;
        const auto methods = parse_methods(o.get("methods", "ddc,dc,pcor,hsic"));
        const auto rhos = o.get_reals("rhos", {0.3});
        std::vector<std::size_t> predictors = {0, 1, 2, 3};
        if (o.has("predictors")) {
            predictors.clear();
            for (const auto& s : split_list(o.values.at("predictors"))) {
                const std::size_t one_based = std::stoull(s);
                if (one_based == 0) throw config_error("predictor indices are 1-based");
                predictors.push_back(one_based - 1);
            }
        }
        TestConfig tc;
        tc.level = run.level;
        tc.permutations = run.permutations;
        tc.seed = run.seed;
        tc.threads = config.threads;
        tc.params = run.params();
        bool first = true;
        for (const double rho : rhos) {
            spec.rho = rho;
            Table part = screening_power_table(spec, methods, run.level, tc, predictors);
            if (first) {
                t = std::move(part);
                t.set_meta("experiment", "Example2Power");
                t.set_meta("methods", joined_names(methods));
                first = false;
            } else {
                for (auto& row : part.rows) t.rows.push_back(std::move(row));
            }
        }
        if (wide) t = pivot_wide(t, {"method", "rho"}, "predictor", "power");
    } else {
        throw config_error("unknown experiment '" + experiment +
                           "' (expected Example1Power, Example1Means, Example2Screening, "
                           "Example2Power)");
    }

    t.set_meta("level", format_double(run.level));
    t.set_meta("permutations", std::to_string(run.permutations));
    t.set_meta("seed", std::to_string(run.seed));
    emit(t, io);
    return kExitOk;
}

void add_io_options(CLI::App* sub, IoOptions& io, bool needs_input) {
    if (needs_input) {
        sub->add_option("--input", io.input, "Input delimited file")->required();
        sub->add_option("--delimiter", io.delimiter, "Field delimiter (default ',')");
        sub->add_flag("--no-header", io.no_header,
                      "Input has no header row; columns are named 1, 2, ...");
    }
    sub->add_option("--format", io.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", io.output, "Output file (default stdout)");
}

void add_run_options(CLI::App* sub, RunOptions& run) {
    sub->add_option("--seed", run.seed, "RNG seed (default 0)");
    sub->add_option("--permutations", run.permutations,
                    "Permutation count for DC/HSIC/PCor p-values (default 500)");
    sub->add_option("--level", run.level, "Significance level (default 0.05)");
    sub->add_option("--threads", run.threads, "Worker threads, 0 = auto (default 0)");
    sub->add_option("--hsic-bandwidth", run.hsic_bandwidth,
                    "Gaussian kernel bandwidth for HSIC (default sqrt(0.5))");
    sub->add_option("--pcor-sigma-sq", run.pcor_sigma_sq,
                    "sigma^2 offset of the projection correlation kernel (default 1)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ddcor: dependence measures, independence tests and feature screening"};
    app.require_subcommand(1);

    IoOptions compute_io, test_io, screen_io, sim_io;
    RunOptions compute_run, test_run, screen_run, sim_run;
    std::string compute_methods = "all", test_methods = "all", screen_method = "ddc";
    std::string compute_response, test_response, screen_response;
    bool compute_standardize = false, test_standardize = false;
    bool screen_no_standardize = false;
    std::string scatter_path;
    std::string experiment, orientation = "response_given_covariate";
    std::vector<std::string> sim_sets;
    bool sim_wide = false;

    auto* compute = app.add_subcommand("compute", "Compute dependence coefficients");
    add_io_options(compute, compute_io, true);
    add_run_options(compute, compute_run);
    compute->add_option("--response", compute_io.response, "Response column")->required();
    compute->add_option("--predictors", compute_io.predictors,
                        "Predictor columns (default: all non-response)");
    compute->add_option("--methods", compute_methods,
                        "Comma list of ddc, chatterjee, dc, hsic, pcor, or 'all'");
    compute->add_flag("--standardize", compute_standardize, "Standardize columns first");

    auto* test = app.add_subcommand("test", "Run independence tests");
    add_io_options(test, test_io, true);
    add_run_options(test, test_run);
    test->add_option("--response", test_io.response, "Response column")->required();
    test->add_option("--predictors", test_io.predictors,
                     "Predictor columns (default: all non-response)");
    test->add_option("--methods", test_methods,
                     "Comma list of ddc, chatterjee, dc, hsic, pcor, or 'all'");
    test->add_flag("--standardize", test_standardize, "Standardize columns first");

    auto* screen = app.add_subcommand("screen", "Rank predictors against the response");
    add_io_options(screen, screen_io, true);
    add_run_options(screen, screen_run);
    screen->add_option("--response", screen_io.response,
                       "Response column(s), comma separated")->required();
    screen->add_option("--predictors", screen_io.predictors,
                       "Predictor columns (default: all non-response)");
    screen->add_option("--method", screen_method, "Ranking method (default ddc)");
    screen->add_flag("--no-standardize", screen_no_standardize,
                     "Skip column standardization (on by default for screening)");
    screen->add_option("--export-scatter", scatter_path,
                       "Also write per-predictor (x, response) pairs to this file");

    auto* simulate = app.add_subcommand("simulate", "Run a built-in simulation experiment");
    add_io_options(simulate, sim_io, false);
    add_run_options(simulate, sim_run);
    simulate
        ->add_option("--experiment", experiment,
                     "Example1Power, Example1Means, Example2Screening or Example2Power")
        ->required();
    simulate->add_option("--set", sim_sets, "Experiment override key=value (repeatable)");
    simulate->add_option("--orientation", orientation,
                         "DDC/Chatterjee orientation: response_given_covariate or "
                         "covariate_given_response");
    simulate->add_flag("--wide", sim_wide, "Pivot the long table to a wide layout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (compute->parsed()) {
            return cmd_compute(compute_io, compute_run, compute_methods, compute_standardize);
        }
        if (test->parsed()) {
            return cmd_test(test_io, test_run, test_methods, test_standardize);
        }
        if (screen->parsed()) {
            return cmd_screen(screen_io, screen_run, screen_method, !screen_no_standardize,
                              scatter_path);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_io, sim_run, experiment, sim_sets, orientation, sim_wide);
        }
    } catch (const degenerate_response_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const degenerate_sample_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const degenerate_variance_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
