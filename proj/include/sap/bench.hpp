#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sap/inverter.hpp"
#include "sap/record.hpp"
#include "sap/sketch.hpp"

namespace sap {

/// How (mu, nu) are obtained for accelerated runs.
enum class ParamSource { Analytic, Oracle, Heuristic, Explicit };

struct ExperimentConfig {
    // problem
    std::string problem = "spectrum";  // alpha-beta | spectrum | dataset | logistic-synth
    double alpha = 1.0;
    double beta = 0.0;
    std::int64_t n = 10;
    std::vector<double> eigenvalues;   // spectrum problem
    std::uint64_t gen_seed = 0;
    std::string dataset_path;
    bool center = true;
    bool normalize_rows = true;
    bool add_bias = true;
    double lambda = -1.0;              // < 0 means 1/m
    // synthetic logistic
    std::int64_t synth_m = 500;
    std::int64_t synth_n = 20;

    // sketching
    SketchSpec sketch;

    // parameters
    ParamSource param_source = ParamSource::Analytic;
    double heuristic_divisor = 100.0;
    double explicit_mu = 0.0;
    double explicit_nu = 0.0;
    double omega = 1.0;

    // run control
    std::vector<std::string> modes;    // command-dependent tags
    std::int64_t max_iter = 1000;
    std::int64_t record_every = 10;
    double time_budget_s = 0.0;        // <= 0 means unlimited
    double cell_budget_s = 2.0;        // grid command
    std::vector<std::uint64_t> seeds = {1};
    std::string out_path;              // empty means stdout

    // optimizer
    double eta = 0.0;                  // <= 0 means grid search
    std::int64_t reference_iters = 2000;

    // weighted solve: "identity" or "system" (B = A)
    std::string solve_weight = "identity";
};

/// Flat `key = value` config file; '#' starts a comment. Unknown keys are an
/// error. Values use the same spellings as the CLI flags.
ExperimentConfig load_config(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<double> parse_value_list(const std::string& text);  // "1,1000*99" repeats
SketchStrategy parse_strategy(const std::string& name);

/// Builds the system matrix for matrix problems.
SymMatrix build_matrix(const ExperimentConfig& cfg);

void write_csv(const Trajectory& records, std::ostream& out);

struct GridCell {
    double mu = 0.0;
    double nu = 0.0;
    double ratio = 0.0;  // accel per-iteration decrease / plain; +inf when divergent
};
void write_grid_csv(const std::vector<GridCell>& cells, std::ostream& out);

// Subcommand drivers. Each returns the records it would persist so tests can
// inspect them without going through files.
void cmd_estimate(const ExperimentConfig& cfg, std::ostream& out);
Trajectory cmd_invert(const ExperimentConfig& cfg);
Trajectory cmd_solve(const ExperimentConfig& cfg);
Trajectory cmd_optimize(const ExperimentConfig& cfg);
std::vector<GridCell> cmd_grid(const ExperimentConfig& cfg);

/// Bounded worker pool size: ACCEL_SKETCH_THREADS, else hardware concurrency.
int worker_pool_size();

} // namespace sap
