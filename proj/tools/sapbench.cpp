#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "sap/bench.hpp"

namespace {

void add_common_flags(CLI::App* cmd, sap::ExperimentConfig& cfg, std::string& config_path,
                      std::string& seed_list, std::string& mode_list,
                      std::string& strategy, std::string& eig_list,
                      std::string& params_source) {
    cmd->add_option("--config", config_path, "flat key = value config file");
    cmd->add_option("--problem", cfg.problem, "alpha-beta | spectrum | dataset | logistic-synth");
    cmd->add_option("--alpha", cfg.alpha);
    cmd->add_option("--beta", cfg.beta);
    cmd->add_option("--n", cfg.n);
    cmd->add_option("--eigenvalues", eig_list, "comma list, 'v*count' repeats");
    cmd->add_option("--gen-seed", cfg.gen_seed);
    cmd->add_option("--dataset", cfg.dataset_path, "LIBSVM file path");
    cmd->add_option("--lambda", cfg.lambda, "regularizer; negative means 1/m");
    cmd->add_option("--synth-m", cfg.synth_m);
    cmd->add_option("--synth-n", cfg.synth_n);
    cmd->add_option("--strategy", strategy, "convenient | uniform | gaussian");
    cmd->add_option("--tau", cfg.sketch.sketch_rank);
    cmd->add_option("--params", params_source, "analytic | oracle | heuristic[:div] | explicit");
    cmd->add_option("--mu", cfg.explicit_mu);
    cmd->add_option("--nu", cfg.explicit_nu);
    cmd->add_option("--omega", cfg.omega);
    cmd->add_option("--mode", mode_list, "comma list of run modes");
    cmd->add_option("--max-iter", cfg.max_iter);
    cmd->add_option("--record-every", cfg.record_every);
    cmd->add_option("--time-budget-s", cfg.time_budget_s);
    cmd->add_option("--cell-budget-s", cfg.cell_budget_s);
    cmd->add_option("--seed-list", seed_list, "comma list, 'a..b' ranges");
    cmd->add_option("--out", cfg.out_path, "CSV output path (default stdout)");
    cmd->add_option("--eta", cfg.eta, "optimizer stepsize; <= 0 grid-searches");
    cmd->add_option("--weight", cfg.solve_weight, "identity | system");
}

sap::ExperimentConfig finalize(const sap::ExperimentConfig& flags, const std::string& config_path,
                               const std::string& seed_list, const std::string& mode_list,
                               const std::string& strategy, const std::string& eig_list,
                               const std::string& params_source) {
    sap::ExperimentConfig cfg = flags;
    if (!config_path.empty()) {
        // Config file provides the base; explicit flags already sit in `flags`,
        // so reload the file first and reapply flag-level overrides on top.
        sap::ExperimentConfig base = sap::load_config(config_path);
        // flag values that differ from a default-constructed config win
        sap::ExperimentConfig defaults;
        auto pick = [](auto flag_v, auto default_v, auto base_v) {
            return flag_v != default_v ? flag_v : base_v;
        };
        base.problem = pick(flags.problem, defaults.problem, base.problem);
        base.alpha = pick(flags.alpha, defaults.alpha, base.alpha);
        base.beta = pick(flags.beta, defaults.beta, base.beta);
        base.n = pick(flags.n, defaults.n, base.n);
        base.gen_seed = pick(flags.gen_seed, defaults.gen_seed, base.gen_seed);
        base.dataset_path = pick(flags.dataset_path, defaults.dataset_path, base.dataset_path);
        base.lambda = pick(flags.lambda, defaults.lambda, base.lambda);
        base.synth_m = pick(flags.synth_m, defaults.synth_m, base.synth_m);
        base.synth_n = pick(flags.synth_n, defaults.synth_n, base.synth_n);
        base.sketch.sketch_rank = pick(flags.sketch.sketch_rank, defaults.sketch.sketch_rank,
                                       base.sketch.sketch_rank);
        base.explicit_mu = pick(flags.explicit_mu, defaults.explicit_mu, base.explicit_mu);
        base.explicit_nu = pick(flags.explicit_nu, defaults.explicit_nu, base.explicit_nu);
        base.omega = pick(flags.omega, defaults.omega, base.omega);
        base.max_iter = pick(flags.max_iter, defaults.max_iter, base.max_iter);
        base.record_every = pick(flags.record_every, defaults.record_every, base.record_every);
        base.time_budget_s = pick(flags.time_budget_s, defaults.time_budget_s, base.time_budget_s);
        base.cell_budget_s = pick(flags.cell_budget_s, defaults.cell_budget_s, base.cell_budget_s);
        base.out_path = pick(flags.out_path, defaults.out_path, base.out_path);
        base.eta = pick(flags.eta, defaults.eta, base.eta);
        base.solve_weight = pick(flags.solve_weight, defaults.solve_weight, base.solve_weight);
        cfg = base;
    }
    if (!eig_list.empty()) cfg.eigenvalues = sap::parse_value_list(eig_list);
    if (!seed_list.empty()) cfg.seeds = sap::parse_seed_list(seed_list);
    if (!mode_list.empty()) sap::apply_config_entry(cfg, "mode", mode_list);
    if (!strategy.empty()) cfg.sketch.strategy = sap::parse_strategy(strategy);
    if (!params_source.empty()) sap::apply_config_entry(cfg, "params", params_source);
    if (cfg.explicit_mu > 0.0 && cfg.explicit_nu > 0.0 && params_source.empty())
        cfg.param_source = sap::ParamSource::Explicit;
    return cfg;
}

int write_out(const sap::ExperimentConfig& cfg, const std::function<void(std::ostream&)>& emit) {
    if (cfg.out_path.empty()) {
        emit(std::cout);
        return 0;
    }
    std::ofstream out(cfg.out_path);
    if (!out) {
        std::cerr << "error: cannot open output " << cfg.out_path << "\n";
        return 1;
    }
    emit(out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"accelerated sketch-and-project benchmark harness"};
    app.require_subcommand(1);

    struct SubState {
        sap::ExperimentConfig cfg;
        std::string config_path, seed_list, mode_list, strategy, eig_list, params_source;
    };
    std::map<std::string, SubState> states;
    for (const char* name : {"estimate", "invert", "solve", "optimize", "grid"}) {
        auto* cmd = app.add_subcommand(name);
        auto& st = states[name];
        add_common_flags(cmd, st.cfg, st.config_path, st.seed_list, st.mode_list,
                         st.strategy, st.eig_list, st.params_source);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const auto& st = states[name];
    try {
        sap::ExperimentConfig cfg = finalize(st.cfg, st.config_path, st.seed_list,
                                             st.mode_list, st.strategy, st.eig_list,
                                             st.params_source);
        if (name == "estimate")
            return write_out(cfg, [&](std::ostream& o) { sap::cmd_estimate(cfg, o); });
        if (name == "invert") {
            auto records = sap::cmd_invert(cfg);
            return write_out(cfg, [&](std::ostream& o) { sap::write_csv(records, o); });
        }
        if (name == "solve") {
            auto records = sap::cmd_solve(cfg);
            return write_out(cfg, [&](std::ostream& o) { sap::write_csv(records, o); });
        }
        if (name == "optimize") {
            auto records = sap::cmd_optimize(cfg);
            return write_out(cfg, [&](std::ostream& o) { sap::write_csv(records, o); });
        }
        if (name == "grid") {
            auto cells = sap::cmd_grid(cfg);
            return write_out(cfg, [&](std::ostream& o) { sap::write_grid_csv(cells, o); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
