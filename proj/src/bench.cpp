#include "sap/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "sap/bfgs.hpp"
#include "sap/dataio.hpp"
#include "sap/oracle.hpp"
#include "sap/solver.hpp"

namespace sap {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double resolve_lambda(const ExperimentConfig& cfg, Eigen::Index m) {
    return cfg.lambda >= 0.0 ? cfg.lambda : 1.0 / static_cast<double>(m);
}

double budget(const ExperimentConfig& cfg) {
    return cfg.time_budget_s > 0.0 ? cfg.time_budget_s
                                   : std::numeric_limits<double>::infinity();
}

void format_double(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

// Runs tasks on the bounded pool, preserving task order in the output.
template <typename Task>
void run_parallel(std::vector<Task>& tasks) {
    const int workers = std::min<int>(worker_pool_size(), static_cast<int>(tasks.size()));
    if (workers <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                tasks[i]();
            }
        });
    }
    for (auto& th : pool) th.join();
}

AccelParams resolve_params(const ExperimentConfig& cfg, const SymMatrix& a,
                           bool matrix_case) {
    switch (cfg.param_source) {
        case ParamSource::Explicit:
            if (!(cfg.explicit_mu > 0.0) || !(cfg.explicit_nu > 0.0))
                throw InputError("explicit parameter source requires --mu and --nu");
            return derive_params(cfg.explicit_mu, cfg.explicit_nu, cfg.omega);
        case ParamSource::Heuristic: {
            ParamEstimate est = estimate_params_convenient(a);
            return derive_params(heuristic_mu(est.nu, cfg.heuristic_divisor), est.nu,
                                 cfg.omega);
        }
        case ParamSource::Oracle: {
            SketchSpec coord = cfg.sketch;
            if (coord.strategy == SketchStrategy::Gaussian)
                throw UnsupportedForEnumeration(
                    "oracle parameters require a coordinate sketch strategy");
            if (matrix_case) {
                auto atoms = enumerate_Zbar_matrix(a, coord);
                auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(atoms));
                return derive_params(mu, nu, cfg.omega);
            }
            auto atoms = enumerate_Z_vector(a, a, coord);
            auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(atoms));
            return derive_params(mu, nu, cfg.omega);
        }
        case ParamSource::Analytic:
        default: {
            ParamEstimate est = estimate_params_convenient(a);
            return derive_params(est.mu, est.nu, cfg.omega);
        }
    }
}

Matrix synth_logistic_features(std::int64_t m, std::int64_t n, std::uint64_t seed,
                               Vector& labels) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix feats(m, n);
    Vector w_true(n);
    for (Eigen::Index j = 0; j < n; ++j) w_true(j) = normal(rng);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) feats(i, j) = normal(rng);
        feats.row(i) /= std::sqrt(static_cast<double>(n));
    }
    labels = Vector(m);
    for (Eigen::Index i = 0; i < m; ++i)
        labels(i) = feats.row(i).dot(w_true) >= 0.0 ? 1.0 : -1.0;
    return feats;
}

std::unique_ptr<LogisticObjective> build_objective(const ExperimentConfig& cfg) {
    if (cfg.problem == "logistic-synth") {
        Vector labels;
        Matrix feats = synth_logistic_features(cfg.synth_m, cfg.synth_n, cfg.gen_seed, labels);
        return std::make_unique<LogisticObjective>(std::move(feats), std::move(labels),
                                                   resolve_lambda(cfg, cfg.synth_m));
    }
    if (cfg.problem == "dataset") {
        Dataset ds = parse_libsvm(cfg.dataset_path);
        ds = preprocess(std::move(ds), cfg.center, cfg.normalize_rows, cfg.add_bias);
        double lambda = resolve_lambda(cfg, ds.features.rows());
        return std::make_unique<LogisticObjective>(std::move(ds.features),
                                                   std::move(ds.labels), lambda);
    }
    throw InputError("optimize: problem must be 'dataset' or 'logistic-synth'");
}

// Per-iteration geometric decrease factor of the recorded residual.
double decay_factor(const Trajectory& records) {
    if (records.size() < 2) return std::numeric_limits<double>::infinity();
    double r0 = records.front().residual;
    double rk = records.back().residual;
    double iters = static_cast<double>(records.back().iteration - records.front().iteration);
    if (!(r0 > 0.0) || !(rk > 0.0) || !(rk < r0) || iters <= 0.0)
        return std::numeric_limits<double>::infinity();
    return std::exp(std::log(rk / r0) / iters);
}

} // namespace

int worker_pool_size() {
    if (const char* env = std::getenv("ACCEL_SKETCH_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

SketchStrategy parse_strategy(const std::string& name) {
    if (name == "convenient") return SketchStrategy::CoordinateConvenient;
    if (name == "uniform") return SketchStrategy::CoordinateUniform;
    if (name == "gaussian") return SketchStrategy::Gaussian;
    throw InputError("unknown sketch strategy '" + name + "'");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        auto dots = tok.find("..");
        if (dots != std::string::npos) {
            std::uint64_t lo = std::stoull(tok.substr(0, dots));
            std::uint64_t hi = std::stoull(tok.substr(dots + 2));
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
            seeds.push_back(std::stoull(tok));
        }
    }
    if (seeds.empty()) throw InputError("empty seed list");
    return seeds;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        auto star = tok.find('*');
        if (star != std::string::npos) {
            double v = std::stod(tok.substr(0, star));
            long count = std::stol(tok.substr(star + 1));
            for (long c = 0; c < count; ++c) values.push_back(v);
        } else {
            values.push_back(std::stod(tok));
        }
    }
    return values;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "problem") cfg.problem = value;
    else if (key == "alpha") cfg.alpha = std::stod(value);
    else if (key == "beta") cfg.beta = std::stod(value);
    else if (key == "n") cfg.n = std::stoll(value);
    else if (key == "eigenvalues") cfg.eigenvalues = parse_value_list(value);
    else if (key == "gen-seed") cfg.gen_seed = std::stoull(value);
    else if (key == "dataset") cfg.dataset_path = value;
    else if (key == "center") cfg.center = value == "true" || value == "1";
    else if (key == "normalize") cfg.normalize_rows = value == "true" || value == "1";
    else if (key == "add-bias") cfg.add_bias = value == "true" || value == "1";
    else if (key == "lambda") cfg.lambda = std::stod(value);
    else if (key == "synth-m") cfg.synth_m = std::stoll(value);
    else if (key == "synth-n") cfg.synth_n = std::stoll(value);
    else if (key == "strategy") cfg.sketch.strategy = parse_strategy(value);
    else if (key == "tau") cfg.sketch.sketch_rank = std::stoi(value);
    else if (key == "params") {
        if (value == "analytic") cfg.param_source = ParamSource::Analytic;
        else if (value == "oracle") cfg.param_source = ParamSource::Oracle;
        else if (value.rfind("heuristic", 0) == 0) {
            cfg.param_source = ParamSource::Heuristic;
            auto colon = value.find(':');
            if (colon != std::string::npos)
                cfg.heuristic_divisor = std::stod(value.substr(colon + 1));
        } else if (value == "explicit") {
            cfg.param_source = ParamSource::Explicit;
        } else {
            throw InputError("unknown parameter source '" + value + "'");
        }
    }
    else if (key == "mu") { cfg.explicit_mu = std::stod(value); cfg.param_source = ParamSource::Explicit; }
    else if (key == "nu") { cfg.explicit_nu = std::stod(value); cfg.param_source = ParamSource::Explicit; }
    else if (key == "omega") cfg.omega = std::stod(value);
    else if (key == "mode") {
        cfg.modes.clear();
        std::istringstream ms(value);
        std::string m;
        while (std::getline(ms, m, ',')) if (!trim(m).empty()) cfg.modes.push_back(trim(m));
    }
    else if (key == "max-iter") cfg.max_iter = std::stoll(value);
    else if (key == "record-every") cfg.record_every = std::stoll(value);
    else if (key == "time-budget-s") cfg.time_budget_s = std::stod(value);
    else if (key == "cell-budget-s") cfg.cell_budget_s = std::stod(value);
    else if (key == "seed-list") cfg.seeds = parse_seed_list(value);
    else if (key == "out") cfg.out_path = value;
    else if (key == "eta") cfg.eta = std::stod(value);
    else if (key == "reference-iters") cfg.reference_iters = std::stoll(value);
    else if (key == "weight") cfg.solve_weight = value;
    else throw InputError("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

SymMatrix build_matrix(const ExperimentConfig& cfg) {
    if (cfg.problem == "alpha-beta") return gen_alpha_beta(cfg.alpha, cfg.beta, cfg.n);
    if (cfg.problem == "spectrum") {
        if (cfg.eigenvalues.empty()) throw InputError("spectrum problem needs eigenvalues");
        Vector eigs = Eigen::Map<const Vector>(cfg.eigenvalues.data(),
                                               static_cast<Eigen::Index>(cfg.eigenvalues.size()));
        return gen_spectrum(eigs, cfg.gen_seed);
    }
    if (cfg.problem == "dataset") {
        Dataset ds = parse_libsvm(cfg.dataset_path);
        ds = preprocess(std::move(ds), cfg.center, cfg.normalize_rows, cfg.add_bias);
        return ridge_hessian(ds.features, resolve_lambda(cfg, ds.features.rows()));
    }
    throw InputError("unknown problem '" + cfg.problem + "'");
}

void write_csv(const Trajectory& records, std::ostream& out) {
    out << "method,seed,iteration,elapsed_s,residual,lyapunov,lambda_min_X\n";
    for (const auto& r : records) {
        out << r.method << ',' << r.seed << ',' << r.iteration << ',';
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.6f", r.elapsed_s);
        out << buf << ',';
        format_double(out, r.residual);
        out << ',';
        if (r.lyapunov) format_double(out, *r.lyapunov);
        out << ',';
        if (r.lambda_min_x) format_double(out, *r.lambda_min_x);
        out << '\n';
    }
}

void write_grid_csv(const std::vector<GridCell>& cells, std::ostream& out) {
    out << "mu,nu,ratio\n";
    for (const auto& c : cells) {
        format_double(out, c.mu);
        out << ',';
        format_double(out, c.nu);
        out << ',';
        if (std::isinf(c.ratio)) out << "inf";
        else format_double(out, c.ratio);
        out << '\n';
    }
}

void cmd_estimate(const ExperimentConfig& cfg, std::ostream& out) {
    SymMatrix a = build_matrix(cfg);
    ParamEstimate est = estimate_params_convenient(a);
    out << "n = " << a.n() << "\n";
    out << "mu_analytic = ";
    format_double(out, est.mu);
    out << "\nnu_analytic = ";
    format_double(out, est.nu);
    out << "\n";
    SketchSpec coord = cfg.sketch;
    if (coord.strategy == SketchStrategy::Gaussian) {
        out << "# oracle skipped: Gaussian sketches are not enumerable\n";
        return;
    }
    if (a.n() <= 64) {
        auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(enumerate_Z_vector(a, a, coord)));
        out << "mu_oracle_vector = ";
        format_double(out, mu);
        out << "\nnu_oracle_vector = ";
        format_double(out, nu);
        out << "\n";
    } else {
        out << "# vector oracle skipped: n > 64\n";
    }
    if (a.n() <= 24) {
        auto [mu, nu] = mu_nu_bruteforce(moments_from_atoms(enumerate_Zbar_matrix(a, coord)));
        out << "mu_oracle_matrix = ";
        format_double(out, mu);
        out << "\nnu_oracle_matrix = ";
        format_double(out, nu);
        out << "\n";
    } else {
        out << "# matrix oracle skipped: n > 24\n";
    }
}

Trajectory cmd_invert(const ExperimentConfig& cfg) {
    SymMatrix a = build_matrix(cfg);
    std::vector<std::string> modes = cfg.modes.empty()
                                         ? std::vector<std::string>{"plain", "accel"}
                                         : cfg.modes;
    AccelParams p = derive_params(1.0, 1.0);  // placeholder for plain-only runs
    bool need_accel = false;
    for (const auto& m : modes)
        if (m == "accel" || m == "accel-nosym") need_accel = true;
    if (need_accel) p = resolve_params(cfg, a, /*matrix_case=*/true);

    struct Slot { Trajectory records; };
    std::vector<Slot> slots(modes.size() * cfg.seeds.size());
    std::vector<std::function<void()>> tasks;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        InvertMode mode;
        if (modes[mi] == "plain") mode = InvertMode::Plain;
        else if (modes[mi] == "accel") mode = InvertMode::Accel;
        else if (modes[mi] == "plain-nosym") mode = InvertMode::PlainNosym;
        else if (modes[mi] == "accel-nosym") mode = InvertMode::AccelNosym;
        else throw InputError("unknown invert mode '" + modes[mi] + "'");
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
            std::size_t slot = mi * cfg.seeds.size() + si;
            tasks.emplace_back([&, mode, slot, mi, si] {
                InvertOptions opts;
                opts.mode = mode;
                opts.max_iter = cfg.max_iter;
                opts.record_every = cfg.record_every;
                opts.time_budget_s = budget(cfg);
                slots[slot].records =
                    invert(a, cfg.sketch, p, opts, cfg.seeds[si], modes[mi]).records;
            });
        }
    }
    run_parallel(tasks);
    Trajectory all;
    for (auto& s : slots)
        all.insert(all.end(), s.records.begin(), s.records.end());
    return all;
}

Trajectory cmd_solve(const ExperimentConfig& cfg) {
    SymMatrix a = build_matrix(cfg);
    Vector b = a.mat() * Vector::Ones(a.n());
    std::vector<std::string> modes = cfg.modes.empty()
                                         ? std::vector<std::string>{"plain", "accelerated"}
                                         : cfg.modes;
    bool need_accel = false;
    for (const auto& m : modes)
        if (m == "accelerated") need_accel = true;
    AccelParams p = derive_params(1.0, 1.0);
    if (need_accel) p = resolve_params(cfg, a, /*matrix_case=*/false);

    const bool weighted = cfg.solve_weight == "system";
    struct Slot { Trajectory records; };
    std::vector<Slot> slots(modes.size() * cfg.seeds.size());
    std::vector<std::function<void()>> tasks;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        SolveMode mode;
        if (modes[mi] == "plain") mode = SolveMode::Plain;
        else if (modes[mi] == "accelerated") mode = SolveMode::Accelerated;
        else throw InputError("unknown solve mode '" + modes[mi] + "'");
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si) {
            std::size_t slot = mi * cfg.seeds.size() + si;
            tasks.emplace_back([&, mode, slot, mi, si] {
                SolveOptions opts;
                opts.mode = mode;
                opts.max_iter = cfg.max_iter;
                opts.record_every = cfg.record_every;
                opts.time_budget_s = budget(cfg);
                slots[slot].records =
                    weighted ? solve_weighted(a, b, a, cfg.sketch, p, opts, cfg.seeds[si],
                                              modes[mi]).records
                             : solve(a, b, cfg.sketch, p, opts, cfg.seeds[si],
                                     modes[mi]).records;
            });
        }
    }
    run_parallel(tasks);
    Trajectory all;
    for (auto& s : slots)
        all.insert(all.end(), s.records.begin(), s.records.end());
    return all;
}

Trajectory cmd_optimize(const ExperimentConfig& cfg) {
    auto obj = build_objective(cfg);
    Vector w0 = Vector::Zero(obj->dimension());
    const double eta = cfg.eta > 0.0
                           ? cfg.eta
                           : grid_search_stepsize(*obj, w0, default_stepsize_grid());

    // Probed (mu, nu) pairs when not given explicitly.
    std::vector<std::pair<double, double>> pairs;
    if (cfg.explicit_mu > 0.0 && cfg.explicit_nu > 0.0) {
        pairs.emplace_back(cfg.explicit_mu, cfg.explicit_nu);
    } else {
        for (double nu : {10.0, 100.0, 1000.0})
            for (double div : {100.0, 10000.0})
                pairs.emplace_back(heuristic_mu(nu, div), nu);
    }

    // Reference optimum from a long classic run.
    OptimState ref = make_optim_state(w0);
    double f_star = obj->value(ref.w);
    for (std::int64_t k = 0; k < cfg.reference_iters; ++k) {
        try {
            ref = classic_bfgs_step(ref, *obj, eta);
        } catch (const DivergedError&) {
            break;
        }
        f_star = std::min(f_star, obj->value(ref.w));
    }

    std::vector<std::string> modes = cfg.modes.empty()
                                         ? std::vector<std::string>{"classic", "accel"}
                                         : cfg.modes;

    Trajectory all;
    auto run_one = [&](const std::string& tag, const AccelParams* p) {
        OptimState st = make_optim_state(w0);
        auto t0 = std::chrono::steady_clock::now();
        auto push = [&] {
            ConvergenceRecord r;
            r.method = tag;
            r.seed = cfg.seeds.front();
            r.iteration = st.iteration;
            r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                              .count();
            r.residual = obj->value(st.w) - f_star;
            r.lyapunov = obj->gradient(st.w).norm();  // gradient norm column
            all.push_back(r);
        };
        push();
        for (std::int64_t k = 0; k < cfg.max_iter; ++k) {
            try {
                st = p ? accel_bfgs_step(st, *obj, *p, eta) : classic_bfgs_step(st, *obj, eta);
            } catch (const DivergedError&) {
                ConvergenceRecord r;
                r.method = tag + "-failed";
                r.seed = cfg.seeds.front();
                r.iteration = st.iteration + 1;
                r.residual = std::numeric_limits<double>::infinity();
                all.push_back(r);
                return;
            }
            const bool last = (k + 1 == cfg.max_iter);
            if (last || (cfg.record_every > 0 && st.iteration % cfg.record_every == 0)) push();
        }
    };

    for (const auto& mode : modes) {
        if (mode == "classic") {
            run_one("classic", nullptr);
        } else if (mode == "accel") {
            for (const auto& [mu, nu] : pairs) {
                AccelParams p = derive_params(mu, nu, cfg.omega);
                std::ostringstream tag;
                tag << "accel-" << mu << "-" << nu;
                run_one(tag.str(), &p);
            }
        } else {
            throw InputError("unknown optimize mode '" + mode + "'");
        }
    }
    return all;
}

std::vector<GridCell> cmd_grid(const ExperimentConfig& cfg) {
    SymMatrix a = build_matrix(cfg);
    ParamEstimate base = estimate_params_convenient(a);
    const double base_mu = cfg.explicit_mu > 0.0 ? cfg.explicit_mu : base.mu;
    const double base_nu = cfg.explicit_nu > 0.0 ? cfg.explicit_nu : base.nu;
    const std::uint64_t seed = cfg.seeds.front();

    auto run_mode = [&](InvertMode mode, const AccelParams& p) {
        InvertOptions opts;
        opts.mode = mode;
        opts.max_iter = cfg.max_iter;
        opts.record_every = std::max<std::int64_t>(cfg.max_iter, 1);
        opts.time_budget_s = cfg.cell_budget_s;
        return invert(a, cfg.sketch, p, opts, seed, "grid").records;
    };

    double plain_factor = decay_factor(run_mode(InvertMode::Plain, derive_params(1.0, 1.0)));

    std::vector<GridCell> cells(49);
    std::vector<std::function<void()>> tasks;
    for (int i = 1; i <= 7; ++i) {
        for (int j = 1; j <= 7; ++j) {
            const std::size_t idx = static_cast<std::size_t>((i - 1) * 7 + (j - 1));
            tasks.emplace_back([&, i, j, idx] {
                GridCell cell;
                cell.mu = std::ldexp(base_mu, i - 4);           // 2^{i-4} mu
                cell.nu = base_nu * std::pow(5.0, j - 4);       // 5^{j-4} nu
                double factor;
                try {
                    AccelParams p = derive_params(cell.mu, cell.nu, cfg.omega);
                    factor = decay_factor(run_mode(InvertMode::Accel, p));
                } catch (const Error&) {
                    factor = std::numeric_limits<double>::infinity();
                }
                cell.ratio = std::isfinite(factor) && std::isfinite(plain_factor)
                                 ? factor / plain_factor
                                 : std::numeric_limits<double>::infinity();
                cells[idx] = cell;
            });
        }
    }
    run_parallel(tasks);
    return cells;
}

} // namespace sap
