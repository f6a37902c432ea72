#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sap/bench.hpp"
#include "sap/bfgs.hpp"
#include "sap/dataio.hpp"
#include "sap/inverter.hpp"
#include "sap/oracle.hpp"
#include "sap/solver.hpp"

namespace py = pybind11;
using namespace sap;

namespace {

SketchSpec make_spec(const std::string& strategy, int tau) {
    SketchSpec spec;
    spec.strategy = parse_strategy(strategy);
    spec.sketch_rank = tau;
    return spec;
}

py::list records_to_list(const Trajectory& records) {
    py::list out;
    for (const auto& r : records) {
        py::dict row;
        row["method"] = r.method;
        row["seed"] = r.seed;
        row["iteration"] = r.iteration;
        row["elapsed_s"] = r.elapsed_s;
        row["residual"] = r.residual;
        if (r.lyapunov) row["lyapunov"] = *r.lyapunov;
        if (r.lambda_min_x) row["lambda_min_x"] = *r.lambda_min_x;
        out.append(row);
    }
    return out;
}

AccelParams resolve(double mu, double nu, double omega) {
    return derive_params(mu, nu, omega);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "accelerated sketch-and-project solvers, inverters and BFGS";

    py::class_<AccelParams>(m, "AccelParams")
        .def_readonly("mu", &AccelParams::mu)
        .def_readonly("nu", &AccelParams::nu)
        .def_readonly("omega", &AccelParams::omega)
        .def_readonly("alpha", &AccelParams::alpha)
        .def_readonly("beta", &AccelParams::beta)
        .def_readonly("gamma", &AccelParams::gamma)
        .def_readonly("eta", &AccelParams::eta)
        .def_readonly("rho", &AccelParams::rho)
        .def_readonly("warnings", &AccelParams::warnings)
        .def("__repr__", [](const AccelParams& p) {
            return "AccelParams(mu=" + std::to_string(p.mu) + ", nu=" + std::to_string(p.nu) +
                   ", rho=" + std::to_string(p.rho) + ")";
        });

    m.def("derive_params", &derive_params, py::arg("mu"), py::arg("nu"),
          py::arg("omega") = 1.0,
          "Accelerated parameters (alpha, beta, gamma) from (mu, nu, omega).");
    m.def("params_from_s", &params_from_s, py::arg("mu"), py::arg("nu"), py::arg("s"),
          "One-parameter family of accelerated parameters; s = 1 is the base point.");

    m.def(
        "estimate_params",
        [](const Matrix& a) {
            ParamEstimate est = estimate_params_convenient(SymMatrix(a));
            return std::make_pair(est.mu, est.nu);
        },
        py::arg("a"),
        "Closed-form (mu, nu) for coordinate sketches with probabilities "
        "proportional to the diagonal.");

    m.def(
        "oracle_mu_nu",
        [](const Matrix& a, const std::string& strategy, bool matrix_case) {
            SketchSpec spec = make_spec(strategy, 1);
            SymMatrix sa(a);
            auto atoms = matrix_case ? enumerate_Zbar_matrix(sa, spec)
                                     : enumerate_Z_vector(sa, sa, spec);
            return mu_nu_bruteforce(moments_from_atoms(atoms));
        },
        py::arg("a"), py::arg("strategy") = "convenient", py::arg("matrix_case") = false,
        "Brute-force (mu, nu) by enumerating the sketch distribution (small n).");

    m.def(
        "solve",
        [](const Matrix& a, const Vector& b, const std::string& mode,
           const std::string& strategy, int tau, double mu, double nu, double omega,
           std::int64_t max_iter, std::int64_t record_every, std::uint64_t seed) {
            SolveOptions opts;
            opts.mode = mode == "plain" ? SolveMode::Plain : SolveMode::Accelerated;
            opts.max_iter = max_iter;
            opts.record_every = record_every;
            SolveResult res = solve(SymMatrix(a), b, make_spec(strategy, tau),
                                    resolve(mu, nu, omega), opts, seed, mode);
            py::dict out;
            out["x"] = res.final_state.x;
            out["x_star"] = res.x_star;
            out["records"] = records_to_list(res.records);
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("mode") = "accelerated",
        py::arg("strategy") = "convenient", py::arg("tau") = 1, py::arg("mu") = 0.5,
        py::arg("nu") = 2.0, py::arg("omega") = 1.0, py::arg("max_iter") = 1000,
        py::arg("record_every") = 10, py::arg("seed") = 1,
        "Sketch-and-project linear solver for symmetric positive systems.");

    m.def(
        "invert",
        [](const Matrix& a, const std::string& mode, const std::string& strategy, int tau,
           double mu, double nu, double omega, std::int64_t max_iter,
           std::int64_t record_every, std::uint64_t seed) {
            InvertOptions opts;
            if (mode == "plain") opts.mode = InvertMode::Plain;
            else if (mode == "accel") opts.mode = InvertMode::Accel;
            else if (mode == "plain-nosym") opts.mode = InvertMode::PlainNosym;
            else if (mode == "accel-nosym") opts.mode = InvertMode::AccelNosym;
            else throw InputError("unknown invert mode '" + mode + "'");
            opts.max_iter = max_iter;
            opts.record_every = record_every;
            InvertResult res = invert(SymMatrix(a), make_spec(strategy, tau),
                                      resolve(mu, nu, omega), opts, seed, mode);
            py::dict out;
            out["x"] = res.final_x;
            out["records"] = records_to_list(res.records);
            return out;
        },
        py::arg("a"), py::arg("mode") = "accel", py::arg("strategy") = "convenient",
        py::arg("tau") = 1, py::arg("mu") = 0.5, py::arg("nu") = 2.0,
        py::arg("omega") = 1.0, py::arg("max_iter") = 1000, py::arg("record_every") = 10,
        py::arg("seed") = 1,
        "Randomized symmetric inverse estimation; modes plain/accel[-nosym].");

    m.def(
        "bfgs_minimize",
        [](const Matrix& features, const Vector& labels, double lam, double eta,
           std::int64_t max_iter, bool accelerated, double mu, double nu) {
            LogisticObjective obj(features, labels, lam);
            Vector w0 = Vector::Zero(obj.dimension());
            double step = eta > 0.0 ? eta
                                    : grid_search_stepsize(obj, w0, default_stepsize_grid());
            OptimState st = make_optim_state(w0);
            AccelParams p = accelerated ? derive_params(mu, nu) : AccelParams{};
            std::vector<double> grad_norms{obj.gradient(st.w).norm()};
            for (std::int64_t k = 0; k < max_iter; ++k) {
                st = accelerated ? accel_bfgs_step(st, obj, p, step)
                                 : classic_bfgs_step(st, obj, step);
                grad_norms.push_back(obj.gradient(st.w).norm());
            }
            py::dict out;
            out["w"] = st.w;
            out["eta"] = step;
            out["grad_norms"] = grad_norms;
            out["value"] = obj.value(st.w);
            return out;
        },
        py::arg("features"), py::arg("labels"), py::arg("lam") = 0.0, py::arg("eta") = 0.0,
        py::arg("max_iter") = 100, py::arg("accelerated") = false, py::arg("mu") = 1e-4,
        py::arg("nu") = 100.0,
        "BFGS on a regularized logistic objective; eta <= 0 grid-searches.");

    m.def(
        "gen_alpha_beta",
        [](double alpha, double beta, Eigen::Index n) {
            return gen_alpha_beta(alpha, beta, n).mat();
        },
        py::arg("alpha"), py::arg("beta"), py::arg("n"),
        "alpha*I + beta*ones, the structured test family.");
    m.def(
        "gen_spectrum",
        [](const Vector& eigs, std::uint64_t seed) { return gen_spectrum(eigs, seed).mat(); },
        py::arg("eigenvalues"), py::arg("seed") = 0,
        "Random symmetric matrix with the prescribed spectrum.");

    m.def(
        "load_libsvm",
        [](const std::string& path, bool center, bool normalize, bool add_bias) {
            Dataset ds = preprocess(parse_libsvm(path), center, normalize, add_bias);
            return std::make_pair(ds.features, ds.labels);
        },
        py::arg("path"), py::arg("center") = true, py::arg("normalize") = true,
        py::arg("add_bias") = true, "LIBSVM file as a dense (features, labels) pair.");

    py::register_exception<Error>(m, "SapError");
}
