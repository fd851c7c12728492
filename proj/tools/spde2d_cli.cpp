// Command line front end: simulate fields, estimate the damping exponent,
// evaluate the analytic limits, run the Monte Carlo study and the
// verification suites.
//
// Exit codes: 0 success, 1 validation/usage error, 2 verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spde2d/errors.hpp"
#include "spde2d/estimator.hpp"
#include "spde2d/experiment.hpp"
#include "spde2d/io.hpp"
#include "spde2d/sampling.hpp"
#include "spde2d/simulate.hpp"
#include "spde2d/theory.hpp"

namespace {

struct ModelFlags {
    double theta0 = 0.0, theta1 = 0.2, eta1 = 0.2, theta2 = 0.2, sigma = 1.0;
    double alpha = 0.5, mu0 = -19.5;
    int trunc_k = 1000, trunc_l = 1000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--theta0", theta0, "Zeroth order coefficient");
        cmd->add_option("--theta1", theta1, "First order y coefficient");
        cmd->add_option("--eta1", eta1, "First order z coefficient");
        cmd->add_option("--theta2", theta2, "Diffusivity (positive)");
        cmd->add_option("--sigma", sigma, "Noise amplitude (positive)");
        cmd->add_option("--alpha", alpha, "Damping exponent in (0,2)");
        cmd->add_option("--mu0", mu0, "Noise spectrum shift (> -2 pi^2)");
        cmd->add_option("-K,--trunc-k", trunc_k, "Mode truncation in y");
        cmd->add_option("-L,--trunc-l", trunc_l, "Mode truncation in z");
    }

    spde2d::SpdeCoefficients coeffs() const {
        return {theta0, theta1, eta1, theta2, sigma};
    }
    spde2d::NoiseSpec noise() const { return {alpha, mu0, trunc_k, trunc_l}; }
};

struct DesignFlags {
    double b = 0.1;
    int m1 = 20;
    int n_steps = 1000;

    void attach(CLI::App* cmd) {
        cmd->add_option("--b", b, "Spatial margin in (0, 1/2)")->required();
        cmd->add_option("--m1", m1, "Spatial cells per axis (even)")->required();
        cmd->add_option("-N,--N,--n-steps", n_steps, "Time steps (divisible by 4)")
            ->required();
    }
};

void check_matches_design(const spde2d::FieldSample& field,
                          const spde2d::ThinnedDesign& design) {
    const auto close = [](double a, double b) {
        return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
    };
    if (field.n_times() != design.times.size() || field.n_y() != design.ys.size() ||
        field.n_z() != design.ys.size())
        throw spde2d::GridMismatch("shape-mismatch: field does not match --b/--m1/-N design");
    for (std::size_t i = 0; i < design.times.size(); ++i)
        if (!close(field.times[i], design.times[i]))
            throw spde2d::GridMismatch("shape-mismatch: field times differ from design");
    for (std::size_t j = 0; j < design.ys.size(); ++j)
        if (!close(field.ys[j], design.ys[j]) || !close(field.zs[j], design.ys[j]))
            throw spde2d::GridMismatch("shape-mismatch: field coordinates differ from design");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D parabolic SPDE simulator and damping-exponent estimator"};
    app.require_subcommand(1);

    // --- simulate ---------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Simulate a field on a thinned design");
    ModelFlags sim_model;
    DesignFlags sim_design;
    sim_model.attach(sim);
    sim_design.attach(sim);
    std::uint64_t sim_seed = 1;
    std::uint64_t sim_rep = 0;
    int sim_snap = 0;
    std::string sim_out, sim_csv;
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--replication", sim_rep, "Replication index");
    sim->add_option("--snap", sim_snap, "Snap coordinates to a j/M lattice (0 = exact)");
    sim->add_option("--out", sim_out, "Output SPDE2D01 file")->required();
    sim->add_option("--csv", sim_csv, "Optional CSV export path");

    // --- estimate ---------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "Estimate alpha from a field file");
    DesignFlags est_design;
    est_design.attach(est);
    std::string est_in, est_out = "-";
    est->add_option("--in", est_in, "Input SPDE2D01 file")->required();
    est->add_option("--out", est_out, "Output CSV path ('-' for stdout)");

    // --- psi --------------------------------------------------------------
    auto* psi_cmd = app.add_subcommand("psi", "Evaluate the limit constant psi");
    double psi_r = 1.0, psi_alpha = 0.5, psi_theta2 = 1.0, psi_tol = 1e-8;
    psi_cmd->add_option("--r", psi_r, "Scale ratio delta/sqrt(Delta)")->required();
    psi_cmd->add_option("--alpha", psi_alpha, "Damping exponent")->required();
    psi_cmd->add_option("--theta2", psi_theta2, "Diffusivity")->required();
    psi_cmd->add_option("--tol", psi_tol, "Relative tolerance");

    // --- oracle -----------------------------------------------------------
    auto* oracle = app.add_subcommand(
        "oracle", "Expected quadratic variation and its limit for a design");
    ModelFlags oracle_model;
    DesignFlags oracle_design;
    oracle_model.attach(oracle);
    oracle_design.attach(oracle);

    // --- experiment -------------------------------------------------------
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo study of alpha_hat");
    std::string exp_config, exp_out;
    int exp_workers = -1, exp_reps = -1;
    std::int64_t exp_seed = -1;
    bool exp_full = false;
    exp_cmd->add_option("--config", exp_config, "JSON config file (default: desk scale)");
    exp_cmd->add_option("--out", exp_out, "Output CSV path")->required();
    exp_cmd->add_option("--workers", exp_workers, "Worker threads (overrides config/env)");
    exp_cmd->add_option("--replications", exp_reps, "Override replication count");
    exp_cmd->add_option("--seed", exp_seed, "Override seed");
    exp_cmd->add_flag("--full-scale", exp_full,
                      "Run the full study (truncation 10^4, 200 replications)");

    // --- verify -----------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string verify_suite;
    verify->add_option("suite", verify_suite, "identities | oracle | convergence")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // normalize CLI11's exit codes onto the 0/1 contract (help stays 0)
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) {
            const auto design = spde2d::build_design(sim_design.b, sim_design.m1,
                                                     sim_design.n_steps);
            spde2d::SimulateOptions options;
            options.snap_m1 = sim_snap;
            options.snap_m2 = sim_snap;
            const auto field = spde2d::simulate_dataset(
                sim_model.coeffs(), sim_model.noise(), design, sim_seed, sim_rep, options);
            spde2d::write_field(field, sim_out);
            if (!sim_csv.empty()) spde2d::write_field_csv(field, sim_csv);
        } else if (*est) {
            const auto design = spde2d::build_design(est_design.b, est_design.m1,
                                                     est_design.n_steps);
            const auto field = spde2d::read_field(est_in);
            check_matches_design(field, design);
            const auto estimate = spde2d::estimate_from_field(field, design);
            const std::string line = spde2d::format_double(estimate.alpha_hat) + "," +
                                     spde2d::format_double(estimate.v_pair.v_fine) + "," +
                                     spde2d::format_double(estimate.v_pair.v_coarse) + "," +
                                     (estimate.in_range ? "1" : "0") + "\n";
            if (est_out == "-") {
                std::cout << line;
            } else {
                std::ofstream out(est_out);
                if (!out) throw spde2d::IoError("io-error: cannot open " + est_out);
                out << line;
            }
        } else if (*psi_cmd) {
            const auto result = spde2d::psi(spde2d::PsiQuery(psi_r, psi_alpha, psi_theta2, psi_tol));
            std::cout << "psi=" << spde2d::format_double(result.value)
                      << " error_bound=" << spde2d::format_double(result.error_bound) << "\n";
        } else if (*oracle) {
            const auto design = spde2d::build_design(oracle_design.b, oracle_design.m1,
                                                     oracle_design.n_steps);
            const auto coeffs = oracle_model.coeffs();
            const auto noise = oracle_model.noise();
            const double eqv = spde2d::expected_quadratic_variation(design, coeffs, noise);
            const spde2d::ThetaVector theta(coeffs.kappa, coeffs.eta, coeffs.theta2,
                                            coeffs.sigma * coeffs.sigma);
            const double g = spde2d::g_limit(design.r, noise.alpha, theta, design.b);
            std::cout << "expected_quadratic_variation=" << spde2d::format_double(eqv)
                      << "\n"
                      << "g_limit=" << spde2d::format_double(g) << "\n";
        } else if (*exp_cmd) {
            spde2d::ExperimentConfig config;
            if (exp_full) {
                config = spde2d::full_scale_config();
                std::fprintf(stderr,
                             "warning: full-scale study (truncation 10^4, 200 "
                             "replications, 40 cells) takes days of CPU time\n");
            } else if (!exp_config.empty()) {
                config = spde2d::load_config(exp_config);
            } else {
                config = spde2d::desk_scale_config();
            }
            if (exp_workers >= 0) config.workers = exp_workers;
            if (exp_reps > 0) config.replications = exp_reps;
            if (exp_seed >= 0) config.seed = static_cast<std::uint64_t>(exp_seed);
            try {
                const auto result = spde2d::run_experiment(config);
                spde2d::emit_table(result, exp_out);
            } catch (const spde2d::ExperimentError& e) {
                std::fprintf(stderr, "error: %s (flushing partial results)\n", e.what());
                spde2d::emit_table(e.partial, exp_out);
                return 1;
            }
        } else if (*verify) {
            const auto report = spde2d::run_verify(spde2d::parse_suite(verify_suite));
            spde2d::print_report(report, std::cout);
            if (!report.all_pass()) return 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
