#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "spde2d/estimator.hpp"
#include "spde2d/model.hpp"

namespace spde2d {

/// Monte Carlo study configuration. One replication simulates a single set
/// of coefficient paths and evaluates them at every (b, m1) cell, so cells
/// are paired within a replication.
struct ExperimentConfig {
    SpdeCoefficients coeffs{0.0, 0.2, 0.2, 0.2, 1.0};
    NoiseSpec noise{0.5, -19.5, 1000, 1000};
    int n_steps = 1000;  ///< N; serialized as "N"
    std::vector<double> b_values{0.1};
    std::vector<int> m1_values{20, 40};
    int replications = 50;
    std::uint64_t seed = 20240801;
    int workers = 0;  ///< 0: hardware concurrency
};

/// Desk-scale default: truncation 10^3 and 50 replications on the (b = 0.1,
/// m1 in {20, 40}) cells.
ExperimentConfig desk_scale_config();

/// Full study: truncation 10^4, 200 replications, b in {0.02..0.1} x
/// m1 in {20..90}. Compute-heavy; the CLI prints a warning before running it.
ExperimentConfig full_scale_config();

ExperimentConfig config_from_json(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

struct CellResult {
    double b;
    int m1;
    double mean_alpha_hat;
    double sd_alpha_hat;  ///< sample standard deviation
    int replications;
    double elapsed_seconds;  ///< evaluation + estimation time attributed to the cell
};

struct ExperimentResult {
    std::vector<CellResult> cells;  ///< m1-major, then b
    ExperimentConfig config;        ///< echo of the configuration that ran
    std::uint64_t seed = 0;
    int replications = 0;
    bool complete = true;
};

/// Carries the partial result when a replication fails, so callers can flush
/// what finished before the interruption.
struct ExperimentError : std::runtime_error {
    ExperimentError(const std::string& what, ExperimentResult partial)
        : std::runtime_error(what), partial(std::move(partial)) {}
    ExperimentResult partial;
};

/// Runs the study. Deterministic in (config, seed) for any worker count:
/// per-replication streams are keyed by replication index and aggregation is
/// reduced in replication order.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// CSV with columns b,m1,mean_alpha_hat,sd_alpha_hat,replications,seed,
/// one row per cell, m1-major then b.
void emit_table(const ExperimentResult& result, std::ostream& out);
void emit_table(const ExperimentResult& result, const std::string& path);

enum class VerifySuite { identities, oracle, convergence };

/// Throws InvalidParameters for an unknown suite name.
VerifySuite parse_suite(const std::string& name);
std::string suite_name(VerifySuite suite);

struct VerifyCheck {
    std::string name;
    bool pass;
    double value;
    double bound;
    std::string detail;
};

struct VerifyReport {
    VerifySuite suite;
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

/// identities: psi positivity grid, psi scaling identity, Bessel combination
///             nonnegativity and integral identity.
/// oracle:     Monte Carlo quadratic variation vs the truncated-series
///             expectation at K = L = 64.
/// convergence: the O(Delta) gap shrink of the expected quadratic variation
///             toward g at K = L = 2000.
VerifyReport run_verify(VerifySuite suite);

void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace spde2d
