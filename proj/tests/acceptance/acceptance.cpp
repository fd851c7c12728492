// Acceptance suite: one entry per criterion, each printing PASS/FAIL lines
// for its checks and a summary. Criteria 5 and 6 share one Monte Carlo run.
//
// Usage: acceptance [N ...]   with N in 1..7; no arguments runs everything.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spde2d/estimator.hpp"
#include "spde2d/experiment.hpp"
#include "spde2d/sampling.hpp"
#include "spde2d/simulate.hpp"
#include "spde2d/theory.hpp"

using namespace spde2d;

namespace {

struct Criterion {
    int failures = 0;
    int checks = 0;

    void check(bool ok, const char* fmt, ...) {
        ++checks;
        if (!ok) ++failures;
        std::va_list args;
        va_start(args, fmt);
        std::printf("  %s ", ok ? "[PASS]" : "[FAIL]");
        std::vprintf(fmt, args);
        std::printf("\n");
        va_end(args);
    }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int report(const char* name, const Criterion& c, double elapsed) {
    std::printf("%s criterion %s: %d/%d checks passed (%.1f s)\n",
                c.failures == 0 ? "[PASS]" : "[FAIL]", name, c.checks - c.failures,
                c.checks, elapsed);
    return c.failures == 0 ? 0 : 1;
}

// Single-level design used only to evaluate the series expectation on the
// coarse level (whose own N need not be divisible by 4).
ThinnedDesign raw_level(double b, int m1, int n) {
    ThinnedDesign d;
    d.b = b;
    d.m1 = m1;
    d.m2 = m1;
    d.n_steps = n;
    d.delta = (1.0 - 2.0 * b) / m1;
    d.step = 1.0 / n;
    d.r = d.delta / std::sqrt(d.step);
    d.m1_coarse = m1 / 2;
    d.m2_coarse = m1 / 2;
    d.n_steps_coarse = n / 4;
    d.delta_coarse = 2 * d.delta;
    d.step_coarse = 4 * d.step;
    d.times.resize(n + 1);
    for (int i = 0; i <= n; ++i) d.times[i] = static_cast<double>(i) / n;
    d.ys.resize(m1 + 1);
    for (int j = 0; j <= m1; ++j) d.ys[j] = b + j * d.delta;
    return d;
}

// Expectation-level alpha_hat: alpha* + log(EQV_coarse / EQV_fine) / log 4.
double alpha_hat_predictor(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                           double b, int m1, int n_steps) {
    const double ef =
        expected_quadratic_variation(raw_level(b, m1, n_steps), coeffs, noise);
    const double ec =
        expected_quadratic_variation(raw_level(b, m1 / 2, n_steps / 4), coeffs, noise);
    return noise.alpha + std::log(ec / ef) / std::log(4.0);
}

// --- criterion 1: estimator identities (exact) ------------------------------

int criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("criterion 1: estimator identities\n");
    Criterion c;

    QuadraticVariationPair pair;
    pair.m_fine = pair.n_fine = pair.m_coarse = pair.n_coarse = 1;
    pair.v_fine = 1.0;
    pair.v_coarse = 4.0;
    c.check(alpha_hat(pair).alpha_hat == 1.0, "ratio 4 -> alpha_hat == 1 exactly");
    pair.v_coarse = 1.0;
    c.check(alpha_hat(pair).alpha_hat == 0.0, "ratio 1 -> alpha_hat == 0 exactly");
    pair.v_coarse = 2.0;
    c.check(alpha_hat(pair).alpha_hat == 0.5, "ratio 2 -> alpha_hat == 0.5 exactly");

    const SpdeCoefficients coeffs(0.0, 0.2, 0.2, 0.2, 1.0);
    const NoiseSpec noise(0.5, -19.5, 16, 16);
    const ThinnedDesign design = build_design(0.1, 8, 40);
    const FieldSample base = simulate_dataset(coeffs, noise, design, 4242, 0);
    const double ref = estimate_from_field(base, design).alpha_hat;

    for (double scale : {-2.0, 1e-3, 1e3}) {
        FieldSample scaled = base;
        for (double& v : scaled.values) v *= scale;
        const double got = estimate_from_field(scaled, design).alpha_hat;
        const bool exact_scale = scale == -2.0;
        const bool ok = exact_scale ? (got == ref) : (std::fabs(got - ref) <= 1e-12);
        c.check(ok, "scale invariance c=%g: |d alpha_hat| = %.3g (%s)", scale,
                std::fabs(got - ref), exact_scale ? "bitwise" : "<= 1e-12");
    }

    const double elapsed = seconds_since(t0);
    c.check(elapsed < 1.0, "runtime %.3f s < 1 s", elapsed);
    return report("1 (estimator identities)", c, elapsed);
}

// --- criterion 2: oracle equivalence (statistical) ---------------------------

int criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("criterion 2: Monte Carlo quadratic variation vs series expectation\n");
    Criterion c;

    const SpdeCoefficients coeffs(0.0, 0.2, 0.2, 0.2, 1.0);
    const NoiseSpec noise(0.5, -19.5, 64, 64);
    const ThinnedDesign design = build_design(0.1, 10, 100);
    const double expected = expected_quadratic_variation(design, coeffs, noise);
    const double norm = std::pow(design.step, noise.alpha);

    const int reps = 500;
    double sum = 0.0, sum_sq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        StreamingAlphaAccumulator acc(design);
        simulate_stream(coeffs, noise, design, 0xACCE55, rep,
                        [&](int i, std::span<const double> s) { acc.push_slice(i, s); });
        const double stat = acc.finalize().v_pair.v_fine / norm;
        sum += stat;
        sum_sq += stat * stat;
    }
    const double mean = sum / reps;
    const double sd = std::sqrt((sum_sq - reps * mean * mean) / (reps - 1));
    const double se = sd / std::sqrt(static_cast<double>(reps));
    c.check(std::fabs(mean - expected) <= 3.0 * se,
            "empirical mean %.6f vs expectation %.6f within 3 se (z = %.2f)", mean,
            expected, (mean - expected) / se);

    const double elapsed = seconds_since(t0);
    c.check(elapsed < 120.0, "runtime %.1f s < 2 min", elapsed);
    return report("2 (oracle equivalence)", c, elapsed);
}

// --- criterion 3: Step-1 convergence (deterministic) -------------------------

int criterion3() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf(
        "criterion 3: expected quadratic variation approaches g at rate O(Delta)\n"
        "  (K = L = 2000 pinned; parameters chosen so the truncation floor stays\n"
        "   below the O(Delta) term: theta = (0,1,1,1,1), alpha* = 0.75, b = 0.1,\n"
        "   r = 1 via (m1, N) = (8, 100) and (16, 400))\n");
    Criterion c;

    const SpdeCoefficients coeffs(0.0, 1.0, 1.0, 1.0, 1.0);
    const NoiseSpec noise(0.75, -19.5, 2000, 2000);
    const ThinnedDesign coarse = build_design(0.1, 8, 100);
    const ThinnedDesign fine = build_design(0.1, 16, 400);
    c.check(coarse.r == fine.r, "r fixed across the pair (r = %.6f)", coarse.r);

    const ThetaVector theta(coeffs.kappa, coeffs.eta, coeffs.theta2,
                            coeffs.sigma * coeffs.sigma);
    const double g = g_limit(coarse.r, noise.alpha, theta, coarse.b);
    const double gap100 =
        std::fabs(expected_quadratic_variation(coarse, coeffs, noise) - g);
    const double gap400 = std::fabs(expected_quadratic_variation(fine, coeffs, noise) - g);
    const double factor = gap100 / gap400;
    c.check(factor >= 2.5 && factor <= 6.0,
            "gap shrink factor %.3f in [2.5, 6] (gap_N100 = %.3e, gap_N400 = %.3e)",
            factor, gap100, gap400);

    const double elapsed = seconds_since(t0);
    c.check(elapsed < 300.0, "runtime %.1f s < 5 min", elapsed);
    return report("3 (Step-1 convergence)", c, elapsed);
}

// --- criterion 4: psi / g verification ---------------------------------------

int criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("criterion 4: psi and g verification\n");
    Criterion c;

    double worst_dual = 0.0, worst_scaling = 0.0;
    for (double r : {0.5, 1.0, 2.0}) {
        for (double alpha : {0.3, 0.5, 1.0, 1.5}) {
            for (double theta2 : {0.2, 1.0}) {
                const double value = psi(PsiQuery(r, alpha, theta2)).value;
                const double lo = testsupport::psi_composite_oracle(r, alpha, theta2, 4000);
                const double hi = testsupport::psi_composite_oracle(r, alpha, theta2, 8000);
                worst_dual = std::max(
                    {worst_dual, std::fabs(hi - lo) / std::fabs(hi),
                     std::fabs(value - hi) / std::fabs(hi)});
                const double scaled =
                    std::pow(theta2, alpha - 1.0) *
                    psi(PsiQuery(r / std::sqrt(theta2), alpha, 1.0)).value;
                worst_scaling =
                    std::max(worst_scaling, std::fabs(value - scaled) / std::fabs(value));
            }
        }
    }
    c.check(worst_dual <= 1e-8,
            "dual-quadrature agreement on the 3x4x2 grid: worst rel %.2e <= 1e-8",
            worst_dual);
    c.check(worst_scaling <= 1e-8, "psi scaling identity: worst rel %.2e <= 1e-8",
            worst_scaling);

    double worst_combo = 0.0;
    for (double x : {0.1, 1.0, 5.0, 20.0})
        worst_combo = std::min(worst_combo, bessel_combination(x));
    c.check(worst_combo >= -1e-12,
            "Bessel combination nonnegative on {0.1, 1, 5, 20}: min %.2e >= -1e-12",
            worst_combo);

    double worst_g = 0.0;
    for (auto [kappa, eta] : {std::pair{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {-0.5, 2.0}}) {
        const double closed = exp_window_integral(kappa, 0.1) *
                              exp_window_integral(eta, 0.1) / (0.8 * 0.8);
        const double quad = testsupport::window_average_quadrature(kappa, eta, 0.1);
        worst_g = std::max(worst_g, std::fabs(closed - quad) / std::fabs(closed));
    }
    c.check(worst_g <= 1e-10,
            "g window closed form vs 2D quadrature: worst rel %.2e <= 1e-10", worst_g);

    const double elapsed = seconds_since(t0);
    c.check(elapsed < 30.0, "runtime %.1f s < 30 s", elapsed);
    return report("4 (psi/g verification)", c, elapsed);
}

// --- criteria 5 and 6: Table-1 desk-scale study ------------------------------

int criteria5and6(bool run5, bool run6) {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf(
        "criteria 5/6: desk-scale Monte Carlo (K = L = 1000, N = 1000, b = 0.1,\n"
        "  m1 in {20, 40}, 50 replications; published targets 0.452 / 0.476)\n");

    ExperimentConfig config = desk_scale_config();
    const ExperimentResult result = run_experiment(config);
    const CellResult& m20 = result.cells[0];
    const CellResult& m40 = result.cells[1];

    // Expectation-level predictions at this exact configuration, for context:
    // with the exact OU transition the estimator is essentially unbiased
    // upward here, so the published negative bias is not reproducible (see
    // the project notes); the affected checks below are expected to fail.
    const double pred20 =
        alpha_hat_predictor(config.coeffs, config.noise, 0.1, 20, 1000);
    const double pred40 =
        alpha_hat_predictor(config.coeffs, config.noise, 0.1, 40, 1000);
    std::printf(
        "  expectation-level predictor: m1=20 -> %.4f, m1=40 -> %.4f\n"
        "  measured: m1=20 -> %.4f (sd %.4f), m1=40 -> %.4f (sd %.4f)\n",
        pred20, pred40, m20.mean_alpha_hat, m20.sd_alpha_hat, m40.mean_alpha_hat,
        m40.sd_alpha_hat);

    int rc = 0;
    if (run5) {
        Criterion c5;
        c5.check(std::fabs(m20.mean_alpha_hat - 0.452) <= 0.05,
                 "m1=20 mean %.4f within 0.452 +- 0.05", m20.mean_alpha_hat);
        c5.check(m20.sd_alpha_hat < 0.05, "m1=20 sd %.4f < 0.05", m20.sd_alpha_hat);
        c5.check(std::fabs(m40.mean_alpha_hat - 0.476) <= 0.05,
                 "m1=40 mean %.4f within 0.476 +- 0.05", m40.mean_alpha_hat);
        c5.check(m40.sd_alpha_hat < 0.05, "m1=40 sd %.4f < 0.05", m40.sd_alpha_hat);
        c5.check(std::fabs(m40.mean_alpha_hat - 0.5) < std::fabs(m20.mean_alpha_hat - 0.5),
                 "bias direction: |%.4f - 0.5| < |%.4f - 0.5|", m40.mean_alpha_hat,
                 m20.mean_alpha_hat);
        rc |= report("5 (Table 1 desk scale)", c5, seconds_since(t0));
    }
    if (run6) {
        Criterion c6;
        const double ratio = m20.sd_alpha_hat / m40.sd_alpha_hat;
        c6.check(ratio >= 1.5 && ratio <= 2.7,
                 "sd ratio m1=20 / m1=40 = %.3f in [1.5, 2.7] (theoretical 2)", ratio);
        rc |= report("6 (rate property)", c6, seconds_since(t0));
    }
    return rc;
}

// --- criterion 7: determinism ------------------------------------------------

int criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    std::printf("criterion 7: byte-identical CSV across worker counts\n");
    Criterion c;

    ExperimentConfig config;
    config.noise = NoiseSpec(0.5, -19.5, 128, 128);
    config.n_steps = 200;
    config.b_values = {0.1};
    config.m1_values = {8, 12};
    config.replications = 8;
    config.seed = 777;

    config.workers = 1;
    std::ostringstream csv1;
    emit_table(run_experiment(config), csv1);

    config.workers = 8;
    std::ostringstream csv8;
    emit_table(run_experiment(config), csv8);

    c.check(csv1.str() == csv8.str(), "workers 1 vs 8 produce identical bytes (%zu bytes)",
            csv1.str().size());

    const double elapsed = seconds_since(t0);
    c.check(elapsed < 120.0, "runtime %.1f s < 2 min", elapsed);
    return report("7 (determinism)", c, elapsed);
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7};

    int rc = 0;
    if (wanted.count(1)) rc |= criterion1();
    if (wanted.count(2)) rc |= criterion2();
    if (wanted.count(3)) rc |= criterion3();
    if (wanted.count(4)) rc |= criterion4();
    if (wanted.count(5) || wanted.count(6))
        rc |= criteria5and6(wanted.count(5) > 0, wanted.count(6) > 0);
    if (wanted.count(7)) rc |= criterion7();
    return rc;
}
