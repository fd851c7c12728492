#include <cmath>
#include <ostream>
#include <string>

#include "spde2d/errors.hpp"
#include "spde2d/estimator.hpp"
#include "spde2d/experiment.hpp"
#include "spde2d/io.hpp"
#include "spde2d/kahan.hpp"
#include "spde2d/sampling.hpp"
#include "spde2d/simulate.hpp"
#include "spde2d/theory.hpp"

namespace spde2d {

VerifySuite parse_suite(const std::string& name) {
    if (name == "identities") return VerifySuite::identities;
    if (name == "oracle") return VerifySuite::oracle;
    if (name == "convergence") return VerifySuite::convergence;
    throw InvalidParameters("suite-unknown: " + name +
                            " (expected identities, oracle or convergence)");
}

std::string suite_name(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::identities: return "identities";
        case VerifySuite::oracle: return "oracle";
        case VerifySuite::convergence: return "convergence";
    }
    return "?";
}

bool VerifyReport::all_pass() const {
    for (const VerifyCheck& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

void add_check(VerifyReport& report, const std::string& name, bool pass, double value,
               double bound, std::string detail = {}) {
    report.checks.push_back({name, pass, value, bound, std::move(detail)});
}

VerifyReport verify_identities() {
    VerifyReport report{VerifySuite::identities, {}};
    const double rs[] = {0.5, 1.0, 2.0};
    const double alphas[] = {0.3, 0.5, 1.0, 1.5};
    const double theta2s[] = {0.2, 1.0};

    for (double r : rs)
        for (double alpha : alphas)
            for (double theta2 : theta2s) {
                const PsiResult p = psi(PsiQuery(r, alpha, theta2));
                const std::string tag = "r=" + format_double(r) + ",alpha=" +
                                        format_double(alpha) + ",theta2=" + format_double(theta2);
                add_check(report, "psi_positive", p.value > 0.0, p.value, 0.0, tag);

                // theta2 reduction: psi(r, a, t2) = t2^{a-1} psi(r / sqrt(t2), a, 1)
                const PsiResult ref = psi(PsiQuery(r / std::sqrt(theta2), alpha, 1.0));
                const double scaled = std::pow(theta2, alpha - 1.0) * ref.value;
                const double rel = std::fabs(p.value - scaled) / std::fabs(scaled);
                add_check(report, "psi_scaling", rel <= 1e-8, rel, 1e-8, tag);
            }

    for (double x : {0.1, 1.0, 5.0, 20.0}) {
        const double combo = bessel_combination(x);
        add_check(report, "bessel_combination_nonnegative", combo >= -1e-12, combo, -1e-12,
                  "x=" + format_double(x));
        const double rhs = bessel_combination_quadrature(x);
        const double err = std::fabs(combo - rhs);
        add_check(report, "bessel_combination_identity", err <= 1e-8, err, 1e-8,
                  "x=" + format_double(x));
    }
    return report;
}

VerifyReport verify_oracle() {
    VerifyReport report{VerifySuite::oracle, {}};
    const SpdeCoefficients coeffs(0.0, 0.2, 0.2, 0.2, 1.0);
    const NoiseSpec noise(0.5, -19.5, 64, 64);
    const ThinnedDesign design = build_design(0.1, 10, 100);
    const int reps = 200;
    const std::uint64_t seed = 0x5eedul;

    const double expected = expected_quadratic_variation(design, coeffs, noise);
    const double norm = std::pow(design.step, noise.alpha);

    KahanSum sum, sum_sq;
    for (int rep = 0; rep < reps; ++rep) {
        StreamingAlphaAccumulator acc(design);
        simulate_stream(coeffs, noise, design, seed, rep,
                        [&](int i, std::span<const double> slice) { acc.push_slice(i, slice); });
        const double stat = acc.finalize().v_pair.v_fine / norm;
        sum.add(stat);
        sum_sq.add(stat * stat);
    }
    const double mean = sum.value() / reps;
    const double var = (sum_sq.value() - reps * mean * mean) / (reps - 1);
    const double se = std::sqrt(var / reps);
    const double z = (mean - expected) / se;
    add_check(report, "mc_vs_series_expectation", std::fabs(z) <= 3.0, z, 3.0,
              "mean=" + format_double(mean) + ",expected=" + format_double(expected) +
                  ",se=" + format_double(se));
    return report;
}

VerifyReport verify_convergence() {
    VerifyReport report{VerifySuite::convergence, {}};
    // Parameters where the O(Delta) term dominates the K = 2000 truncation
    // floor of the expected quadratic variation. At alpha <= 0.5 the floor,
    // which scales like K^{-2 alpha} / Delta^{alpha}, swamps the gap.
    const SpdeCoefficients coeffs(0.0, 1.0, 1.0, 1.0, 1.0);
    const NoiseSpec noise(0.75, -19.5, 2000, 2000);
    // r is held fixed: doubling m1 while quadrupling N keeps delta/sqrt(Delta).
    const ThinnedDesign coarse = build_design(0.1, 8, 100);
    const ThinnedDesign fine = build_design(0.1, 16, 400);

    const ThetaVector theta(coeffs.kappa, coeffs.eta, coeffs.theta2,
                            coeffs.sigma * coeffs.sigma);
    const double g = g_limit(coarse.r, noise.alpha, theta, coarse.b);
    const double gap_coarse = std::fabs(expected_quadratic_variation(coarse, coeffs, noise) - g);
    const double gap_fine = std::fabs(expected_quadratic_variation(fine, coeffs, noise) - g);
    const double factor = gap_coarse / gap_fine;
    add_check(report, "step1_gap_shrink_factor", factor >= 2.5 && factor <= 6.0, factor, 4.0,
              "gap_N100=" + format_double(gap_coarse) + ",gap_N400=" + format_double(gap_fine));
    return report;
}

}  // namespace

VerifyReport run_verify(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::identities: return verify_identities();
        case VerifySuite::oracle: return verify_oracle();
        case VerifySuite::convergence: return verify_convergence();
    }
    throw InvalidParameters("suite-unknown");
}

void print_report(const VerifyReport& report, std::ostream& out) {
    int passed = 0;
    for (const VerifyCheck& c : report.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << format_double(c.value)
            << " bound=" << format_double(c.bound);
        if (!c.detail.empty()) out << ' ' << c.detail;
        out << '\n';
        if (c.pass) ++passed;
    }
    out << "verify " << suite_name(report.suite) << ": " << passed << '/'
        << report.checks.size() << " checks passed\n";
}

}  // namespace spde2d
