#pragma once

#include "spde2d/model.hpp"
#include "spde2d/sampling.hpp"

namespace spde2d {

/// Arguments of the limit constant psi_{r,alpha}(theta2); r = delta/sqrt(Delta).
struct PsiQuery {
    PsiQuery(double r, double alpha, double theta2, double rel_tol = 1e-8);

    double r;
    double alpha;
    double theta2;
    double rel_tol;
};

/// Parameter vector (kappa, eta, theta2, sigma^2) of the limit g_{r,alpha}.
struct ThetaVector {
    ThetaVector(double kappa, double eta, double theta2, double sigma_sq);

    double kappa;
    double eta;
    double theta2;
    double sigma_sq;
};

struct PsiResult {
    double value;
    double error_bound;  ///< certified absolute error of `value`
};

/// Bessel function of the first kind of order zero, |error| <= 1e-10 on
/// [0, 30] (argument reduced by evenness for x < 0). Power series below the
/// crossover, Hankel asymptotic expansion above it.
double bessel_j0(double x);

/// J0(sqrt(2) x) - 2 J0(x) + 1. Nonnegative for x >= 0; this is the
/// combination whose integral defines psi.
double bessel_combination(double x);

/// Independent right-hand side of the combination identity:
///   (2/pi) int_0^{pi/2} (1 - cos(x cos t)) (1 - cos(x sin t)) dt,
/// evaluated by composite quadrature. Equals bessel_combination(x).
double bessel_combination_quadrature(double x);

/// Closed form of int_0^inf x^{-1-2 alpha} (J0(sqrt2 c x) - 2 J0(c x) + 1) dx
/// for alpha in (0, 2):
///   c^{2a} Gamma(2-a) phi(a) / (a 2^{2a+1} Gamma(1+a)),
///   phi(a) = (2 - 2^a)/(1 - a), phi(1) = 2 ln 2.
/// This is the oscillatory part of the psi integrand; evaluating it exactly
/// removes any need to chase the slowly decaying Bessel tail numerically.
double combination_integral_closed_form(double c, double alpha);

/// psi_{r,alpha}(theta2) = 2 / (theta2^{1-alpha} pi) *
///   int_0^inf (1 - e^{-x^2}) x^{-1-2 alpha} (J0(sqrt2 r x / sqrt(theta2))
///                                            - 2 J0(r x / sqrt(theta2)) + 1) dx,
/// computed as the closed-form term minus the Gaussian-damped remainder
/// (series near 0, adaptive Gauss-Kronrod elsewhere, bounded tail). Throws
/// ToleranceNotAchieved when rel_tol cannot be certified.
PsiResult psi(const PsiQuery& query);

/// int_b^{1-b} e^{-c y} dy, evaluated via expm1 so c -> 0 is smooth.
double exp_window_integral(double c, double b);

/// g_{r,alpha}(theta) = sigma^2 psi_{r,alpha}(theta2) / (1-2b)^2 *
///   int int_{[b,1-b]^2} e^{-kappa y - eta z} dy dz,
/// with the window integral in closed form. Probability limit of the
/// normalized quadratic variation.
double g_limit(double r, double alpha, const ThetaVector& theta, double b,
               double rel_tol = 1e-8);

/// Variance of x(t) - x(s), s <= t, for the unit-noise OU process started
/// at zero: (1-e^{-2Lu})/(2L) + (1-e^{-Lu})^2 (1-e^{-2Ls})/(2L), u = t - s.
/// All terms nonnegative; expm1-based, stable for small L dt.
double ou_increment_variance(double lambda, double s, double t);

/// E[(T_{i,j,k} X)^2] for xi = 0 under truncation (K, L):
///   sigma^2 sum_{l1<=K, l2<=L} mu^{-alpha} (De1_j De2_k)^2 v(lambda, t_{i-1}, t_i)
/// where De are the spatial differences of the eigenfunction factors over
/// the cell. Indices are 1-based as in the increment sums.
double expected_triple_increment_sq(const ThinnedDesign& design, int i, int j, int k,
                                    const SpdeCoefficients& coeffs,
                                    const NoiseSpec& noise, int n_l1, int n_l2);

/// (1/(m N Delta^alpha)) sum_{i,j,k} E[(T_{i,j,k} X)^2] with the mode sums
/// separated and the time sum in closed form; converges to g_limit as
/// Delta -> 0 and the truncation grows. Uses noise.trunc_k/trunc_l.
double expected_quadratic_variation(const ThinnedDesign& design,
                                    const SpdeCoefficients& coeffs,
                                    const NoiseSpec& noise);

}  // namespace spde2d
