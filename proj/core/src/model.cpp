#include "spde2d/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spde2d/errors.hpp"

namespace spde2d {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPiSq = kPi * kPi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}  // namespace

SpdeCoefficients::SpdeCoefficients(double theta0_, double theta1_, double eta1_,
                                   double theta2_, double sigma_)
    : theta0(theta0_), theta1(theta1_), eta1(eta1_), theta2(theta2_), sigma(sigma_) {
    if (!(theta2 > 0.0))
        throw InvalidParameters("invalid-parameters: theta2 must be positive");
    if (!(sigma > 0.0))
        throw InvalidParameters("invalid-parameters: sigma must be positive");
    kappa = theta1 / theta2;
    eta = eta1 / theta2;
    gamma = -theta0 / theta2 + (kappa * kappa + eta * eta) / 4.0;
    const double lambda11 = theta2 * (2.0 * kPiSq + gamma);
    if (!(lambda11 > 0.0))
        throw InvalidParameters("invalid-parameters: lambda_{1,1} = " +
                                std::to_string(lambda11) + " must be positive");
}

NoiseSpec::NoiseSpec(double alpha_, double mu0_, int trunc_k_, int trunc_l_)
    : alpha(alpha_), mu0(mu0_), trunc_k(trunc_k_), trunc_l(trunc_l_) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw InvalidParameters("invalid-parameters: alpha must lie in (0, 2)");
    if (!(mu0 > -2.0 * kPiSq))
        throw InvalidParameters("invalid-parameters: mu0 must exceed -2 pi^2");
    if (trunc_k < 1 || trunc_l < 1)
        throw InvalidParameters("invalid-parameters: truncation must be >= 1");
}

double eigenvalue(int l1, int l2, const SpdeCoefficients& coeffs) {
    if (l1 < 1 || l2 < 1)
        throw InvalidParameters("invalid-parameters: mode indices start at 1");
    const double s = static_cast<double>(l1) * l1 + static_cast<double>(l2) * l2;
    return coeffs.theta2 * (kPiSq * s + coeffs.gamma);
}

double eigenfunction_y(int l1, double y, const SpdeCoefficients& coeffs) {
    return kSqrt2 * std::sin(kPi * l1 * y) * std::exp(-coeffs.kappa * y / 2.0);
}

double eigenfunction_z(int l2, double z, const SpdeCoefficients& coeffs) {
    return kSqrt2 * std::sin(kPi * l2 * z) * std::exp(-coeffs.eta * z / 2.0);
}

double eigenfunction_eval(int l1, int l2, double y, double z,
                          const SpdeCoefficients& coeffs) {
    if (l1 < 1 || l2 < 1)
        throw InvalidParameters("invalid-parameters: mode indices start at 1");
    return eigenfunction_y(l1, y, coeffs) * eigenfunction_z(l2, z, coeffs);
}

double mode_weight(int l1, int l2, const NoiseSpec& noise) {
    if (l1 < 1 || l2 < 1)
        throw InvalidParameters("invalid-parameters: mode indices start at 1");
    const double s = static_cast<double>(l1) * l1 + static_cast<double>(l2) * l2;
    const double mu = kPiSq * s + noise.mu0;
    if (!(mu > 0.0))
        throw InvalidParameters("invalid-parameters: mu_{l1,l2} must be positive");
    return std::pow(mu, -noise.alpha / 2.0);
}

namespace {

// Composite trapezoidal weights for an arbitrary strictly increasing grid.
std::vector<double> trapezoid_weights(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = xs[i + 1] - xs[i];
        w[i] += h / 2.0;
        w[i + 1] += h / 2.0;
    }
    return w;
}

}  // namespace

double weighted_inner_product(const GridFunction& u, const GridFunction& v,
                              const SpdeCoefficients& coeffs) {
    if (u.ys != v.ys || u.zs != v.zs)
        throw GridMismatch("mismatched-grids: inner product requires a common grid");
    if (u.ys.size() < 2 || u.zs.size() < 2)
        throw GridMismatch("mismatched-grids: need at least a 2x2 grid");
    if (u.values.size() != u.ys.size() * u.zs.size() ||
        v.values.size() != u.values.size())
        throw GridMismatch("mismatched-grids: value array shape");

    const std::vector<double> wy = trapezoid_weights(u.ys);
    const std::vector<double> wz = trapezoid_weights(u.zs);

    double total = 0.0;
    for (std::size_t iy = 0; iy < u.ys.size(); ++iy) {
        const double ey = std::exp(coeffs.kappa * u.ys[iy]);
        double row = 0.0;
        for (std::size_t iz = 0; iz < u.zs.size(); ++iz) {
            const double w = wz[iz] * std::exp(coeffs.eta * u.zs[iz]);
            row += w * u.at(iy, iz) * v.at(iy, iz);
        }
        total += wy[iy] * ey * row;
    }
    return total;
}

}  // namespace spde2d
