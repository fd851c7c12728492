#pragma once

#include <cstddef>
#include <vector>

namespace spde2d {

/// Drift coefficients of the operator
///   theta2 (d^2/dy^2 + d^2/dz^2) + theta1 d/dy + eta1 d/dz + theta0
/// on (0,1)^2 with Dirichlet boundary, plus the derived quantities that
/// appear in its eigenpairs. Validated at construction: theta2 > 0,
/// sigma > 0 and lambda_{1,1} = theta2 (2 pi^2 + gamma) > 0.
struct SpdeCoefficients {
    SpdeCoefficients(double theta0, double theta1, double eta1, double theta2,
                     double sigma);

    double theta0;
    double theta1;
    double eta1;
    double theta2;
    double sigma;

    double kappa;  ///< theta1 / theta2
    double eta;    ///< eta1 / theta2
    double gamma;  ///< -theta0/theta2 + (kappa^2 + eta^2)/4
};

/// Spectrum of the driving noise: mode (l1, l2) carries amplitude
/// mu_{l1,l2}^{-alpha/2} with mu_{l1,l2} = pi^2 (l1^2 + l2^2) + mu0,
/// truncated at (trunc_k, trunc_l) modes in the simulator. Requires
/// alpha in (0, 2) and mu0 > -2 pi^2 so every retained mu is positive.
struct NoiseSpec {
    NoiseSpec(double alpha, double mu0, int trunc_k, int trunc_l);

    double alpha;
    double mu0;
    int trunc_k;
    int trunc_l;
};

/// lambda_{l1,l2} = theta2 (pi^2 (l1^2 + l2^2) + gamma); strictly increasing
/// in l1^2 + l2^2.
double eigenvalue(int l1, int l2, const SpdeCoefficients& coeffs);

/// One-dimensional eigenfunction factors:
///   e^(1)_l1(y) = sqrt(2) sin(pi l1 y) exp(-kappa y / 2)
///   e^(2)_l2(z) = sqrt(2) sin(pi l2 z) exp(-eta z / 2)
double eigenfunction_y(int l1, double y, const SpdeCoefficients& coeffs);
double eigenfunction_z(int l2, double z, const SpdeCoefficients& coeffs);

/// Product eigenfunction e_{l1,l2}(y,z); vanishes on the boundary.
double eigenfunction_eval(int l1, int l2, double y, double z,
                          const SpdeCoefficients& coeffs);

/// mu_{l1,l2}^{-alpha/2}; symmetric in (l1, l2).
double mode_weight(int l1, int l2, const NoiseSpec& noise);

/// Scalar function sampled on a rectangular grid over [0,1]^2,
/// row-major (y, z).
struct GridFunction {
    std::vector<double> ys;
    std::vector<double> zs;
    std::vector<double> values;

    double& at(std::size_t iy, std::size_t iz) { return values[iy * zs.size() + iz]; }
    double at(std::size_t iy, std::size_t iz) const { return values[iy * zs.size() + iz]; }
};

/// Weighted inner product <u, v> = int int u v exp(kappa y + eta z) dy dz,
/// approximated by tensor-product composite trapezoidal quadrature on the
/// common sampling grid. The eigenfunctions are orthonormal under it.
double weighted_inner_product(const GridFunction& u, const GridFunction& v,
                              const SpdeCoefficients& coeffs);

}  // namespace spde2d
