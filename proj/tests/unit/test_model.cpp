#include <doctest.h>

#include <cmath>

#include "spde2d/errors.hpp"
#include "spde2d/model.hpp"

using namespace spde2d;

namespace {

GridFunction sample_eigenfunction(int l1, int l2, const SpdeCoefficients& coeffs, int n) {
    GridFunction f;
    f.ys.resize(n + 1);
    f.zs.resize(n + 1);
    for (int i = 0; i <= n; ++i) f.ys[i] = f.zs[i] = static_cast<double>(i) / n;
    f.values.resize(f.ys.size() * f.zs.size());
    for (std::size_t iy = 0; iy < f.ys.size(); ++iy)
        for (std::size_t iz = 0; iz < f.zs.size(); ++iz)
            f.at(iy, iz) = eigenfunction_eval(l1, l2, f.ys[iy], f.zs[iz], coeffs);
    return f;
}

}  // namespace

TEST_CASE("coefficient validation is eager") {
    CHECK_THROWS_AS(SpdeCoefficients(0, 0, 0, -1, 1), InvalidParameters);
    CHECK_THROWS_AS(SpdeCoefficients(0, 0, 0, 1, 0), InvalidParameters);
    // theta0 large enough to push lambda_{1,1} below zero
    CHECK_THROWS_AS(SpdeCoefficients(25.0, 0, 0, 1, 1), InvalidParameters);

    const SpdeCoefficients c(0, 0.2, 0.2, 0.2, 1);
    CHECK(c.kappa == doctest::Approx(1.0));
    CHECK(c.eta == doctest::Approx(1.0));
    CHECK(c.gamma == doctest::Approx(0.5));

    CHECK_THROWS_AS(NoiseSpec(0.0, 0.0, 10, 10), InvalidParameters);
    CHECK_THROWS_AS(NoiseSpec(2.0, 0.0, 10, 10), InvalidParameters);
    CHECK_THROWS_AS(NoiseSpec(0.5, -20.0, 10, 10), InvalidParameters);
    CHECK_THROWS_AS(NoiseSpec(0.5, 0.0, 0, 10), InvalidParameters);
}

TEST_CASE("eigenvalue closed form") {
    const SpdeCoefficients laplace(0, 0, 0, 1, 1);
    CHECK(eigenvalue(1, 1, laplace) == doctest::Approx(19.7392088021787).epsilon(1e-12));
    CHECK(eigenvalue(3, 4, laplace) == doctest::Approx(246.740110027234).epsilon(1e-12));

    const SpdeCoefficients sec3(0, 0.2, 0.2, 0.2, 1);
    CHECK(eigenvalue(1, 1, sec3) == doctest::Approx(4.04784176043574).epsilon(1e-12));

    CHECK_THROWS_AS(eigenvalue(0, 1, laplace), InvalidParameters);

    // Gamma cancels in differences: lambda(l1,l2) - lambda(1,1) = theta2 pi^2 (l1^2+l2^2-2)
    const double pi_sq = 9.869604401089358;
    for (int l1 = 1; l1 <= 5; ++l1)
        for (int l2 = 1; l2 <= 5; ++l2) {
            const double diff = eigenvalue(l1, l2, sec3) - eigenvalue(1, 1, sec3);
            const double expected = 0.2 * pi_sq * (l1 * l1 + l2 * l2 - 2);
            CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
        }

    // strictly increasing in l1^2 + l2^2
    CHECK(eigenvalue(2, 2, sec3) > eigenvalue(1, 2, sec3));
    CHECK(eigenvalue(1, 2, sec3) > eigenvalue(1, 1, sec3));
}

TEST_CASE("eigenfunction values and boundary") {
    const SpdeCoefficients plain(0, 0, 0, 1, 1);
    for (int l1 : {1, 2, 5})
        for (int l2 : {1, 3}) {
            CHECK(eigenfunction_eval(l1, l2, 0.0, 0.3, plain) == doctest::Approx(0.0));
            CHECK(eigenfunction_eval(l1, l2, 1.0, 0.3, plain) == doctest::Approx(0.0));
            CHECK(eigenfunction_eval(l1, l2, 0.4, 0.0, plain) == doctest::Approx(0.0));
        }
    CHECK(eigenfunction_eval(1, 1, 0.5, 0.5, plain) == doctest::Approx(2.0).epsilon(1e-14));

    const SpdeCoefficients drift(0, 1, 1, 1, 1);  // kappa = eta = 1
    CHECK(eigenfunction_eval(1, 1, 0.5, 0.5, drift) ==
          doctest::Approx(1.21306131942527).epsilon(1e-12));
}

TEST_CASE("mode weight") {
    const NoiseSpec unit(1.0, 0.0, 10, 10);
    CHECK(mode_weight(1, 1, unit) == doctest::Approx(0.225079079039277).epsilon(1e-12));

    const NoiseSpec damped(0.5, -19.5, 10, 10);
    CHECK(mode_weight(1, 1, damped) == doctest::Approx(1.42990014733334).epsilon(1e-12));

    // alpha -> 0 limit is 1 for every mode
    const NoiseSpec tiny_alpha(1e-12, 0.0, 10, 10);
    CHECK(mode_weight(7, 3, tiny_alpha) == doctest::Approx(1.0).epsilon(1e-9));

    // symmetric under (l1, l2) swap
    const NoiseSpec n(0.7, -5.0, 10, 10);
    for (int l1 = 1; l1 <= 4; ++l1)
        for (int l2 = l1; l2 <= 4; ++l2)
            CHECK(mode_weight(l1, l2, n) == mode_weight(l2, l1, n));

    // decreasing in l1^2 + l2^2
    CHECK(mode_weight(2, 1, n) < mode_weight(1, 1, n));
}

TEST_CASE("weighted inner product orthonormality on a 512^2 grid") {
    for (double kappa : {0.0, 1.0}) {
        for (double eta : {0.0, 1.0}) {
            const SpdeCoefficients coeffs(0, kappa, eta, 1.0, 1.0);
            // cache sampled eigenfunctions up to (4,4)
            std::vector<GridFunction> fs;
            for (int l1 = 1; l1 <= 4; ++l1)
                for (int l2 = 1; l2 <= 4; ++l2)
                    fs.push_back(sample_eigenfunction(l1, l2, coeffs, 512));
            for (std::size_t a = 0; a < fs.size(); ++a)
                for (std::size_t b = a; b < fs.size(); ++b) {
                    const double ip = weighted_inner_product(fs[a], fs[b], coeffs);
                    const double expected = (a == b) ? 1.0 : 0.0;
                    CHECK(std::fabs(ip - expected) < 1e-6);
                }
        }
    }
}

TEST_CASE("weighted inner product edge cases") {
    const SpdeCoefficients coeffs(0, 0, 0, 1, 1);
    GridFunction zero = sample_eigenfunction(1, 1, coeffs, 16);
    std::fill(zero.values.begin(), zero.values.end(), 0.0);
    const GridFunction e11 = sample_eigenfunction(1, 1, coeffs, 16);
    CHECK(weighted_inner_product(zero, e11, coeffs) == 0.0);

    GridFunction other = sample_eigenfunction(1, 1, coeffs, 32);
    CHECK_THROWS_AS(weighted_inner_product(e11, other, coeffs), GridMismatch);
}
