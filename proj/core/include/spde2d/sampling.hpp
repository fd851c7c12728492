#pragma once

#include <vector>

#include "spde2d/field.hpp"

namespace spde2d {

/// Thinned observation design. The fine level observes at
///   y_j = b + j delta (j = 0..m1), z_k likewise, t_i = i/N (i = 0..N)
/// with delta = (1-2b)/m1. The coarse level takes every other space point
/// and every fourth time, so delta' = 2 delta and Delta' = 4 Delta exactly
/// and the scale ratio r = delta / sqrt(Delta) is shared by both levels.
struct ThinnedDesign {
    double b;
    int m1;       ///< spatial cells per axis, even; m2 == m1
    int m2;
    int n_steps;  ///< N, divisible by 4

    double delta;  ///< (1 - 2b) / m1
    double step;   ///< Delta = 1 / N
    double r;      ///< delta / sqrt(step)

    int m1_coarse;        ///< m1 / 2
    int m2_coarse;
    int n_steps_coarse;   ///< N / 4
    double delta_coarse;  ///< 2 delta
    double step_coarse;   ///< 4 Delta

    std::vector<double> times;  ///< i / N, i = 0..N
    std::vector<double> ys;     ///< b + j delta, j = 0..m1; zs are identical

    /// Coarse vectors are index subsets of the fine ones (no re-derivation),
    /// so t'_i = t_{4i} and y'_j = y_{2j} hold bitwise.
    std::vector<double> coarse_times() const;
    std::vector<double> coarse_ys() const;
};

/// Validates b in (0, 1/2), m1 even >= 2, N >= 4 divisible by 4, and fills
/// in every derived quantity and coordinate vector.
ThinnedDesign build_design(double b, int m1, int n_steps);

/// Triple increments T_{i,j,k}X on one design level, i = 1..N, j = 1..m1,
/// k = 1..m2, stored 0-based and row-major (i, j, k).
struct IncrementCube {
    int n_time;
    int n_y;
    int n_z;
    std::vector<double> values;

    double at(int i, int j, int k) const {
        return values[(static_cast<std::size_t>(i) * n_y + j) * n_z + k];
    }
};

/// Eight-term alternating sum over one space-time cell: the spatial double
/// difference at the later time minus the same at the earlier time. `cur`
/// and `prev` are (n_y x n_z) slices with row stride `stride`; j, k >= 1.
/// The association order is fixed here and shared by the cube and streaming
/// estimator paths so that both produce bit-identical sums.
inline double triple_increment_cell(const double* cur, const double* prev,
                                    int stride, int j, int k) {
    const double d_cur = (cur[j * stride + k] - cur[(j - 1) * stride + k]) -
                         (cur[j * stride + (k - 1)] - cur[(j - 1) * stride + (k - 1)]);
    const double d_prev = (prev[j * stride + k] - prev[(j - 1) * stride + k]) -
                          (prev[j * stride + (k - 1)] - prev[(j - 1) * stride + (k - 1)]);
    return d_cur - d_prev;
}

/// Evaluates the 8-term formula over every cell of a sampled field (either
/// design level; dimensions are taken from the field itself).
IncrementCube triple_increments(const FieldSample& field);

/// Restricts a fine-level field to the coarse level by selecting times t_{4i}
/// and coordinates y_{2j}, z_{2k}. Pure index bookkeeping, no interpolation.
FieldSample coarsen(const FieldSample& fine, const ThinnedDesign& design);

}  // namespace spde2d
