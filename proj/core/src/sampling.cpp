#include "spde2d/sampling.hpp"

#include <cmath>
#include <string>

#include "spde2d/errors.hpp"

namespace spde2d {

std::vector<double> ThinnedDesign::coarse_times() const {
    std::vector<double> out(static_cast<std::size_t>(n_steps_coarse) + 1);
    for (int i = 0; i <= n_steps_coarse; ++i) out[i] = times[4 * i];
    return out;
}

std::vector<double> ThinnedDesign::coarse_ys() const {
    std::vector<double> out(static_cast<std::size_t>(m1_coarse) + 1);
    for (int j = 0; j <= m1_coarse; ++j) out[j] = ys[2 * j];
    return out;
}

ThinnedDesign build_design(double b, int m1, int n_steps) {
    if (!(b > 0.0 && b < 0.5))
        throw InvalidParameters("invalid-b: b must lie in (0, 1/2), got " +
                                std::to_string(b));
    if (m1 < 2 || m1 % 2 != 0)
        throw InvalidParameters("odd-m1: m1 must be an even integer >= 2, got " +
                                std::to_string(m1));
    if (n_steps < 4 || n_steps % 4 != 0)
        throw InvalidParameters("N-not-divisible-by-4: got " + std::to_string(n_steps));

    ThinnedDesign d;
    d.b = b;
    d.m1 = m1;
    d.m2 = m1;
    d.n_steps = n_steps;
    d.delta = (1.0 - 2.0 * b) / m1;
    d.step = 1.0 / n_steps;
    d.r = d.delta / std::sqrt(d.step);
    d.m1_coarse = m1 / 2;
    d.m2_coarse = m1 / 2;
    d.n_steps_coarse = n_steps / 4;
    d.delta_coarse = 2.0 * d.delta;
    d.step_coarse = 4.0 * d.step;

    d.times.resize(static_cast<std::size_t>(n_steps) + 1);
    for (int i = 0; i <= n_steps; ++i) d.times[i] = static_cast<double>(i) / n_steps;
    d.ys.resize(static_cast<std::size_t>(m1) + 1);
    for (int j = 0; j <= m1; ++j) d.ys[j] = b + j * d.delta;
    return d;
}

IncrementCube triple_increments(const FieldSample& field) {
    if (field.n_times() < 2 || field.n_y() < 2 || field.n_z() < 2)
        throw GridMismatch("shape-mismatch: need at least two points per axis");

    IncrementCube cube;
    cube.n_time = static_cast<int>(field.n_times()) - 1;
    cube.n_y = static_cast<int>(field.n_y()) - 1;
    cube.n_z = static_cast<int>(field.n_z()) - 1;
    cube.values.resize(static_cast<std::size_t>(cube.n_time) * cube.n_y * cube.n_z);

    const int stride = static_cast<int>(field.n_z());
    std::size_t out = 0;
    for (int i = 1; i <= cube.n_time; ++i) {
        const double* cur = field.slice(i).data();
        const double* prev = field.slice(i - 1).data();
        for (int j = 1; j <= cube.n_y; ++j)
            for (int k = 1; k <= cube.n_z; ++k)
                cube.values[out++] = triple_increment_cell(cur, prev, stride, j, k);
    }
    return cube;
}

FieldSample coarsen(const FieldSample& fine, const ThinnedDesign& design) {
    if (fine.n_times() != static_cast<std::size_t>(design.n_steps) + 1 ||
        fine.n_y() != static_cast<std::size_t>(design.m1) + 1 ||
        fine.n_z() != static_cast<std::size_t>(design.m2) + 1)
        throw GridMismatch("shape-mismatch: field does not match the fine design");

    FieldSample coarse;
    coarse.times = design.coarse_times();
    coarse.ys.resize(static_cast<std::size_t>(design.m1_coarse) + 1);
    coarse.zs.resize(static_cast<std::size_t>(design.m2_coarse) + 1);
    for (int j = 0; j <= design.m1_coarse; ++j) coarse.ys[j] = fine.ys[2 * j];
    for (int k = 0; k <= design.m2_coarse; ++k) coarse.zs[k] = fine.zs[2 * k];

    coarse.values.resize(coarse.times.size() * coarse.ys.size() * coarse.zs.size());
    for (std::size_t i = 0; i < coarse.times.size(); ++i)
        for (std::size_t j = 0; j < coarse.ys.size(); ++j)
            for (std::size_t k = 0; k < coarse.zs.size(); ++k)
                coarse.value(i, j, k) = fine.value(4 * i, 2 * j, 2 * k);
    return coarse;
}

}  // namespace spde2d
