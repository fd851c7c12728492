#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spde2d {

/// Field values X_{t_i}(y_j, z_k) on a rectangular space-time grid,
/// row-major (time, y, z). Times are strictly increasing and start at 0.
struct FieldSample {
    std::vector<double> times;
    std::vector<double> ys;
    std::vector<double> zs;
    std::vector<double> values;

    std::size_t n_times() const { return times.size(); }
    std::size_t n_y() const { return ys.size(); }
    std::size_t n_z() const { return zs.size(); }

    double value(std::size_t i, std::size_t j, std::size_t k) const {
        return values[(i * ys.size() + j) * zs.size() + k];
    }
    double& value(std::size_t i, std::size_t j, std::size_t k) {
        return values[(i * ys.size() + j) * zs.size() + k];
    }

    std::span<const double> slice(std::size_t i) const {
        const std::size_t n = ys.size() * zs.size();
        return {values.data() + i * n, n};
    }
    std::span<double> slice(std::size_t i) {
        const std::size_t n = ys.size() * zs.size();
        return {values.data() + i * n, n};
    }
};

}  // namespace spde2d
