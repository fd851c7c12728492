#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spde2d/field.hpp"
#include "spde2d/model.hpp"
#include "spde2d/sampling.hpp"

namespace spde2d {

/// Spectral coefficients x_{l1,l2}(t) of the truncated solution at the
/// current time, together with each mode's suspended Gaussian stream.
/// Streams are keyed by (seed, replication, l1, l2), so evolution is
/// reproducible and independent of mode iteration order or thread count.
struct ModeState {
    ModeState(int n_l1, int n_l2, std::uint64_t seed, std::uint64_t replication);
    ModeState(int n_l1, int n_l2, std::uint64_t seed, std::uint64_t replication,
              std::span<const double> initial_coeffs);

    int n_l1;
    int n_l2;
    double time = 0.0;
    std::int64_t step_count = 0;

    std::vector<double> coeffs;        ///< row-major (l1, l2)
    std::vector<std::uint64_t> rng;    ///< per-mode SplitMix64 state
    std::vector<double> spare_normal;  ///< cached Box-Muller second draws

    double& coeff(int l1, int l2) {
        return coeffs[static_cast<std::size_t>(l1 - 1) * n_l2 + (l2 - 1)];
    }
    double coeff(int l1, int l2) const {
        return coeffs[static_cast<std::size_t>(l1 - 1) * n_l2 + (l2 - 1)];
    }
};

/// Exact one-step transition of dx = -lambda x dt + noise_scale dw:
///   exp(-lambda dt) x + noise_scale sqrt((1 - exp(-2 lambda dt)) / (2 lambda)) g.
/// No time-discretization bias; the variance factor uses expm1 so the
/// Brownian limit lambda -> 0+ stays accurate.
double ou_step(double x, double lambda, double noise_scale, double dt, double gaussian);

/// Per-mode decay factors and noise standard deviations for a fixed dt.
/// Precomputed once per simulation since dt is constant across steps.
struct OuTransition {
    double dt;
    std::vector<double> decay;
    std::vector<double> noise_std;
};

OuTransition make_transition(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                             double dt);

/// Advances every mode one exact OU step. Identical results for any
/// `threads`: modes are independent and own their streams.
void evolve(ModeState& state, const OuTransition& transition, int threads = 1);
void evolve(ModeState& state, const SpdeCoefficients& coeffs, const NoiseSpec& noise,
            double dt, int threads = 1);

/// Precomputed eigenfunction matrices for evaluating the spectral sum
///   X(t_i)(y, z) = sum_{l1,l2} x_{l1,l2}(t_i) e1_{l1}(y) e2_{l2}(z)
/// as two dense contractions per time slice.
class FieldEvaluator {
  public:
    FieldEvaluator(const SpdeCoefficients& coeffs, int n_l1, int n_l2,
                   std::span<const double> ys, std::span<const double> zs);

    int n_y() const { return static_cast<int>(ys_.size()); }
    int n_z() const { return static_cast<int>(zs_.size()); }
    std::size_t scratch_size() const { return ys_.size() * static_cast<std::size_t>(n_l2_); }

    /// out must hold n_y * n_z doubles, scratch at least scratch_size().
    void eval(const ModeState& state, std::span<double> out,
              std::vector<double>& scratch) const;

    const std::vector<double>& ys() const { return ys_; }
    const std::vector<double>& zs() const { return zs_; }

  private:
    int n_l1_;
    int n_l2_;
    std::vector<double> ys_, zs_;
    std::vector<double> e1_;  ///< (l1, y), row-major
    std::vector<double> e2_;  ///< (l2, z), row-major
};

/// Dense evaluation of a sequence of states on a coordinate grid. Matches
/// the naive quadruple-loop sum up to accumulated round-off.
FieldSample evaluate_field(std::span<const ModeState> histories,
                           const SpdeCoefficients& coeffs,
                           std::vector<double> ys, std::vector<double> zs,
                           int threads = 1);

struct SimulateOptions {
    /// When positive, evaluation coordinates are rounded to the nearest
    /// lattice point j / snap_m1 (resp. snap_m2) for ingesting data gridded
    /// on a regular lattice. Zero means exact thinned coordinates.
    int snap_m1 = 0;
    int snap_m2 = 0;
};

/// Simulates N exact OU steps from xi = 0 and streams each time slice,
/// evaluated at the design's fine coordinates, to `sink(i, slice)` for
/// i = 0..N. Working memory stays O(K L + m); nothing time-indexed is kept.
void simulate_stream(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                     const ThinnedDesign& design, std::uint64_t seed,
                     std::uint64_t replication,
                     const std::function<void(int, std::span<const double>)>& sink,
                     const SimulateOptions& options = {});

/// Same run, materialized as a FieldSample on the fine design.
FieldSample simulate_dataset(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                             const ThinnedDesign& design, std::uint64_t seed,
                             std::uint64_t replication,
                             const SimulateOptions& options = {});

}  // namespace spde2d
