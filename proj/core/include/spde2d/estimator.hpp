#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spde2d/field.hpp"
#include "spde2d/kahan.hpp"
#include "spde2d/sampling.hpp"

namespace spde2d {

/// Mean squared triple increment on each design level:
///   v_fine = (1/(m N)) sum (T_{i,j,k} X)^2,  v_coarse likewise with the
/// coarse increments and counts. Both are zero only for the zero field.
struct QuadraticVariationPair {
    double v_fine = 0.0;
    double v_coarse = 0.0;
    std::int64_t m_fine = 0;    ///< m1 * m2
    std::int64_t n_fine = 0;    ///< N
    std::int64_t m_coarse = 0;
    std::int64_t n_coarse = 0;
};

struct AlphaEstimate {
    double alpha_hat = 0.0;
    QuadraticVariationPair v_pair;
    bool in_range = false;  ///< alpha_hat in (0, 2); never clamped
};

/// Compensated means of squared increments per level.
QuadraticVariationPair quadratic_variations(const IncrementCube& fine,
                                            const IncrementCube& coarse);

/// alpha_hat = log(v_coarse / v_fine) / log 4. Throws DegenerateVariation
/// if either variation is zero.
AlphaEstimate alpha_hat(const QuadraticVariationPair& pair);

/// Consumes fine-level time slices in order i = 0..N and accumulates both
/// quadratic variations without materializing increment cubes. Accumulation
/// order and arithmetic match the cube path exactly (bit-for-bit).
class StreamingAlphaAccumulator {
  public:
    explicit StreamingAlphaAccumulator(const ThinnedDesign& design);

    /// slice holds (m1+1) * (m2+1) values, row-major (y, z).
    void push_slice(int i, std::span<const double> slice);

    AlphaEstimate finalize() const;

  private:
    int m1_, m2_, n_steps_;
    int m1c_, m2c_, nc_;
    int next_i_ = 0;
    std::vector<double> prev_fine_, cur_coarse_, prev_coarse_;
    KahanSum acc_fine_, acc_coarse_;
};

/// Full pipeline on a fine-design field: coarsen, increments on both levels,
/// quadratic variations, log-ratio estimate. Uses the streaming accumulator.
AlphaEstimate estimate_from_field(const FieldSample& field, const ThinnedDesign& design);

}  // namespace spde2d
