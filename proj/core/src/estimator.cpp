#include "spde2d/estimator.hpp"

#include <cmath>

#include "spde2d/errors.hpp"

namespace spde2d {

QuadraticVariationPair quadratic_variations(const IncrementCube& fine,
                                            const IncrementCube& coarse) {
    if (fine.values.empty() || coarse.values.empty())
        throw InvalidParameters("empty-input: increment cubes must be nonempty");

    QuadraticVariationPair pair;
    pair.m_fine = static_cast<std::int64_t>(fine.n_y) * fine.n_z;
    pair.n_fine = fine.n_time;
    pair.m_coarse = static_cast<std::int64_t>(coarse.n_y) * coarse.n_z;
    pair.n_coarse = coarse.n_time;

    KahanSum sum_fine;
    for (double t : fine.values) sum_fine.add(t * t);
    pair.v_fine = sum_fine.value() / static_cast<double>(pair.m_fine * pair.n_fine);

    KahanSum sum_coarse;
    for (double t : coarse.values) sum_coarse.add(t * t);
    pair.v_coarse = sum_coarse.value() / static_cast<double>(pair.m_coarse * pair.n_coarse);
    return pair;
}

AlphaEstimate alpha_hat(const QuadraticVariationPair& pair) {
    if (!(pair.v_fine > 0.0) || !(pair.v_coarse > 0.0))
        throw DegenerateVariation(
            "degenerate-variation: a quadratic variation is zero (sigma = 0 or "
            "all-zero field?)");
    AlphaEstimate est;
    est.v_pair = pair;
    // log(vc/vf)/log(4) written via log2 so the exact ratios 1, 2, 4 map to
    // exactly 0, 0.5, 1.
    est.alpha_hat = std::log2(pair.v_coarse / pair.v_fine) / 2.0;
    est.in_range = est.alpha_hat > 0.0 && est.alpha_hat < 2.0;
    return est;
}

StreamingAlphaAccumulator::StreamingAlphaAccumulator(const ThinnedDesign& design)
    : m1_(design.m1), m2_(design.m2), n_steps_(design.n_steps),
      m1c_(design.m1_coarse), m2c_(design.m2_coarse), nc_(design.n_steps_coarse) {
    prev_fine_.resize(static_cast<std::size_t>(m1_ + 1) * (m2_ + 1));
    cur_coarse_.resize(static_cast<std::size_t>(m1c_ + 1) * (m2c_ + 1));
    prev_coarse_.resize(cur_coarse_.size());
}

void StreamingAlphaAccumulator::push_slice(int i, std::span<const double> slice) {
    if (i != next_i_ || i > n_steps_)
        throw GridMismatch("shape-mismatch: slices must arrive in order 0..N");
    if (slice.size() != prev_fine_.size())
        throw GridMismatch("shape-mismatch: slice size does not match design");

    const int stride = m2_ + 1;
    if (i >= 1) {
        for (int j = 1; j <= m1_; ++j)
            for (int k = 1; k <= m2_; ++k) {
                const double t =
                    triple_increment_cell(slice.data(), prev_fine_.data(), stride, j, k);
                acc_fine_.add(t * t);
            }
    }

    if (i % 4 == 0) {
        const int cstride = m2c_ + 1;
        for (int j = 0; j <= m1c_; ++j)
            for (int k = 0; k <= m2c_; ++k)
                cur_coarse_[static_cast<std::size_t>(j) * cstride + k] =
                    slice[static_cast<std::size_t>(2 * j) * stride + 2 * k];
        if (i >= 4) {
            for (int j = 1; j <= m1c_; ++j)
                for (int k = 1; k <= m2c_; ++k) {
                    const double t = triple_increment_cell(cur_coarse_.data(),
                                                           prev_coarse_.data(), cstride, j, k);
                    acc_coarse_.add(t * t);
                }
        }
        prev_coarse_.swap(cur_coarse_);
    }

    std::copy(slice.begin(), slice.end(), prev_fine_.begin());
    ++next_i_;
}

AlphaEstimate StreamingAlphaAccumulator::finalize() const {
    if (next_i_ != n_steps_ + 1)
        throw GridMismatch("shape-mismatch: not all slices were pushed");
    QuadraticVariationPair pair;
    pair.m_fine = static_cast<std::int64_t>(m1_) * m2_;
    pair.n_fine = n_steps_;
    pair.m_coarse = static_cast<std::int64_t>(m1c_) * m2c_;
    pair.n_coarse = nc_;
    pair.v_fine = acc_fine_.value() / static_cast<double>(pair.m_fine * pair.n_fine);
    pair.v_coarse =
        acc_coarse_.value() / static_cast<double>(pair.m_coarse * pair.n_coarse);
    return alpha_hat(pair);
}

AlphaEstimate estimate_from_field(const FieldSample& field, const ThinnedDesign& design) {
    if (field.n_times() != static_cast<std::size_t>(design.n_steps) + 1 ||
        field.n_y() != static_cast<std::size_t>(design.m1) + 1 ||
        field.n_z() != static_cast<std::size_t>(design.m2) + 1)
        throw GridMismatch("shape-mismatch: field does not match the fine design");

    StreamingAlphaAccumulator acc(design);
    for (int i = 0; i <= design.n_steps; ++i) acc.push_slice(i, field.slice(i));
    return acc.finalize();
}

}  // namespace spde2d
