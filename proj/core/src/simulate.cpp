#include "spde2d/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "spde2d/errors.hpp"
#include "spde2d/rng.hpp"

namespace spde2d {

namespace {

std::size_t mode_count(int n_l1, int n_l2) {
    return static_cast<std::size_t>(n_l1) * static_cast<std::size_t>(n_l2);
}

void run_partitioned(int n_rows, int threads, const std::function<void(int, int)>& body) {
    if (threads <= 1 || n_rows < 2) {
        body(0, n_rows);
        return;
    }
    threads = std::min(threads, n_rows);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        const int begin = static_cast<int>(static_cast<long long>(n_rows) * t / threads);
        const int end = static_cast<int>(static_cast<long long>(n_rows) * (t + 1) / threads);
        pool.emplace_back(body, begin, end);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ModeState::ModeState(int n_l1_, int n_l2_, std::uint64_t seed, std::uint64_t replication)
    : n_l1(n_l1_), n_l2(n_l2_) {
    if (n_l1 < 1 || n_l2 < 1)
        throw InvalidParameters("invalid-parameters: mode counts must be >= 1");
    const std::size_t n = mode_count(n_l1, n_l2);
    coeffs.assign(n, 0.0);
    spare_normal.assign(n, 0.0);
    rng.resize(n);
    std::size_t idx = 0;
    for (int l1 = 1; l1 <= n_l1; ++l1)
        for (int l2 = 1; l2 <= n_l2; ++l2)
            rng[idx++] = stream_key(seed, replication, static_cast<std::uint32_t>(l1),
                                    static_cast<std::uint32_t>(l2));
}

ModeState::ModeState(int n_l1_, int n_l2_, std::uint64_t seed, std::uint64_t replication,
                     std::span<const double> initial_coeffs)
    : ModeState(n_l1_, n_l2_, seed, replication) {
    if (initial_coeffs.size() != coeffs.size())
        throw GridMismatch("shape-mismatch: initial coefficient array");
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (!std::isfinite(initial_coeffs[i]))
            throw InvalidParameters("invalid-parameters: initial coefficients must be finite");
        coeffs[i] = initial_coeffs[i];
    }
}

double ou_step(double x, double lambda, double noise_scale, double dt, double gaussian) {
    if (!(dt > 0.0)) throw InvalidParameters("nonpositive-dt");
    const double decay = std::exp(-lambda * dt);
    const double var_factor = -std::expm1(-2.0 * lambda * dt) / (2.0 * lambda);
    const double step_std = noise_scale * std::sqrt(var_factor);
    return decay * x + step_std * gaussian;
}

OuTransition make_transition(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                             double dt) {
    if (!(dt > 0.0)) throw InvalidParameters("nonpositive-dt");
    OuTransition t;
    t.dt = dt;
    const std::size_t n = mode_count(noise.trunc_k, noise.trunc_l);
    t.decay.resize(n);
    t.noise_std.resize(n);
    std::size_t idx = 0;
    for (int l1 = 1; l1 <= noise.trunc_k; ++l1) {
        for (int l2 = 1; l2 <= noise.trunc_l; ++l2, ++idx) {
            const double lambda = eigenvalue(l1, l2, coeffs);
            const double noise_scale = coeffs.sigma * mode_weight(l1, l2, noise);
            const double var_factor = -std::expm1(-2.0 * lambda * dt) / (2.0 * lambda);
            t.decay[idx] = std::exp(-lambda * dt);
            t.noise_std[idx] = noise_scale * std::sqrt(var_factor);
        }
    }
    return t;
}

void evolve(ModeState& state, const OuTransition& transition, int threads) {
    const std::size_t n = mode_count(state.n_l1, state.n_l2);
    if (transition.decay.size() != n)
        throw GridMismatch("shape-mismatch: transition table does not match state");

    const bool fresh_pair = (state.step_count % 2) == 0;
    double* x = state.coeffs.data();
    double* spare = state.spare_normal.data();
    std::uint64_t* rng_state = state.rng.data();
    const double* decay = transition.decay.data();
    const double* noise_std = transition.noise_std.data();

    run_partitioned(state.n_l1, threads, [&](int row_begin, int row_end) {
        const std::size_t begin = static_cast<std::size_t>(row_begin) * state.n_l2;
        const std::size_t end = static_cast<std::size_t>(row_end) * state.n_l2;
        if (fresh_pair) {
            for (std::size_t i = begin; i < end; ++i) {
                CounterRng rng(rng_state[i]);
                const NormalPair p = normal_pair(rng);
                rng_state[i] = rng.state();
                spare[i] = p.second;
                x[i] = decay[i] * x[i] + noise_std[i] * p.first;
            }
        } else {
            for (std::size_t i = begin; i < end; ++i)
                x[i] = decay[i] * x[i] + noise_std[i] * spare[i];
        }
    });

    state.step_count += 1;
    state.time += transition.dt;
}

void evolve(ModeState& state, const SpdeCoefficients& coeffs, const NoiseSpec& noise,
            double dt, int threads) {
    if (noise.trunc_k != state.n_l1 || noise.trunc_l != state.n_l2)
        throw GridMismatch("shape-mismatch: truncation does not match state");
    const OuTransition transition = make_transition(coeffs, noise, dt);
    evolve(state, transition, threads);
}

FieldEvaluator::FieldEvaluator(const SpdeCoefficients& coeffs, int n_l1, int n_l2,
                               std::span<const double> ys, std::span<const double> zs)
    : n_l1_(n_l1), n_l2_(n_l2), ys_(ys.begin(), ys.end()), zs_(zs.begin(), zs.end()) {
    if (n_l1 < 1 || n_l2 < 1)
        throw InvalidParameters("invalid-parameters: mode counts must be >= 1");
    for (double y : ys_)
        if (!(y >= 0.0 && y <= 1.0))
            throw InvalidParameters("coordinate-out-of-range: y must lie in [0, 1]");
    for (double z : zs_)
        if (!(z >= 0.0 && z <= 1.0))
            throw InvalidParameters("coordinate-out-of-range: z must lie in [0, 1]");

    e1_.resize(static_cast<std::size_t>(n_l1) * ys_.size());
    for (int l1 = 1; l1 <= n_l1; ++l1)
        for (std::size_t iy = 0; iy < ys_.size(); ++iy)
            e1_[static_cast<std::size_t>(l1 - 1) * ys_.size() + iy] =
                eigenfunction_y(l1, ys_[iy], coeffs);

    e2_.resize(static_cast<std::size_t>(n_l2) * zs_.size());
    for (int l2 = 1; l2 <= n_l2; ++l2)
        for (std::size_t iz = 0; iz < zs_.size(); ++iz)
            e2_[static_cast<std::size_t>(l2 - 1) * zs_.size() + iz] =
                eigenfunction_z(l2, zs_[iz], coeffs);
}

void FieldEvaluator::eval(const ModeState& state, std::span<double> out,
                          std::vector<double>& scratch) const {
    if (state.n_l1 != n_l1_ || state.n_l2 != n_l2_)
        throw GridMismatch("shape-mismatch: state does not match evaluator");
    const std::size_t ny = ys_.size(), nz = zs_.size();
    if (out.size() != ny * nz)
        throw GridMismatch("shape-mismatch: output slice size");
    scratch.assign(ny * static_cast<std::size_t>(n_l2_), 0.0);

    // scratch[iy][l2] = sum_l1 e1[l1][iy] * x[l1][l2]; the x row stays hot
    // across the iy loop and the inner l2 loop is contiguous on both sides.
    const double* x = state.coeffs.data();
    for (int l1 = 0; l1 < n_l1_; ++l1) {
        const double* xrow = x + static_cast<std::size_t>(l1) * n_l2_;
        const double* e1row = e1_.data() + static_cast<std::size_t>(l1) * ny;
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const double e = e1row[iy];
            double* trow = scratch.data() + iy * n_l2_;
            for (int l2 = 0; l2 < n_l2_; ++l2)
                trow[l2] = std::fma(e, xrow[l2], trow[l2]);
        }
    }

    // out[iy][iz] = sum_l2 scratch[iy][l2] * e2[l2][iz]
    for (std::size_t iy = 0; iy < ny; ++iy) {
        double* orow = out.data() + iy * nz;
        std::fill(orow, orow + nz, 0.0);
        const double* trow = scratch.data() + iy * n_l2_;
        for (int l2 = 0; l2 < n_l2_; ++l2) {
            const double t = trow[l2];
            const double* e2row = e2_.data() + static_cast<std::size_t>(l2) * nz;
            for (std::size_t iz = 0; iz < nz; ++iz)
                orow[iz] = std::fma(t, e2row[iz], orow[iz]);
        }
    }
}

FieldSample evaluate_field(std::span<const ModeState> histories,
                           const SpdeCoefficients& coeffs,
                           std::vector<double> ys, std::vector<double> zs,
                           int threads) {
    if (histories.empty())
        throw InvalidParameters("invalid-parameters: no states to evaluate");
    const int n_l1 = histories.front().n_l1;
    const int n_l2 = histories.front().n_l2;
    for (const ModeState& s : histories)
        if (s.n_l1 != n_l1 || s.n_l2 != n_l2)
            throw GridMismatch("shape-mismatch: states have differing truncation");

    const FieldEvaluator evaluator(coeffs, n_l1, n_l2, ys, zs);

    FieldSample field;
    field.times.resize(histories.size());
    for (std::size_t i = 0; i < histories.size(); ++i) field.times[i] = histories[i].time;
    field.ys = std::move(ys);
    field.zs = std::move(zs);
    field.values.resize(histories.size() * field.ys.size() * field.zs.size());

    run_partitioned(static_cast<int>(histories.size()), threads, [&](int begin, int end) {
        std::vector<double> scratch;
        for (int i = begin; i < end; ++i)
            evaluator.eval(histories[i], field.slice(i), scratch);
    });
    return field;
}

namespace {

std::vector<double> maybe_snap(const std::vector<double>& coords, int lattice) {
    if (lattice <= 0) return coords;
    std::vector<double> snapped(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        snapped[i] = std::round(coords[i] * lattice) / lattice;
    return snapped;
}

}  // namespace

void simulate_stream(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                     const ThinnedDesign& design, std::uint64_t seed,
                     std::uint64_t replication,
                     const std::function<void(int, std::span<const double>)>& sink,
                     const SimulateOptions& options) {
    const std::vector<double> ys = maybe_snap(design.ys, options.snap_m1);
    const std::vector<double> zs = maybe_snap(design.ys, options.snap_m2);
    const FieldEvaluator evaluator(coeffs, noise.trunc_k, noise.trunc_l, ys, zs);
    const OuTransition transition = make_transition(coeffs, noise, design.step);

    ModeState state(noise.trunc_k, noise.trunc_l, seed, replication);
    std::vector<double> slice(ys.size() * zs.size());
    std::vector<double> scratch;
    for (int i = 0; i <= design.n_steps; ++i) {
        if (i > 0) evolve(state, transition);
        evaluator.eval(state, slice, scratch);
        sink(i, slice);
    }
}

FieldSample simulate_dataset(const SpdeCoefficients& coeffs, const NoiseSpec& noise,
                             const ThinnedDesign& design, std::uint64_t seed,
                             std::uint64_t replication, const SimulateOptions& options) {
    FieldSample field;
    field.times = design.times;
    field.ys = maybe_snap(design.ys, options.snap_m1);
    field.zs = maybe_snap(design.ys, options.snap_m2);
    field.values.resize(field.times.size() * field.ys.size() * field.zs.size());

    simulate_stream(coeffs, noise, design, seed, replication,
                    [&](int i, std::span<const double> slice) {
                        std::copy(slice.begin(), slice.end(), field.slice(i).begin());
                    },
                    options);
    return field;
}

}  // namespace spde2d
