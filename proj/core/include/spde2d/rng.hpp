#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace spde2d {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Key for the Gaussian stream of one mode of one replication. Each word is
/// folded through the finalizer so that changing any of (seed, replication,
/// l1, l2) rekeys the whole stream.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t replication,
                                   std::uint32_t l1, std::uint32_t l2) noexcept {
    std::uint64_t h = mix64(seed + kGoldenGamma);
    h = mix64(h ^ (replication * kGoldenGamma + 0xD1B54A32D192ED03ULL));
    h = mix64(h ^ ((static_cast<std::uint64_t>(l1) << 32 | l2) * kGoldenGamma +
                   0x8CB92BA72F3D8DD7ULL));
    return h;
}

/// SplitMix64 sequence started at a derived key. The state is a plain word,
/// so streams can be suspended and resumed (ModeState stores one per mode).
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) noexcept : state_(key) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    /// Uniform in (0, 1]; never 0, so std::log(u) is finite.
    double next_unit() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    std::uint64_t state() const noexcept { return state_; }

  private:
    std::uint64_t state_;
};

struct NormalPair {
    double first;
    double second;
};

/// Box-Muller transform of two consecutive uniform draws.
inline NormalPair normal_pair(CounterRng& rng) noexcept {
    const double u1 = rng.next_unit();
    const double u2 = rng.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// One standard normal per call; pairs are generated eagerly and the second
/// member cached, matching the layout ModeState uses for its per-mode arrays.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t key) noexcept : rng_(key) {}

    double next() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const NormalPair p = normal_pair(rng_);
        spare_ = p.second;
        have_spare_ = true;
        return p.first;
    }

  private:
    CounterRng rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace spde2d
