#pragma once

#include <cstdint>
#include <limits>

namespace noisy_select {

__extension__ typedef unsigned __int128 uint128;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the i-th output is a pure function of (key, i).
///
/// Streams are derived with split(), which hashes a stream index into a new
/// key. A trial stream is therefore fully determined by (master seed, trial
/// index) and never depends on how many values other trials consumed.
/// All derived quantities (uniform doubles, bounded integers) are computed
/// here rather than through <random> distributions, whose output is
/// implementation-defined.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept
        : key_(mix64(mix64(seed) ^ (stream * kGolden + 0x632be59bd9b4e019ULL))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix64(key_ + (++counter_) * kGolden); }

    Rng split(std::uint64_t stream) const noexcept {
        Rng child;
        child.key_ = mix64(key_ ^ mix64(stream * kGolden + 0x9e3779b97f4a7c15ULL));
        return child;
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) {
            return 0;
        }
        std::uint64_t x = (*this)();
        uint128 m = static_cast<uint128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = (*this)();
                m = static_cast<uint128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace noisy_select
