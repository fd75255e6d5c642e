#pragma once

// Independent oracles for the unit tests. Nothing here calls the library's
// own probability code.

#include <cmath>
#include <cstdint>
#include <vector>

#include "noisy_select/core.hpp"

namespace noisy_select::testing {

/// P(Binomial(n, p) > n/2) by forward dynamic programming over the number of
/// faults, in long double. Exact up to rounding; shares nothing with the
/// closed-form sum in the library.
inline long double binomial_majority_tail(double p, std::uint64_t n) {
    std::vector<long double> dist{1.0L};
    const long double pl = p;
    for (std::uint64_t step = 0; step < n; ++step) {
        std::vector<long double> next(dist.size() + 1, 0.0L);
        for (std::size_t j = 0; j < dist.size(); ++j) {
            next[j] += dist[j] * (1.0L - pl);
            next[j + 1] += dist[j] * pl;
        }
        dist = std::move(next);
    }
    long double tail = 0.0L;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (2 * j > n) {
            tail += dist[j];
        }
    }
    return tail;
}

/// Width of a binomial proportion at `sigmas` standard deviations.
inline double sigma_band(double rate, std::uint64_t trials, double sigmas) {
    return sigmas * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

/// Handles 0..n-1 as a vector.
inline std::vector<ElementHandle> handles(std::size_t n) {
    std::vector<ElementHandle> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = ElementHandle{static_cast<ElementId>(i), 0};
    }
    return out;
}

}  // namespace noisy_select::testing
