#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "noisy_select/core.hpp"

namespace noisy_select {

/// Exact-minimum selection under noisy comparisons.
///
/// Single-elimination bracket over S. The |S| entrants occupy the first slots
/// of a power-of-two bracket; the remaining slots are byes, which lose without
/// a comparison. Round i is decided by majority_compare with
///
///     t_i = i + L,   L = ⌈log2(1/q)⌉.
///
/// Failure bound. The true minimum plays at most ⌈log2|S|⌉ matches and loses
/// round i with probability at most e^{-t_i}, so by the union bound
///
///     P(fail) <= Σ_{i>=1} e^{-(i+L)} = e^{-L} / (e - 1) < e^{-log2(1/q)} = q^{1/ln 2} < q.
///
/// Cost bound. Round i holds ⌊r_i/2⌋ < |S|/2^i + 1/2 matches (r_i entrants
/// left), each of 2·c_p·(i+L)+1 comparisons. Summing with Σ i/2^i = 2 and
/// using ⌈log2 s⌉² <= 2s gives
///
///     comparisons <= (12·c_p + 4) · |S| · (1 + log2(1/q)).
///
/// Both bounds assume unscaled (PaperFaithful) repetition counts.
struct FindMinSchedule {
    double q;
    std::uint64_t boost_offset;  // L

    explicit FindMinSchedule(double q);

    /// Boosting parameter t_i for round i >= 1.
    std::uint64_t t(unsigned round) const noexcept { return round + boost_offset; }
};

/// Documented constant C of the cost bound above.
inline double find_min_cost_constant(int cp) { return 12.0 * cp + 4.0; }

/// Plays a bye-padded single-elimination bracket. `match(x, y, round)` returns
/// true when x wins. Returns the bracket winner.
template <typename Match>
ElementHandle knockout_bracket(std::span<const ElementHandle> entrants, Match&& match) {
    if (entrants.empty()) {
        throw std::invalid_argument("knockout over an empty set");
    }
    std::vector<ElementHandle> alive(entrants.begin(), entrants.end());
    unsigned round = 0;
    while (alive.size() > 1) {
        ++round;
        std::vector<ElementHandle> next;
        next.reserve((alive.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < alive.size(); i += 2) {
            next.push_back(match(alive[i], alive[i + 1], round) ? alive[i] : alive[i + 1]);
        }
        if (alive.size() % 2 == 1) {
            next.push_back(alive.back());  // bye
        }
        alive = std::move(next);
    }
    return alive.front();
}

/// Number of matches played in each round of a bracket with `entrants` real
/// entrants; index 0 is round 1.
std::vector<std::uint64_t> knockout_matches_per_round(std::uint64_t entrants);

/// Returns the true minimum of S with probability >= 1 - q. Throws on empty S
/// or q outside (0, 1/2).
ElementHandle find_min(NoisyComparator& cmp, std::span<const ElementHandle> s, double q);

/// Exact comparison count of find_min for |S| = size.
std::uint64_t find_min_comparisons(std::uint64_t size, double q, const FaultProfile& profile);

}  // namespace noisy_select
