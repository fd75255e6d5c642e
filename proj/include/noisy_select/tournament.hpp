#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "noisy_select/core.hpp"

namespace noisy_select {

/// Knockout tournament for the dense problem (return one of the smallest
/// three quarters).
///
/// The entry pool holds N = next_pow2(|S|) draws with replacement from S.
/// Round i pairs survivors in list order (0-1, 2-3, ...) and plays each match
/// as a majority over
///
///     L_i = 2·c_p·⌈α^i⌉ + 5
///
/// comparisons. At α = 2 every L_i is odd; for other α an exact split goes to
/// the smaller handle. A winner of round i is the winner of a disjoint
/// sub-bracket of 2^i pool slots, so it is small with probability at least
/// 1 - 2^{-(2^i+1)} independently of the other survivors.
struct TournamentParams {
    double alpha = 2.0;
};

/// α used for pre-selection.
inline const double kPreselectAlpha = std::pow(2.0, 0.9);

/// L_i before profile scaling.
std::uint64_t match_length(unsigned round, double alpha, int cp);

/// Draws next_pow2(|S|) handles from S with replacement.
std::vector<ElementHandle> build_entry_pool(Rng& rng, std::span<const ElementHandle> s);

/// One match of round `round`; returns the winner.
ElementHandle play_match(NoisyComparator& cmp, ElementHandle x, ElementHandle y, unsigned round, double alpha);

/// Plays rounds first_round..last_round on `entrants` (a power of two at least
/// 2^(last_round-first_round+1)) and returns the survivors in bracket order.
std::vector<ElementHandle> play_rounds(NoisyComparator& cmp, std::vector<ElementHandle> entrants,
                                       unsigned first_round, unsigned last_round, double alpha);

/// Full tournament: pool, then log2 N rounds.
ElementHandle run_tournament(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s,
                             TournamentParams params = {});

/// Same tournament on an already-built pool.
ElementHandle run_tournament_on_pool(NoisyComparator& cmp, std::vector<ElementHandle> pool,
                                     TournamentParams params = {});

/// Survivors of round i_max, N / 2^{i_max} of them. Throws unless
/// 1 <= i_max <= log2 N.
std::vector<ElementHandle> run_truncated_tournament(NoisyComparator& cmp, Rng& rng,
                                                    std::span<const ElementHandle> s, unsigned i_max,
                                                    double alpha);

/// Σ_{i=1}^{rounds} (N/2^i)·L_i with profile scaling: the exact comparison
/// count of a tournament over a pool of size N.
std::uint64_t tournament_comparisons(std::uint64_t pool_size, unsigned rounds, double alpha,
                                     const FaultProfile& profile);

/// Rounds kept by pre-selection: ⌈log2 log2 N⌉ clamped to [1, log2 N]
/// (0 when N = 1).
unsigned preselect_rounds(std::uint64_t pool_size);

}  // namespace noisy_select
