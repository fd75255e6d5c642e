#include "noisy_select/tournament.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace noisy_select {

std::uint64_t match_length(unsigned round, double alpha, int cp) {
    if (round < 1) {
        throw std::invalid_argument("rounds are numbered from 1");
    }
    if (!(alpha >= 1.0)) {
        throw std::invalid_argument("tournament growth base must be >= 1");
    }
    return 2 * static_cast<std::uint64_t>(cp) * ceil_tolerant(std::pow(alpha, round)) + 5;
}

std::vector<ElementHandle> build_entry_pool(Rng& rng, std::span<const ElementHandle> s) {
    if (s.empty()) {
        throw std::invalid_argument("tournament over an empty set");
    }
    return sample_with_replacement(rng, s, next_pow2(s.size()));
}

ElementHandle play_match(NoisyComparator& cmp, ElementHandle x, ElementHandle y, unsigned round, double alpha) {
    const auto reps = cmp.profile().repetitions(match_length(round, alpha, cmp.profile().cp()));
    return majority_vote(cmp, x, y, reps) == Order::Less ? x : y;
}

std::vector<ElementHandle> play_rounds(NoisyComparator& cmp, std::vector<ElementHandle> entrants,
                                       unsigned first_round, unsigned last_round, double alpha) {
    for (unsigned round = first_round; round <= last_round; ++round) {
        if (entrants.size() < 2 || entrants.size() % 2 != 0) {
            throw std::invalid_argument("round " + std::to_string(round) + " needs an even number of entrants");
        }
        std::vector<ElementHandle> winners;
        winners.reserve(entrants.size() / 2);
        for (std::size_t i = 0; i < entrants.size(); i += 2) {
            winners.push_back(play_match(cmp, entrants[i], entrants[i + 1], round, alpha));
        }
        entrants = std::move(winners);
    }
    return entrants;
}

ElementHandle run_tournament_on_pool(NoisyComparator& cmp, std::vector<ElementHandle> pool, TournamentParams params) {
    const unsigned rounds = log2_exact(pool.size());
    return play_rounds(cmp, std::move(pool), 1, rounds, params.alpha).front();
}

ElementHandle run_tournament(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s,
                             TournamentParams params) {
    return run_tournament_on_pool(cmp, build_entry_pool(rng, s), params);
}

std::vector<ElementHandle> run_truncated_tournament(NoisyComparator& cmp, Rng& rng,
                                                    std::span<const ElementHandle> s, unsigned i_max,
                                                    double alpha) {
    auto pool = build_entry_pool(rng, s);
    const unsigned full = log2_exact(pool.size());
    if (i_max < 1 || i_max > full) {
        throw std::invalid_argument("truncation round " + std::to_string(i_max) + " outside [1, " +
                                    std::to_string(full) + "]");
    }
    return play_rounds(cmp, std::move(pool), 1, i_max, alpha);
}

std::uint64_t tournament_comparisons(std::uint64_t pool_size, unsigned rounds, double alpha,
                                     const FaultProfile& profile) {
    std::uint64_t total = 0;
    for (unsigned i = 1; i <= rounds; ++i) {
        total += (pool_size >> i) * profile.repetitions(match_length(i, alpha, profile.cp()));
    }
    return total;
}

unsigned preselect_rounds(std::uint64_t pool_size) {
    const unsigned full = log2_exact(pool_size);
    if (full == 0) {
        return 0;
    }
    const auto wanted = static_cast<unsigned>(ceil_tolerant(std::log2(static_cast<double>(full))));
    return std::clamp(wanted, 1U, full);
}

}  // namespace noisy_select
