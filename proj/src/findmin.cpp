#include "noisy_select/findmin.hpp"

#include <cmath>
#include <string>

namespace noisy_select {

namespace {

void check_q(double q) {
    if (!(q > 0.0 && q < 0.5)) {
        throw std::invalid_argument("find_min failure probability must lie in (0, 1/2), got " + std::to_string(q));
    }
}

}  // namespace

FindMinSchedule::FindMinSchedule(double q_) : q(q_), boost_offset(0) {
    check_q(q);
    boost_offset = ceil_tolerant(std::log2(1.0 / q));
}

std::vector<std::uint64_t> knockout_matches_per_round(std::uint64_t entrants) {
    std::vector<std::uint64_t> matches;
    while (entrants > 1) {
        matches.push_back(entrants / 2);
        entrants = (entrants + 1) / 2;
    }
    return matches;
}

ElementHandle find_min(NoisyComparator& cmp, std::span<const ElementHandle> s, double q) {
    const FindMinSchedule schedule(q);
    return knockout_bracket(s, [&](ElementHandle x, ElementHandle y, unsigned round) {
        return majority_compare(cmp, x, y, schedule.t(round)) == Order::Less;
    });
}

std::uint64_t find_min_comparisons(std::uint64_t size, double q, const FaultProfile& profile) {
    const FindMinSchedule schedule(q);
    const auto matches = knockout_matches_per_round(size);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        total += matches[i] * boosting_repetitions(profile, schedule.t(static_cast<unsigned>(i + 1)));
    }
    return total;
}

}  // namespace noisy_select
