#include "noisy_select/ftmin_fast.hpp"

#include <stdexcept>

#include "noisy_select/tournament.hpp"

namespace noisy_select {

WeakOracleParams WeakOracleParams::for_profile(const FaultProfile& profile) {
    WeakOracleParams params{derive_cp(kP1), derive_cp(kP2), 1};
    if (profile.p() > kRawErrorCeiling) {
        // t = ⌈ln 200⌉ makes e^{-t} < 1/200.
        const auto t = ceil_tolerant(std::log(1.0 / kRawErrorCeiling));
        params.boost = boosting_repetitions(profile, t);
    }
    return params;
}

unsigned modified_phase_count(std::uint64_t n) {
    if (n < 2) {
        return 1;
    }
    const double log_n = std::log2(static_cast<double>(n));
    return 1 + static_cast<unsigned>(ceil_tolerant(std::log2(static_cast<double>(n) / log_n)));
}

ModifiedSchedule::ModifiedSchedule(std::uint64_t n, const FaultProfile& profile) {
    if (n < 1) {
        throw std::invalid_argument("schedule needs n >= 1");
    }
    const auto weak = WeakOracleParams::for_profile(profile);
    const double ln_n = std::log(static_cast<double>(n));
    ceil_ln_n_ = ceil_tolerant(ln_n);
    preliminary_ = profile.repetitions(8 * static_cast<std::uint64_t>(weak.cp1) * ceil_ln_n_ + 1);
    const unsigned eta = modified_phase_count(n);
    tests_.reserve(eta);
    for (unsigned i = 1; i <= eta; ++i) {
        const auto span = ceil_tolerant(std::ldexp(ln_n, static_cast<int>(i)));
        tests_.push_back(profile.repetitions(2 * span * static_cast<std::uint64_t>(weak.cp2) + 1));
    }
}

std::uint64_t ModifiedSchedule::test_length(unsigned phase) const {
    if (phase < 1 || phase > tests_.size()) {
        throw std::out_of_range("phase out of range");
    }
    return tests_[phase - 1];
}

PreselectedSet preselect(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s) {
    auto pool = build_entry_pool(rng, s);
    PreselectedSet out;
    out.parent_size = pool.size();
    const unsigned rounds = preselect_rounds(pool.size());
    out.members = rounds == 0 ? std::move(pool) : play_rounds(cmp, std::move(pool), 1, rounds, kPreselectAlpha);
    return out;
}

namespace {

// Whether a random member of S' is reported not smaller than x. A copy of x
// always is; the comparison still runs so the cost per call stays fixed.
bool draw_not_smaller(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> members, ElementHandle x,
                      std::uint64_t boost) {
    const ElementHandle other = members[rng.below(members.size())];
    const Order order = majority_vote(cmp, other, x, boost);
    return other.id == x.id || order == Order::Greater;
}

}  // namespace

Relevance oracle_o1(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> members, ElementHandle x,
                    const WeakOracleParams& params) {
    const bool first = draw_not_smaller(cmp, rng, members, x, params.boost);
    const bool second = draw_not_smaller(cmp, rng, members, x, params.boost);
    return first && second ? Relevance::Relevant : Relevance::NotRelevant;
}

Relevance oracle_o2(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> members, ElementHandle x,
                    const WeakOracleParams& params) {
    return draw_not_smaller(cmp, rng, members, x, params.boost) ? Relevance::Relevant : Relevance::NotRelevant;
}

std::uint64_t multiphase_nominal_comparisons(const PreselectedSet& set, const FaultProfile& profile) {
    const ModifiedSchedule schedule(set.parent_size, profile);
    const auto weak = WeakOracleParams::for_profile(profile);
    std::uint64_t tests = 0;
    for (unsigned i = 1; i <= schedule.phases(); ++i) {
        tests += schedule.test_length(i);
    }
    return weak.boost * (set.members.size() * 2 * schedule.preliminary_length() + tests);
}

MultiphaseOutcome modified_multiphase(NoisyComparator& cmp, Rng& rng, const PreselectedSet& set,
                                      const MultiphaseOptions& options) {
    if (set.members.empty()) {
        throw std::invalid_argument("modified_multiphase over an empty set");
    }
    const auto& profile = cmp.profile();
    const ModifiedSchedule schedule(set.parent_size, profile);
    const auto weak = WeakOracleParams::for_profile(profile);
    const std::span<const ElementHandle> members = set.members;

    std::optional<std::uint64_t> cap;
    if (options.safety_cap_factor) {
        cap = ceil_tolerant(*options.safety_cap_factor *
                            static_cast<double>(multiphase_nominal_comparisons(set, profile)));
    }
    const auto start = cmp.comparisons_used();

    MultiphaseOutcome outcome{members.front()};
    auto over_cap = [&] { return cap && cmp.comparisons_used() - start > *cap; };
    auto fall_back = [&] {
        outcome.element = run_tournament(cmp, rng, members, TournamentParams{});
        outcome.hit_safety_cap = true;
        return outcome;
    };
    auto majority = [](std::uint64_t yes, std::uint64_t total) { return 2 * yes > total; };

    for (const auto& x : members) {
        if (over_cap()) {
            return fall_back();
        }
        std::uint64_t yes = 0;
        for (std::uint64_t q = 0; q < schedule.preliminary_length(); ++q) {
            yes += oracle_o1(cmp, rng, members, x, weak) == Relevance::Relevant;
        }
        outcome.o1_queries += schedule.preliminary_length();
        if (!majority(yes, schedule.preliminary_length())) {
            continue;
        }

        bool passed = true;
        for (unsigned phase = 1; phase <= schedule.phases() && passed; ++phase) {
            if (over_cap()) {
                return fall_back();
            }
            const auto length = schedule.test_length(phase);
            yes = 0;
            for (std::uint64_t q = 0; q < length; ++q) {
                yes += oracle_o2(cmp, rng, members, x, weak) == Relevance::Relevant;
            }
            outcome.o2_queries += length;
            passed = majority(yes, length);
        }
        if (passed) {
            outcome.element = x;
            return outcome;
        }
    }
    outcome.exhausted = true;
    return outcome;
}

ElementHandle ftmin_fast_dense(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s,
                               const MultiphaseOptions& options) {
    const auto set = preselect(cmp, rng, s);
    return modified_multiphase(cmp, rng, set, options).element;
}

ElementHandle ftmin(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s, std::uint64_t k,
                    DenseCore core) {
    const double base = core == DenseCore::Tournament ? kTournamentFailureBase : kExpectedTimeFailureBase;
    const auto params = ftmin_reduction_params(s.size(), k, reduction_gamma(cmp.profile(), base));
    if (core == DenseCore::Tournament) {
        return reduce_ftmin(cmp, rng, s, k, params,
                            [](NoisyComparator& c, Rng& r, std::span<const ElementHandle> cand) {
                                return run_tournament(c, r, cand);
                            });
    }
    return reduce_ftmin(cmp, rng, s, k, params, [](NoisyComparator& c, Rng& r, std::span<const ElementHandle> cand) {
        return ftmin_fast_dense(c, r, cand);
    });
}

}  // namespace noisy_select
