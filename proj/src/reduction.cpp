#include "noisy_select/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "noisy_select/findmin.hpp"

namespace noisy_select {

namespace {

constexpr double kFtminInnerQ = 1.0 / 10.0;
constexpr double kFindoneInnerQ = 1.0 / 15.0;

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

double paper_gamma(double core_failure_base) {
    if (!(core_failure_base > 1.0)) {
        throw std::invalid_argument("dense solver failure base must exceed 1");
    }
    return std::max(600.0, 2.0 / std::log2(core_failure_base));
}

double reduction_gamma(const FaultProfile& profile, double core_failure_base) {
    if (profile.kind() == ProfileKind::Practical && profile.gamma_override()) {
        return *profile.gamma_override();
    }
    return paper_gamma(core_failure_base);
}

std::uint64_t candidate_count(std::uint64_t n, double gamma) {
    const double target = gamma * std::log2(static_cast<double>(n));
    return next_pow2(std::max<std::uint64_t>(1, ceil_tolerant(target)));
}

void check_rank_target(std::uint64_t n, std::uint64_t k) {
    if (k < 1 || k + 1 > n) {
        throw std::invalid_argument("k must lie in [1, n-1], got k=" + std::to_string(k) + " n=" + std::to_string(n));
    }
}

ReductionParams ftmin_reduction_params(std::uint64_t n, std::uint64_t k, double gamma) {
    check_rank_target(n, k);
    return ReductionParams{gamma, candidate_count(n, gamma), ceil_div(3 * n, k), kFtminInnerQ};
}

ReductionParams findone_reduction_params(std::uint64_t n, std::uint64_t k, double gamma) {
    check_rank_target(n, k);
    return ReductionParams{gamma, candidate_count(n, gamma), ceil_div(3 * n, k), kFindoneInnerQ};
}

std::vector<ElementHandle> build_candidate_set_ftmin(NoisyComparator& cmp, Rng& rng,
                                                     std::span<const ElementHandle> s, std::uint64_t k,
                                                     const ReductionParams& params) {
    check_rank_target(s.size(), k);
    std::vector<ElementHandle> candidates;
    candidates.reserve(params.m);
    for (std::uint64_t i = 0; i < params.m; ++i) {
        const auto sample = sample_with_replacement(rng, s, params.sample_size);
        candidates.push_back(find_min(cmp, sample, params.q_inner));
    }
    return candidates;
}

std::uint64_t candidate_set_ftmin_comparisons(const ReductionParams& params, const FaultProfile& profile) {
    return params.m * find_min_comparisons(params.sample_size, params.q_inner, profile);
}

ElementHandle reduce_ftmin(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s, std::uint64_t k,
                           const ReductionParams& params, const DenseSelector& core) {
    const auto candidates = build_candidate_set_ftmin(cmp, rng, s, k, params);
    return core(cmp, rng, candidates);
}

std::uint64_t simulated_comparison_side_queries(const FaultProfile& profile) {
    return profile.repetitions(6 * static_cast<std::uint64_t>(profile.cp()) + 1);
}

int simulated_comparator_cp() { return derive_cp(2.0 * std::exp(-3.0)); }

Order simulated_compare(NoisyRelevanceOracle& oracle, ElementHandle x, ElementHandle y) {
    const auto reps = simulated_comparison_side_queries(oracle.profile());
    const auto x_rel = majority_query(oracle, x, reps);
    const auto y_rel = majority_query(oracle, y, reps);
    if (x_rel != y_rel) {
        return x_rel == Relevance::Relevant ? Order::Less : Order::Greater;
    }
    return x < y ? Order::Less : Order::Greater;
}

namespace {

std::uint64_t simulated_match_length(const FaultProfile& profile, const FindMinSchedule& schedule, unsigned round) {
    const auto cp = static_cast<std::uint64_t>(simulated_comparator_cp());
    return profile.repetitions(2 * cp * schedule.t(round) + 1);
}

}  // namespace

std::vector<ElementHandle> build_candidate_set_findone(NoisyRelevanceOracle& oracle, Rng& rng,
                                                       std::span<const ElementHandle> s, std::uint64_t k,
                                                       const ReductionParams& params) {
    check_rank_target(s.size(), k);
    const FindMinSchedule schedule(params.q_inner);
    std::vector<ElementHandle> candidates;
    candidates.reserve(params.m);
    for (std::uint64_t i = 0; i < params.m; ++i) {
        const auto sample = sample_with_replacement(rng, s, params.sample_size);
        candidates.push_back(knockout_bracket(sample, [&](ElementHandle x, ElementHandle y, unsigned round) {
            const auto reps = simulated_match_length(oracle.profile(), schedule, round);
            std::uint64_t x_wins = 0;
            for (std::uint64_t r = 0; r < reps; ++r) {
                x_wins += simulated_compare(oracle, x, y) == Order::Less;
            }
            return 2 * x_wins > reps;
        }));
    }
    return candidates;
}

std::uint64_t candidate_set_findone_queries(const ReductionParams& params, const FaultProfile& profile) {
    const FindMinSchedule schedule(params.q_inner);
    const auto matches = knockout_matches_per_round(params.sample_size);
    const auto per_comparison = 2 * simulated_comparison_side_queries(profile);
    std::uint64_t per_set = 0;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        per_set += matches[i] * simulated_match_length(profile, schedule, static_cast<unsigned>(i + 1)) * per_comparison;
    }
    return params.m * per_set;
}

}  // namespace noisy_select
