#include "noisy_select/retrieval.hpp"

#include <stdexcept>

namespace noisy_select {

PhaseSchedule::PhaseSchedule(std::uint64_t n, const FaultProfile& profile)
    : phases_(1 + log2_exact(n)), cap_(0) {
    const auto cp = static_cast<std::uint64_t>(profile.cp());
    lengths_.reserve(phases_);
    for (unsigned i = 1; i <= phases_; ++i) {
        lengths_.push_back(profile.repetitions((std::uint64_t{1} << (i - 1)) * 6 * cp + 1));
    }
    const double scale = profile.repetition_scale().value_or(1.0);
    cap_ = ceil_tolerant(static_cast<double>(61 * cp * n) * scale);
}

std::uint64_t PhaseSchedule::test_length(unsigned phase) const {
    if (phase < 1 || phase > phases_) {
        throw std::out_of_range("phase out of range");
    }
    return lengths_[phase - 1];
}

std::uint64_t PhaseSchedule::cumulative_length(unsigned phase) const {
    std::uint64_t total = 0;
    for (unsigned i = 1; i <= phase; ++i) {
        total += test_length(i);
    }
    return total;
}

ElementHandle find_one_dense(NoisyRelevanceOracle& oracle, Rng& rng, std::span<const ElementHandle> s) {
    if (s.empty()) {
        throw std::invalid_argument("find_one_dense over an empty set");
    }
    std::vector<ElementHandle> pool(s.begin(), s.end());
    const auto n = next_pow2(pool.size());
    if (n != pool.size()) {
        const auto extra = sample_with_replacement(rng, s, n - pool.size());
        pool.insert(pool.end(), extra.begin(), extra.end());
    }

    const PhaseSchedule schedule(n, oracle.profile());
    const auto start = oracle.queries_used();
    for (const auto& x : pool) {
        bool passed = true;
        for (unsigned phase = 1; phase <= schedule.phases(); ++phase) {
            if (oracle.queries_used() - start > schedule.query_cap()) {
                return s.front();
            }
            if (majority_query(oracle, x, schedule.test_length(phase)) != Relevance::Relevant) {
                passed = false;
                break;
            }
        }
        if (passed) {
            return x;
        }
    }
    return s.front();
}

ElementHandle find_one(NoisyRelevanceOracle& oracle, Rng& rng, std::span<const ElementHandle> s, std::uint64_t k,
                       const ReductionParams& params) {
    const auto candidates = build_candidate_set_findone(oracle, rng, s, k, params);
    return find_one_dense(oracle, rng, candidates);
}

}  // namespace noisy_select
