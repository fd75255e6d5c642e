#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "noisy_select/core.hpp"
#include "noisy_select/reduction.hpp"

namespace noisy_select {

/// Multi-phase testing schedule for a dense retrieval instance of size n
/// (a power of two).
///
/// Elements are examined in order. An element in phase i takes a test of
/// 2^{i-1}·6·c_p + 1 queries and advances on a Relevant majority; the first
/// element through all 1 + log2 n phases is returned. The whole process stops
/// once more than 61·c_p·n queries have been spent. The cap is checked before
/// each test starts, so a test already running always completes.
class PhaseSchedule {
public:
    PhaseSchedule(std::uint64_t n, const FaultProfile& profile);

    unsigned phases() const noexcept { return phases_; }
    /// Queries in the test of phase i (1-based), after profile scaling.
    std::uint64_t test_length(unsigned phase) const;
    /// Σ_{j<=i} test_length(j).
    std::uint64_t cumulative_length(unsigned phase) const;
    std::uint64_t query_cap() const noexcept { return cap_; }

private:
    unsigned phases_;
    std::vector<std::uint64_t> lengths_;
    std::uint64_t cap_;
};

/// Solves the dense retrieval problem: returns a relevant element with
/// probability >= 1 - 2^{-n} when at least 3/4 of S is relevant. Inputs whose
/// size is not a power of two are padded with extra draws from S. Falls back
/// to S[0] on cap or exhaustion. Throws on empty S.
ElementHandle find_one_dense(NoisyRelevanceOracle& oracle, Rng& rng, std::span<const ElementHandle> s);

/// General retrieval: candidate set via the reduction, then find_one_dense.
ElementHandle find_one(NoisyRelevanceOracle& oracle, Rng& rng, std::span<const ElementHandle> s, std::uint64_t k,
                       const ReductionParams& params);

/// Failure base of find_one_dense (fails w.p. <= 2^{-n}).
inline constexpr double kRetrievalFailureBase = 2.0;

}  // namespace noisy_select
