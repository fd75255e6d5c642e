#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "noisy_select/core.hpp"

namespace noisy_select {

/// Reduction from the general problem (one of the k smallest / one of k
/// relevant) to the dense problem on a candidate set S* of m elements.
///
/// m is the smallest power of two >= γ·log2 n. Each candidate is the
/// find_min winner of an independent sample of ⌈3n/k⌉ draws from S, so it is
/// good independently with probability at least 5/6, and at least (3/4)m
/// candidates are good with probability at least 1 - e^{-γ·log2(n)/240}.
/// Retrieval uses the same sample size: with only ⌈n/k⌉ draws a sample misses
/// every relevant element with probability close to 1/e.
struct ReductionParams {
    double gamma = 600.0;
    std::uint64_t m = 0;
    std::uint64_t sample_size = 0;
    double q_inner = 0.1;
};

/// Base c of a dense solver that fails with probability at most c^{-n}.
/// Tournament: 2. Multi-phase retrieval: 2. Expected-time selection: 2^{1/21}.
inline constexpr double kTournamentFailureBase = 2.0;

/// max{600, 2/log2 c}.
double paper_gamma(double core_failure_base);

/// γ for `profile`: its override when Practical, paper_gamma otherwise.
double reduction_gamma(const FaultProfile& profile, double core_failure_base);

/// Smallest power of two >= γ·log2 n.
std::uint64_t candidate_count(std::uint64_t n, double gamma);

/// Throws unless 1 <= k <= n - 1.
void check_rank_target(std::uint64_t n, std::uint64_t k);

ReductionParams ftmin_reduction_params(std::uint64_t n, std::uint64_t k, double gamma);
ReductionParams findone_reduction_params(std::uint64_t n, std::uint64_t k, double gamma);

/// Dense-problem solver for selection: consumes comparator, sampling stream
/// and S*.
using DenseSelector = std::function<ElementHandle(NoisyComparator&, Rng&, std::span<const ElementHandle>)>;

/// S* for selection: m find_min winners (q = 1/10) over samples of ⌈3n/k⌉.
std::vector<ElementHandle> build_candidate_set_ftmin(NoisyComparator& cmp, Rng& rng,
                                                     std::span<const ElementHandle> s, std::uint64_t k,
                                                     const ReductionParams& params);

/// Exact comparison count of build_candidate_set_ftmin.
std::uint64_t candidate_set_ftmin_comparisons(const ReductionParams& params, const FaultProfile& profile);

/// core(S*), with S* from build_candidate_set_ftmin.
ElementHandle reduce_ftmin(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s, std::uint64_t k,
                           const ReductionParams& params, const DenseSelector& core);

/// Queries per side of one simulated comparison: 6·c_p + 1, scaled.
std::uint64_t simulated_comparison_side_queries(const FaultProfile& profile);

/// c_p of the simulated comparator, whose error is at most 2e^{-3}.
int simulated_comparator_cp();

/// Noisy comparison built from relevance queries: majority-query both sides
/// with 6·c_p + 1 queries each; a Relevant side beats a NotRelevant side, and
/// equal answers fall back to handle order. Wrong with probability at most
/// 2e^{-3} with respect to the order "relevant before non-relevant, then by
/// handle".
Order simulated_compare(NoisyRelevanceOracle& oracle, ElementHandle x, ElementHandle y);

/// S* for retrieval: m runs of find_min (q = 1/15) over samples of ⌈3n/k⌉,
/// each comparison replaced by simulated_compare. The bracket uses the c_p of
/// the simulated comparator, not the oracle's.
std::vector<ElementHandle> build_candidate_set_findone(NoisyRelevanceOracle& oracle, Rng& rng,
                                                       std::span<const ElementHandle> s, std::uint64_t k,
                                                       const ReductionParams& params);

/// Exact query count of build_candidate_set_findone.
std::uint64_t candidate_set_findone_queries(const ReductionParams& params, const FaultProfile& profile);

}  // namespace noisy_select
