#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "noisy_select/rng.hpp"

namespace noisy_select {

using ElementId = std::uint32_t;

/// An element of the input collection. Draws made with replacement produce
/// several handles for one source element, told apart by `copy`. The default
/// ordering (id, then copy) is the consistent tie order among copies.
struct ElementHandle {
    ElementId id = 0;
    std::uint32_t copy = 0;

    friend auto operator<=>(const ElementHandle&, const ElementHandle&) = default;
};

enum class Order { Less, Greater };
enum class Relevance { Relevant, NotRelevant };

/// Hidden total order over the ids [0, n). Only the harness and test oracles
/// hold one; algorithms see it through a NoisyComparator or a
/// NoisyRelevanceOracle.
class GroundTruth {
public:
    /// `rank_of[id]` is the true rank of `id`; must be a permutation of [0, n).
    /// Requires 1 <= k <= n - 1.
    GroundTruth(std::vector<std::uint32_t> rank_of, std::size_t k);

    /// Uniformly random permutation (Fisher-Yates on `rng`).
    static GroundTruth random(std::size_t n, std::size_t k, Rng& rng);

    /// Identity permutation: id i has rank i.
    static GroundTruth sorted(std::size_t n, std::size_t k);

    std::size_t size() const noexcept { return rank_of_.size(); }
    std::size_t k() const noexcept { return k_; }
    std::uint32_t rank(ElementId id) const { return rank_of_.at(id); }
    std::uint32_t rank(ElementHandle h) const { return rank(h.id); }
    bool is_small(ElementHandle h) const { return rank(h) < k_; }

    /// Handles 0..n-1, copy ordinal 0, in id order.
    std::vector<ElementHandle> elements() const;

    /// Id holding the given rank.
    ElementId id_of_rank(std::uint32_t rank) const;

private:
    std::vector<std::uint32_t> rank_of_;
    std::size_t k_;
};

/// ⌈4(1-p)/(1-2p)²⌉. Throws std::invalid_argument unless 0 <= p < 1/2.
int derive_cp(double p);

/// Ceiling that forgives floating-point error just above an integer
/// (e.g. 264.00000000003 -> 264).
std::uint64_t ceil_tolerant(double x);

/// Smallest power of two >= x (x >= 1).
std::uint64_t next_pow2(std::uint64_t x);

/// log2 of a power of two.
unsigned log2_exact(std::uint64_t pow2);

enum class ProfileKind { PaperFaithful, Practical };

std::string_view to_string(ProfileKind kind);

/// Fault probability plus the constants that govern repetition counts.
///
/// PaperFaithful uses the full constants unchanged. Practical keeps the
/// same structure but can replace the reduction's γ and shrink every
/// repetition count by `repetition_scale` (result rounded up to the next odd
/// integer >= 1).
class FaultProfile {
public:
    static constexpr double kDefaultPracticalGamma = 8.0;

    static FaultProfile paper_faithful(double p);
    static FaultProfile practical(double p, std::optional<double> gamma_override = kDefaultPracticalGamma,
                                  std::optional<double> repetition_scale = std::nullopt);

    double p() const noexcept { return p_; }
    int cp() const noexcept { return cp_; }
    ProfileKind kind() const noexcept { return kind_; }
    std::optional<double> gamma_override() const noexcept { return gamma_override_; }
    std::optional<double> repetition_scale() const noexcept { return repetition_scale_; }

    /// Applies repetition_scale to a nominal repetition count. Identity when
    /// no scale is set.
    std::uint64_t repetitions(std::uint64_t base) const noexcept;

    /// Same profile with a different fault probability (c_p re-derived).
    FaultProfile with_p(double p) const;

private:
    FaultProfile(double p, ProfileKind kind, std::optional<double> gamma, std::optional<double> scale);

    double p_;
    int cp_;
    ProfileKind kind_;
    std::optional<double> gamma_override_;
    std::optional<double> repetition_scale_;
};

/// Comparison oracle over a GroundTruth with independent faults of
/// probability exactly p. Single-threaded; one instance per trial.
class NoisyComparator {
public:
    NoisyComparator(const GroundTruth& truth, FaultProfile profile, Rng noise);

    /// True order with probability 1-p, flipped with probability p. Two
    /// handles of the same source element are ordered by (id, copy) without
    /// consuming randomness. Every call counts as one comparison.
    Order compare(ElementHandle x, ElementHandle y);

    std::uint64_t comparisons_used() const noexcept { return used_; }
    const FaultProfile& profile() const noexcept { return profile_; }
    std::size_t universe_size() const noexcept { return truth_->size(); }

private:
    const GroundTruth* truth_;
    FaultProfile profile_;
    Rng noise_;
    std::uint64_t used_ = 0;
};

/// Yes/no oracle over a hidden relevant set with independent faults of
/// probability exactly p.
class NoisyRelevanceOracle {
public:
    /// Relevant set = elements of rank < truth.k().
    NoisyRelevanceOracle(const GroundTruth& truth, FaultProfile profile, Rng noise);
    /// Relevant set given explicitly, indexed by id.
    NoisyRelevanceOracle(std::vector<bool> relevant, FaultProfile profile, Rng noise);

    Relevance query(ElementHandle x);

    bool is_relevant(ElementHandle x) const { return relevant_.at(x.id); }
    std::uint64_t queries_used() const noexcept { return used_; }
    const FaultProfile& profile() const noexcept { return profile_; }

private:
    std::vector<bool> relevant_;
    FaultProfile profile_;
    Rng noise_;
    std::uint64_t used_ = 0;
};

/// Majority over `repetitions` comparisons of (x, y). An exact split (only
/// possible for even counts) goes to the smaller handle.
Order majority_vote(NoisyComparator& cmp, ElementHandle x, ElementHandle y, std::uint64_t repetitions);

/// 2·c_p·t + 1 repetitions, scaled by the profile.
std::uint64_t boosting_repetitions(const FaultProfile& profile, std::uint64_t t);

/// Majority strategy: wrong with probability at most e^{-t} under
/// PaperFaithful constants.
Order majority_compare(NoisyComparator& cmp, ElementHandle x, ElementHandle y, std::uint64_t t);

/// Strict majority over an odd number of queries. Throws on even counts.
Relevance majority_query(NoisyRelevanceOracle& oracle, ElementHandle x, std::uint64_t repetitions);

/// `count` uniform draws with replacement from `source`. Handles get fresh
/// copy ordinals 0, 1, 2, ... per source id in draw order.
std::vector<ElementHandle> sample_with_replacement(Rng& rng, std::span<const ElementHandle> source,
                                                   std::size_t count);

/// Probability that more than half of `trials` independent faults of
/// probability p occur, i.e. P(Binomial(trials, p) > trials/2). Exact sum in
/// log space.
double majority_failure_probability(double p, std::uint64_t trials);

}  // namespace noisy_select
