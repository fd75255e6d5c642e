#include "noisy_select/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace noisy_select {

GroundTruth::GroundTruth(std::vector<std::uint32_t> rank_of, std::size_t k) : rank_of_(std::move(rank_of)), k_(k) {
    const std::size_t n = rank_of_.size();
    if (n < 2) {
        throw std::invalid_argument("ground truth needs at least two elements");
    }
    if (k < 1 || k > n - 1) {
        throw std::invalid_argument("k must lie in [1, n-1], got k=" + std::to_string(k) + " n=" + std::to_string(n));
    }
    std::vector<bool> seen(n, false);
    for (auto r : rank_of_) {
        if (r >= n || seen[r]) {
            throw std::invalid_argument("rank_of is not a permutation of [0, n)");
        }
        seen[r] = true;
    }
}

GroundTruth GroundTruth::random(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::uint32_t> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 0U);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(ranks[i - 1], ranks[rng.below(i)]);
    }
    return GroundTruth(std::move(ranks), k);
}

GroundTruth GroundTruth::sorted(std::size_t n, std::size_t k) {
    std::vector<std::uint32_t> ranks(n);
    std::iota(ranks.begin(), ranks.end(), 0U);
    return GroundTruth(std::move(ranks), k);
}

std::vector<ElementHandle> GroundTruth::elements() const {
    std::vector<ElementHandle> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ElementHandle{static_cast<ElementId>(i), 0};
    }
    return out;
}

ElementId GroundTruth::id_of_rank(std::uint32_t rank) const {
    const auto it = std::find(rank_of_.begin(), rank_of_.end(), rank);
    if (it == rank_of_.end()) {
        throw std::out_of_range("rank out of range");
    }
    return static_cast<ElementId>(it - rank_of_.begin());
}

std::uint64_t ceil_tolerant(double x) {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
        return static_cast<std::uint64_t>(std::max(0.0, nearest));
    }
    return static_cast<std::uint64_t>(std::max(0.0, std::ceil(x)));
}

std::uint64_t next_pow2(std::uint64_t x) { return x <= 1 ? 1 : std::bit_ceil(x); }

unsigned log2_exact(std::uint64_t pow2) {
    if (!std::has_single_bit(pow2)) {
        throw std::invalid_argument("not a power of two: " + std::to_string(pow2));
    }
    return static_cast<unsigned>(std::countr_zero(pow2));
}

int derive_cp(double p) {
    if (!(p >= 0.0 && p < 0.5)) {
        throw std::invalid_argument("fault probability must lie in [0, 1/2), got " + std::to_string(p));
    }
    const double gap = 1.0 - 2.0 * p;
    return static_cast<int>(ceil_tolerant(4.0 * (1.0 - p) / (gap * gap)));
}

std::string_view to_string(ProfileKind kind) {
    return kind == ProfileKind::PaperFaithful ? "paper" : "practical";
}

FaultProfile::FaultProfile(double p, ProfileKind kind, std::optional<double> gamma, std::optional<double> scale)
    : p_(p), cp_(derive_cp(p)), kind_(kind), gamma_override_(gamma), repetition_scale_(scale) {
    if (gamma_override_ && !(*gamma_override_ > 0.0)) {
        throw std::invalid_argument("gamma override must be positive");
    }
    if (repetition_scale_ && !(*repetition_scale_ > 0.0 && *repetition_scale_ <= 1.0)) {
        throw std::invalid_argument("repetition scale must lie in (0, 1]");
    }
}

FaultProfile FaultProfile::paper_faithful(double p) {
    return FaultProfile(p, ProfileKind::PaperFaithful, std::nullopt, std::nullopt);
}

FaultProfile FaultProfile::practical(double p, std::optional<double> gamma_override,
                                     std::optional<double> repetition_scale) {
    return FaultProfile(p, ProfileKind::Practical, gamma_override, repetition_scale);
}

FaultProfile FaultProfile::with_p(double p) const {
    return FaultProfile(p, kind_, gamma_override_, repetition_scale_);
}

std::uint64_t FaultProfile::repetitions(std::uint64_t base) const noexcept {
    if (!repetition_scale_) {
        return base;
    }
    auto scaled = ceil_tolerant(static_cast<double>(base) * *repetition_scale_);
    if (scaled % 2 == 0) {
        ++scaled;
    }
    return std::max<std::uint64_t>(scaled, 1);
}

NoisyComparator::NoisyComparator(const GroundTruth& truth, FaultProfile profile, Rng noise)
    : truth_(&truth), profile_(profile), noise_(noise) {}

Order NoisyComparator::compare(ElementHandle x, ElementHandle y) {
    ++used_;
    if (x.id == y.id) {
        if (x.id >= truth_->size()) {
            throw std::out_of_range("element id out of range");
        }
        return x < y ? Order::Less : Order::Greater;
    }
    const bool truly_less = truth_->rank(x) < truth_->rank(y);
    const bool flipped = noise_.bernoulli(profile_.p());
    return (truly_less != flipped) ? Order::Less : Order::Greater;
}

NoisyRelevanceOracle::NoisyRelevanceOracle(const GroundTruth& truth, FaultProfile profile, Rng noise)
    : relevant_(truth.size()), profile_(profile), noise_(noise) {
    for (std::size_t id = 0; id < truth.size(); ++id) {
        relevant_[id] = truth.rank(static_cast<ElementId>(id)) < truth.k();
    }
}

NoisyRelevanceOracle::NoisyRelevanceOracle(std::vector<bool> relevant, FaultProfile profile, Rng noise)
    : relevant_(std::move(relevant)), profile_(profile), noise_(noise) {}

Relevance NoisyRelevanceOracle::query(ElementHandle x) {
    ++used_;
    const bool truth = relevant_.at(x.id);
    const bool flipped = noise_.bernoulli(profile_.p());
    return (truth != flipped) ? Relevance::Relevant : Relevance::NotRelevant;
}

Order majority_vote(NoisyComparator& cmp, ElementHandle x, ElementHandle y, std::uint64_t repetitions) {
    std::uint64_t less = 0;
    for (std::uint64_t i = 0; i < repetitions; ++i) {
        less += cmp.compare(x, y) == Order::Less;
    }
    const std::uint64_t greater = repetitions - less;
    if (less != greater) {
        return less > greater ? Order::Less : Order::Greater;
    }
    return x < y ? Order::Less : Order::Greater;
}

std::uint64_t boosting_repetitions(const FaultProfile& profile, std::uint64_t t) {
    return profile.repetitions(2 * static_cast<std::uint64_t>(profile.cp()) * t + 1);
}

Order majority_compare(NoisyComparator& cmp, ElementHandle x, ElementHandle y, std::uint64_t t) {
    if (t < 1) {
        throw std::invalid_argument("majority_compare needs t >= 1");
    }
    return majority_vote(cmp, x, y, boosting_repetitions(cmp.profile(), t));
}

Relevance majority_query(NoisyRelevanceOracle& oracle, ElementHandle x, std::uint64_t repetitions) {
    if (repetitions % 2 == 0) {
        throw std::invalid_argument("majority_query needs an odd repetition count");
    }
    std::uint64_t yes = 0;
    for (std::uint64_t i = 0; i < repetitions; ++i) {
        yes += oracle.query(x) == Relevance::Relevant;
    }
    return 2 * yes > repetitions ? Relevance::Relevant : Relevance::NotRelevant;
}

std::vector<ElementHandle> sample_with_replacement(Rng& rng, std::span<const ElementHandle> source,
                                                   std::size_t count) {
    if (source.empty()) {
        throw std::invalid_argument("cannot sample from an empty set");
    }
    std::vector<ElementHandle> out;
    out.reserve(count);
    std::unordered_map<ElementId, std::uint32_t> next_copy;
    for (std::size_t i = 0; i < count; ++i) {
        const ElementId id = source[rng.below(source.size())].id;
        out.push_back(ElementHandle{id, next_copy[id]++});
    }
    return out;
}

double majority_failure_probability(double p, std::uint64_t trials) {
    if (p <= 0.0) {
        return 0.0;
    }
    if (p >= 1.0) {
        return 1.0;
    }
    const double n = static_cast<double>(trials);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    double total = 0.0;
    for (std::uint64_t j = trials / 2 + 1; j <= trials; ++j) {
        const double jj = static_cast<double>(j);
        const double log_term =
            std::lgamma(n + 1) - std::lgamma(jj + 1) - std::lgamma(n - jj + 1) + jj * log_p + (n - jj) * log_q;
        total += std::exp(log_term);
    }
    return std::min(total, 1.0);
}

}  // namespace noisy_select
