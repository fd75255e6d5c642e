#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "noisy_select/core.hpp"
#include "noisy_select/reduction.hpp"

namespace noisy_select {

/// Expected-time selection for the dense problem.
///
/// Stage one keeps the survivors S' of a knockout tournament (α = 2^0.9)
/// stopped after ⌈log2 log2 N⌉ rounds. Stage two runs a multi-phase test over
/// S' in which relevance is judged by two weak oracles built from
/// comparisons against random members of S':
///
///   O1: draw two members, Relevant iff neither compares smaller than x.
///       Relevant w.p. >= 6/11 on the smallest ⌈|S'|/6⌉, <= 5/11 outside the
///       smallest ⌈|S'|/3⌉.
///   O2: draw one member, Relevant iff it compares larger than x.
///       Relevant w.p. >= 3/5 on the smallest ⌈|S'|/3⌉, <= 2/5 outside the
///       smallest ⌈3|S'|/4⌉.
///
/// A draw that is a copy of x itself counts as "not smaller" / "larger".
/// When p > 1/200 each oracle comparison is a majority over 2·c_p·⌈ln 200⌉+1
/// raw comparisons, bringing its error below 1/200.
struct WeakOracleParams {
    static constexpr double kP1 = 5.0 / 11.0;
    static constexpr double kP2 = 2.0 / 5.0;
    static constexpr double kRawErrorCeiling = 1.0 / 200.0;

    int cp1;
    int cp2;
    /// Raw comparisons per oracle comparison (odd).
    std::uint64_t boost;

    static WeakOracleParams for_profile(const FaultProfile& profile);
};

/// Schedule of the modified multi-phase process for a dense input of size N:
///
///   preliminary test: 8·c_{p1}·⌈ln N⌉ + 1 queries to O1
///   test i:           2·⌈2^i·ln N⌉·c_{p2} + 1 queries to O2,  i = 1..η
///   η = 1 + ⌈log2(N / log2 N)⌉
///
/// N is the input size before pre-selection.
class ModifiedSchedule {
public:
    ModifiedSchedule(std::uint64_t n, const FaultProfile& profile);

    std::uint64_t preliminary_length() const noexcept { return preliminary_; }
    std::uint64_t test_length(unsigned phase) const;
    unsigned phases() const noexcept { return static_cast<unsigned>(tests_.size()); }
    std::uint64_t ceil_ln_n() const noexcept { return ceil_ln_n_; }

private:
    std::uint64_t ceil_ln_n_;
    std::uint64_t preliminary_;
    std::vector<std::uint64_t> tests_;
};

/// η as a standalone function (1 for N = 1).
unsigned modified_phase_count(std::uint64_t n);

struct PreselectedSet {
    std::vector<ElementHandle> members;
    std::uint64_t parent_size = 0;  // pool size N
};

/// Truncated tournament with α = 2^0.9 and preselect_rounds(N) rounds.
PreselectedSet preselect(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s);

Relevance oracle_o1(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> members, ElementHandle x,
                    const WeakOracleParams& params);
Relevance oracle_o2(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> members, ElementHandle x,
                    const WeakOracleParams& params);

struct MultiphaseOptions {
    /// The process has no worst-case bound of its own. Once it has spent more
    /// than safety_cap_factor times its nominal cost (every member taking the
    /// preliminary test plus one full pass of the tests) it abandons the scan
    /// and returns the winner of a knockout tournament over S'. nullopt
    /// disables the cap.
    std::optional<double> safety_cap_factor = 10.0;
};

struct MultiphaseOutcome {
    ElementHandle element;
    std::uint64_t o1_queries = 0;
    std::uint64_t o2_queries = 0;
    bool exhausted = false;       // nobody passed; fell back to the first member
    bool hit_safety_cap = false;  // fell back to a tournament
};

/// Nominal comparison cost used by the safety cap.
std::uint64_t multiphase_nominal_comparisons(const PreselectedSet& set, const FaultProfile& profile);

MultiphaseOutcome modified_multiphase(NoisyComparator& cmp, Rng& rng, const PreselectedSet& set,
                                      const MultiphaseOptions& options = {});

/// preselect, then modified_multiphase. Fails w.p. <= 2^{-N/21}.
ElementHandle ftmin_fast_dense(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s,
                               const MultiphaseOptions& options = {});

inline const double kExpectedTimeFailureBase = std::pow(2.0, 1.0 / 21.0);

enum class DenseCore {
    Tournament,    // worst-case O((n/k) log n + log n · log log n)
    ExpectedTime,  // expected O((n/k) log n + log n · log log log n)
};

/// General selection: one of the k smallest of S w.h.p. γ comes from the
/// comparator's profile.
ElementHandle ftmin(NoisyComparator& cmp, Rng& rng, std::span<const ElementHandle> s, std::uint64_t k,
                    DenseCore core);

}  // namespace noisy_select
