#include <gtest/gtest.h>

#include <cmath>

#include "noisy_select/findmin.hpp"
#include "noisy_select/reduction.hpp"
#include "noisy_select/rng.hpp"
#include "noisy_select/tournament.hpp"
#include "support.hpp"

namespace ns = noisy_select;
using ns::ElementHandle;
using ns::FaultProfile;

TEST(ReductionParams, CandidateCount) {
    EXPECT_DOUBLE_EQ(ns::paper_gamma(2.0), 600.0);
    EXPECT_NEAR(ns::paper_gamma(std::pow(2.0, 1.0 / 21.0)), 600.0, 1e-9);
    EXPECT_NEAR(ns::paper_gamma(std::pow(2.0, 1.0 / 1000.0)), 2000.0, 1e-6);
    EXPECT_EQ(ns::candidate_count(1024, 600.0), 8192u);
    EXPECT_EQ(ns::candidate_count(4096, 8.0), 128u);
    EXPECT_EQ(ns::candidate_count(256, 8.0), 64u);

    const auto paper = ns::ftmin_reduction_params(1024, 64, ns::reduction_gamma(FaultProfile::paper_faithful(0.1), 2.0));
    EXPECT_EQ(paper.m, 8192u);
    EXPECT_EQ(paper.sample_size, 48u);
    EXPECT_DOUBLE_EQ(paper.q_inner, 0.1);
    const auto retrieval = ns::findone_reduction_params(4096, 512, 8.0);
    EXPECT_EQ(retrieval.sample_size, 24u);
    EXPECT_EQ(retrieval.m, 128u);
    EXPECT_NEAR(retrieval.q_inner, 1.0 / 15.0, 1e-15);
    EXPECT_EQ(ns::reduction_gamma(FaultProfile::practical(0.1), 2.0), 8.0);
    EXPECT_THROW(ns::ftmin_reduction_params(10, 10, 8.0), std::invalid_argument);
    EXPECT_THROW(ns::ftmin_reduction_params(10, 0, 8.0), std::invalid_argument);
}

TEST(CandidateSet, FaultFreeCandidatesAreSampleMinima) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ns::Rng rng(seed);
        const auto truth = ns::GroundTruth::random(64, 63, rng);
        ns::NoisyComparator cmp(truth, FaultProfile::paper_faithful(0.0), rng.split(1));
        const auto params = ns::ftmin_reduction_params(64, 63, 8.0);
        ns::Rng sampling = rng.split(2);
        ns::Rng replay = sampling;
        const auto candidates = ns::build_candidate_set_ftmin(cmp, sampling, truth.elements(), 63, params);
        ASSERT_EQ(candidates.size(), params.m);
        const auto s = truth.elements();
        for (const auto& c : candidates) {
            const auto sample = ns::sample_with_replacement(replay, s, params.sample_size);
            std::uint32_t best = 64;
            for (const auto& h : sample) {
                best = std::min(best, truth.rank(h));
            }
            EXPECT_EQ(truth.rank(c), best);
            // k = n - 1: any sample holding a small element yields a small candidate.
            EXPECT_EQ(truth.is_small(c), best < 63);
        }
    }
}

TEST(CandidateSet, ComparisonCountIsExact) {
    const auto truth = ns::GroundTruth::sorted(4096, 512);
    const auto profile = FaultProfile::practical(0.1);
    ns::NoisyComparator cmp(truth, profile, ns::Rng(1));
    ns::Rng rng(2);
    const auto params = ns::ftmin_reduction_params(4096, 512, 8.0);
    ns::build_candidate_set_ftmin(cmp, rng, truth.elements(), 512, params);
    EXPECT_EQ(cmp.comparisons_used(), params.m * ns::find_min_comparisons(24, 0.1, profile));
    EXPECT_EQ(cmp.comparisons_used(), ns::candidate_set_ftmin_comparisons(params, profile));
}

TEST(CandidateSet, MostCandidatesSmall) {
    const std::uint64_t trials = 500;
    std::uint64_t good_trials = 0;
    const auto params = ns::ftmin_reduction_params(4096, 512, 8.0);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        ns::Rng stream(21, trial);
        ns::Rng instance = stream.split(0);
        const auto truth = ns::GroundTruth::random(4096, 512, instance);
        ns::NoisyComparator cmp(truth, FaultProfile::practical(0.1), stream.split(1));
        ns::Rng sampling = stream.split(2);
        std::uint64_t small = 0;
        for (const auto& c : ns::build_candidate_set_ftmin(cmp, sampling, truth.elements(), 512, params)) {
            small += truth.is_small(c);
        }
        good_trials += 4 * small >= 3 * params.m;
    }
    EXPECT_GE(static_cast<double>(good_trials) / trials, 0.99);
}

TEST(ReduceFtmin, FaultFreeWithExactCoreIsSmall) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        ns::Rng rng(seed);
        const auto truth = ns::GroundTruth::random(256, 16, rng);
        ns::NoisyComparator cmp(truth, FaultProfile::practical(0.0), rng.split(1));
        ns::Rng sampling = rng.split(2);
        const auto params = ns::ftmin_reduction_params(256, 16, 8.0);
        const auto x = ns::reduce_ftmin(cmp, sampling, truth.elements(), 16, params,
                                        [](ns::NoisyComparator& c, ns::Rng&, std::span<const ElementHandle> cand) {
                                            return ns::find_min(c, cand, 0.1);
                                        });
        EXPECT_LT(truth.rank(x), 16u);
    }
}

TEST(ReduceFtmin, TournamentCoreEndToEnd) {
    const std::uint64_t trials = 500;
    std::uint64_t success = 0;
    const auto params = ns::ftmin_reduction_params(4096, 512, 8.0);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        ns::Rng stream(22, trial);
        ns::Rng instance = stream.split(0);
        const auto truth = ns::GroundTruth::random(4096, 512, instance);
        ns::NoisyComparator cmp(truth, FaultProfile::practical(0.1), stream.split(1));
        ns::Rng sampling = stream.split(2);
        const auto x = ns::reduce_ftmin(cmp, sampling, truth.elements(), 512, params,
                                        [](ns::NoisyComparator& c, ns::Rng& r, std::span<const ElementHandle> cand) {
                                            return ns::run_tournament(c, r, cand);
                                        });
        success += truth.is_small(x);
    }
    EXPECT_GE(static_cast<double>(success) / trials, 0.95);
}

TEST(ReduceFtmin, BrokenCoreStillBeatsFiveSixths) {
    // The first candidate alone is small w.p. >= 5/6.
    const std::uint64_t trials = 2000;
    std::uint64_t success = 0;
    const auto params = ns::ftmin_reduction_params(4096, 512, 8.0);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        ns::Rng stream(23, trial);
        ns::Rng instance = stream.split(0);
        const auto truth = ns::GroundTruth::random(4096, 512, instance);
        ns::NoisyComparator cmp(truth, FaultProfile::practical(0.1), stream.split(1));
        ns::Rng sampling = stream.split(2);
        const auto x = ns::reduce_ftmin(
            cmp, sampling, truth.elements(), 512, params,
            [](ns::NoisyComparator&, ns::Rng&, std::span<const ElementHandle> cand) { return cand.front(); });
        success += truth.is_small(x);
    }
    const double rate = static_cast<double>(success) / trials;
    EXPECT_GE(rate, 5.0 / 6.0 - ns::testing::sigma_band(5.0 / 6.0, trials, 3.0));
    EXPECT_LT(rate, 0.999);
}

TEST(SimulatedComparison, QueryCountAndFaultFreeOrder) {
    EXPECT_EQ(ns::simulated_comparator_cp(), 6);
    const auto truth = ns::GroundTruth::sorted(4, 2);
    ns::NoisyRelevanceOracle oracle(truth, FaultProfile::paper_faithful(0.1), ns::Rng(1));
    const auto before = oracle.queries_used();
    ns::simulated_compare(oracle, {0, 0}, {3, 0});
    EXPECT_EQ(oracle.queries_used() - before, 2u * (6 * 6 + 1));

    ns::NoisyRelevanceOracle exact(truth, FaultProfile::paper_faithful(0.0), ns::Rng(1));
    EXPECT_EQ(ns::simulated_compare(exact, {3, 0}, {0, 0}), ns::Order::Greater);
    EXPECT_EQ(ns::simulated_compare(exact, {0, 0}, {3, 0}), ns::Order::Less);
    EXPECT_EQ(ns::simulated_compare(exact, {1, 0}, {0, 0}), ns::Order::Greater);
    EXPECT_EQ(ns::simulated_compare(exact, {2, 0}, {3, 0}), ns::Order::Less);
}

TEST(SimulatedComparison, ErrorBelowTwiceEToMinusThree) {
    const auto truth = ns::GroundTruth::sorted(4, 2);
    ns::NoisyRelevanceOracle oracle(truth, FaultProfile::paper_faithful(0.25), ns::Rng(5));
    const int calls = 20000;
    int wrong = 0;
    for (int i = 0; i < calls; ++i) {
        wrong += ns::simulated_compare(oracle, {3, 0}, {1, 0}) == ns::Order::Less;
    }
    EXPECT_LE(static_cast<double>(wrong) / calls, 2.0 * std::exp(-3.0));
}

TEST(FindOneCandidates, FaultFreeAndCounts) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ns::Rng rng(seed);
        const auto truth = ns::GroundTruth::random(64, 8, rng);
        ns::NoisyRelevanceOracle oracle(truth, FaultProfile::practical(0.0), rng.split(1));
        const auto params = ns::findone_reduction_params(64, 8, 8.0);
        ns::Rng sampling = rng.split(2);
        ns::Rng replay = sampling;
        const auto candidates = ns::build_candidate_set_findone(oracle, sampling, truth.elements(), 8, params);
        EXPECT_EQ(oracle.queries_used(), ns::candidate_set_findone_queries(params, oracle.profile()));
        for (const auto& c : candidates) {
            const auto sample = ns::sample_with_replacement(replay, truth.elements(), params.sample_size);
            bool any = false;
            for (const auto& h : sample) {
                any |= truth.is_small(h);
            }
            EXPECT_EQ(truth.is_small(c), any);
        }
    }
}

TEST(FindOneCandidates, MostCandidatesRelevant) {
    const std::uint64_t trials = 500;
    std::uint64_t good_trials = 0;
    const auto params = ns::findone_reduction_params(4096, 512, 8.0);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        ns::Rng stream(24, trial);
        ns::Rng instance = stream.split(0);
        const auto truth = ns::GroundTruth::random(4096, 512, instance);
        ns::NoisyRelevanceOracle oracle(truth, FaultProfile::practical(0.1), stream.split(1));
        ns::Rng sampling = stream.split(2);
        std::uint64_t relevant = 0;
        for (const auto& c : ns::build_candidate_set_findone(oracle, sampling, truth.elements(), 512, params)) {
            relevant += truth.is_small(c);
        }
        good_trials += 4 * relevant >= 3 * params.m;
    }
    EXPECT_GE(static_cast<double>(good_trials) / trials, 0.99);
}
