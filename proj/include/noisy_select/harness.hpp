#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noisy_select/core.hpp"

namespace noisy_select {

inline constexpr std::string_view kReportVersion = "noisy_select-report/1";

enum class Algorithm {
    FindMin,
    Tournament,
    TruncatedTournament,
    FindOneDense,
    FindOne,
    ReductionTournament,
    FtminFastDense,
    Ftmin,
};

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::FindMin,      Algorithm::Tournament, Algorithm::TruncatedTournament, Algorithm::FindOneDense,
    Algorithm::FindOne,      Algorithm::ReductionTournament, Algorithm::FtminFastDense, Algorithm::Ftmin,
};

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Whether the algorithm answers the general (k-parameterised) problem.
bool uses_k(Algorithm algorithm);

/// Thrown for parameter combinations rejected before any trial runs.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::Ftmin;
    std::uint64_t n = 1024;
    std::optional<std::uint64_t> k;
    double p = 0.1;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    ProfileKind profile = ProfileKind::Practical;
    std::optional<double> gamma;
    std::optional<double> repetition_scale;
    double alpha = 2.0;
    double q = 0.05;                  // FindMin only
    std::optional<unsigned> rounds;   // TruncatedTournament only; default ⌈log2 log2 N⌉
    bool timing = false;              // record wall time (breaks byte-identical output)
    unsigned threads = 0;             // 0 = hardware concurrency
};

/// Throws ConfigError on invalid combinations.
void validate(const ExperimentConfig& config);

FaultProfile make_profile(const ExperimentConfig& config);

/// Rank threshold that defines success: ⌈3n/4⌉ for the dense algorithms,
/// 1 for FindMin (exact minimum), k otherwise.
std::uint64_t evaluation_k(const ExperimentConfig& config);

struct TrialReport {
    std::uint64_t trial = 0;
    std::uint32_t element_id = 0;
    std::uint32_t true_rank = 0;
    bool success = false;
    std::uint64_t comparisons = 0;
    std::uint64_t queries = 0;
    std::uint64_t micros = 0;

    friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

struct Interval {
    double low;
    double high;
};

/// Exact two-sided Clopper–Pearson interval for `successes` out of `trials`.
Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence = 0.95);

struct CellSummary {
    std::uint64_t n = 0;
    std::uint64_t k = 0;  // evaluation k
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double success_rate = 0.0;
    Interval ci{0.0, 0.0};
    double mean_comparisons = 0.0;
    std::uint64_t max_comparisons = 0;
    double mean_queries = 0.0;
    std::uint64_t max_queries = 0;
    double reference = 0.0;  // (n/k)·log2 n
};

CellSummary summarize(const ExperimentConfig& config, std::span<const TrialReport> trials);

struct RunResult {
    ExperimentConfig config;
    std::vector<TrialReport> trials;
    CellSummary summary;
};

/// One trial. The trial's instance, fault stream and sampling stream all
/// derive from (seed, trial).
TrialReport run_single_trial(const ExperimentConfig& config, std::uint64_t trial);

/// All trials, in trial order regardless of thread scheduling.
RunResult run_trials(const ExperimentConfig& config);

struct SweepGrid {
    std::vector<std::uint64_t> n;
    std::vector<std::uint64_t> k;
    std::vector<double> p;
};

/// run_trials per (n, k, p) cell, n outermost. Every cell is validated before
/// the first one runs; an empty grid is a ConfigError. An empty k list is
/// allowed for algorithms that ignore k.
std::vector<CellSummary> sweep(const ExperimentConfig& base, const SweepGrid& grid);

std::string to_csv(const RunResult& result);
std::string to_json(const RunResult& result);
std::string sweep_to_csv(const ExperimentConfig& base, const SweepGrid& grid, std::span<const CellSummary> cells);
std::string sweep_to_json(const ExperimentConfig& base, const SweepGrid& grid, std::span<const CellSummary> cells);

/// Calls fn(i) for i in [0, count) on `threads` workers (0 = hardware
/// concurrency).
void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& fn);

using FindMinFn = std::function<ElementHandle(NoisyComparator&, std::span<const ElementHandle>, double)>;

struct VerifyOptions {
    std::vector<std::uint64_t> sizes{8, 64, 256};
    std::uint64_t seeds = 100;
    /// Replaces find_min inside the gate (mutation checks).
    FindMinFn find_min_override;
};

struct VerifyFailure {
    Algorithm algorithm;
    std::uint64_t n;
    std::uint64_t seed;
    std::string detail;
};

struct VerifyResult {
    std::uint64_t runs = 0;
    std::optional<VerifyFailure> failure;
    bool passed() const noexcept { return !failure.has_value(); }
};

/// p = 0 gate: every algorithm, every size, every seed must give the answer
/// the fault-free model dictates. Stops at the first failure.
VerifyResult verify_exactness(const VerifyOptions& options = {});

}  // namespace noisy_select
