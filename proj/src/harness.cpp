#include "noisy_select/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <boost/math/distributions/beta.hpp>
#include <json.hpp>

#include "noisy_select/findmin.hpp"
#include "noisy_select/ftmin_fast.hpp"
#include "noisy_select/reduction.hpp"
#include "noisy_select/retrieval.hpp"
#include "noisy_select/tournament.hpp"

namespace noisy_select {

namespace {

struct NameEntry {
    Algorithm algorithm;
    std::string_view name;
};

constexpr NameEntry kNames[] = {
    {Algorithm::FindMin, "findmin"},
    {Algorithm::Tournament, "tournament"},
    {Algorithm::TruncatedTournament, "truncated-tournament"},
    {Algorithm::FindOneDense, "findone-dense"},
    {Algorithm::FindOne, "findone"},
    {Algorithm::ReductionTournament, "reduction-tournament"},
    {Algorithm::FtminFastDense, "ftmin-fast-dense"},
    {Algorithm::Ftmin, "ftmin"},
};

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string("none");
}

bool is_dense(Algorithm algorithm) {
    return algorithm == Algorithm::Tournament || algorithm == Algorithm::TruncatedTournament ||
           algorithm == Algorithm::FindOneDense || algorithm == Algorithm::FtminFastDense;
}

bool is_retrieval(Algorithm algorithm) {
    return algorithm == Algorithm::FindOneDense || algorithm == Algorithm::FindOne;
}

struct TrialSetup {
    GroundTruth truth;
    std::vector<ElementHandle> elements;
    Rng noise;
    Rng sampling;
};

TrialSetup setup_trial(const ExperimentConfig& config, std::uint64_t trial) {
    const Rng stream(config.seed, trial);
    Rng instance = stream.split(0);
    auto truth = GroundTruth::random(config.n, evaluation_k(config), instance);
    auto elements = truth.elements();
    return TrialSetup{std::move(truth), std::move(elements), stream.split(1), stream.split(2)};
}

struct Execution {
    ElementHandle element;
    std::uint64_t comparisons = 0;
    std::uint64_t queries = 0;
};

Execution execute(const ExperimentConfig& config, const FaultProfile& profile, TrialSetup& setup,
                  const FindMinFn* find_min_override = nullptr) {
    const std::span<const ElementHandle> s = setup.elements;
    Rng& rng = setup.sampling;

    if (is_retrieval(config.algorithm)) {
        NoisyRelevanceOracle oracle(setup.truth, profile, setup.noise);
        ElementHandle x;
        if (config.algorithm == Algorithm::FindOneDense) {
            x = find_one_dense(oracle, rng, s);
        } else {
            const auto params =
                findone_reduction_params(config.n, *config.k, reduction_gamma(profile, kRetrievalFailureBase));
            x = find_one(oracle, rng, s, *config.k, params);
        }
        return Execution{x, 0, oracle.queries_used()};
    }

    NoisyComparator cmp(setup.truth, profile, setup.noise);
    ElementHandle x;
    switch (config.algorithm) {
        case Algorithm::FindMin:
            x = find_min_override && *find_min_override ? (*find_min_override)(cmp, s, config.q)
                                                        : find_min(cmp, s, config.q);
            break;
        case Algorithm::Tournament:
            x = run_tournament(cmp, rng, s, TournamentParams{config.alpha});
            break;
        case Algorithm::TruncatedTournament: {
            const auto rounds = config.rounds.value_or(preselect_rounds(next_pow2(config.n)));
            x = run_truncated_tournament(cmp, rng, s, rounds, config.alpha).front();
            break;
        }
        case Algorithm::ReductionTournament:
            x = ftmin(cmp, rng, s, *config.k, DenseCore::Tournament);
            break;
        case Algorithm::FtminFastDense:
            x = ftmin_fast_dense(cmp, rng, s);
            break;
        case Algorithm::Ftmin:
            x = ftmin(cmp, rng, s, *config.k, DenseCore::ExpectedTime);
            break;
        default:
            throw std::logic_error("unhandled algorithm");
    }
    return Execution{x, cmp.comparisons_used(), 0};
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    for (const auto& entry : kNames) {
        if (entry.algorithm == algorithm) {
            return entry.name;
        }
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (const auto& entry : kNames) {
        if (entry.name == name) {
            return entry.algorithm;
        }
    }
    return std::nullopt;
}

bool uses_k(Algorithm algorithm) {
    return algorithm == Algorithm::FindOne || algorithm == Algorithm::ReductionTournament ||
           algorithm == Algorithm::Ftmin;
}

void validate(const ExperimentConfig& config) {
    if (!(config.p >= 0.0 && config.p < 0.5)) {
        throw ConfigError("p must lie in [0, 1/2), got " + format_double(config.p));
    }
    if (config.trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    const std::uint64_t min_n = is_dense(config.algorithm) ? 4 : 2;
    if (config.n < min_n) {
        throw ConfigError("n must be >= " + std::to_string(min_n) + " for " + std::string(to_string(config.algorithm)));
    }
    if (config.n > std::numeric_limits<std::uint32_t>::max()) {
        throw ConfigError("n too large");
    }
    if (config.k && (*config.k < 1 || *config.k >= config.n)) {
        throw ConfigError("k must lie in [1, n-1], got k=" + std::to_string(*config.k) +
                          " n=" + std::to_string(config.n));
    }
    if (uses_k(config.algorithm) && !config.k) {
        throw ConfigError(std::string(to_string(config.algorithm)) + " needs --k");
    }
    if (config.profile == ProfileKind::PaperFaithful && (config.gamma || config.repetition_scale)) {
        throw ConfigError("gamma and repetition scale overrides need the practical profile");
    }
    if (config.gamma && !(*config.gamma > 0.0)) {
        throw ConfigError("gamma must be positive");
    }
    if (config.repetition_scale && !(*config.repetition_scale > 0.0 && *config.repetition_scale <= 1.0)) {
        throw ConfigError("repetition scale must lie in (0, 1]");
    }
    if (!(config.alpha >= 1.0)) {
        throw ConfigError("alpha must be >= 1");
    }
    if (!(config.q > 0.0 && config.q < 0.5)) {
        throw ConfigError("q must lie in (0, 1/2)");
    }
    if (config.rounds) {
        const unsigned full = log2_exact(next_pow2(config.n));
        if (*config.rounds < 1 || *config.rounds > full) {
            throw ConfigError("rounds must lie in [1, " + std::to_string(full) + "]");
        }
    }
}

FaultProfile make_profile(const ExperimentConfig& config) {
    if (config.profile == ProfileKind::PaperFaithful) {
        return FaultProfile::paper_faithful(config.p);
    }
    return FaultProfile::practical(config.p, config.gamma.value_or(FaultProfile::kDefaultPracticalGamma),
                                   config.repetition_scale);
}

std::uint64_t evaluation_k(const ExperimentConfig& config) {
    if (is_dense(config.algorithm)) {
        return (3 * config.n + 3) / 4;
    }
    if (config.algorithm == Algorithm::FindMin) {
        return 1;
    }
    return config.k.value_or(1);
}

Interval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double confidence) {
    if (trials == 0 || successes > trials) {
        throw std::invalid_argument("clopper_pearson needs 0 <= successes <= trials, trials > 0");
    }
    const double tail = (1.0 - confidence) / 2.0;
    const auto x = static_cast<double>(successes);
    const auto n = static_cast<double>(trials);
    Interval out{0.0, 1.0};
    if (successes > 0) {
        out.low = boost::math::quantile(boost::math::beta_distribution<>(x, n - x + 1.0), tail);
    }
    if (successes < trials) {
        out.high = boost::math::quantile(boost::math::beta_distribution<>(x + 1.0, n - x), 1.0 - tail);
    }
    return out;
}

CellSummary summarize(const ExperimentConfig& config, std::span<const TrialReport> trials) {
    CellSummary cell;
    cell.n = config.n;
    cell.k = evaluation_k(config);
    cell.p = config.p;
    cell.trials = trials.size();
    for (const auto& t : trials) {
        cell.successes += t.success;
        cell.mean_comparisons += static_cast<double>(t.comparisons);
        cell.mean_queries += static_cast<double>(t.queries);
        cell.max_comparisons = std::max(cell.max_comparisons, t.comparisons);
        cell.max_queries = std::max(cell.max_queries, t.queries);
    }
    if (!trials.empty()) {
        const auto count = static_cast<double>(trials.size());
        cell.success_rate = static_cast<double>(cell.successes) / count;
        cell.mean_comparisons /= count;
        cell.mean_queries /= count;
        cell.ci = clopper_pearson(cell.successes, cell.trials);
    }
    cell.reference = static_cast<double>(cell.n) / static_cast<double>(cell.k) * std::log2(static_cast<double>(cell.n));
    return cell;
}

TrialReport run_single_trial(const ExperimentConfig& config, std::uint64_t trial) {
    const auto profile = make_profile(config);
    auto setup = setup_trial(config, trial);
    const auto started = std::chrono::steady_clock::now();
    const auto execution = execute(config, profile, setup);
    const auto elapsed = std::chrono::steady_clock::now() - started;

    TrialReport report;
    report.trial = trial;
    report.element_id = execution.element.id;
    report.true_rank = setup.truth.rank(execution.element);
    report.success = report.true_rank < setup.truth.k();
    report.comparisons = execution.comparisons;
    report.queries = execution.queries;
    if (config.timing) {
        report.micros =
            static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count());
    }
    return report;
}

void parallel_for(std::uint64_t count, unsigned threads, const std::function<void(std::uint64_t)>& fn) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::uint64_t i = next++; i < count && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            error = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

RunResult run_trials(const ExperimentConfig& config) {
    validate(config);
    RunResult result{config, std::vector<TrialReport>(config.trials), {}};
    parallel_for(config.trials, config.threads,
                 [&](std::uint64_t trial) { result.trials[trial] = run_single_trial(config, trial); });
    result.summary = summarize(config, result.trials);
    return result;
}

std::vector<CellSummary> sweep(const ExperimentConfig& base, const SweepGrid& grid) {
    if (grid.n.empty() || grid.p.empty() || (grid.k.empty() && uses_k(base.algorithm))) {
        throw ConfigError("sweep grid is empty");
    }
    std::vector<std::optional<std::uint64_t>> ks(grid.k.begin(), grid.k.end());
    if (ks.empty()) {
        ks.push_back(base.k);
    }
    std::vector<ExperimentConfig> cells;
    for (auto n : grid.n) {
        for (auto k : ks) {
            for (auto p : grid.p) {
                ExperimentConfig cell = base;
                cell.n = n;
                cell.k = k;
                cell.p = p;
                validate(cell);
                cells.push_back(cell);
            }
        }
    }
    std::vector<CellSummary> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) {
        out.push_back(run_trials(cell).summary);
    }
    return out;
}

namespace {

void write_config_comments(std::ostream& os, const ExperimentConfig& c) {
    os << "# " << kReportVersion << '\n';
    os << "# algo=" << to_string(c.algorithm) << " n=" << c.n
       << " k=" << (c.k ? std::to_string(*c.k) : std::string("none")) << " p=" << format_double(c.p)
       << " trials=" << c.trials << " seed=" << c.seed << " profile=" << to_string(c.profile)
       << " gamma=" << format_optional(c.gamma) << " rep_scale=" << format_optional(c.repetition_scale)
       << " alpha=" << format_double(c.alpha) << " q=" << format_double(c.q)
       << " rounds=" << (c.rounds ? std::to_string(*c.rounds) : std::string("auto"))
       << " timing=" << (c.timing ? "on" : "off") << '\n';
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["algo"] = to_string(c.algorithm);
    j["n"] = c.n;
    j["k"] = c.k ? nlohmann::ordered_json(*c.k) : nlohmann::ordered_json(nullptr);
    j["p"] = c.p;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["profile"] = to_string(c.profile);
    j["gamma"] = c.gamma ? nlohmann::ordered_json(*c.gamma) : nlohmann::ordered_json(nullptr);
    j["rep_scale"] = c.repetition_scale ? nlohmann::ordered_json(*c.repetition_scale) : nlohmann::ordered_json(nullptr);
    j["alpha"] = c.alpha;
    j["q"] = c.q;
    j["rounds"] = c.rounds ? nlohmann::ordered_json(*c.rounds) : nlohmann::ordered_json(nullptr);
    j["timing"] = c.timing;
    return j;
}

nlohmann::ordered_json summary_json(const CellSummary& s) {
    nlohmann::ordered_json j;
    j["n"] = s.n;
    j["k"] = s.k;
    j["p"] = s.p;
    j["trials"] = s.trials;
    j["successes"] = s.successes;
    j["success_rate"] = s.success_rate;
    j["ci_low"] = s.ci.low;
    j["ci_high"] = s.ci.high;
    j["mean_comparisons"] = s.mean_comparisons;
    j["max_comparisons"] = s.max_comparisons;
    j["mean_queries"] = s.mean_queries;
    j["max_queries"] = s.max_queries;
    j["reference"] = s.reference;
    return j;
}

constexpr std::string_view kSummaryHeader =
    "n,k,p,trials,successes,success_rate,ci_low,ci_high,mean_comparisons,max_comparisons,mean_queries,max_queries,"
    "reference";

void write_summary_row(std::ostream& os, const CellSummary& s) {
    os << s.n << ',' << s.k << ',' << format_double(s.p) << ',' << s.trials << ',' << s.successes << ','
       << format_double(s.success_rate) << ',' << format_double(s.ci.low) << ',' << format_double(s.ci.high) << ','
       << format_double(s.mean_comparisons) << ',' << s.max_comparisons << ',' << format_double(s.mean_queries)
       << ',' << s.max_queries << ',' << format_double(s.reference) << '\n';
}

std::string join(const auto& values, auto&& format) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) {
            out += ',';
        }
        out += format(v);
    }
    return out;
}

}  // namespace

std::string to_csv(const RunResult& result) {
    std::ostringstream os;
    write_config_comments(os, result.config);
    os << "# eval_k=" << evaluation_k(result.config) << '\n';
    os << "trial,element_id,true_rank,success,comparisons,queries,micros\n";
    for (const auto& t : result.trials) {
        os << t.trial << ',' << t.element_id << ',' << t.true_rank << ',' << (t.success ? 1 : 0) << ','
           << t.comparisons << ',' << t.queries << ',' << t.micros << '\n';
    }
    return os.str();
}

std::string to_json(const RunResult& result) {
    nlohmann::ordered_json j;
    j["version"] = kReportVersion;
    j["config"] = config_json(result.config);
    auto trials = nlohmann::ordered_json::array();
    for (const auto& t : result.trials) {
        nlohmann::ordered_json row;
        row["trial"] = t.trial;
        row["element_id"] = t.element_id;
        row["true_rank"] = t.true_rank;
        row["success"] = t.success;
        row["comparisons"] = t.comparisons;
        row["queries"] = t.queries;
        row["micros"] = t.micros;
        trials.push_back(std::move(row));
    }
    j["trials"] = std::move(trials);
    j["summary"] = summary_json(result.summary);
    return j.dump(2) + "\n";
}

std::string sweep_to_csv(const ExperimentConfig& base, const SweepGrid& grid, std::span<const CellSummary> cells) {
    std::ostringstream os;
    write_config_comments(os, base);
    os << "# grid n=" << join(grid.n, [](auto v) { return std::to_string(v); })
       << " k=" << join(grid.k, [](auto v) { return std::to_string(v); })
       << " p=" << join(grid.p, [](double v) { return format_double(v); }) << '\n';
    os << kSummaryHeader << '\n';
    for (const auto& cell : cells) {
        write_summary_row(os, cell);
    }
    return os.str();
}

std::string sweep_to_json(const ExperimentConfig& base, const SweepGrid& grid, std::span<const CellSummary> cells) {
    nlohmann::ordered_json j;
    j["version"] = kReportVersion;
    j["config"] = config_json(base);
    j["grid"] = {{"n", grid.n}, {"k", grid.k}, {"p", grid.p}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& cell : cells) {
        rows.push_back(summary_json(cell));
    }
    j["cells"] = std::move(rows);
    return j.dump(2) + "\n";
}

namespace {

// Minimum-rank handle of each aligned block of `block` entries: the survivors
// a fault-free bracket must produce.
std::vector<ElementHandle> block_minima(const GroundTruth& truth, std::span<const ElementHandle> pool,
                                        std::size_t block) {
    std::vector<ElementHandle> out;
    for (std::size_t start = 0; start < pool.size(); start += block) {
        const auto first = pool.begin() + static_cast<std::ptrdiff_t>(start);
        out.push_back(*std::min_element(first, first + static_cast<std::ptrdiff_t>(block),
                                        [&](ElementHandle a, ElementHandle b) {
                                            return truth.rank(a) != truth.rank(b) ? truth.rank(a) < truth.rank(b)
                                                                                  : a < b;
                                        }));
    }
    return out;
}

std::optional<std::string> check_exact(const ExperimentConfig& config, const TrialSetup& before, ElementHandle got) {
    const auto& truth = before.truth;
    const std::span<const ElementHandle> s = before.elements;
    auto describe = [&](std::string_view what) {
        return std::string(what) + " (returned id " + std::to_string(got.id) + ", rank " +
               std::to_string(truth.rank(got)) + ")";
    };

    switch (config.algorithm) {
        case Algorithm::FindMin:
            if (truth.rank(got) != 0) {
                return describe("not the minimum");
            }
            return std::nullopt;
        case Algorithm::Tournament:
        case Algorithm::TruncatedTournament:
        case Algorithm::FtminFastDense: {
            Rng replay = before.sampling;
            const auto pool = build_entry_pool(replay, s);
            unsigned rounds = log2_exact(pool.size());
            if (config.algorithm == Algorithm::TruncatedTournament) {
                rounds = config.rounds.value_or(preselect_rounds(pool.size()));
            } else if (config.algorithm == Algorithm::FtminFastDense) {
                rounds = preselect_rounds(pool.size());
            }
            const auto survivors = block_minima(truth, pool, std::size_t{1} << rounds);
            if (config.algorithm != Algorithm::FtminFastDense) {
                if (got != survivors.front()) {
                    return describe("not the minimum of its bracket");
                }
                return std::nullopt;
            }
            std::vector<std::uint32_t> ranks;
            for (auto h : survivors) {
                ranks.push_back(truth.rank(h));
            }
            std::sort(ranks.begin(), ranks.end());
            const std::size_t band = (3 * ranks.size() + 3) / 4;
            if (truth.rank(got) > ranks[band - 1]) {
                return describe("outside the smallest three quarters of the pre-selected set");
            }
            return std::nullopt;
        }
        default:
            if (truth.rank(got) >= truth.k()) {
                return describe("rank not below k");
            }
            return std::nullopt;
    }
}

}  // namespace

VerifyResult verify_exactness(const VerifyOptions& options) {
    VerifyResult result;
    for (const auto algorithm : kAllAlgorithms) {
        for (const auto n : options.sizes) {
            for (std::uint64_t seed = 0; seed < options.seeds; ++seed) {
                ExperimentConfig config;
                config.algorithm = algorithm;
                config.n = n;
                config.k = std::max<std::uint64_t>(1, n / 4);
                config.p = 0.0;
                config.seed = seed;
                config.profile = ProfileKind::Practical;
                validate(config);

                auto setup = setup_trial(config, 0);
                const TrialSetup before = setup;
                const auto execution = execute(config, make_profile(config), setup, &options.find_min_override);
                ++result.runs;
                if (auto problem = check_exact(config, before, execution.element)) {
                    result.failure = VerifyFailure{algorithm, n, seed, *problem};
                    return result;
                }
            }
        }
    }
    return result;
}

}  // namespace noisy_select
