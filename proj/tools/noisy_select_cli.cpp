// noisy_select: run, sweep and verify the noisy selection algorithms.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "noisy_select/harness.hpp"

namespace ns = noisy_select;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitInvalid = 2;

struct CommonFlags {
    std::string algo = "ftmin";
    std::uint64_t n = 1024;
    std::optional<std::uint64_t> k;
    double p = 0.1;
    std::uint64_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::string profile = "practical";
    std::optional<double> gamma;
    std::optional<double> rep_scale;
    double alpha = 2.0;
    double q = 0.05;
    std::optional<unsigned> rounds;
    std::string out;
    std::string format = "csv";
    bool timing = false;
    unsigned threads = 0;
};

void add_shared(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--algo", f.algo,
                    "findmin | tournament | truncated-tournament | findone-dense | findone | "
                    "reduction-tournament | ftmin-fast-dense | ftmin")
        ->capture_default_str();
    cmd->add_option("--trials", f.trials, "Trials per cell")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed (fallback: NOISY_SELECT_SEED, then 0)");
    cmd->add_option("--profile", f.profile, "paper | practical")->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "Reduction gamma (practical profile)");
    cmd->add_option("--rep-scale", f.rep_scale, "Repetition scale in (0, 1] (practical profile)");
    cmd->add_option("--alpha", f.alpha, "Tournament growth base")->capture_default_str();
    cmd->add_option("--q", f.q, "FindMin failure probability")->capture_default_str();
    cmd->add_option("--rounds", f.rounds, "Truncated tournament rounds (default ceil(log2 log2 N))");
    cmd->add_option("--out", f.out, "Output file (default: stdout)");
    cmd->add_option("--format", f.format, "csv | json")->capture_default_str();
    cmd->add_flag("--timing", f.timing, "Record per-trial wall time (output no longer byte-reproducible)");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("NOISY_SELECT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw ns::ConfigError(std::string("NOISY_SELECT_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

ns::ExperimentConfig to_config(const CommonFlags& f) {
    ns::ExperimentConfig config;
    const auto algorithm = ns::parse_algorithm(f.algo);
    if (!algorithm) {
        throw ns::ConfigError("unknown algorithm: " + f.algo);
    }
    config.algorithm = *algorithm;
    config.n = f.n;
    config.k = f.k;
    config.p = f.p;
    config.trials = f.trials;
    config.seed = resolve_seed(f.seed);
    if (f.profile == "paper") {
        config.profile = ns::ProfileKind::PaperFaithful;
    } else if (f.profile == "practical") {
        config.profile = ns::ProfileKind::Practical;
    } else {
        throw ns::ConfigError("unknown profile: " + f.profile);
    }
    config.gamma = f.gamma;
    config.repetition_scale = f.rep_scale;
    config.alpha = f.alpha;
    config.q = f.q;
    config.rounds = f.rounds;
    config.timing = f.timing;
    config.threads = f.threads;
    if (f.format != "csv" && f.format != "json") {
        throw ns::ConfigError("unknown format: " + f.format);
    }
    return config;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("cannot open " + path);
    }
    file << text;
}

void print_cell(std::ostream& os, const ns::CellSummary& s) {
    os << "n=" << s.n << " k=" << s.k << " p=" << s.p << " trials=" << s.trials << " success=" << s.success_rate
       << " [" << s.ci.low << ", " << s.ci.high << "] mean_cmp=" << s.mean_comparisons
       << " max_cmp=" << s.max_comparisons << " mean_q=" << s.mean_queries << " max_q=" << s.max_queries
       << " ref=" << s.reference << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault-tolerant minimum selection and retrieval under noisy oracles"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    auto* run = app.add_subcommand("run", "Run trials of one algorithm and write per-trial reports");
    add_shared(run, run_flags);
    run->add_option("--n", run_flags.n, "Instance size")->capture_default_str();
    run->add_option("--k", run_flags.k, "Rank target / relevant count");
    run->add_option("--p", run_flags.p, "Fault probability")->capture_default_str();

    CommonFlags sweep_flags;
    std::vector<std::uint64_t> sweep_n;
    std::vector<std::uint64_t> sweep_k;
    std::vector<double> sweep_p;
    auto* sweep = app.add_subcommand("sweep", "Run a grid of (n, k, p) cells and write one summary row per cell");
    add_shared(sweep, sweep_flags);
    sweep->add_option("--n", sweep_n, "Instance sizes")->delimiter(',');
    sweep->add_option("--k", sweep_k, "Rank targets")->delimiter(',');
    sweep->add_option("--p", sweep_p, "Fault probabilities")->delimiter(',');

    double verify_p = 0.0;
    std::uint64_t verify_seeds = 100;
    auto* verify = app.add_subcommand("verify", "Fault-free exactness gate over every algorithm");
    verify->add_option("--p", verify_p, "Must be 0")->capture_default_str();
    verify->add_option("--seeds", verify_seeds, "Seeds per (algorithm, n)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    }

    try {
        if (*run) {
            const auto config = to_config(run_flags);
            const auto result = ns::run_trials(config);
            emit(run_flags.format == "json" ? ns::to_json(result) : ns::to_csv(result), run_flags.out);
            if (!run_flags.out.empty()) {
                print_cell(std::cout, result.summary);
            }
            return kExitOk;
        }
        if (*sweep) {
            const auto base = to_config(sweep_flags);
            const ns::SweepGrid grid{sweep_n, sweep_k, sweep_p};
            const auto cells = ns::sweep(base, grid);
            emit(sweep_flags.format == "json" ? ns::sweep_to_json(base, grid, cells)
                                              : ns::sweep_to_csv(base, grid, cells),
                 sweep_flags.out);
            if (!sweep_flags.out.empty()) {
                for (const auto& cell : cells) {
                    print_cell(std::cout, cell);
                }
            }
            return kExitOk;
        }
        if (*verify) {
            if (!(verify_p >= 0.0 && verify_p < 0.5)) {
                throw ns::ConfigError("p must lie in [0, 1/2)");
            }
            if (verify_p != 0.0) {
                throw ns::ConfigError("verify runs fault-free; p must be 0");
            }
            ns::VerifyOptions options;
            options.seeds = verify_seeds;
            const auto result = ns::verify_exactness(options);
            if (!result.passed()) {
                const auto& f = *result.failure;
                std::cout << "verify FAILED: algo=" << ns::to_string(f.algorithm) << " n=" << f.n
                          << " seed=" << f.seed << ": " << f.detail << '\n';
                return kExitFailed;
            }
            std::cout << "verify passed: " << result.runs << " runs\n";
            return kExitOk;
        }
    } catch (const ns::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitOk;
}
