#pragma once

#include "specdec/config.hpp"
#include "specdec/report.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace specdec::cli {

// Library-level command implementations. The binary in tools/ is a thin
// argument-parsing wrapper around these so tests can drive them directly.

struct SuiteResult {
    std::string name;
    long long checked = 0;
    long long failed = 0;

    bool ok() const { return failed == 0; }
};

struct VerifyOptions {
    std::string suite;      // empty = all suites
    long long cases = 0;    // 0 = per-suite default
    std::uint64_t seed = 20240501;
    bool inject_fault = false; // test hook: perturb the residual primitive
};

/// Runs the theorem/equivalence suites; one key=value line per suite goes to
/// `log`. Returns 0 when every suite passes, 1 otherwise.
int cmd_verify(const VerifyOptions& options, std::ostream& log);
std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options);

/// Acceptance-probability curve over k. With mc_trials = 0 each context
/// contributes its closed-form per-step acceptance probability (exact and
/// noise-free); with mc_trials > 0 each context contributes an empirical
/// rate over that many sampled verification steps. The stderr column is the
/// across-context standard error either way.
std::vector<AlphaCurveRow> run_alpha_curve(const ExperimentConfig& config,
                                           const std::vector<int>& k_list, long long mc_trials = 0);

/// Full generation runs for each k configuration; rows sorted by tau
/// descending (ties: lexicographic config string). Errors: BudgetExceeded.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::vector<KConfig>& configurations);

struct BudgetSearchResult {
    std::vector<SweepRow> rows; // sorted by tau descending
    std::string best_config;
    int evaluated = 0;
};

/// Enumerates k configurations with entries in {1,2,4,8,16,32}, product at
/// most `budget`, depth at most config.gamma; prune=true keeps only
/// non-increasing sequences.
BudgetSearchResult run_budget_search(const ExperimentConfig& config, long long budget, bool prune);

/// The candidate configurations budget-search evaluates (exposed for tests).
std::vector<KConfig> enumerate_budget_configs(long long budget, int max_gamma, bool prune);

struct GenerateReport {
    std::vector<TokenId> tokens;
    SweepRow row;
};

/// One seeded generation under the config (context index 0's prompt).
GenerateReport run_generate(const ExperimentConfig& config);
std::string render_generate(const GenerateReport& report, ReportFormat format);

} // namespace specdec::cli
