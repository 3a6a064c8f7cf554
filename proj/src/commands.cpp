#include "specdec/commands.hpp"

#include "specdec/decode.hpp"
#include "specdec/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace specdec::cli {

namespace {

constexpr std::uint64_t kGenTag = 0x6e41;
constexpr std::uint64_t kAlphaTag = 0xa1fa;

struct FaultGuard {
    explicit FaultGuard(bool enabled) {
        if (enabled) detail::set_residual_perturbation(0.01);
    }
    ~FaultGuard() { detail::set_residual_perturbation(0.0); }
};

double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

// --- verify suites ----------------------------------------------------------

SuiteResult suite_surgery_identities(long long cases, RngStream& rng) {
    SuiteResult result{"surgery-identities"};
    const auto pairs = oracle::suite_cases(static_cast<int>(cases), 8, rng);
    for (const auto& cp : pairs) {
        ++result.checked;
        bool bad = false;
        const auto p = cp.p.probs();
        const auto q = cp.q.probs();

        // max(p-q,0) + min(p,q) must reassemble p.
        std::vector<double> res(p.size());
        detail::residual_into(p, q, res);
        for (std::size_t x = 0; x < p.size(); ++x) {
            if (std::abs(res[x] + std::min(p[x], q[x]) - p[x]) > 1e-12) bad = true;
        }

        // Exclusion-renormalization zeroes the excluded id and preserves
        // ratios elsewhere.
        const TokenId excluded = 0;
        double outside = 0.0;
        for (std::size_t x = 1; x < q.size(); ++x) outside += q[x];
        if (outside > 1e-9) {
            const Categorical qbar = renorm_excluding(cp.q, std::vector<TokenId>{excluded});
            if (qbar[excluded] != 0.0) bad = true;
            for (std::size_t x = 1; x < q.size(); ++x) {
                if (std::abs(qbar.probs()[x] * outside - q[x]) > 1e-9) bad = true;
            }
        }

        // Temperature semantics: argmax one-hot at temp 0, plain softmax at 1.
        Logits logits;
        logits.values.resize(p.size());
        for (double& v : logits.values) v = rng.normal();
        const Categorical hard = apply_temperature(logits, 0.0);
        if (hard[argmax(logits.values)] != 1.0) bad = true;
        const Categorical soft = apply_temperature(logits, 1.0);
        double denom = 0.0;
        for (double v : logits.values) denom += std::exp(v);
        for (std::size_t x = 0; x < p.size(); ++x) {
            if (std::abs(soft.probs()[x] - std::exp(logits.values[x]) / denom) > 1e-12) bad = true;
        }

        if (bad) ++result.failed;
    }
    return result;
}

SuiteResult suite_appendix_a(long long cases, RngStream& rng) {
    SuiteResult result{"appendix-a"};
    const auto pairs = oracle::suite_cases(static_cast<int>(cases), 8, rng);
    for (const auto& cp : pairs) {
        for (int k = 1; k <= 4; ++k) {
            ++result.checked;
            const auto exact = oracle::exact_output_dist_mcss(cp.p, cp.q, k);
            if (tv_distance(exact.dist, cp.p) > 1e-10) ++result.failed;
        }
    }
    return result;
}

SuiteResult suite_appendix_b(long long cases, RngStream& rng) {
    SuiteResult result{"appendix-b"};
    const auto pairs = oracle::suite_cases(static_cast<int>(cases), 6, rng);
    for (const auto& cp : pairs) {
        int support = 0;
        for (double x : cp.q.probs()) {
            if (x > 0.0) ++support;
        }
        const int k_max = std::min(3, support);
        for (int k = 1; k <= k_max; ++k) {
            ++result.checked;
            const auto exact = oracle::exact_output_dist_mcss_wor(cp.p, cp.q, k);
            if (tv_distance(exact.dist, cp.p) > 1e-10) ++result.failed;
        }
    }
    return result;
}

SuiteResult suite_appendix_c(long long cases, RngStream& rng) {
    const oracle::BoundReport report =
        oracle::check_bound_suite(static_cast<int>(cases), 8, 8, rng);
    SuiteResult result{"appendix-c"};
    result.checked = report.cases_checked;
    result.failed =
        report.bound_failures + report.monotonicity_failures + report.k1_mismatch_failures;
    return result;
}

SuiteResult suite_mc_crosscheck(long long cases, RngStream& rng) {
    SuiteResult result{"mc-crosscheck"};
    constexpr long long kTrials = 1'000'000;
    const auto pairs = oracle::suite_cases(static_cast<int>(cases), 8, rng);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& cp = pairs[i];
        const int k = 2 + static_cast<int>(i % 2);

        ++result.checked;
        RngStream mc_rng = rng.child(2 * i);
        const auto with_repl = oracle::monte_carlo_dist(
            [&](RngStream& r) {
                std::vector<TokenId> cands;
                cands.reserve(static_cast<std::size_t>(k));
                for (int j = 0; j < k; ++j) cands.push_back(sample(cp.q, r));
                return mcss_step(cp.p, cp.q, cands, r).token;
            },
            cp.p.vocab_size(), kTrials, mc_rng);
        if (tv_distance(with_repl.dist, cp.p) > 0.01) ++result.failed;

        ++result.checked;
        RngStream wor_rng = rng.child(2 * i + 1);
        const auto without_repl = oracle::monte_carlo_dist(
            [&](RngStream& r) {
                const std::vector<TokenId> cands = sample_without_replacement(cp.q, k, r);
                return mcss_wor_step(cp.p, cp.q, cands, r).token;
            },
            cp.p.vocab_size(), kTrials, wor_rng);
        if (tv_distance(without_repl.dist, cp.p) > 0.01) ++result.failed;
    }
    return result;
}

SuiteResult suite_tree_equivalence(long long cases, RngStream& rng) {
    SuiteResult result{"tree-equivalence"};
    for (long long i = 0; i < cases; ++i) {
        ++result.checked;
        RngStream case_rng = rng.child(static_cast<std::uint64_t>(i));
        const int vocab = 12;
        const TinyAttentionModel target(case_rng.next_u64(), vocab, 16);
        const TabularToyModel draft(case_rng.next_u64(), vocab, 2, 2.0);

        const int gamma = 1 + static_cast<int>(i % 4);
        std::vector<int> ks;
        for (int d = 0; d < gamma; ++d) {
            ks.push_back(1 + static_cast<int>(case_rng.next_u64() % 3));
        }
        const KConfig kc(ks);
        const VerifyMode mode = i % 2 == 0 ? VerifyMode::WithReplacement : VerifyMode::WithoutReplacement;

        std::vector<TokenId> prefix;
        const int prefix_len = 3 + static_cast<int>(case_rng.next_u64() % 4);
        for (int t = 0; t < prefix_len; ++t) {
            prefix.push_back(static_cast<TokenId>(case_rng.next_u64() % vocab));
        }

        RngStream draft_rng = case_rng.child(1);
        const CandidateTree tree = build_candidate_tree(draft, prefix, kc, mode, 1.0, draft_rng);
        const PackedSequence packed = pack_tree(tree, prefix_len);

        // Packed masked scoring against per-path sequential scoring.
        const std::vector<Logits> packed_logits = target.score_packed(prefix, packed);
        bool bad = false;
        std::vector<TokenId> context;
        for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
            context.assign(prefix.begin(), prefix.end());
            const auto path = tree.path_tokens(static_cast<int>(n));
            context.insert(context.end(), path.begin(), path.end());
            const Logits direct = target.next_logits(context);
            for (std::size_t v = 0; v < direct.values.size(); ++v) {
                if (std::abs(direct.values[v] - packed_logits[n].values[v]) > 1e-6) bad = true;
            }
        }

        // Full blocks must agree token-for-token on a shared stream.
        RngStream block_a = case_rng.child(2);
        RngStream block_b = case_rng.child(2);
        const BlockResult packed_block =
            decode_block(target, draft, prefix, kc, mode, 1.0, block_a, Scoring::Packed);
        const BlockResult batched_block =
            decode_block(target, draft, prefix, kc, mode, 1.0, block_b, Scoring::Batched);
        if (packed_block.accepted_tokens != batched_block.accepted_tokens ||
            packed_block.endpoint != batched_block.endpoint) {
            bad = true;
        }
        if (bad) ++result.failed;
    }
    return result;
}

struct SuiteSpec {
    const char* name;
    long long default_cases;
    SuiteResult (*run)(long long, RngStream&);
};

constexpr SuiteSpec kSuites[] = {
    {"surgery-identities", 500, suite_surgery_identities},
    {"appendix-a", 200, suite_appendix_a},
    {"appendix-b", 100, suite_appendix_b},
    {"appendix-c", 1000, suite_appendix_c},
    {"mc-crosscheck", 10, suite_mc_crosscheck},
    {"tree-equivalence", 100, suite_tree_equivalence},
};

} // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options) {
    FaultGuard guard(options.inject_fault);
    std::vector<SuiteResult> results;
    bool matched = false;
    for (const SuiteSpec& spec : kSuites) {
        if (!options.suite.empty() && options.suite != spec.name) continue;
        matched = true;
        RngStream rng = RngStream(options.seed).child(std::hash<std::string_view>{}(spec.name));
        results.push_back(spec.run(options.cases > 0 ? options.cases : spec.default_cases, rng));
    }
    if (!matched) {
        raise(ErrorCode::ConfigError, "unknown suite: '" + options.suite + "'");
    }
    return results;
}

int cmd_verify(const VerifyOptions& options, std::ostream& log) {
    const std::vector<SuiteResult> results = run_verify_suites(options);
    bool all_ok = true;
    for (const SuiteResult& r : results) {
        log << "suite=" << r.name << " checked=" << r.checked << " failed=" << r.failed
            << " status=" << (r.ok() ? "ok" : "fail") << "\n";
        all_ok = all_ok && r.ok();
    }
    log << "verify=" << (all_ok ? "ok" : "fail") << " suites=" << results.size() << "\n";
    return all_ok ? 0 : 1;
}

std::vector<AlphaCurveRow> run_alpha_curve(const ExperimentConfig& config,
                                           const std::vector<int>& k_list, long long mc_trials) {
    config.validate();
    if (k_list.empty() || !std::is_sorted(k_list.begin(), k_list.end())) {
        raise(ErrorCode::ConfigError, "k list must be non-empty and sorted ascending");
    }
    if (mc_trials == 0 && (config.mode == VerifyMode::WithoutReplacement)) {
        raise(ErrorCode::ConfigError,
              "without-replacement acceptance has no closed form here; pass a Monte Carlo trial count");
    }
    const AgreementPair models = make_models(config);

    // Per-context target/draft distributions are fixed; only the step
    // randomness varies.
    std::vector<Categorical> ps;
    std::vector<Categorical> qs;
    ps.reserve(static_cast<std::size_t>(config.num_contexts));
    qs.reserve(static_cast<std::size_t>(config.num_contexts));
    for (int c = 0; c < config.num_contexts; ++c) {
        const std::vector<TokenId> prompt = make_prompt(*models.target, config, c);
        ps.push_back(next_distribution(*models.target, prompt, config.temp));
        qs.push_back(next_distribution(*models.draft, prompt, config.temp));
    }

    std::vector<AlphaCurveRow> rows;
    for (int k : k_list) {
        std::vector<double> rates;
        rates.reserve(ps.size());
        for (std::size_t c = 0; c < ps.size(); ++c) {
            if (mc_trials == 0) {
                double rate = 0.0;
                switch (config.mode) {
                case VerifyMode::WithReplacement:
                    rate = mcss_accept_rate(ps[c], qs[c], k);
                    break;
                case VerifyMode::Naive:
                    rate = mcns_accept_rate(ps[c], qs[c], k);
                    break;
                case VerifyMode::SingleCandidate:
                    rate = sd_accept_rate(ps[c], qs[c]);
                    break;
                case VerifyMode::WithoutReplacement:
                    break; // rejected above
                }
                rates.push_back(rate);
            } else {
                RngStream trial_rng = RngStream(config.seed)
                                          .child(kAlphaTag)
                                          .child(static_cast<std::uint64_t>(c))
                                          .child(static_cast<std::uint64_t>(k));
                long long accepted = 0;
                for (long long t = 0; t < mc_trials; ++t) {
                    std::vector<TokenId> cands;
                    if (config.mode == VerifyMode::WithoutReplacement) {
                        cands = sample_without_replacement(qs[c], k, trial_rng);
                    } else {
                        for (int j = 0; j < k; ++j) cands.push_back(sample(qs[c], trial_rng));
                    }
                    StepOutcome outcome;
                    switch (config.mode) {
                    case VerifyMode::WithReplacement:
                        outcome = mcss_step(ps[c], qs[c], cands, trial_rng);
                        break;
                    case VerifyMode::WithoutReplacement:
                        outcome = mcss_wor_step(ps[c], qs[c], cands, trial_rng);
                        break;
                    case VerifyMode::Naive:
                        outcome = mcns_step(ps[c], qs[c], cands, trial_rng);
                        break;
                    case VerifyMode::SingleCandidate:
                        outcome = speculative_step(ps[c], qs[c], cands[0], trial_rng);
                        break;
                    }
                    if (outcome.accepted) ++accepted;
                }
                rates.push_back(static_cast<double>(accepted) / static_cast<double>(mc_trials));
            }
        }
        rows.push_back({k, mean(rates), standard_error(rates)});
    }
    return rows;
}

namespace {

SweepRow evaluate_configuration(const ExperimentConfig& config, const AgreementPair& models,
                                const KConfig& kc) {
    std::vector<BlockResult> blocks;
    for (int c = 0; c < config.num_contexts; ++c) {
        const std::vector<TokenId> prompt = make_prompt(*models.target, config, c);
        RngStream gen_rng = RngStream(config.seed).child(kGenTag).child(static_cast<std::uint64_t>(c));
        GenerationResult gen = generate(*models.target, *models.draft, prompt, kc, config.mode,
                                        config.temp, config.max_new_tokens, gen_rng);
        for (BlockResult& b : gen.per_block) blocks.push_back(std::move(b));
    }
    const Metrics m = aggregate_metrics(blocks);
    return {kc.to_string(), m.alpha, m.tau, m.tokens_per_target_call, m.blocks, m.stderr_tau};
}

void sort_rows(std::vector<SweepRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.tau != b.tau) return a.tau > b.tau;
        return a.k_config < b.k_config;
    });
}

} // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::vector<KConfig>& configurations) {
    config.validate();
    for (const KConfig& kc : configurations) {
        if (kc.budget() > config.budget_cap) {
            raise(ErrorCode::BudgetExceeded, "configuration " + kc.to_string() +
                                                 " exceeds budget_cap " +
                                                 std::to_string(config.budget_cap));
        }
        if (config.mode == VerifyMode::SingleCandidate && kc.budget() != 1) {
            raise(ErrorCode::ConfigError, "single-candidate mode requires all-ones configurations");
        }
    }
    const AgreementPair models = make_models(config);
    std::vector<SweepRow> rows;
    rows.reserve(configurations.size());
    for (const KConfig& kc : configurations) {
        rows.push_back(evaluate_configuration(config, models, kc));
    }
    sort_rows(rows);
    return rows;
}

std::vector<KConfig> enumerate_budget_configs(long long budget, int max_gamma, bool prune) {
    static constexpr int kValues[] = {1, 2, 4, 8, 16, 32};
    std::vector<KConfig> out;
    std::vector<int> current;
    auto walk = [&](auto&& self) -> void {
        if (!current.empty()) out.push_back(KConfig(current));
        if (static_cast<int>(current.size()) == max_gamma) return;
        for (int k : kValues) {
            if (prune && !current.empty() && k > current.back()) continue;
            long long product = k;
            for (int v : current) product *= v;
            if (product > budget) continue;
            current.push_back(k);
            self(self);
            current.pop_back();
        }
    };
    walk(walk);
    return out;
}

BudgetSearchResult run_budget_search(const ExperimentConfig& config, long long budget, bool prune) {
    config.validate();
    if (budget < 1 || budget > config.budget_cap) {
        raise(ErrorCode::ConfigError, "budget must be in [1, budget_cap]");
    }
    const std::vector<KConfig> configs = enumerate_budget_configs(budget, config.gamma, prune);
    const AgreementPair models = make_models(config);
    BudgetSearchResult result;
    result.evaluated = static_cast<int>(configs.size());
    result.rows.reserve(configs.size());
    for (const KConfig& kc : configs) {
        result.rows.push_back(evaluate_configuration(config, models, kc));
    }
    sort_rows(result.rows);
    result.best_config = result.rows.empty() ? "" : result.rows.front().k_config;
    return result;
}

GenerateReport run_generate(const ExperimentConfig& config) {
    config.validate();
    const AgreementPair models = make_models(config);
    const std::vector<TokenId> prompt = make_prompt(*models.target, config, 0);
    RngStream gen_rng = RngStream(config.seed).child(kGenTag).child(0);
    GenerationResult gen = generate(*models.target, *models.draft, prompt, config.kconfig(),
                                    config.mode, config.temp, config.max_new_tokens, gen_rng);
    GenerateReport report;
    report.tokens = gen.tokens;
    report.row = {config.kconfig().to_string(), gen.metrics.alpha,           gen.metrics.tau,
                  gen.metrics.tokens_per_target_call, gen.metrics.blocks, gen.metrics.stderr_tau};
    return report;
}

std::string render_generate(const GenerateReport& report, ReportFormat format) {
    if (format == ReportFormat::Json) {
        nlohmann::json doc;
        doc["tokens"] = report.tokens;
        doc["k_config"] = report.row.k_config;
        doc["alpha"] = format_real(report.row.alpha);
        doc["tau"] = format_real(report.row.tau);
        doc["tokens_per_target_call"] = format_real(report.row.tokens_per_target_call);
        doc["blocks"] = report.row.blocks;
        doc["stderr_tau"] = format_real(report.row.stderr_tau);
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << render_sweep({report.row}, ReportFormat::Csv);
    os << "tokens,";
    for (std::size_t i = 0; i < report.tokens.size(); ++i) {
        if (i > 0) os << ' ';
        os << report.tokens[i];
    }
    os << '\n';
    return os.str();
}

} // namespace specdec::cli
