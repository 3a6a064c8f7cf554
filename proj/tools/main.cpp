#include "specdec/commands.hpp"
#include "specdec/vecops.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace specdec;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Experiment config file (JSON object)");
    cmd->add_option("--out", args.out_path, "Write the report here instead of stdout");
    cmd->add_option("--seed", args.seed, "Override the config seed");
    cmd->add_option("--format", args.format, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig resolve_config(const CommonArgs& args) {
    ExperimentConfig cfg =
        args.config_path.empty() ? ExperimentConfig{} : load_config_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    cfg.validate();
    return cfg;
}

ReportFormat resolve_format(const CommonArgs& args) {
    return args.format == "json" ? ReportFormat::Json : ReportFormat::Csv;
}

int emit(const CommonArgs& args, const std::string& report) {
    if (args.out_path.empty()) {
        std::cout << report;
        return 0;
    }
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << args.out_path << "\n";
        return 2;
    }
    out << report;
    return 0;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

std::vector<KConfig> parse_config_list(const std::string& text) {
    std::vector<KConfig> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (!tok.empty()) out.push_back(KConfig::parse(tok));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-candidate speculative decoding laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "specdec 0.1.0");
    app.add_flag_callback(
        "--simd-info", [] { std::cout << vecops::backend_name(vecops::active_backend()) << "\n"; },
        "Print the active vector kernel backend and exit");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the theorem and equivalence suites");
    cli::VerifyOptions vopts;
    std::optional<std::uint64_t> verify_seed;
    verify->add_option("--suite", vopts.suite,
                       "Run one suite: surgery-identities, appendix-a, appendix-b, appendix-c, "
                       "mc-crosscheck, tree-equivalence");
    verify->add_option("--cases", vopts.cases, "Override the per-suite case count");
    verify->add_option("--seed", verify_seed, "Suite seed");
    verify->add_flag("--inject-fault", vopts.inject_fault,
                     "Perturb the residual primitive (sanity check: suites must fail)");

    // alpha-curve
    auto* alpha = app.add_subcommand("alpha-curve", "Acceptance-rate curve over k");
    CommonArgs alpha_args;
    add_common(alpha, alpha_args);
    std::string k_list_text = "1,2,4,8,16,32";
    long long mc_trials = 0;
    alpha->add_option("--k-list", k_list_text, "Comma-separated ascending k values");
    alpha->add_option("--mc-trials", mc_trials,
                      "Sampled verification steps per context (0 = closed form)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Generation metrics for a list of k configurations");
    CommonArgs sweep_args;
    add_common(sweep, sweep_args);
    std::string configs_text;
    sweep->add_option("--configs", configs_text,
                      "Comma-separated k configurations, e.g. '4x2,2x4' (default: the config file's)");

    // budget-search
    auto* search = app.add_subcommand("budget-search", "Best k configuration under a budget");
    CommonArgs search_args;
    add_common(search, search_args);
    long long budget = 0;
    bool no_prune = false;
    search->add_option("--budget", budget, "Candidate budget (default: budget_cap)");
    search->add_flag("--no-prune", no_prune, "Evaluate all configurations, not just non-increasing ones");

    // generate
    auto* gen = app.add_subcommand("generate", "One seeded generation run");
    CommonArgs gen_args;
    add_common(gen, gen_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) {
            if (verify_seed) vopts.seed = *verify_seed;
            return cli::cmd_verify(vopts, std::cout);
        }
        if (alpha->parsed()) {
            const ExperimentConfig cfg = resolve_config(alpha_args);
            const auto rows = cli::run_alpha_curve(cfg, parse_int_list(k_list_text), mc_trials);
            return emit(alpha_args, render_alpha_curve(rows, resolve_format(alpha_args)));
        }
        if (sweep->parsed()) {
            const ExperimentConfig cfg = resolve_config(sweep_args);
            std::vector<KConfig> configs;
            if (configs_text.empty()) {
                configs.push_back(cfg.kconfig());
            } else {
                configs = parse_config_list(configs_text);
            }
            const auto rows = cli::run_sweep(cfg, configs);
            return emit(sweep_args, render_sweep(rows, resolve_format(sweep_args)));
        }
        if (search->parsed()) {
            const ExperimentConfig cfg = resolve_config(search_args);
            const auto result =
                cli::run_budget_search(cfg, budget > 0 ? budget : cfg.budget_cap, !no_prune);
            std::cerr << "best=" << result.best_config << " evaluated=" << result.evaluated << "\n";
            return emit(search_args, render_sweep(result.rows, resolve_format(search_args)));
        }
        if (gen->parsed()) {
            const ExperimentConfig cfg = resolve_config(gen_args);
            const auto report = cli::run_generate(cfg);
            return emit(gen_args, cli::render_generate(report, resolve_format(gen_args)));
        }
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
