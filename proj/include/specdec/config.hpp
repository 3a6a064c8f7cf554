#pragma once

#include "specdec/models.hpp"
#include "specdec/sampling.hpp"
#include "specdec/tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace specdec {

/// Experiment configuration, loaded from a flat JSON object. Unknown keys
/// are rejected so a config file always means what it says.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    int vocab_size = 64;
    int context_order = 2;
    double lambda = 0.5;
    double temp = 1.0;
    int gamma = 2;
    std::vector<int> k_config = {2, 1};
    VerifyMode mode = VerifyMode::WithReplacement;
    int num_contexts = 200;
    int max_new_tokens = 32;
    long long budget_cap = 32;
    int prompt_len = 8;
    double concentration = 2.0;

    KConfig kconfig() const { return KConfig(k_config); }

    /// Throws ConfigError (or BudgetExceeded for a blown budget cap).
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// Target/draft pair described by the config (seeded tabular family with the
/// agreement knob).
AgreementPair make_models(const ExperimentConfig& config);

/// Deterministic prompt for context index i: a seeded standard-sampling walk
/// of the target model, prompt_len tokens long.
std::vector<TokenId> make_prompt(const AutoregressiveModel& target, const ExperimentConfig& config,
                                 int context_index);

} // namespace specdec
