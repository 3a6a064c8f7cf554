#include "specdec/config.hpp"

#include "specdec/decode.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace specdec {

namespace {

using nlohmann::json;

constexpr std::uint64_t kPromptTag = 0x9107;

[[noreturn]] void config_error(const std::string& what) { raise(ErrorCode::ConfigError, what); }

std::vector<int> parse_k_config_value(const json& value) {
    if (value.is_string()) {
        return KConfig::parse(value.get<std::string>()).ks();
    }
    if (value.is_array()) {
        std::vector<int> ks;
        for (const auto& entry : value) {
            if (!entry.is_number_integer()) config_error("k_config entries must be integers");
            ks.push_back(entry.get<int>());
        }
        return ks;
    }
    config_error("k_config must be an array of integers or an \"AxBxC\" string");
}

} // namespace

void ExperimentConfig::validate() const {
    if (vocab_size < 2) config_error("vocab_size must be >= 2");
    if (context_order < 0) config_error("context_order must be >= 0");
    if (lambda < 0.0 || lambda > 1.0) config_error("lambda must be in [0, 1]");
    if (temp < 0.0) config_error("temp must be >= 0");
    if (num_contexts < 1) config_error("num_contexts must be >= 1");
    if (max_new_tokens < 1) config_error("max_new_tokens must be >= 1");
    if (prompt_len < 0) config_error("prompt_len must be >= 0");
    if (concentration <= 0.0) config_error("concentration must be > 0");
    if (budget_cap < 1) config_error("budget_cap must be >= 1");

    const KConfig kc(k_config); // validates entries
    if (gamma != kc.gamma()) config_error("gamma disagrees with the length of k_config");
    if (kc.budget() > budget_cap) {
        raise(ErrorCode::BudgetExceeded,
              "k_config budget " + std::to_string(kc.budget()) + " exceeds budget_cap " +
                  std::to_string(budget_cap));
    }
    if (mode == VerifyMode::SingleCandidate) {
        for (int k : k_config) {
            if (k != 1) config_error("single-candidate mode requires k = 1 at every depth");
        }
    }
}

ExperimentConfig parse_config_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) config_error("config must be a JSON object");

    static const std::set<std::string> known = {
        "seed",         "vocab_size",     "context_order", "lambda",     "temp",
        "gamma",        "k_config",       "mode",          "num_contexts", "max_new_tokens",
        "budget_cap",   "prompt_len",     "concentration",
    };
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) config_error("unknown config key: '" + key + "'");
    }

    ExperimentConfig cfg;
    bool have_gamma = false;
    bool have_kconfig = false;
    try {
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("vocab_size")) cfg.vocab_size = doc["vocab_size"].get<int>();
        if (doc.contains("context_order")) cfg.context_order = doc["context_order"].get<int>();
        if (doc.contains("lambda")) cfg.lambda = doc["lambda"].get<double>();
        if (doc.contains("temp")) cfg.temp = doc["temp"].get<double>();
        if (doc.contains("gamma")) {
            cfg.gamma = doc["gamma"].get<int>();
            have_gamma = true;
        }
        if (doc.contains("k_config")) {
            cfg.k_config = parse_k_config_value(doc["k_config"]);
            have_kconfig = true;
        }
        if (doc.contains("mode")) {
            const auto name = doc["mode"].get<std::string>();
            const auto parsed = parse_verify_mode(name);
            if (!parsed) config_error("unknown mode: '" + name + "'");
            cfg.mode = *parsed;
        }
        if (doc.contains("num_contexts")) cfg.num_contexts = doc["num_contexts"].get<int>();
        if (doc.contains("max_new_tokens")) cfg.max_new_tokens = doc["max_new_tokens"].get<int>();
        if (doc.contains("budget_cap")) cfg.budget_cap = doc["budget_cap"].get<long long>();
        if (doc.contains("prompt_len")) cfg.prompt_len = doc["prompt_len"].get<int>();
        if (doc.contains("concentration")) cfg.concentration = doc["concentration"].get<double>();
    } catch (const json::exception& e) {
        config_error(std::string("bad config value: ") + e.what());
    }

    if (have_kconfig && !have_gamma) cfg.gamma = static_cast<int>(cfg.k_config.size());
    if (have_gamma && !have_kconfig) cfg.k_config.assign(static_cast<std::size_t>(cfg.gamma), 1);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_to_json(const ExperimentConfig& config) {
    json doc;
    doc["seed"] = config.seed;
    doc["vocab_size"] = config.vocab_size;
    doc["context_order"] = config.context_order;
    doc["lambda"] = config.lambda;
    doc["temp"] = config.temp;
    doc["gamma"] = config.gamma;
    doc["k_config"] = config.k_config;
    doc["mode"] = std::string(verify_mode_name(config.mode));
    doc["num_contexts"] = config.num_contexts;
    doc["max_new_tokens"] = config.max_new_tokens;
    doc["budget_cap"] = config.budget_cap;
    doc["prompt_len"] = config.prompt_len;
    doc["concentration"] = config.concentration;
    return doc.dump(2);
}

AgreementPair make_models(const ExperimentConfig& config) {
    return make_agreement_pair(config.seed, config.vocab_size, config.context_order, config.lambda,
                               config.concentration);
}

std::vector<TokenId> make_prompt(const AutoregressiveModel& target, const ExperimentConfig& config,
                                 int context_index) {
    RngStream rng =
        RngStream(config.seed).child(kPromptTag).child(static_cast<std::uint64_t>(context_index));
    std::vector<TokenId> prompt;
    prompt.reserve(static_cast<std::size_t>(config.prompt_len));
    for (int i = 0; i < config.prompt_len; ++i) {
        // Standard-sampling walk regardless of the experiment temperature so
        // prompts stay diverse under argmax configs.
        const Categorical dist = next_distribution(target, prompt, 1.0);
        prompt.push_back(sample(dist, rng));
    }
    return prompt;
}

} // namespace specdec
