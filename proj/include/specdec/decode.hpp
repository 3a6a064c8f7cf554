#pragma once

#include "specdec/models.hpp"
#include "specdec/sampling.hpp"
#include "specdec/tree.hpp"

#include <vector>

namespace specdec {

/// How the target model scores the candidate tree.
enum class Scoring {
    Packed,  // one masked forward over the packed sequence
    Batched, // one forward per root-to-leaf path
};

/// Outcome of one draft-and-verify block.
struct BlockResult {
    std::vector<TokenId> accepted_tokens; // the surviving path prefix
    TokenId endpoint = 0;
    int steps_executed = 0; // depth levels verified
    int steps_accepted = 0; // == accepted_tokens.size()
    int target_calls = 0;
    int draft_calls = 0;

    /// Tokens the block contributes to the output: accepted path + endpoint.
    int tokens_emitted() const { return steps_accepted + 1; }
};

/// Aggregated efficiency measures.
struct Metrics {
    double alpha = 0.0; // accepted verification steps / executed verification steps
    double tau = 1.0;   // mean tokens emitted per block, in [1, gamma+1]
    long long blocks = 0;
    double tokens_per_target_call = 0.0;
    double stderr_tau = 0.0;
    std::vector<long long> steps_executed_by_depth; // for per-depth acceptance curves
    std::vector<long long> steps_accepted_by_depth;
};

Metrics aggregate_metrics(const std::vector<BlockResult>& blocks);

struct GenerationResult {
    std::vector<TokenId> tokens; // prompt + generated
    Metrics metrics;
    std::vector<BlockResult> per_block;
};

/// Target distributions for one scored tree: the root-context distribution
/// plus one per node.
struct ScoredTree {
    Categorical root_p;
    std::vector<Categorical> node_p;
    int target_calls = 0;
};

/// Scores every tree context on the target model. Packed mode runs one
/// masked forward; batched mode scores each root-to-leaf path as an ordinary
/// sequence. Both return identical distributions for mask-respecting models.
ScoredTree score_tree(const AutoregressiveModel& target, std::span<const TokenId> prefix,
                      const CandidateTree& tree, double temp, Scoring scoring);

/// Walks the scored tree root-to-leaf, applying the mode's step kernel at
/// each depth: on acceptance the walk descends into the surviving child; on
/// rejection the kernel's token becomes the endpoint and the walk aborts; if
/// a candidate survives every level the endpoint is drawn from the target
/// distribution at the full surviving path.
BlockResult verify_tree(const ScoredTree& scored, const CandidateTree& tree, VerifyMode mode,
                        RngStream& rng);

/// One full block: draft the tree, score it, verify. Packed and batched
/// scoring yield identical results on the same rng stream.
BlockResult decode_block(const AutoregressiveModel& target, const AutoregressiveModel& draft,
                         std::span<const TokenId> prefix, const KConfig& kc, VerifyMode mode,
                         double temp, RngStream& rng, Scoring scoring = Scoring::Packed);

/// Repeats decode_block until max_new_tokens have been generated. Per-block
/// randomness is derived from (rng, block index); within a block, drafting
/// and verification consume disjoint substreams. The final block's endpoint
/// always lands before truncation, so the metrics stay exact.
GenerationResult generate(const AutoregressiveModel& target, const AutoregressiveModel& draft,
                          std::span<const TokenId> prompt, const KConfig& kc, VerifyMode mode,
                          double temp, int max_new_tokens, RngStream& rng,
                          Scoring scoring = Scoring::Packed);

/// Plain autoregressive sampling from the target; tau = 1 by definition.
GenerationResult baseline_generate(const AutoregressiveModel& target, std::span<const TokenId> prompt,
                                   double temp, int max_new_tokens, RngStream& rng);

} // namespace specdec
