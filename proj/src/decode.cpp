#include "specdec/decode.hpp"

#include <cassert>
#include <cmath>

namespace specdec {

namespace {

// Substream tags (see the rng discipline notes in decode.hpp).
constexpr std::uint64_t kDraftTag = 0x11;
constexpr std::uint64_t kVerifyTag = 0x22;
constexpr std::uint64_t kBonusTag = 0x33; // endpoint draw after a fully accepted path

} // namespace

Metrics aggregate_metrics(const std::vector<BlockResult>& blocks) {
    Metrics m;
    m.blocks = static_cast<long long>(blocks.size());
    if (blocks.empty()) return m;

    long long executed = 0;
    long long accepted = 0;
    long long target_calls = 0;
    long long emitted = 0;
    double sum_tau = 0.0;
    int max_depth = 0;
    for (const BlockResult& b : blocks) max_depth = std::max(max_depth, b.steps_executed);
    m.steps_executed_by_depth.assign(static_cast<std::size_t>(max_depth), 0);
    m.steps_accepted_by_depth.assign(static_cast<std::size_t>(max_depth), 0);

    for (const BlockResult& b : blocks) {
        executed += b.steps_executed;
        accepted += b.steps_accepted;
        target_calls += b.target_calls;
        emitted += b.tokens_emitted();
        sum_tau += static_cast<double>(b.tokens_emitted());
        for (int d = 0; d < b.steps_executed; ++d) {
            ++m.steps_executed_by_depth[static_cast<std::size_t>(d)];
            if (d < b.steps_accepted) ++m.steps_accepted_by_depth[static_cast<std::size_t>(d)];
        }
    }
    m.alpha = executed > 0 ? static_cast<double>(accepted) / static_cast<double>(executed) : 0.0;
    m.tau = sum_tau / static_cast<double>(blocks.size());
    m.tokens_per_target_call =
        target_calls > 0 ? static_cast<double>(emitted) / static_cast<double>(target_calls) : 0.0;

    double ss = 0.0;
    for (const BlockResult& b : blocks) {
        const double d = static_cast<double>(b.tokens_emitted()) - m.tau;
        ss += d * d;
    }
    if (blocks.size() > 1) {
        m.stderr_tau = std::sqrt(ss / static_cast<double>(blocks.size() - 1) /
                                 static_cast<double>(blocks.size()));
    }
    return m;
}

ScoredTree score_tree(const AutoregressiveModel& target, std::span<const TokenId> prefix,
                      const CandidateTree& tree, double temp, Scoring scoring) {
    ScoredTree scored;
    scored.node_p.resize(tree.nodes.size());

    if (scoring == Scoring::Packed) {
        const PackedSequence packed = pack_tree(tree, static_cast<int>(prefix.size()));
        const std::vector<Logits> node_logits = target.score_packed(prefix, packed);
        // The root-context distribution comes out of the same forward pass in
        // a batched deployment; it is not an extra target call.
        scored.root_p = apply_temperature(target.next_logits(prefix), temp);
        for (std::size_t i = 0; i < node_logits.size(); ++i) {
            scored.node_p[i] = apply_temperature(node_logits[i], temp);
        }
        scored.target_calls = 1;
        return scored;
    }

    // Batched: score each root-to-leaf path as an ordinary sequence. Shared
    // ancestors are recomputed per path with identical results.
    scored.root_p = apply_temperature(target.next_logits(prefix), temp);
    std::vector<TokenId> context(prefix.begin(), prefix.end());
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].depth != tree.gamma) continue; // walk full paths only
        ++scored.target_calls;
        // Node indices along this path, root-first.
        std::vector<int> chain;
        for (int cur = static_cast<int>(i); cur >= 0; cur = tree.nodes[static_cast<std::size_t>(cur)].parent) {
            chain.push_back(cur);
        }
        std::reverse(chain.begin(), chain.end());
        context.resize(prefix.size());
        for (int node : chain) {
            context.push_back(tree.nodes[static_cast<std::size_t>(node)].token);
            scored.node_p[static_cast<std::size_t>(node)] =
                apply_temperature(target.next_logits(context), temp);
        }
    }
    return scored;
}

BlockResult verify_tree(const ScoredTree& scored, const CandidateTree& tree, VerifyMode mode,
                        RngStream& rng) {
    BlockResult result;
    int parent = -1;
    for (int depth = 1; depth <= tree.gamma; ++depth) {
        const std::vector<int> children = tree.children_of(parent);
        assert(!children.empty());
        std::vector<TokenId> cands;
        cands.reserve(children.size());
        for (int c : children) cands.push_back(tree.nodes[static_cast<std::size_t>(c)].token);

        const Categorical& p = parent < 0 ? scored.root_p : scored.node_p[static_cast<std::size_t>(parent)];
        const Categorical& q =
            parent < 0 ? tree.root_q : *tree.node_q[static_cast<std::size_t>(parent)];

        RngStream step_rng = rng.child(static_cast<std::uint64_t>(depth));
        StepOutcome outcome;
        switch (mode) {
        case VerifyMode::WithReplacement:
            outcome = mcss_step(p, q, cands, step_rng);
            break;
        case VerifyMode::WithoutReplacement:
            outcome = mcss_wor_step(p, q, cands, step_rng);
            break;
        case VerifyMode::Naive:
            outcome = mcns_step(p, q, cands, step_rng);
            break;
        case VerifyMode::SingleCandidate:
            assert(cands.size() == 1);
            outcome = speculative_step(p, q, cands[0], step_rng);
            break;
        }
        ++result.steps_executed;
        if (!outcome.accepted) {
            result.endpoint = outcome.token;
            return result;
        }
        ++result.steps_accepted;
        result.accepted_tokens.push_back(outcome.token);
        parent = children[static_cast<std::size_t>(*outcome.accepted_index)];
    }
    // Every level accepted: the endpoint is an extra token from the target
    // distribution at the surviving leaf.
    RngStream bonus_rng = rng.child(kBonusTag);
    result.endpoint = sample(scored.node_p[static_cast<std::size_t>(parent)], bonus_rng);
    return result;
}

BlockResult decode_block(const AutoregressiveModel& target, const AutoregressiveModel& draft,
                         std::span<const TokenId> prefix, const KConfig& kc, VerifyMode mode,
                         double temp, RngStream& rng, Scoring scoring) {
    assert(target.vocab_size() == draft.vocab_size());
    if (mode == VerifyMode::SingleCandidate) {
        for (int k : kc.ks()) {
            if (k != 1) raise(ErrorCode::ConfigError, "single-candidate mode requires k = 1 at every depth");
        }
    }
    RngStream draft_rng = rng.child(kDraftTag);
    RngStream verify_rng = rng.child(kVerifyTag);

    const CandidateTree tree = build_candidate_tree(draft, prefix, kc, mode, temp, draft_rng);
    const ScoredTree scored = score_tree(target, prefix, tree, temp, scoring);
    BlockResult result = verify_tree(scored, tree, mode, verify_rng);
    result.target_calls = scored.target_calls;
    result.draft_calls = tree.draft_calls;
    return result;
}

GenerationResult generate(const AutoregressiveModel& target, const AutoregressiveModel& draft,
                          std::span<const TokenId> prompt, const KConfig& kc, VerifyMode mode,
                          double temp, int max_new_tokens, RngStream& rng, Scoring scoring) {
    assert(max_new_tokens >= 1);
    GenerationResult gen;
    gen.tokens.assign(prompt.begin(), prompt.end());
    const std::size_t limit = prompt.size() + static_cast<std::size_t>(max_new_tokens);
    std::uint64_t block_index = 0;
    while (gen.tokens.size() < limit) {
        RngStream block_rng = rng.child(block_index++);
        BlockResult block = decode_block(target, draft, gen.tokens, kc, mode, temp, block_rng, scoring);
        gen.tokens.insert(gen.tokens.end(), block.accepted_tokens.begin(), block.accepted_tokens.end());
        gen.tokens.push_back(block.endpoint);
        gen.per_block.push_back(std::move(block));
    }
    // The final endpoint always lands before truncation so block accounting
    // stays exact; only the emitted sequence is clipped.
    if (gen.tokens.size() > limit) gen.tokens.resize(limit);
    gen.metrics = aggregate_metrics(gen.per_block);
    return gen;
}

GenerationResult baseline_generate(const AutoregressiveModel& target, std::span<const TokenId> prompt,
                                   double temp, int max_new_tokens, RngStream& rng) {
    assert(max_new_tokens >= 1);
    GenerationResult gen;
    gen.tokens.assign(prompt.begin(), prompt.end());
    for (int i = 0; i < max_new_tokens; ++i) {
        const Categorical dist = next_distribution(target, gen.tokens, temp);
        RngStream tok_rng = rng.child(static_cast<std::uint64_t>(i));
        gen.tokens.push_back(sample(dist, tok_rng));

        BlockResult block;
        block.endpoint = gen.tokens.back();
        block.target_calls = 1;
        block.draft_calls = 0;
        gen.per_block.push_back(std::move(block));
    }
    gen.metrics = aggregate_metrics(gen.per_block);
    return gen;
}

} // namespace specdec
