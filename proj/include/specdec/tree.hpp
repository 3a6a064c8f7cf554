#pragma once

#include "specdec/dist.hpp"
#include "specdec/sampling.hpp"

#include <optional>
#include <string>
#include <vector>

namespace specdec {

class AutoregressiveModel;

/// Per-depth candidate counts k_1..k_gamma. The total candidate budget is
/// the product of the entries.
class KConfig {
  public:
    explicit KConfig(std::vector<int> ks);

    const std::vector<int>& ks() const { return ks_; }
    int gamma() const { return static_cast<int>(ks_.size()); }
    long long budget() const;

    /// "4x2x1" notation used in reports and on the command line.
    std::string to_string() const;
    static KConfig parse(const std::string& text);

  private:
    std::vector<int> ks_;
};

/// The k-ary draft tree. The root is the implicit context and is not a node;
/// nodes are stored in breadth-first order, depth starting at 1.
struct TreeNode {
    TokenId token = 0;
    int parent = -1; // node index, -1 for depth-1 nodes
    int depth = 1;
};

struct CandidateTree {
    std::vector<TreeNode> nodes;
    /// Draft distribution at the root context (the one depth-1 candidates
    /// were sampled from).
    Categorical root_q;
    /// Draft distribution at each node's context, present for the nodes
    /// whose children were sampled (internal nodes).
    std::vector<std::optional<Categorical>> node_q;
    int gamma = 0;
    int draft_calls = 0; // draft-context evaluations performed during the build

    std::vector<int> children_of(int parent) const; // parent = -1 for the root
    std::vector<TokenId> path_tokens(int node) const; // root -> node, inclusive
};

/// Flattened tree-attention form: one entry per tree node in packing order,
/// positions continuing the prefix, and an ancestor-or-self mask.
struct PackedSequence {
    std::vector<TokenId> tokens;
    std::vector<int> positions;      // prefix_len + depth - 1
    std::vector<std::uint8_t> mask;  // row-major N x N; mask[i*N+j] = j == i or j ancestor of i
    int prefix_len = 0;

    int size() const { return static_cast<int>(tokens.size()); }
    bool allowed(int i, int j) const {
        return mask[static_cast<std::size_t>(i) * tokens.size() + static_cast<std::size_t>(j)] != 0;
    }
};

/// Samples the draft tree: for each expanded context the draft distribution
/// is evaluated once and k_d children are drawn from it, i.i.d. or without
/// replacement depending on the mode. Without-replacement children truncate
/// to the support size, so branches may be narrower than k_d.
CandidateTree build_candidate_tree(const AutoregressiveModel& draft, std::span<const TokenId> prefix,
                                   const KConfig& kc, VerifyMode mode, double temp, RngStream& rng);

/// Breadth-first packing with positions prefix_len + depth - 1 and the
/// ancestor-or-self mask.
PackedSequence pack_tree(const CandidateTree& tree, int prefix_len);

/// All root-to-leaf token paths, in breadth-first leaf order.
std::vector<std::vector<TokenId>> leaves_to_paths(const CandidateTree& tree);

/// Plain-text 0/1 grid of the mask, one row per packed node.
std::string dump_mask(const PackedSequence& packed);

} // namespace specdec
