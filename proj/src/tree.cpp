#include "specdec/tree.hpp"

#include "specdec/models.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace specdec {

KConfig::KConfig(std::vector<int> ks) : ks_(std::move(ks)) {
    if (ks_.empty()) {
        raise(ErrorCode::ConfigError, "k configuration must have at least one level");
    }
    for (int k : ks_) {
        if (k < 1) raise(ErrorCode::ConfigError, "every k must be >= 1");
    }
}

long long KConfig::budget() const {
    long long b = 1;
    for (int k : ks_) b *= k;
    return b;
}

std::string KConfig::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < ks_.size(); ++i) {
        if (i > 0) os << 'x';
        os << ks_[i];
    }
    return os.str();
}

KConfig KConfig::parse(const std::string& text) {
    std::vector<int> ks;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, 'x')) {
        // tolerate surrounding spaces: "4 x 2" and "4x2" both parse
        std::erase_if(tok, [](unsigned char c) { return std::isspace(c); });
        if (tok.empty()) raise(ErrorCode::ConfigError, "bad k configuration: '" + text + "'");
        try {
            ks.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            raise(ErrorCode::ConfigError, "bad k configuration: '" + text + "'");
        }
    }
    return KConfig(std::move(ks));
}

std::vector<int> CandidateTree::children_of(int parent) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].parent == parent) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<TokenId> CandidateTree::path_tokens(int node) const {
    std::vector<TokenId> path;
    for (int cur = node; cur >= 0; cur = nodes[static_cast<std::size_t>(cur)].parent) {
        path.push_back(nodes[static_cast<std::size_t>(cur)].token);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

CandidateTree build_candidate_tree(const AutoregressiveModel& draft, std::span<const TokenId> prefix,
                                   const KConfig& kc, VerifyMode mode, double temp, RngStream& rng) {
    CandidateTree tree;
    tree.gamma = kc.gamma();
    const bool without_replacement = mode == VerifyMode::WithoutReplacement;

    std::vector<TokenId> context(prefix.begin(), prefix.end());
    std::vector<int> frontier = {-1}; // contexts to expand; -1 is the root
    for (int depth = 1; depth <= kc.gamma(); ++depth) {
        const int want = kc.ks()[static_cast<std::size_t>(depth - 1)];
        std::vector<int> next_frontier;
        for (int parent : frontier) {
            context.resize(prefix.size());
            if (parent >= 0) {
                const std::vector<TokenId> path = tree.path_tokens(parent);
                context.insert(context.end(), path.begin(), path.end());
            }
            Categorical q = apply_temperature(draft.next_logits(context), temp);
            ++tree.draft_calls;

            std::vector<TokenId> drawn;
            if (without_replacement) {
                drawn = sample_without_replacement(q, want, rng);
            } else {
                drawn.reserve(static_cast<std::size_t>(want));
                for (int i = 0; i < want; ++i) drawn.push_back(sample(q, rng));
            }

            if (parent >= 0) {
                tree.node_q[static_cast<std::size_t>(parent)] = std::move(q);
            } else {
                tree.root_q = std::move(q);
            }
            for (TokenId t : drawn) {
                tree.nodes.push_back({t, parent, depth});
                next_frontier.push_back(static_cast<int>(tree.nodes.size()) - 1);
            }
        }
        tree.node_q.resize(tree.nodes.size());
        frontier = std::move(next_frontier);
    }
    return tree;
}

PackedSequence pack_tree(const CandidateTree& tree, int prefix_len) {
    const std::size_t n = tree.nodes.size();
    PackedSequence packed;
    packed.prefix_len = prefix_len;
    packed.tokens.reserve(n);
    packed.positions.reserve(n);
    packed.mask.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        packed.tokens.push_back(tree.nodes[i].token);
        packed.positions.push_back(prefix_len + tree.nodes[i].depth - 1);
        packed.mask[i * n + i] = 1;
        for (int a = tree.nodes[i].parent; a >= 0; a = tree.nodes[static_cast<std::size_t>(a)].parent) {
            packed.mask[i * n + static_cast<std::size_t>(a)] = 1;
        }
    }
    return packed;
}

std::vector<std::vector<TokenId>> leaves_to_paths(const CandidateTree& tree) {
    std::vector<std::vector<TokenId>> paths;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        if (tree.nodes[i].depth == tree.gamma) {
            paths.push_back(tree.path_tokens(static_cast<int>(i)));
        }
    }
    return paths;
}

std::string dump_mask(const PackedSequence& packed) {
    std::ostringstream os;
    const int n = packed.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            os << (packed.allowed(i, j) ? '1' : '0');
        }
        os << '\n';
    }
    return os.str();
}

} // namespace specdec
