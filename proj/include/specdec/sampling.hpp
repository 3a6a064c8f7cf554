#pragma once

#include "specdec/dist.hpp"
#include "specdec/rng.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace specdec {

/// Which verification kernel a decode run uses.
enum class VerifyMode {
    WithReplacement,    // multi-candidate, candidates drawn i.i.d.
    WithoutReplacement, // multi-candidate, candidates drawn without replacement
    Naive,              // multi-candidate naive acceptance (token match)
    SingleCandidate,    // classic single-draft verification
};

std::string_view verify_mode_name(VerifyMode mode);
std::optional<VerifyMode> parse_verify_mode(std::string_view name);

/// Outcome of one verification step.
///
/// accepted=true: `token` is the surviving candidate and `accepted_index` its
/// 0-based position. accepted=false: `token` is the endpoint token and
/// `accepted_index` is empty. `residual_steps` counts the rejections consumed
/// before the decision.
struct StepOutcome {
    bool accepted = false;
    TokenId token = 0;
    std::optional<int> accepted_index;
    int residual_steps = 0;
};

// All step kernels consume exactly one value from `rng` and derive two
// substreams from it: one feeding the per-candidate acceptance draws (in
// candidate order), one feeding any emitted-token draw. Kernels given
// identically positioned streams therefore share acceptance draws AND
// endpoint draws, which makes the argmax-degeneracy equivalences exact
// rather than statistical.

/// Accept `cand` with probability min(1, p(cand)/q(cand)); on rejection emit
/// a token from the residual max(0, p-q)/Z. Errors: ZeroProposal if
/// q(cand) = 0.
StepOutcome speculative_step(const Categorical& p, const Categorical& q, TokenId cand, RngStream& rng);

/// Multi-candidate verification for candidates drawn i.i.d. from q: candidate
/// i is tested against the running residual of p (q fixed); if every
/// candidate is rejected the endpoint is drawn from the final residual.
StepOutcome mcss_step(const Categorical& p, const Categorical& q, std::span<const TokenId> cands,
                      RngStream& rng);

/// Multi-candidate verification for distinct candidates drawn without
/// replacement: on each rejection p is replaced by its residual against the
/// current q, then the rejected token is zeroed out of q and q renormalized.
StepOutcome mcss_wor_step(const Categorical& p, const Categorical& q, std::span<const TokenId> cands,
                          RngStream& rng);

/// Naive multi-candidate acceptance: draw x ~ p, accept iff x appears among
/// the candidates (first match wins); the emitted token is x either way.
StepOutcome mcns_step(const Categorical& p, const Categorical& q, std::span<const TokenId> cands,
                      RngStream& rng);

/// sum min(p, q) — single-candidate acceptance probability.
double sd_accept_rate(const Categorical& p, const Categorical& q);

/// sum p*q — acceptance probability of naive (token-match) verification.
double naive_accept_rate(const Categorical& p, const Categorical& q);

/// Closed-form acceptance probability of mcss_step with k i.i.d. candidates.
double mcss_accept_rate(const Categorical& p, const Categorical& q, int k);

/// Closed-form acceptance probability of mcns_step: 1 - sum p(x)(1-q(x))^k.
double mcns_accept_rate(const Categorical& p, const Categorical& q, int k);

} // namespace specdec
