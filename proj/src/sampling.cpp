#include "specdec/sampling.hpp"

#include "specdec/vecops.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

namespace specdec {

namespace {

constexpr std::uint64_t kAcceptTag = 0x1;
constexpr std::uint64_t kEmitTag = 0x2;

struct StepRng {
    RngStream accept;
    RngStream emit;
};

StepRng split_step_rng(RngStream& rng) {
    const std::uint64_t base = rng.next_u64();
    return {RngStream(RngStream::mix(base, kAcceptTag)), RngStream(RngStream::mix(base, kEmitTag))};
}

TokenId sample_probs(std::span<const double> probs, RngStream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    TokenId last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = static_cast<TokenId>(i);
        if (u < acc) return last_positive;
    }
    return last_positive;
}

[[noreturn]] void throw_zero_proposal(TokenId cand) {
    raise(ErrorCode::ZeroProposal,
          "candidate " + std::to_string(cand) + " has zero proposal probability");
}

} // namespace

std::string_view verify_mode_name(VerifyMode mode) {
    switch (mode) {
    case VerifyMode::WithReplacement: return "with-replacement";
    case VerifyMode::WithoutReplacement: return "without-replacement";
    case VerifyMode::Naive: return "naive";
    case VerifyMode::SingleCandidate: return "single";
    }
    return "unknown";
}

std::optional<VerifyMode> parse_verify_mode(std::string_view name) {
    if (name == "with-replacement") return VerifyMode::WithReplacement;
    if (name == "without-replacement") return VerifyMode::WithoutReplacement;
    if (name == "naive") return VerifyMode::Naive;
    if (name == "single") return VerifyMode::SingleCandidate;
    return std::nullopt;
}

StepOutcome speculative_step(const Categorical& p, const Categorical& q, TokenId cand, RngStream& rng) {
    StepRng sr = split_step_rng(rng);
    const double qc = q[cand];
    if (qc <= 0.0) throw_zero_proposal(cand);
    const double r = sr.accept.uniform();
    if (r * qc < p[cand]) {
        return {true, cand, 0, 0};
    }
    std::vector<double> res(p.probs().size());
    const double mass = detail::residual_into(p.probs(), q.probs(), res);
    if (mass <= kMassTol) {
        // Rejection with a degenerate residual only happens through float
        // slack when p == q; emit from p to stay on the target distribution.
        return {false, sample_probs(p.probs(), sr.emit), std::nullopt, 1};
    }
    vecops::scale(res, 1.0 / mass);
    return {false, sample_probs(res, sr.emit), std::nullopt, 1};
}

StepOutcome mcss_step(const Categorical& p, const Categorical& q, std::span<const TokenId> cands,
                      RngStream& rng) {
    assert(!cands.empty());
    StepRng sr = split_step_rng(rng);
    std::vector<double> cur(p.probs().begin(), p.probs().end());
    std::vector<double> next(cur.size());
    int rejections = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const TokenId c = cands[i];
        const double qc = q[c];
        if (qc <= 0.0) throw_zero_proposal(c);
        const double r = sr.accept.uniform();
        if (r * qc < cur[static_cast<std::size_t>(c)]) {
            return {true, c, static_cast<int>(i), rejections};
        }
        ++rejections;
        const double mass = detail::residual_into(cur, q.probs(), next);
        if (mass <= kMassTol) {
            return {false, sample_probs(cur, sr.emit), std::nullopt, rejections};
        }
        vecops::scale(next, 1.0 / mass);
        cur.swap(next);
    }
    return {false, sample_probs(cur, sr.emit), std::nullopt, rejections};
}

StepOutcome mcss_wor_step(const Categorical& p, const Categorical& q, std::span<const TokenId> cands,
                          RngStream& rng) {
    assert(!cands.empty());
    StepRng sr = split_step_rng(rng);
    std::vector<double> pcur(p.probs().begin(), p.probs().end());
    std::vector<double> qcur(q.probs().begin(), q.probs().end());
    std::vector<double> next(pcur.size());
    int rejections = 0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const TokenId c = cands[i];
        const auto ci = static_cast<std::size_t>(c);
        const double qc = qcur[ci];
        if (qc <= 0.0) throw_zero_proposal(c); // candidate outside the remaining support
        const double r = sr.accept.uniform();
        if (r * qc < pcur[ci]) {
            return {true, c, static_cast<int>(i), rejections};
        }
        ++rejections;
        // Residual of p against the pre-zeroing q, then remove c from q.
        const double pmass = detail::residual_into(pcur, qcur, next);
        if (pmass <= kMassTol) {
            return {false, sample_probs(pcur, sr.emit), std::nullopt, rejections};
        }
        vecops::scale(next, 1.0 / pmass);
        pcur.swap(next);
        qcur[ci] = 0.0;
        const double qmass = vecops::sum(qcur);
        if (qmass <= kMassTol) {
            // No proposal mass remains; any further candidate would be
            // invalid for a without-replacement tuple.
            if (i + 1 < cands.size()) throw_zero_proposal(cands[i + 1]);
            break;
        }
        vecops::scale(qcur, 1.0 / qmass);
    }
    return {false, sample_probs(pcur, sr.emit), std::nullopt, rejections};
}

StepOutcome mcns_step(const Categorical& p, const Categorical& /*q*/, std::span<const TokenId> cands,
                      RngStream& rng) {
    assert(!cands.empty());
    StepRng sr = split_step_rng(rng);
    const TokenId x = sample_probs(p.probs(), sr.emit);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (cands[i] == x) {
            return {true, x, static_cast<int>(i), 0};
        }
    }
    return {false, x, std::nullopt, 0};
}

double sd_accept_rate(const Categorical& p, const Categorical& q) {
    return vecops::min_sum(p.probs(), q.probs());
}

double naive_accept_rate(const Categorical& p, const Categorical& q) {
    return vecops::dot(p.probs(), q.probs());
}

double mcss_accept_rate(const Categorical& p, const Categorical& q, int k) {
    assert(k >= 1);
    // Accumulate per-step acceptance mass weighted by the probability of
    // reaching that step; the k=1 term is exactly sum min(p, q).
    std::vector<double> cur(p.probs().begin(), p.probs().end());
    std::vector<double> next(cur.size());
    double rate = 0.0;
    double reach = 1.0;
    for (int i = 0; i < k; ++i) {
        rate += reach * vecops::min_sum(cur, q.probs());
        const double mass = vecops::relu_diff(cur, q.probs(), next);
        if (mass <= kMassTol) break; // this step accepted with certainty; later steps unreachable
        reach *= mass;
        vecops::scale(next, 1.0 / mass);
        cur.swap(next);
    }
    return rate;
}

double mcns_accept_rate(const Categorical& p, const Categorical& q, int k) {
    assert(k >= 1);
    std::vector<double> w(q.probs().size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::max(1.0 - q.probs()[i], 0.0);
    }
    std::vector<double> wk = w;
    for (int i = 1; i < k; ++i) {
        for (std::size_t j = 0; j < wk.size(); ++j) wk[j] *= w[j];
    }
    return 1.0 - vecops::dot(p.probs(), wk);
}

} // namespace specdec
