#pragma once

#include "specdec/dist.hpp"
#include "specdec/rng.hpp"

#include <functional>
#include <string>
#include <vector>

namespace specdec::oracle {

// Ground-truth machinery for the verification kernels. Everything here is
// written with plain scalar loops, independent of the kernel code paths and
// of the dispatched vector kernels, so agreement between the two routes is
// evidence rather than tautology.

enum class Method { ClosedForm, TupleEnumeration, MonteCarlo };

struct ExactDist {
    Categorical dist;
    Method method = Method::ClosedForm;
    long long samples = 0;     // Monte Carlo only
    double accept_rate = -1.0; // populated where the closed form provides it
};

/// Exact output distribution of mcss_step with k i.i.d. candidates from q:
/// out(x) = sum_i (prod_{j<i} beta_j) min(q(x), res_{i-1}(x))
///        + (prod_{j<=k} beta_j) res_k(x),
/// where res_0 = p, res_i is the normalized positive part of res_{i-1} - q
/// and beta_i its mass.
ExactDist exact_output_dist_mcss(const Categorical& p, const Categorical& q, int k);

/// Exact output distribution of mcss_wor_step, by enumerating every ordered
/// tuple of distinct candidates weighted by the sequential
/// exclusion-renormalized proposal. Errors: EnumerationTooLarge if V > 8,
/// k > 4, or k exceeds the support size of q.
ExactDist exact_output_dist_mcss_wor(const Categorical& p, const Categorical& q, int k);

/// Output distribution of mcns_step (always p) plus its closed-form
/// acceptance rate 1 - sum p(x)(1-q(x))^k.
ExactDist exact_output_dist_mcns(const Categorical& p, const Categorical& q, int k);

/// Empirical distribution of `trial` over n independent runs.
ExactDist monte_carlo_dist(const std::function<TokenId(RngStream&)>& trial, int vocab_size,
                           long long n, RngStream& rng);

/// One randomly generated test case. Generation follows normalized
/// exponentials of seeded Gaussians, with forced degenerate corners
/// (p = q, near-one-hot, nearly disjoint supports) mixed into every suite.
struct CasePair {
    Categorical p;
    Categorical q;
};

CasePair random_case(int vocab_size, RngStream& rng);

/// Deterministic sequence of suite cases: the forced corners first, then
/// random pairs, vocab sizes cycling in [2, v_max].
std::vector<CasePair> suite_cases(int num_cases, int v_max, RngStream& rng);

struct BoundReport {
    int cases_checked = 0;
    int bound_failures = 0;        // mcss rate fell below the naive-sampling rate
    int monotonicity_failures = 0; // either rate decreased in k
    int k1_mismatch_failures = 0;  // mcss at k=1 differed from the single-candidate rate

    bool ok() const { return bound_failures == 0 && monotonicity_failures == 0 && k1_mismatch_failures == 0; }
};

/// Checks, over random (p, q) pairs, that the multi-candidate acceptance rate
/// dominates the naive-sampling acceptance rate for every k <= k_max, that
/// both rates are non-decreasing in k, and that k=1 reduces exactly to the
/// single-candidate rate. Failures are counted, not thrown.
BoundReport check_bound_suite(int num_cases, int v_max, int k_max, RngStream& rng);

std::string format_bound_report(const BoundReport& report);

} // namespace specdec::oracle
