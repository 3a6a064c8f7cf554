#include "specdec/oracle.hpp"

#include "specdec/sampling.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace specdec::oracle {

namespace {

// Plain-loop helpers; deliberately not the vecops/dist code paths.

double plain_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

/// out = max(a - b, 0); returns the mass.
double plain_residual(const std::vector<double>& a, const std::vector<double>& b,
                      std::vector<double>& out) {
    double mass = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        out[i] = d > 0.0 ? d : 0.0;
        mass += out[i];
    }
    return mass;
}

void plain_normalize(std::vector<double>& v, double mass) {
    for (double& x : v) x /= mass;
}

int support_size(const Categorical& c) {
    int n = 0;
    for (double x : c.probs()) {
        if (x > 0.0) ++n;
    }
    return n;
}

} // namespace

ExactDist exact_output_dist_mcss(const Categorical& p, const Categorical& q, int k) {
    assert(k >= 1);
    const std::size_t v = p.probs().size();
    std::vector<double> cur(p.probs().begin(), p.probs().end());
    std::vector<double> next(v);
    std::vector<double> out(v, 0.0);
    double reach = 1.0;
    double accept_mass = 0.0;
    for (int step = 0; step < k; ++step) {
        for (std::size_t x = 0; x < v; ++x) {
            const double a = std::min(q.probs()[x], cur[x]);
            out[x] += reach * a;
            accept_mass += reach * a;
        }
        const double beta = plain_residual(cur, q.probs(), next);
        if (beta <= 0.0) {
            reach = 0.0;
            break;
        }
        reach *= beta;
        plain_normalize(next, beta);
        cur.swap(next);
    }
    if (reach > 0.0) {
        for (std::size_t x = 0; x < v; ++x) out[x] += reach * cur[x];
    }
    ExactDist result;
    result.dist = Categorical(std::move(out));
    result.method = Method::ClosedForm;
    result.accept_rate = accept_mass;
    return result;
}

namespace {

/// Runs one without-replacement verification walk symbolically for a fixed
/// candidate tuple: returns the tuple's conditional output distribution.
std::vector<double> wor_tuple_output(const Categorical& p, const Categorical& q,
                                     const std::vector<TokenId>& tuple) {
    const std::size_t v = p.probs().size();
    std::vector<double> pcur(p.probs().begin(), p.probs().end());
    std::vector<double> qcur(q.probs().begin(), q.probs().end());
    std::vector<double> next(v);
    std::vector<double> out(v, 0.0);
    double reach = 1.0;
    for (TokenId c : tuple) {
        const auto ci = static_cast<std::size_t>(c);
        assert(qcur[ci] > 0.0);
        const double accept = std::min(1.0, pcur[ci] / qcur[ci]);
        out[ci] += reach * accept;
        reach *= 1.0 - accept;
        if (reach <= 0.0) return out;
        const double pmass = plain_residual(pcur, qcur, next);
        if (pmass <= kMassTol) {
            // Degenerate residual after a rejection: matches the kernels'
            // fallback of emitting from the current p.
            for (std::size_t x = 0; x < v; ++x) out[x] += reach * pcur[x];
            return out;
        }
        plain_normalize(next, pmass);
        pcur.swap(next);
        qcur[ci] = 0.0;
        const double qmass = plain_sum(qcur);
        if (qmass <= 0.0) break;
        plain_normalize(qcur, qmass);
    }
    for (std::size_t x = 0; x < v; ++x) out[x] += reach * pcur[x];
    return out;
}

void enumerate_wor_tuples(const Categorical& p, const Categorical& q, int k,
                          std::vector<double>& qbar, double weight, std::vector<TokenId>& tuple,
                          std::vector<double>& out) {
    if (static_cast<int>(tuple.size()) == k) {
        const std::vector<double> contrib = wor_tuple_output(p, q, tuple);
        for (std::size_t x = 0; x < out.size(); ++x) out[x] += weight * contrib[x];
        return;
    }
    const double mass = plain_sum(qbar);
    for (std::size_t c = 0; c < qbar.size(); ++c) {
        if (qbar[c] <= 0.0) continue;
        const double w = qbar[c] / mass;
        const double saved = qbar[c];
        qbar[c] = 0.0;
        tuple.push_back(static_cast<TokenId>(c));
        enumerate_wor_tuples(p, q, k, qbar, weight * w, tuple, out);
        tuple.pop_back();
        qbar[c] = saved;
    }
}

} // namespace

ExactDist exact_output_dist_mcss_wor(const Categorical& p, const Categorical& q, int k) {
    assert(k >= 1);
    if (p.vocab_size() > 8 || k > 4) {
        raise(ErrorCode::EnumerationTooLarge, "tuple enumeration limited to V <= 8, k <= 4");
    }
    if (k > support_size(q)) {
        raise(ErrorCode::EnumerationTooLarge, "k exceeds the support size of q");
    }
    std::vector<double> qbar(q.probs().begin(), q.probs().end());
    std::vector<double> out(p.probs().size(), 0.0);
    std::vector<TokenId> tuple;
    enumerate_wor_tuples(p, q, k, qbar, 1.0, tuple, out);
    ExactDist result;
    result.dist = Categorical(std::move(out));
    result.method = Method::TupleEnumeration;
    return result;
}

ExactDist exact_output_dist_mcns(const Categorical& p, const Categorical& q, int k) {
    assert(k >= 1);
    double reject_mass = 0.0;
    for (std::size_t x = 0; x < p.probs().size(); ++x) {
        reject_mass += p.probs()[x] * std::pow(1.0 - q.probs()[x], k);
    }
    ExactDist result;
    result.dist = p;
    result.method = Method::ClosedForm;
    result.accept_rate = 1.0 - reject_mass;
    return result;
}

ExactDist monte_carlo_dist(const std::function<TokenId(RngStream&)>& trial, int vocab_size,
                           long long n, RngStream& rng) {
    assert(n >= 1);
    std::vector<double> counts(static_cast<std::size_t>(vocab_size), 0.0);
    for (long long i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(trial(rng))] += 1.0;
    }
    ExactDist result;
    result.dist = Categorical(std::move(counts));
    result.method = Method::MonteCarlo;
    result.samples = n;
    return result;
}

CasePair random_case(int vocab_size, RngStream& rng) {
    const auto v = static_cast<std::size_t>(vocab_size);
    std::vector<double> pw(v);
    std::vector<double> qw(v);
    for (std::size_t i = 0; i < v; ++i) pw[i] = std::exp(rng.normal());
    for (std::size_t i = 0; i < v; ++i) qw[i] = std::exp(rng.normal());
    return {Categorical(std::move(pw)), Categorical(std::move(qw))};
}

std::vector<CasePair> suite_cases(int num_cases, int v_max, RngStream& rng) {
    assert(v_max >= 2);
    std::vector<CasePair> cases;
    cases.reserve(static_cast<std::size_t>(num_cases));

    const auto v = static_cast<std::size_t>(v_max);
    // Forced corners: identical distributions, a near-one-hot pair, and
    // nearly disjoint supports.
    {
        CasePair same = random_case(v_max, rng);
        same.q = same.p;
        cases.push_back(std::move(same));
    }
    {
        std::vector<double> pw(v, 1e-9);
        pw[0] = 1.0;
        std::vector<double> qw(v, 1e-9);
        qw[v - 1] = 1.0;
        cases.push_back({Categorical(std::move(pw)), Categorical(std::move(qw))});
    }
    {
        std::vector<double> pw(v, 1e-9);
        std::vector<double> qw(v, 1e-9);
        for (std::size_t i = 0; i < v / 2; ++i) pw[i] = 1.0;
        for (std::size_t i = v / 2; i < v; ++i) qw[i] = 1.0;
        cases.push_back({Categorical(std::move(pw)), Categorical(std::move(qw))});
    }

    int vocab = 2;
    while (static_cast<int>(cases.size()) < num_cases) {
        cases.push_back(random_case(vocab, rng));
        vocab = vocab >= v_max ? 2 : vocab + 1;
    }
    cases.resize(static_cast<std::size_t>(num_cases));
    return cases;
}

BoundReport check_bound_suite(int num_cases, int v_max, int k_max, RngStream& rng) {
    BoundReport report;
    const std::vector<CasePair> cases = suite_cases(num_cases, v_max, rng);
    for (const CasePair& cp : cases) {
        ++report.cases_checked;
        double prev_mcss = -1.0;
        double prev_mcns = -1.0;
        for (int k = 1; k <= k_max; ++k) {
            const double mcss = mcss_accept_rate(cp.p, cp.q, k);
            const double mcns = mcns_accept_rate(cp.p, cp.q, k);
            if (mcss < mcns - 1e-12) ++report.bound_failures;
            if (mcss < prev_mcss || mcns < prev_mcns) ++report.monotonicity_failures;
            if (k == 1 && mcss != sd_accept_rate(cp.p, cp.q)) ++report.k1_mismatch_failures;
            prev_mcss = mcss;
            prev_mcns = mcns;
        }
    }
    return report;
}

std::string format_bound_report(const BoundReport& report) {
    std::ostringstream os;
    os << "checked=" << report.cases_checked << " failed="
       << (report.bound_failures + report.monotonicity_failures + report.k1_mismatch_failures)
       << " bound_failures=" << report.bound_failures
       << " monotonicity_failures=" << report.monotonicity_failures
       << " k1_mismatch_failures=" << report.k1_mismatch_failures;
    return os.str();
}

} // namespace specdec::oracle
