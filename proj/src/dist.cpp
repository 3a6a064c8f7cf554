#include "specdec/dist.hpp"

#include "specdec/vecops.hpp"

#include <cassert>
#include <cmath>
#include <string>
#include <utility>

namespace specdec {

namespace {

void normalize_in_place(std::vector<double>& v, double mass) {
    vecops::scale(v, 1.0 / mass);
}

} // namespace

Categorical::Categorical(std::vector<double> weights) {
    for (double w : weights) {
        if (!(w >= 0.0)) {
            raise(ErrorCode::NegativeWeight, "categorical weight is negative or NaN");
        }
    }
    const double mass = vecops::sum(weights);
    if (!(mass > 0.0)) {
        raise(ErrorCode::ZeroMass, "categorical weights sum to zero");
    }
    normalize_in_place(weights, mass);
    probs_ = std::move(weights);
}

Categorical Categorical::from_normalized(std::vector<double> probs) {
    Categorical c;
    c.probs_ = std::move(probs);
    return c;
}

Categorical new_categorical(std::vector<double> weights) { return Categorical(std::move(weights)); }

Categorical apply_temperature(const Logits& logits, double temp) {
    const auto& vals = logits.values;
    assert(!vals.empty());
    if (temp == 0.0) {
        std::vector<double> probs(vals.size(), 0.0);
        probs[static_cast<std::size_t>(argmax(vals))] = 1.0;
        return Categorical::from_normalized(std::move(probs));
    }
    const double m = vecops::max_value(vals);
    std::vector<double> probs(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        probs[i] = std::exp((vals[i] - m) / temp);
    }
    const double mass = vecops::sum(probs);
    normalize_in_place(probs, mass);
    return Categorical::from_normalized(std::move(probs));
}

TokenId sample(const Categorical& c, RngStream& rng) {
    const double u = rng.uniform();
    auto probs = c.probs();
    double acc = 0.0;
    TokenId last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = static_cast<TokenId>(i);
        if (u < acc) return last_positive;
    }
    // u landed past the accumulated mass (rounding); return the last id that
    // carries probability.
    return last_positive;
}

Categorical renorm_excluding(const Categorical& q, std::span<const TokenId> excluded) {
    std::vector<double> probs(q.probs().begin(), q.probs().end());
    for (TokenId id : excluded) {
        probs[static_cast<std::size_t>(id)] = 0.0;
    }
    const double mass = vecops::sum(probs);
    if (mass <= kMassTol) {
        raise(ErrorCode::ExhaustedSupport, "no probability mass outside the excluded set");
    }
    normalize_in_place(probs, mass);
    return Categorical::from_normalized(std::move(probs));
}

std::vector<TokenId> sample_without_replacement(const Categorical& q, int k, RngStream& rng) {
    assert(k >= 1);
    std::vector<double> work(q.probs().begin(), q.probs().end());
    std::vector<TokenId> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double mass = vecops::sum(work);
        if (mass <= kMassTol) break; // support exhausted: truncate
        const double u = rng.uniform() * mass;
        double acc = 0.0;
        TokenId picked = -1;
        for (std::size_t j = 0; j < work.size(); ++j) {
            if (work[j] <= 0.0) continue;
            acc += work[j];
            picked = static_cast<TokenId>(j);
            if (u < acc) break;
        }
        if (picked < 0) break;
        out.push_back(picked);
        work[static_cast<std::size_t>(picked)] = 0.0;
    }
    return out;
}

Categorical residual(const Categorical& p, const Categorical& q) {
    std::vector<double> out(p.probs().size());
    const double mass = detail::residual_into(p.probs(), q.probs(), out);
    if (mass <= kMassTol) {
        raise(ErrorCode::DegenerateResidual, "residual mass is numerically zero (p <= q everywhere)");
    }
    normalize_in_place(out, mass);
    return Categorical::from_normalized(std::move(out));
}

double tv_distance(const Categorical& a, const Categorical& b) {
    return 0.5 * vecops::abs_diff_sum(a.probs(), b.probs());
}

TokenId argmax(std::span<const double> values) {
    assert(!values.empty());
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return static_cast<TokenId>(best);
}

namespace detail {

namespace {
double g_residual_perturbation = 0.0;
}

double residual_into(std::span<const double> p, std::span<const double> q, std::span<double> out) {
    double mass = vecops::relu_diff(p, q, out);
    if (g_residual_perturbation != 0.0 && !out.empty()) {
        out[0] += g_residual_perturbation;
        mass += g_residual_perturbation;
    }
    return mass;
}

void set_residual_perturbation(double eps) { g_residual_perturbation = eps; }
double residual_perturbation() { return g_residual_perturbation; }

} // namespace detail

} // namespace specdec
