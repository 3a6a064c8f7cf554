#include "specdec/models.hpp"

#include "specdec/vecops.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace specdec {

void AutoregressiveModel::check_context(std::span<const TokenId> context) const {
    for (TokenId t : context) {
        if (t < 0 || t >= vocab_size()) {
            raise(ErrorCode::OutOfVocab, "token " + std::to_string(t) + " outside vocabulary");
        }
    }
}

void AutoregressiveModel::check_packed_shape(const PackedSequence& packed) {
    const std::size_t n = packed.tokens.size();
    if (packed.positions.size() != n || packed.mask.size() != n * n) {
        raise(ErrorCode::MaskShapeMismatch, "packed sequence fields disagree on node count");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!packed.mask[i * n + i]) {
            raise(ErrorCode::MaskShapeMismatch, "packed mask must be reflexive");
        }
    }
}

std::vector<Logits> AutoregressiveModel::score_packed(std::span<const TokenId> prefix,
                                                      const PackedSequence& packed) const {
    check_packed_shape(packed);
    if (packed.prefix_len != static_cast<int>(prefix.size())) {
        raise(ErrorCode::MaskShapeMismatch, "prefix length disagrees with packed sequence");
    }
    const int n = packed.size();
    std::vector<Logits> out;
    out.reserve(static_cast<std::size_t>(n));
    std::vector<TokenId> context;
    for (int i = 0; i < n; ++i) {
        context.assign(prefix.begin(), prefix.end());
        // Ancestors precede their descendants in packing order, so this walk
        // reconstructs the root path in order.
        for (int j = 0; j <= i; ++j) {
            if (packed.allowed(i, j)) context.push_back(packed.tokens[static_cast<std::size_t>(j)]);
        }
        out.push_back(next_logits(context));
    }
    return out;
}

Categorical next_distribution(const AutoregressiveModel& model, std::span<const TokenId> context,
                              double temp) {
    return apply_temperature(model.next_logits(context), temp);
}

// --- TabularToyModel -------------------------------------------------------

TabularToyModel::TabularToyModel(std::uint64_t seed, int vocab_size, int context_order,
                                 double concentration)
    : seed_(seed), vocab_size_(vocab_size), context_order_(context_order),
      concentration_(concentration) {
    assert(vocab_size >= 1 && context_order >= 0 && concentration > 0.0);
}

Logits TabularToyModel::next_logits(std::span<const TokenId> context) const {
    check_context(context);
    const std::size_t take = std::min(context.size(), static_cast<std::size_t>(context_order_));
    std::uint64_t h = RngStream::mix(seed_, 0x7ab1e5eedULL);
    for (std::size_t i = context.size() - take; i < context.size(); ++i) {
        h = RngStream::mix(h, static_cast<std::uint64_t>(context[i]) + 1);
    }
    Logits out;
    out.values.resize(static_cast<std::size_t>(vocab_size_));
    for (int v = 0; v < vocab_size_; ++v) {
        RngStream cell(RngStream::mix(h, static_cast<std::uint64_t>(v)));
        out.values[static_cast<std::size_t>(v)] = concentration_ * cell.normal();
    }
    return out;
}

// --- MixtureDraftModel -----------------------------------------------------

MixtureDraftModel::MixtureDraftModel(std::shared_ptr<const AutoregressiveModel> target,
                                     std::shared_ptr<const AutoregressiveModel> noise, double lambda)
    : target_(std::move(target)), noise_(std::move(noise)), lambda_(lambda) {
    assert(lambda_ >= 0.0 && lambda_ <= 1.0);
    assert(target_->vocab_size() == noise_->vocab_size());
}

int MixtureDraftModel::vocab_size() const { return target_->vocab_size(); }

Logits MixtureDraftModel::next_logits(std::span<const TokenId> context) const {
    if (lambda_ == 1.0) return target_->next_logits(context);
    if (lambda_ == 0.0) return noise_->next_logits(context);
    const Categorical pt = apply_temperature(target_->next_logits(context), 1.0);
    const Categorical pn = apply_temperature(noise_->next_logits(context), 1.0);
    std::vector<double> mixed(pt.probs().size());
    vecops::mix(pt.probs(), pn.probs(), lambda_, mixed);
    Logits out;
    out.values.resize(mixed.size());
    for (std::size_t i = 0; i < mixed.size(); ++i) out.values[i] = std::log(mixed[i]);
    return out;
}

// --- AgreementPair ---------------------------------------------------------

AgreementPair make_agreement_pair(std::uint64_t seed, int vocab_size, int context_order,
                                  double lambda, double concentration) {
    auto target = std::make_shared<TabularToyModel>(seed, vocab_size, context_order, concentration);
    auto noise = std::make_shared<TabularToyModel>(RngStream::mix(seed, 0x4015eedULL), vocab_size,
                                                   context_order, concentration);
    auto draft = std::make_shared<MixtureDraftModel>(target, noise, lambda);
    return {std::move(target), std::move(draft)};
}

// --- TinyAttentionModel ----------------------------------------------------

namespace {

std::vector<double> seeded_matrix(std::uint64_t key, std::size_t rows, std::size_t cols,
                                  double scale) {
    RngStream rng(key);
    std::vector<double> m(rows * cols);
    for (double& x : m) x = scale * rng.normal();
    return m;
}

} // namespace

TinyAttentionModel::TinyAttentionModel(std::uint64_t seed, int vocab_size, int embed_dim)
    : seed_(seed), vocab_size_(vocab_size), embed_dim_(embed_dim) {
    assert(vocab_size >= 1 && embed_dim >= 1);
    const auto v = static_cast<std::size_t>(vocab_size);
    const auto d = static_cast<std::size_t>(embed_dim);
    const double wscale = 1.0 / std::sqrt(static_cast<double>(embed_dim));
    embedding_ = seeded_matrix(RngStream::mix(seed, 1), v, d, 1.0);
    wq_ = seeded_matrix(RngStream::mix(seed, 2), d, d, wscale);
    wk_ = seeded_matrix(RngStream::mix(seed, 3), d, d, wscale);
    wv_ = seeded_matrix(RngStream::mix(seed, 4), d, d, wscale);
}

std::vector<double> TinyAttentionModel::embed_token(TokenId id, int position) const {
    const auto d = static_cast<std::size_t>(embed_dim_);
    std::vector<double> x(embedding_.begin() + static_cast<std::size_t>(id) * d,
                          embedding_.begin() + (static_cast<std::size_t>(id) + 1) * d);
    // Sinusoidal position encoding keyed by the explicit position index.
    for (std::size_t j = 0; j < d; ++j) {
        const double freq = std::pow(10000.0, -2.0 * static_cast<double>(j / 2) / static_cast<double>(d));
        const double angle = static_cast<double>(position) * freq;
        x[j] += (j % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
    return x;
}

namespace {

std::vector<double> mat_vec(const std::vector<double>& m, std::size_t d,
                            const std::vector<double>& x) {
    std::vector<double> y(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        y[r] = vecops::dot(std::span<const double>(m.data() + r * d, d), x);
    }
    return y;
}

} // namespace

Logits TinyAttentionModel::attend(const std::vector<std::vector<double>>& embedded,
                                  const std::vector<bool>& allowed, std::size_t query) const {
    const auto d = static_cast<std::size_t>(embed_dim_);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(embed_dim_));
    const std::vector<double> qv = mat_vec(wq_, d, embedded[query]);

    // Additive-mask attention: disallowed positions score -inf and
    // contribute exactly zero weight.
    std::vector<double> scores(embedded.size());
    for (std::size_t j = 0; j < embedded.size(); ++j) {
        if (!allowed[j]) {
            scores[j] = -std::numeric_limits<double>::infinity();
            continue;
        }
        scores[j] = vecops::dot(qv, mat_vec(wk_, d, embedded[j])) * inv_sqrt_d;
    }
    double m = -std::numeric_limits<double>::infinity();
    for (double s : scores) m = std::max(m, s);
    double denom = 0.0;
    std::vector<double> weights(scores.size(), 0.0);
    for (std::size_t j = 0; j < scores.size(); ++j) {
        weights[j] = std::exp(scores[j] - m);
        denom += weights[j];
    }
    std::vector<double> h = embedded[query]; // residual connection
    for (std::size_t j = 0; j < embedded.size(); ++j) {
        if (weights[j] == 0.0) continue;
        vecops::axpy(weights[j] / denom, mat_vec(wv_, d, embedded[j]), h);
    }
    Logits out;
    out.values.resize(static_cast<std::size_t>(vocab_size_));
    for (int v = 0; v < vocab_size_; ++v) {
        out.values[static_cast<std::size_t>(v)] =
            vecops::dot(std::span<const double>(embedding_.data() + static_cast<std::size_t>(v) * d, d), h);
    }
    return out;
}

Logits TinyAttentionModel::next_logits(std::span<const TokenId> context) const {
    check_context(context);
    if (context.empty()) {
        raise(ErrorCode::OutOfVocab, "attention model requires a non-empty context");
    }
    std::vector<std::vector<double>> embedded;
    embedded.reserve(context.size());
    for (std::size_t i = 0; i < context.size(); ++i) {
        embedded.push_back(embed_token(context[i], static_cast<int>(i)));
    }
    const std::vector<bool> allowed(context.size(), true);
    return attend(embedded, allowed, context.size() - 1);
}

std::vector<Logits> TinyAttentionModel::score_packed(std::span<const TokenId> prefix,
                                                     const PackedSequence& packed) const {
    check_packed_shape(packed);
    check_context(prefix);
    check_context(packed.tokens);
    if (packed.prefix_len != static_cast<int>(prefix.size())) {
        raise(ErrorCode::MaskShapeMismatch, "prefix length disagrees with packed sequence");
    }
    const std::size_t p = prefix.size();
    const std::size_t n = packed.tokens.size();
    std::vector<std::vector<double>> embedded;
    embedded.reserve(p + n);
    for (std::size_t i = 0; i < p; ++i) {
        embedded.push_back(embed_token(prefix[i], static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < n; ++i) {
        embedded.push_back(embed_token(packed.tokens[i], packed.positions[i]));
    }
    std::vector<Logits> out;
    out.reserve(n);
    std::vector<bool> allowed(p + n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(allowed.begin(), allowed.begin() + static_cast<std::ptrdiff_t>(p), true);
        for (std::size_t j = 0; j < n; ++j) {
            allowed[p + j] = packed.allowed(static_cast<int>(i), static_cast<int>(j));
        }
        out.push_back(attend(embedded, allowed, p + i));
    }
    return out;
}

} // namespace specdec
