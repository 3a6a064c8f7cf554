#pragma once

#include "specdec/dist.hpp"
#include "specdec/tree.hpp"

#include <memory>
#include <span>
#include <vector>

namespace specdec {

/// A deterministic next-token scorer. Identical inputs always produce
/// identical outputs; scoring a packed candidate tree must honor the mask and
/// positions, i.e. a node's logits depend only on the prefix, its ancestors,
/// and itself.
class AutoregressiveModel {
  public:
    virtual ~AutoregressiveModel() = default;

    virtual int vocab_size() const = 0;
    virtual Logits next_logits(std::span<const TokenId> context) const = 0;

    /// One Logits per packed node. The default implementation reconstructs
    /// each node's root path from the mask and scores it as an ordinary
    /// sequence, which honors the mask by construction. Errors:
    /// MaskShapeMismatch, OutOfVocab.
    virtual std::vector<Logits> score_packed(std::span<const TokenId> prefix,
                                             const PackedSequence& packed) const;

  protected:
    void check_context(std::span<const TokenId> context) const;
    static void check_packed_shape(const PackedSequence& packed);
};

/// apply_temperature(next_logits(context), temp).
Categorical next_distribution(const AutoregressiveModel& model, std::span<const TokenId> context,
                              double temp);

/// Seeded tabular model: logits are pseudo-Gaussian values derived from a
/// 64-bit hash of (seed, last `context_order` tokens), scaled by
/// `concentration`. Cheap, deterministic, and defined for every context.
class TabularToyModel : public AutoregressiveModel {
  public:
    TabularToyModel(std::uint64_t seed, int vocab_size, int context_order, double concentration);

    int vocab_size() const override { return vocab_size_; }
    Logits next_logits(std::span<const TokenId> context) const override;

    std::uint64_t seed() const { return seed_; }
    int context_order() const { return context_order_; }
    double concentration() const { return concentration_; }

  private:
    std::uint64_t seed_;
    int vocab_size_;
    int context_order_;
    double concentration_;
};

/// Draft model whose per-context distribution is a probability-space mixture
/// lambda * target + (1 - lambda) * noise. Logits are the log of the mixed
/// probabilities, so standard sampling reproduces the mixture exactly;
/// lambda = 1 and lambda = 0 pass the component logits through unchanged.
class MixtureDraftModel : public AutoregressiveModel {
  public:
    MixtureDraftModel(std::shared_ptr<const AutoregressiveModel> target,
                      std::shared_ptr<const AutoregressiveModel> noise, double lambda);

    int vocab_size() const override;
    Logits next_logits(std::span<const TokenId> context) const override;

    double lambda() const { return lambda_; }

  private:
    std::shared_ptr<const AutoregressiveModel> target_;
    std::shared_ptr<const AutoregressiveModel> noise_;
    double lambda_;
};

/// Target/draft pair with an agreement knob: lambda = 1 makes the draft
/// distribution identical to the target's on every context, lambda = 0 makes
/// it an independent seeded model.
struct AgreementPair {
    std::shared_ptr<const AutoregressiveModel> target;
    std::shared_ptr<const AutoregressiveModel> draft;
};

AgreementPair make_agreement_pair(std::uint64_t seed, int vocab_size, int context_order,
                                  double lambda, double concentration = 2.0);

/// One seeded single-head attention layer with a tied output projection and
/// sinusoidal position encoding driven by explicit position indices. No
/// training; it exists to exercise mask and position semantics. score_packed
/// runs genuine masked attention over the packed sequence (additive mask),
/// which is what the packed-vs-batched equivalence checks exercise.
class TinyAttentionModel : public AutoregressiveModel {
  public:
    TinyAttentionModel(std::uint64_t seed, int vocab_size, int embed_dim);

    int vocab_size() const override { return vocab_size_; }
    Logits next_logits(std::span<const TokenId> context) const override;
    std::vector<Logits> score_packed(std::span<const TokenId> prefix,
                                     const PackedSequence& packed) const override;

    int embed_dim() const { return embed_dim_; }

  private:
    struct Token {
        TokenId id;
        int position;
    };

    std::vector<double> embed_token(TokenId id, int position) const;
    /// Attention output for the query token over an ordered context
    /// (which must include the query itself as its last allowed entry).
    Logits attend(const std::vector<std::vector<double>>& embedded,
                  const std::vector<bool>& allowed, std::size_t query) const;

    std::uint64_t seed_;
    int vocab_size_;
    int embed_dim_;
    std::vector<double> embedding_;  // V x d, row-major; also the tied output projection
    std::vector<double> wq_, wk_, wv_; // d x d, row-major
};

} // namespace specdec
