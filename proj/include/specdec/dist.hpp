#pragma once

#include "specdec/errors.hpp"
#include "specdec/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace specdec {

/// Index into a vocabulary of size V.
using TokenId = std::int32_t;

/// Pre-softmax scores over a vocabulary. Entries must be finite.
struct Logits {
    std::vector<double> values;

    int vocab_size() const { return static_cast<int>(values.size()); }
};

/// Normalization/degeneracy tolerance used throughout: masses at or below
/// this are treated as zero, and every freshly built Categorical is
/// renormalized once to absorb drift across the residual recursion.
inline constexpr double kMassTol = 1e-12;

/// A normalized probability vector over a finite vocabulary.
///
/// Invariants: every entry >= 0 and the entries sum to 1 (within kMassTol
/// after the constructor's single renormalization pass).
class Categorical {
  public:
    Categorical() = default;

    /// Normalizes `weights`. Throws NegativeWeight / ZeroMass.
    explicit Categorical(std::vector<double> weights);

    std::span<const double> probs() const { return probs_; }
    int vocab_size() const { return static_cast<int>(probs_.size()); }
    double operator[](TokenId id) const { return probs_[static_cast<std::size_t>(id)]; }

    /// Wraps an already-normalized vector without validation. For internal
    /// hot paths that maintain the invariants themselves.
    static Categorical from_normalized(std::vector<double> probs);

  private:
    std::vector<double> probs_;
};

/// weights / sum(weights). Errors: NegativeWeight, ZeroMass.
Categorical new_categorical(std::vector<double> weights);

/// temp > 0: softmax(values / temp). temp = 0: one-hot at the argmax, ties
/// broken toward the lowest id.
Categorical apply_temperature(const Logits& logits, double temp);

/// Inverse-CDF draw: returns id with probability probs[id].
TokenId sample(const Categorical& c, RngStream& rng);

/// Zero the excluded ids and renormalize the rest. Errors: ExhaustedSupport
/// if the remaining mass is <= kMassTol.
Categorical renorm_excluding(const Categorical& q, std::span<const TokenId> excluded);

/// Sequential draws x_i ~ q with all previously drawn ids excluded and the
/// remainder renormalized. All returned ids are distinct; the list truncates
/// to the support size when k exceeds it.
std::vector<TokenId> sample_without_replacement(const Categorical& q, int k, RngStream& rng);

/// max(0, p - q) normalized. Errors: DegenerateResidual when the positive
/// part has mass <= kMassTol (p <= q everywhere).
Categorical residual(const Categorical& p, const Categorical& q);

/// Total variation distance: 0.5 * sum |a - b|, in [0, 1].
double tv_distance(const Categorical& a, const Categorical& b);

TokenId argmax(std::span<const double> values);

namespace detail {

/// out = max(p - q, 0); returns its mass without normalizing or throwing.
/// The verification kernels use this to detect degenerate residuals inline.
double residual_into(std::span<const double> p, std::span<const double> q, std::span<double> out);

/// Test hook: adds `eps` to entry 0 of every residual before normalization.
/// Used by the verify command's fault-injection sanity check.
void set_residual_perturbation(double eps);
double residual_perturbation();

} // namespace detail

} // namespace specdec
