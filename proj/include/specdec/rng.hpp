#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace specdec {

/// Counter-based random stream with cheap, collision-resistant substream
/// derivation.
///
/// Every draw is a hash of (key, counter), so a stream is fully determined by
/// its key and how many values it has produced. `child(tag)` derives an
/// independent stream from the key alone without consuming state; callers use
/// distinct tags (block index, depth, trial index) to fan out reproducible
/// parallel streams.
class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() { return mix(key_, ++ctr_); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (consumes two draws).
    double normal();

    /// Derived stream; does not advance this stream.
    RngStream child(std::uint64_t tag) const {
        return RngStream(mix(key_ ^ 0xa3ec647659359acdULL, tag));
    }

    std::uint64_t key() const { return key_; }

    /// SplitMix64-style finalizer over two words.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

inline double RngStream::normal() {
    // Box-Muller; u1 nudged away from 0 so the log stays finite.
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace specdec
