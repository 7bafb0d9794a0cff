#pragma once

#include <cstdint>

namespace trigibbs {

// SplitMix64 finalizer (Steele/Lea/Flood); full 64-bit avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stream identity for every random draw in the project.
// Derivation rule (documented contract, relied on for reproducibility):
//   base = M(M(M(M(seed + g) ^ tag + g) ^ chain + g) ^ grid + g)
// where M is mix64, g the 64-bit golden-ratio constant, `tag` a module
// tag (fnv1a64 of a short string), `chain` the chain index and `grid`
// the grid-point index. Draw k of the stream is M(base + (k+1)*g),
// i.e. the canonical SplitMix64 sequence seeded at `base`.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t module_tag = 0;
    std::uint64_t chain_index = 0;
    std::uint64_t grid_index = 0;
};

inline std::uint64_t derive_stream(const StreamKey& k) {
    std::uint64_t b = mix64(k.seed + kGolden);
    b = mix64((b ^ k.module_tag) + kGolden);
    b = mix64((b ^ k.chain_index) + kGolden);
    b = mix64((b ^ k.grid_index) + kGolden);
    return b;
}

// Counter-based generator: state is (base, counter); draw k is a pure
// function of both, so streams can be split or replayed at random access.
class CounterRng {
  public:
    explicit CounterRng(const StreamKey& k) : base_(derive_stream(k)) {}
    explicit CounterRng(std::uint64_t raw_base) : base_(raw_base) {}

    std::uint64_t next_u64() { return mix64(base_ + (++counter_) * kGolden); }

    // uniform in [0, 1) with 53-bit resolution
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // unbiased uniform integer in [0, bound); bound >= 1
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t r, v;
        do {
            r = next_u64();
            v = r % bound;
        } while (r - v > static_cast<std::uint64_t>(-bound));
        return v;
    }

    bool bernoulli(double p) { return next_double() < p; }

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace trigibbs
