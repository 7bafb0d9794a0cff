#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace trigibbs {

inline std::int64_t comb2(std::int64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }
inline std::int64_t comb3(std::int64_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

// FNV-1a, used for module tags and config hashes.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct BatchStats {
    double mean = 0.0;
    double stderr_ = 0.0;
    int batches = 0;
};

// Autocorrelation-robust error bars: split the series into `nbatches`
// contiguous batches (tail remainder dropped), SE = sd(batch means)/sqrt(B).
BatchStats batch_means(const std::vector<double>& series, int nbatches = 32);

}  // namespace trigibbs
