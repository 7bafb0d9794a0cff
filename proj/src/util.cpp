#include "trigibbs/util.hpp"

#include <cmath>
#include <stdexcept>

namespace trigibbs {

BatchStats batch_means(const std::vector<double>& series, int nbatches) {
    if (nbatches < 2) throw std::invalid_argument("batch_means: need at least 2 batches");
    const std::size_t len = series.size() / static_cast<std::size_t>(nbatches);
    if (len == 0) throw std::invalid_argument("batch_means: series shorter than batch count");
    BatchStats out;
    out.batches = nbatches;
    std::vector<double> bm(static_cast<std::size_t>(nbatches));
    for (int b = 0; b < nbatches; ++b) {
        double s = 0.0;
        const std::size_t off = static_cast<std::size_t>(b) * len;
        for (std::size_t i = 0; i < len; ++i) s += series[off + i];
        bm[static_cast<std::size_t>(b)] = s / static_cast<double>(len);
        out.mean += bm[static_cast<std::size_t>(b)];
    }
    out.mean /= nbatches;
    double ss = 0.0;
    for (double m : bm) ss += (m - out.mean) * (m - out.mean);
    out.stderr_ = std::sqrt(ss / (nbatches - 1.0) / nbatches);
    return out;
}

}  // namespace trigibbs
