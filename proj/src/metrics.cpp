#include "scadtv/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace scadtv {

double mse(const Image& truth, const Image& estimate) {
    require_same_shape(truth, estimate, "mse");
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double d = truth[i] - estimate[i];
        sum += d * d;
    }
    return sum / static_cast<double>(truth.size());
}

double total_variation(const Image& img) {
    double tv = 0.0;
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c + 1 < img.width; ++c)
            tv += std::abs(img.at(r, c + 1) - img.at(r, c));
    for (int r = 0; r + 1 < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            tv += std::abs(img.at(r + 1, c) - img.at(r, c));
    return tv;
}

std::vector<long long> histogram(const Image& img, int bins, double lo, double hi) {
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("histogram: range must satisfy lo < hi");
    std::vector<long long> counts(bins, 0);
    const double scale = bins / (hi - lo);
    for (double v : img.data) {
        int b = static_cast<int>(std::floor((v - lo) * scale));
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    return counts;
}

double level_shift(const Image& truth, const Image& estimate, double level, double tol) {
    require_same_shape(truth, estimate, "level_shift");
    double sum = 0.0;
    long long count = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (std::abs(truth[i] - level) <= tol) {
            sum += estimate[i] - truth[i];
            ++count;
        }
    }
    if (count == 0)
        throw std::invalid_argument("level_shift: no truth pixels within tol of level");
    return sum / static_cast<double>(count);
}

} // namespace scadtv
