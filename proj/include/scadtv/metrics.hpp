#pragma once

#include "scadtv/image.hpp"

#include <vector>

namespace scadtv {

/// Mean squared pixel difference.
double mse(const Image& truth, const Image& estimate);

/// Anisotropic total variation: the sum of |forward difference| over all
/// horizontally and vertically adjacent pixel pairs.
double total_variation(const Image& img);

/// Counts per equal-width bin over [lo, hi]; out-of-range values are
/// clamped into the end bins, so the counts always sum to the pixel count.
std::vector<long long> histogram(const Image& img, int bins, double lo, double hi);

/// Mean of (estimate - truth) over pixels whose truth value is within tol
/// of level. Positive means the level drifted up in the estimate.
double level_shift(const Image& truth, const Image& estimate, double level, double tol = 0.5);

} // namespace scadtv
