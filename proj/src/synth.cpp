#include "scadtv/synth.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace scadtv {

void PatternSpec::validate() const {
    if (levels.empty()) throw std::invalid_argument("PatternSpec: levels must be nonempty");
    if (band_width < 1) throw std::invalid_argument("PatternSpec: band_width must be >= 1");
    for (double v : levels)
        if (!(v >= 0.0 && v <= 255.0))
            throw std::invalid_argument("PatternSpec: levels must lie in [0,255]");
    if (size < 2 * band_width * static_cast<int>(levels.size()))
        throw std::invalid_argument("PatternSpec: size must be >= 2*band_width*|levels|");
}

PatternSpec default_spec(PatternKind kind) {
    PatternSpec spec;
    spec.kind = kind;
    switch (kind) {
        case PatternKind::nested_squares:
            spec.band_width = 16;
            spec.levels = {0, 255};
            break;
        case PatternKind::nested_squares_thick:
            spec.band_width = 32;
            spec.levels = {0, 255};
            break;
        case PatternKind::rotated_diamonds:
            spec.band_width = 16;
            spec.levels = {0, 85, 170, 255};
            break;
    }
    return spec;
}

Image generate(const PatternSpec& spec) {
    spec.validate();
    const int n = spec.size;
    Image img(n, n);
    const int nlev = static_cast<int>(spec.levels.size());
    const bool diamond = spec.kind == PatternKind::rotated_diamonds;
    double* out = img.data.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // Doubled coordinates keep the center exact for even sizes.
            const int dr = std::abs(2 * r - (n - 1));
            const int dc = std::abs(2 * c - (n - 1));
            const int dist2 = diamond ? dr + dc : (dr > dc ? dr : dc);
            const int band = dist2 / (2 * spec.band_width);
            out[static_cast<std::size_t>(r) * n + c] = spec.levels[band % nlev];
        }
    }
    return img;
}

} // namespace scadtv
