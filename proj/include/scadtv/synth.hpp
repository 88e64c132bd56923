#pragma once

#include "scadtv/image.hpp"

#include <vector>

namespace scadtv {

enum class PatternKind { nested_squares, nested_squares_thick, rotated_diamonds };

/// Description of a synthetic blocky test image: concentric square or
/// diamond bands of the given width, cycling through the intensity levels.
struct PatternSpec {
    PatternKind kind = PatternKind::nested_squares;
    int size = 256;                         // square images
    std::vector<double> levels = {0, 255};  // intensities in [0,255]
    int band_width = 16;                    // pixels

    void validate() const;
};

/// The defaults used by the bundled experiment scenarios: 256x256 with
/// band width 16 ({0,255}), 32 for the thick variant, and 16 with levels
/// {0,85,170,255} for the diamonds.
PatternSpec default_spec(PatternKind kind);

/// Exactly piecewise-constant band image; every pixel equals one of the
/// levels. Bands are concentric around the image center, measured in the
/// Chebyshev metric for squares and the L1 metric for diamonds.
Image generate(const PatternSpec& spec);

} // namespace scadtv
