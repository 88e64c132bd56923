#pragma once

#include "scadtv/image.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scadtv {

/// Parse or I/O failure while reading a PGM file; carries the byte offset
/// at which the problem was detected.
class PgmError : public std::runtime_error {
  public:
    enum class Kind { bad_magic, malformed_header, truncated, io };

    PgmError(Kind kind, const std::string& message, std::size_t offset)
        : std::runtime_error(message + " (byte offset " + std::to_string(offset) + ")"),
          kind(kind),
          offset(offset) {}

    Kind kind;
    std::size_t offset;
};

/// Raw PGM contents: sample values exactly as stored, plus the declared
/// maxval. Accepts ASCII (P2) and binary (P5), one- and two-byte samples.
struct PgmRaw {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint16_t> values;
};

PgmRaw read_pgm_raw(const std::string& path);

/// Reads a PGM into real intensities on the [0,255] scale: 8-bit samples
/// are kept as-is; samples with maxval > 255 are scaled by 255/maxval.
Image read_pgm(const std::string& path);

/// Writes binary (P5) 8-bit PGM, rounding to the nearest integer. With
/// clamp the values are clipped into [0,255]; without it an out-of-range
/// value is an error.
void write_pgm(const Image& img, const std::string& path, bool clamp);

/// Writes binary 16-bit PGM storing round((value + offset) * scale); the
/// affine encoding preserves negative and fractional intensities of noisy
/// intermediates. Values that do not fit in [0,65535] after encoding are
/// an error.
void write_pgm16(const Image& img, const std::string& path, double offset, double scale);

/// Inverts the affine encoding of write_pgm16.
Image decode_pgm16(const PgmRaw& raw, double offset, double scale);

} // namespace scadtv
