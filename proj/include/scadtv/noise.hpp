#pragma once

#include "scadtv/image.hpp"

#include <cstdint>

namespace scadtv {

/// Counter-based random numbers: every draw is a pure function of
/// (seed, index), so parallel and sequential generation agree bit for bit
/// and streams can be replayed from any position.

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform draw in [0, 1) for stream position `index` of stream `seed`.
inline double uniform_at(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(mix64(mix64(seed) ^ index) >> 11) * 0x1.0p-53;
}

/// Standard normal draw at stream position `index` (Box-Muller).
double gaussian_at(std::uint64_t seed, std::uint64_t index);

/// img + sigma * n with n i.i.d. standard normal from the seeded stream.
/// The output is deliberately not clipped to [0,255].
Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed);

/// An image of i.i.d. standard normal draws (the SURE probe vector).
Image gaussian_image(int width, int height, std::uint64_t seed);

} // namespace scadtv
