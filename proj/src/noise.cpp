#include "scadtv/noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scadtv {

double gaussian_at(std::uint64_t seed, std::uint64_t index) {
    // Two uniforms per draw; 1-u1 keeps the log argument in (0,1].
    const double u1 = 1.0 - uniform_at(seed, 2 * index);
    const double u2 = uniform_at(seed, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Image add_gaussian_noise(const Image& img, double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw std::invalid_argument("add_gaussian_noise: sigma must be > 0");
    Image out(img.width, img.height);
    const double* in = img.data.data();
    double* o = out.data.data();
    const long long n = static_cast<long long>(img.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i)
        o[i] = in[i] + sigma * gaussian_at(seed, static_cast<std::uint64_t>(i));
    return out;
}

Image gaussian_image(int width, int height, std::uint64_t seed) {
    Image out(width, height);
    double* o = out.data.data();
    const long long n = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i)
        o[i] = gaussian_at(seed, static_cast<std::uint64_t>(i));
    return out;
}

} // namespace scadtv
