#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace scadtv {

/// Dense 2-D grid of real-valued intensities, stored row-major.
/// Nominal range is [0,255]; values outside that range are legal and occur
/// during iteration and on noisy inputs.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Image() = default;

    Image(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("Image: dimensions must be positive");
    }

    Image(int w, int h, std::vector<double> values)
        : width(w), height(h), data(std::move(values)) {
        if (w <= 0 || h <= 0)
            throw std::invalid_argument("Image: dimensions must be positive");
        if (data.size() != static_cast<std::size_t>(w) * h)
            throw std::invalid_argument("Image: data length does not match dimensions");
    }

    std::size_t size() const { return data.size(); }

    double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline void require_same_shape(const Image& a, const Image& b, const char* where) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(where) + ": image dimensions do not match");
}

} // namespace scadtv
