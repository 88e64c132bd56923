#include "scadtv/grid.hpp"

#include <cmath>

namespace scadtv {

GradientField gradient(const Image& img, double beta) {
    if (beta < 0.0) throw std::invalid_argument("gradient: beta must be >= 0");
    const int w = img.width, h = img.height;
    GradientField g{Image(w, h), Image(w, h), beta};
    const double* u = img.data.data();
    double* gx = g.gx.data.data();
    double* gy = g.gy.data.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < h; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * w;
        for (int c = 0; c < w - 1; ++c)
            gx[row + c] = u[row + c + 1] - u[row + c];
        gx[row + w - 1] = 0.0;
        if (r < h - 1) {
            for (int c = 0; c < w; ++c)
                gy[row + c] = u[row + w + c] - u[row + c];
        } else {
            for (int c = 0; c < w; ++c)
                gy[row + c] = 0.0;
        }
    }
    return g;
}

Image divergence(const Image& px, const Image& py) {
    require_same_shape(px, py, "divergence");
    const int w = px.width, h = px.height;
    Image out(w, h);
    const double* x = px.data.data();
    const double* y = py.data.data();
    double* d = out.data.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < h; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * w;
        for (int c = 0; c < w; ++c) {
            double dx = 0.0;
            if (w > 1) {
                if (c == 0)
                    dx = x[row];
                else if (c < w - 1)
                    dx = x[row + c] - x[row + c - 1];
                else
                    dx = -x[row + c - 1];
            }
            double dy = 0.0;
            if (h > 1) {
                if (r == 0)
                    dy = y[row + c];
                else if (r < h - 1)
                    dy = y[row + c] - y[row - w + c];
                else
                    dy = -y[row - w + c];
            }
            d[row + c] = dx + dy;
        }
    }
    return out;
}

Image smoothed_magnitude(const GradientField& g) {
    require_same_shape(g.gx, g.gy, "smoothed_magnitude");
    const int w = g.gx.width, h = g.gx.height;
    Image out(w, h);
    const double b2 = g.beta * g.beta;
    const double* gx = g.gx.data.data();
    const double* gy = g.gy.data.data();
    double* m = out.data.data();
    const std::size_t n = out.size();
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        m[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i] + b2);
    return out;
}

namespace reference {

GradientField gradient(const Image& img, double beta) {
    if (beta < 0.0) throw std::invalid_argument("gradient: beta must be >= 0");
    GradientField g{Image(img.width, img.height), Image(img.width, img.height), beta};
    for (int r = 0; r < img.height; ++r) {
        for (int c = 0; c < img.width; ++c) {
            g.gx.at(r, c) = (c + 1 < img.width) ? img.at(r, c + 1) - img.at(r, c) : 0.0;
            g.gy.at(r, c) = (r + 1 < img.height) ? img.at(r + 1, c) - img.at(r, c) : 0.0;
        }
    }
    return g;
}

Image divergence(const Image& px, const Image& py) {
    require_same_shape(px, py, "divergence");
    const int w = px.width, h = px.height;
    Image out(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double dx = 0.0;
            if (w > 1) {
                if (c == 0)
                    dx = px.at(r, 0);
                else if (c < w - 1)
                    dx = px.at(r, c) - px.at(r, c - 1);
                else
                    dx = -px.at(r, c - 1);
            }
            double dy = 0.0;
            if (h > 1) {
                if (r == 0)
                    dy = py.at(0, c);
                else if (r < h - 1)
                    dy = py.at(r, c) - py.at(r - 1, c);
                else
                    dy = -py.at(r - 1, c);
            }
            out.at(r, c) = dx + dy;
        }
    }
    return out;
}

Image smoothed_magnitude(const GradientField& g) {
    require_same_shape(g.gx, g.gy, "smoothed_magnitude");
    Image out(g.gx.width, g.gx.height);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::sqrt(g.gx[i] * g.gx[i] + g.gy[i] * g.gy[i] + g.beta * g.beta);
    return out;
}

} // namespace reference

} // namespace scadtv
