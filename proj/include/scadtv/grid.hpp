#pragma once

#include "scadtv/image.hpp"

namespace scadtv {

/// Forward-difference gradient of an image plus the smoothing constant used
/// when forming its magnitude. Differences across the last row/column are
/// zero (replicate boundary).
struct GradientField {
    Image gx;
    Image gy;
    double beta = 0.0;
};

/// Forward differences with replicate (homogeneous Neumann) boundary:
///   gx[r,c] = u[r,c+1] - u[r,c]  (0 in the last column)
///   gy[r,c] = u[r+1,c] - u[r,c]  (0 in the last row)
GradientField gradient(const Image& img, double beta = 0.0);

/// Negative adjoint of gradient(): backward differences with the boundary
/// convention that makes <gradient(u), p> = -<u, divergence(p)> hold exactly
/// in the discrete inner product.
Image divergence(const Image& px, const Image& py);

/// Pointwise sqrt(gx^2 + gy^2 + beta^2).
Image smoothed_magnitude(const GradientField& g);

/// Serial reference implementations. These are kept deliberately plain and
/// are the ground truth the parallel kernels are tested against.
namespace reference {
GradientField gradient(const Image& img, double beta = 0.0);
Image divergence(const Image& px, const Image& py);
Image smoothed_magnitude(const GradientField& g);
} // namespace reference

} // namespace scadtv
