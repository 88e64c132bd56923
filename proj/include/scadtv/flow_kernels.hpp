#pragma once

#include "scadtv/image.hpp"

#include <vector>

namespace scadtv {

/// Fused per-iteration kernels of the weighted TV gradient flow. Reductions
/// accumulate per-row partial sums that are combined in row order, so results
/// are bit-identical for any thread count.

struct StepNorms {
    double diff_sq = 0.0; // sum (u_next - u)^2
    double norm_sq = 0.0; // sum u^2
};

/// Computes the flux p = w * grad(u) / |grad(u)|_beta, the flux slope field
/// s = w / |grad(u)|_beta, and the flow energy
/// 0.5*sum (u-f)^2 + sum w*|grad(u)|_beta. px/py/slope must be shaped like
/// u; row_buf holds per-row partials.
double flux_and_energy(const Image& u, const Image& f, const Image& w, double beta,
                       Image& px, Image& py, Image& slope, std::vector<double>& row_buf);

/// Uniform explicit step u_next = u + dt*(div(px,py) - (u-f)); returns the
/// squared step size and squared norm of u for the stopping test.
StepNorms flow_step(const Image& u, const Image& f, const Image& px, const Image& py,
                    double dt, Image& u_next, std::vector<double>& row_buf);

/// Jacobi-scaled step: each pixel advances by
///   dt_i = min(dt_max, damping / (1 + 2 s_i + s_left + s_up)),
/// the reciprocal of its energy-Hessian row bound. The scaling is a
/// continuous function of the state, so the solve remains a continuous map
/// of its input, and stiff near-flat pixels no longer limit the others.
StepNorms flow_step_jacobi(const Image& u, const Image& f, const Image& px, const Image& py,
                           const Image& slope, double dt_max, double damping, Image& u_next,
                           std::vector<double>& row_buf);

namespace reference {
double flux_and_energy(const Image& u, const Image& f, const Image& w, double beta,
                       Image& px, Image& py, Image& slope);
StepNorms flow_step(const Image& u, const Image& f, const Image& px, const Image& py,
                    double dt, Image& u_next);
StepNorms flow_step_jacobi(const Image& u, const Image& f, const Image& px, const Image& py,
                           const Image& slope, double dt_max, double damping, Image& u_next);
} // namespace reference

} // namespace scadtv
