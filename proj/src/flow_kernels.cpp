#include "scadtv/flow_kernels.hpp"

#include <algorithm>
#include <cmath>

namespace scadtv {

double flux_and_energy(const Image& u, const Image& f, const Image& w, double beta,
                       Image& px, Image& py, Image& slope, std::vector<double>& row_buf) {
    const int W = u.width, H = u.height;
    const double b2 = beta * beta;
    const double* ud = u.data.data();
    const double* fd = f.data.data();
    const double* wd = w.data.data();
    double* pxd = px.data.data();
    double* pyd = py.data.data();
    double* sd = slope.data.data();
    row_buf.assign(H, 0.0);
    double* partial = row_buf.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < H; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * W;
        double acc = 0.0;
        for (int c = 0; c < W; ++c) {
            const std::size_t i = row + c;
            const double gx = (c + 1 < W) ? ud[i + 1] - ud[i] : 0.0;
            const double gy = (r + 1 < H) ? ud[i + W] - ud[i] : 0.0;
            const double mag = std::sqrt(gx * gx + gy * gy + b2);
            // mag can be exactly zero when beta is zero; the flux vanishes
            // there, so take the zero element of the subdifferential
            const double s = mag > 0.0 ? wd[i] / mag : 0.0;
            pxd[i] = s * gx;
            pyd[i] = s * gy;
            sd[i] = s;
            const double res = ud[i] - fd[i];
            acc += 0.5 * res * res + wd[i] * mag;
        }
        partial[r] = acc;
    }
    double energy = 0.0;
    for (int r = 0; r < H; ++r) energy += partial[r];
    return energy;
}

namespace {

inline double divergence_at(const double* px, const double* py, int W, int H, int r, int c,
                            std::size_t i) {
    double dx = 0.0;
    if (W > 1) {
        if (c == 0)
            dx = px[i];
        else if (c < W - 1)
            dx = px[i] - px[i - 1];
        else
            dx = -px[i - 1];
    }
    double dy = 0.0;
    if (H > 1) {
        if (r == 0)
            dy = py[i];
        else if (r < H - 1)
            dy = py[i] - py[i - W];
        else
            dy = -py[i - W];
    }
    return dx + dy;
}

} // namespace

StepNorms flow_step(const Image& u, const Image& f, const Image& px, const Image& py,
                    double dt, Image& u_next, std::vector<double>& row_buf) {
    const int W = u.width, H = u.height;
    const double* ud = u.data.data();
    const double* fd = f.data.data();
    const double* pxd = px.data.data();
    const double* pyd = py.data.data();
    double* od = u_next.data.data();
    row_buf.assign(2 * static_cast<std::size_t>(H), 0.0);
    double* partial = row_buf.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < H; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * W;
        double acc_diff = 0.0, acc_norm = 0.0;
        for (int c = 0; c < W; ++c) {
            const std::size_t i = row + c;
            const double delta =
                dt * (divergence_at(pxd, pyd, W, H, r, c, i) - (ud[i] - fd[i]));
            od[i] = ud[i] + delta;
            acc_diff += delta * delta;
            acc_norm += ud[i] * ud[i];
        }
        partial[2 * r] = acc_diff;
        partial[2 * r + 1] = acc_norm;
    }
    StepNorms n;
    for (int r = 0; r < H; ++r) {
        n.diff_sq += partial[2 * r];
        n.norm_sq += partial[2 * r + 1];
    }
    return n;
}

StepNorms flow_step_jacobi(const Image& u, const Image& f, const Image& px, const Image& py,
                           const Image& slope, double dt_max, double damping, Image& u_next,
                           std::vector<double>& row_buf) {
    const int W = u.width, H = u.height;
    const double* ud = u.data.data();
    const double* fd = f.data.data();
    const double* pxd = px.data.data();
    const double* pyd = py.data.data();
    const double* sd = slope.data.data();
    double* od = u_next.data.data();
    row_buf.assign(3 * static_cast<std::size_t>(H), 0.0);
    double* partial = row_buf.data();
#pragma omp parallel for schedule(static)
    for (int r = 0; r < H; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * W;
        double acc_diff = 0.0, acc_norm = 0.0, acc_delta = 0.0;
        for (int c = 0; c < W; ++c) {
            const std::size_t i = row + c;
            // row bound counts only edges that exist: the pixel's own
            // forward differences plus the neighbors' edges ending here
            const int own_edges = (c + 1 < W ? 1 : 0) + (r + 1 < H ? 1 : 0);
            const double s_left = c > 0 ? sd[i - 1] : 0.0;
            const double s_up = r > 0 ? sd[i - W] : 0.0;
            const double dt =
                std::min(dt_max, damping / (1.0 + own_edges * sd[i] + s_left + s_up));
            const double delta =
                dt * (divergence_at(pxd, pyd, W, H, r, c, i) - (ud[i] - fd[i]));
            od[i] = ud[i] + delta;
            acc_diff += delta * delta;
            acc_norm += ud[i] * ud[i];
            acc_delta += delta;
        }
        partial[3 * r] = acc_diff;
        partial[3 * r + 1] = acc_norm;
        partial[3 * r + 2] = acc_delta;
    }
    StepNorms n;
    double delta_sum = 0.0;
    for (int r = 0; r < H; ++r) {
        n.diff_sq += partial[3 * r];
        n.norm_sq += partial[3 * r + 1];
        delta_sum += partial[3 * r + 2];
    }

    // Uniform dt conserves the mean exactly; the Jacobi scaling does not,
    // so project the mean drift back out. The shift lowers the fidelity
    // term and leaves the penalty unchanged, so descent is preserved.
    const std::size_t count = u.size();
    const double shift = delta_sum / static_cast<double>(count);
    if (shift != 0.0) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(count); ++i) od[i] -= shift;
        n.diff_sq = std::max(0.0, n.diff_sq - static_cast<double>(count) * shift * shift);
    }
    return n;
}

namespace reference {

double flux_and_energy(const Image& u, const Image& f, const Image& w, double beta,
                       Image& px, Image& py, Image& slope) {
    const int W = u.width, H = u.height;
    double energy = 0.0;
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const double gx = (c + 1 < W) ? u.at(r, c + 1) - u.at(r, c) : 0.0;
            const double gy = (r + 1 < H) ? u.at(r + 1, c) - u.at(r, c) : 0.0;
            const double mag = std::sqrt(gx * gx + gy * gy + beta * beta);
            const double s = mag > 0.0 ? w.at(r, c) / mag : 0.0;
            px.at(r, c) = s * gx;
            py.at(r, c) = s * gy;
            slope.at(r, c) = s;
            const double res = u.at(r, c) - f.at(r, c);
            energy += 0.5 * res * res + w.at(r, c) * mag;
        }
    }
    return energy;
}

namespace {

double div_at(const Image& px, const Image& py, int r, int c) {
    const int W = px.width, H = px.height;
    double dx = 0.0;
    if (W > 1) {
        if (c == 0)
            dx = px.at(r, 0);
        else if (c < W - 1)
            dx = px.at(r, c) - px.at(r, c - 1);
        else
            dx = -px.at(r, c - 1);
    }
    double dy = 0.0;
    if (H > 1) {
        if (r == 0)
            dy = py.at(0, c);
        else if (r < H - 1)
            dy = py.at(r, c) - py.at(r - 1, c);
        else
            dy = -py.at(r - 1, c);
    }
    return dx + dy;
}

} // namespace

StepNorms flow_step(const Image& u, const Image& f, const Image& px, const Image& py,
                    double dt, Image& u_next) {
    StepNorms n;
    for (int r = 0; r < u.height; ++r) {
        for (int c = 0; c < u.width; ++c) {
            const double delta = dt * (div_at(px, py, r, c) - (u.at(r, c) - f.at(r, c)));
            u_next.at(r, c) = u.at(r, c) + delta;
            n.diff_sq += delta * delta;
            n.norm_sq += u.at(r, c) * u.at(r, c);
        }
    }
    return n;
}

StepNorms flow_step_jacobi(const Image& u, const Image& f, const Image& px, const Image& py,
                           const Image& slope, double dt_max, double damping, Image& u_next) {
    const int W = u.width, H = u.height;
    StepNorms n;
    // per-row partials, summed in row order, to match the parallel kernel
    std::vector<double> row_diff(H, 0.0), row_norm(H, 0.0), row_delta(H, 0.0);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const int own_edges = (c + 1 < W ? 1 : 0) + (r + 1 < H ? 1 : 0);
            const double s_left = c > 0 ? slope.at(r, c - 1) : 0.0;
            const double s_up = r > 0 ? slope.at(r - 1, c) : 0.0;
            const double dt = std::min(
                dt_max, damping / (1.0 + own_edges * slope.at(r, c) + s_left + s_up));
            const double delta = dt * (div_at(px, py, r, c) - (u.at(r, c) - f.at(r, c)));
            u_next.at(r, c) = u.at(r, c) + delta;
            row_diff[r] += delta * delta;
            row_norm[r] += u.at(r, c) * u.at(r, c);
            row_delta[r] += delta;
        }
    }
    double delta_sum = 0.0;
    for (int r = 0; r < H; ++r) {
        n.diff_sq += row_diff[r];
        n.norm_sq += row_norm[r];
        delta_sum += row_delta[r];
    }
    const double shift = delta_sum / static_cast<double>(u.size());
    if (shift != 0.0) {
        for (double& v : u_next.data) v -= shift;
        n.diff_sq = std::max(0.0, n.diff_sq - static_cast<double>(u.size()) * shift * shift);
    }
    return n;
}

} // namespace reference

} // namespace scadtv
