#include "scadtv/solvers.hpp"

#include "scadtv/flow_kernels.hpp"
#include "scadtv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace scadtv {

namespace {

void check_weights(const Image& f, const Image& w) {
    require_same_shape(f, w, "weighted_tv_denoise");
    for (double v : w.data)
        if (!(v >= 0.0))
            throw std::invalid_argument("weighted_tv_denoise: weights must be >= 0 and finite");
}

double penalty_objective(const Image& f, const Image& u, double beta,
                         double (*pen)(double, const void*), const void* ctx) {
    require_same_shape(f, u, "objective");
    const int W = u.width, H = u.height;
    double fid = 0.0, reg = 0.0;
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const double gx = (c + 1 < W) ? u.at(r, c + 1) - u.at(r, c) : 0.0;
            const double gy = (r + 1 < H) ? u.at(r + 1, c) - u.at(r, c) : 0.0;
            const double mag = std::sqrt(gx * gx + gy * gy + beta * beta);
            const double res = u.at(r, c) - f.at(r, c);
            fid += res * res;
            reg += pen(mag, ctx);
        }
    }
    return 0.5 * fid + reg;
}

} // namespace

namespace {

// Damping of the Jacobi-scaled step dt_i = damping / (1 + 2 s_i + s_l + s_u),
// the reciprocal of the pixel's energy-Hessian row bound. The scaling is a
// continuous function of the state, which keeps the solve a continuous map
// of its input (the Monte-Carlo risk estimate differentiates it by finite
// differences), and stiff near-flat pixels do not throttle the others.
constexpr double kJacobiDamping = 0.9;

} // namespace

Image weighted_tv_denoise_from(const Image& init, const Image& f, const Image& w,
                               const SolverConfig& cfg, SolveStats* stats) {
    cfg.validate();
    check_weights(f, w);
    require_same_shape(f, init, "weighted_tv_denoise");

    const int W = f.width, H = f.height;
    Image u_cur = init;
    Image u_cand(W, H), px(W, H), py(W, H), slope(W, H);
    Image px_cand(W, H), py_cand(W, H), slope_cand(W, H);
    std::vector<double> row_buf, step_buf;

    double energy = flux_and_energy(u_cur, f, w, cfg.beta, px, py, slope, row_buf);
    if (!std::isfinite(energy)) throw SolveDivergedError(0);

    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = SolveStats{};
    st.energy_trace.push_back(energy);

    bool stalled = false;
    double damping = kJacobiDamping;
    while (st.iterations < cfg.max_inner_iters && !stalled) {
        damping = kJacobiDamping;

        StepNorms norms;
        double cand_energy;
        for (int halvings = 0;; ++halvings) {
            if (cfg.adaptive_dt)
                norms = flow_step_jacobi(u_cur, f, px, py, slope, cfg.dt, damping, u_cand,
                                         step_buf);
            else
                norms = flow_step(u_cur, f, px, py, cfg.dt, u_cand, step_buf);
            cand_energy =
                flux_and_energy(u_cand, f, w, cfg.beta, px_cand, py_cand, slope_cand, row_buf);
            if (!cfg.adaptive_dt) {
                if (!std::isfinite(cand_energy)) throw SolveDivergedError(st.iterations + 1);
                break;
            }
            if (cand_energy <= energy) break; // also rejects NaN
            ++st.rejected;
            if (halvings >= 60) {
                if (!std::isfinite(cand_energy)) throw SolveDivergedError(st.iterations + 1);
                stalled = true; // no descent possible at machine precision
                break;
            }
            damping *= 0.5;
        }
        if (stalled) break;

        std::swap(u_cur, u_cand);
        std::swap(px, px_cand);
        std::swap(py, py_cand);
        std::swap(slope, slope_cand);
        energy = cand_energy;
        ++st.iterations;
        st.energy_trace.push_back(energy);

        const double rel = std::sqrt(norms.diff_sq) / std::max(std::sqrt(norms.norm_sq), 1.0);
        if (rel < cfg.rel_tol) {
            st.converged = true;
            break;
        }
    }

    st.final_dt = cfg.adaptive_dt ? damping : cfg.dt;
    st.final_energy = energy;
    return u_cur;
}

Image weighted_tv_denoise(const Image& f, const Image& w, const SolverConfig& cfg,
                          SolveStats* stats) {
    return weighted_tv_denoise_from(f, f, w, cfg, stats);
}

Image tv_denoise(const Image& f, double lambda, const SolverConfig& cfg, SolveStats* stats) {
    if (!(lambda > 0.0)) throw std::invalid_argument("tv_denoise: lambda must be > 0");
    return weighted_tv_denoise(f, Image(f.width, f.height, lambda), cfg, stats);
}

Image satv_weight_field(const Image& pilot, double e) {
    if (!(e > 0.0)) throw std::invalid_argument("satv_weight_field: e must be > 0");
    const GradientField g = gradient(pilot);
    Image w(pilot.width, pilot.height);
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = satv_weight(g.gx[i], g.gy[i], e);
    return w;
}

Image satv_denoise(const Image& f, double lambda1, double lambda2, double e,
                   const SolverConfig& cfg) {
    if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
        throw std::invalid_argument("satv_denoise: lambdas must be > 0");

    const Image pilot = tv_denoise(f, lambda1, cfg);
    Image w = satv_weight_field(pilot, e);
    for (double& v : w.data) v *= lambda2;
    return weighted_tv_denoise(f, w, cfg);
}

ScadResult scad_denoise(const Image& f, const ScadParams& p, const SolverConfig& cfg) {
    p.validate();
    cfg.validate();

    ScadResult result;
    result.image = f; // u^(0)
    result.objectives.push_back(scad_objective(f, result.image, p, cfg.beta));

    Image w(f.width, f.height);
    for (int k = 1; k <= cfg.outer_iters; ++k) {
        const GradientField g = gradient(result.image, cfg.beta);
        const Image mag = smoothed_magnitude(g);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = scad_derivative(mag[i], p);
        // Warm start at the previous iterate so every accepted flow step
        // descends the current surrogate, which makes the objective
        // sequence nonincreasing regardless of inner convergence.
        result.image = weighted_tv_denoise_from(result.image, f, w, cfg);
        result.objectives.push_back(scad_objective(f, result.image, p, cfg.beta));
    }
    return result;
}

double weighted_tv_objective(const Image& f, const Image& u, const Image& w, double beta) {
    require_same_shape(f, w, "weighted_tv_objective");
    require_same_shape(f, u, "weighted_tv_objective");
    const int W = u.width, H = u.height;
    double fid = 0.0, reg = 0.0;
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const double gx = (c + 1 < W) ? u.at(r, c + 1) - u.at(r, c) : 0.0;
            const double gy = (r + 1 < H) ? u.at(r + 1, c) - u.at(r, c) : 0.0;
            const double mag = std::sqrt(gx * gx + gy * gy + beta * beta);
            const double res = u.at(r, c) - f.at(r, c);
            fid += res * res;
            reg += w.at(r, c) * mag;
        }
    }
    return 0.5 * fid + reg;
}

double tv_objective(const Image& f, const Image& u, double lambda, double beta) {
    if (!(lambda > 0.0)) throw std::invalid_argument("tv_objective: lambda must be > 0");
    return penalty_objective(
        f, u, beta, [](double m, const void* ctx) { return *static_cast<const double*>(ctx) * m; },
        &lambda);
}

double scad_objective(const Image& f, const Image& u, const ScadParams& p, double beta) {
    p.validate();
    return penalty_objective(
        f, u, beta,
        [](double m, const void* ctx) { return scad_value(m, *static_cast<const ScadParams*>(ctx)); },
        &p);
}

} // namespace scadtv
