#pragma once

#include "scadtv/image.hpp"
#include "scadtv/penalty.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace scadtv {

/// Configuration of the explicit gradient-flow solver. Defaults are sized
/// for intensities on the [0,255] scale with unit grid spacing.
struct SolverConfig {
    double dt = 0.1;          // initial explicit time step
    int max_inner_iters = 500;
    double rel_tol = 1e-4;    // stop when ||u_next-u|| / max(||u||,1) < rel_tol
    double beta = 1e-3;       // gradient magnitude smoothing
    int outer_iters = 2;      // K, outer reweighting loop count
    bool adaptive_dt = true;  // halve dt on steps that would raise the energy

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be > 0");
        if (max_inner_iters < 1) throw std::invalid_argument("SolverConfig: max_inner_iters must be >= 1");
        if (!(rel_tol > 0.0)) throw std::invalid_argument("SolverConfig: rel_tol must be > 0");
        if (beta < 0.0) throw std::invalid_argument("SolverConfig: beta must be >= 0");
        if (outer_iters < 1) throw std::invalid_argument("SolverConfig: outer_iters must be >= 1");
    }
};

/// Thrown when the flow produces non-finite values (the time step is too
/// large for the explicit scheme).
class SolveDivergedError : public std::runtime_error {
  public:
    explicit SolveDivergedError(int iteration)
        : std::runtime_error("gradient flow diverged (non-finite values) at iteration " +
                             std::to_string(iteration) + "; reduce dt"),
          iteration(iteration) {}
    int iteration;
};

struct SolveStats {
    int iterations = 0;     // accepted steps
    int rejected = 0;       // steps discarded by the energy check
    bool converged = false; // stopped on rel_tol rather than the iteration cap
    double final_dt = 0.0;
    double final_energy = 0.0;
    std::vector<double> energy_trace; // flow energy at start and after each accepted step
};

/// Approximate minimizer of 0.5*||f-u||^2 + sum w*|grad u|_beta by explicit
/// time stepping of u_t = div(w * grad u / |grad u|_beta) - (u - f),
/// starting from u = f. w must be nonnegative and shaped like f.
Image weighted_tv_denoise(const Image& f, const Image& w, const SolverConfig& cfg,
                          SolveStats* stats = nullptr);

/// Same flow started from an explicit initial image.
Image weighted_tv_denoise_from(const Image& init, const Image& f, const Image& w,
                               const SolverConfig& cfg, SolveStats* stats = nullptr);

/// TV denoising: weighted flow with the constant weight field w = lambda.
Image tv_denoise(const Image& f, double lambda, const SolverConfig& cfg,
                 SolveStats* stats = nullptr);

/// Spatially adaptive TV: a TV solve at lambda1 supplies the gradients for
/// the weight field lambda2 * (1/(|gx|+e) + 1/(|gy|+e)), then a second
/// weighted solve of the original image.
Image satv_denoise(const Image& f, double lambda1, double lambda2, double e,
                   const SolverConfig& cfg);

/// The unit-strength adaptive weight field 1/(|gx|+e) + 1/(|gy|+e) computed
/// from a pilot restoration; lets sweeps that fix the pilot reuse it across
/// lambda2 values.
Image satv_weight_field(const Image& pilot, double e);

struct ScadResult {
    Image image;
    // Objective value at u^(0) = f and after each outer step; nonincreasing.
    std::vector<double> objectives;
};

/// SCAD denoising by majorization-minimization: each outer step solves a
/// weighted TV problem whose weights are the SCAD derivative evaluated at
/// the previous iterate's gradient magnitudes. outer_iters (K) steps.
ScadResult scad_denoise(const Image& f, const ScadParams& p, const SolverConfig& cfg);

/// Discrete objectives on the solver's convention (fidelity weighted by 1/2,
/// the energy the flow descends; regularization strengths are reported on
/// this scale). Penalties are evaluated at |grad u|_beta.
double weighted_tv_objective(const Image& f, const Image& u, const Image& w, double beta);
double tv_objective(const Image& f, const Image& u, double lambda, double beta);
double scad_objective(const Image& f, const Image& u, const ScadParams& p, double beta);

} // namespace scadtv
