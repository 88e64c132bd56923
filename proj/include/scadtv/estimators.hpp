#pragma once

#include "scadtv/image.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace scadtv {

/// Configuration of the Monte-Carlo risk estimate.
struct SureConfig {
    double epsilon = 0.5;   // perturbation amplitude, intensity units
    std::uint64_t seed = 1; // seed of the probe vector b
    double sigma = 1.0;     // noise standard deviation (measured or supplied)
    int probes = 1;         // probe vectors averaged for the divergence term

    void validate() const;
};

/// One row of a parameter sweep; mse is present only when ground truth was
/// available, sure only when the risk estimate was computed.
struct SweepRecord {
    double lambda = 0.0;
    std::optional<double> mse;
    std::optional<double> sure;
};

/// Robust noise-level estimate for blocky images: the median of |f_i - f_j|
/// over all horizontally and vertically adjacent pixel pairs, divided by
/// 0.954 (the median of |N(0, 2 sigma^2)| is 0.954 sigma).
double estimate_sigma(const Image& f);

using Denoiser = std::function<Image(const Image&)>;
using ParamDenoiser = std::function<Image(const Image&, double lambda)>;

struct SureDetail {
    double sure = 0.0;
    double fidelity = 0.0;   // (1/N) ||f - M(f)||^2
    double divergence = 0.0; // Monte-Carlo estimate of div_f M(f)
    bool finite = true;
};

/// Unbiased risk estimate (1/N)||f-M(f)||^2 - sigma^2 + (2 sigma^2/N) * div,
/// where div is estimated as (1/eps) b^T (M(f + eps b) - M(f)) with b a
/// standard-normal probe drawn from cfg.seed (probe k uses seed + k).
/// With one probe this costs exactly two denoiser evaluations.
SureDetail monte_carlo_sure_detail(const Image& f, const Denoiser& M, const SureConfig& cfg);
double monte_carlo_sure(const Image& f, const Denoiser& M, const SureConfig& cfg);

struct SureSelection {
    double lambda = 0.0;
    std::vector<SweepRecord> curve;
};

/// Evaluates the risk estimate at every grid point with the same probe
/// vector and returns the minimizing lambda (ties go to the larger lambda)
/// plus the full curve. The grid must be ascending and positive.
SureSelection select_lambda_sure(const Image& f, const std::vector<double>& lambda_grid,
                                 const ParamDenoiser& M, const SureConfig& cfg);

/// True-MSE sweep against a known ground truth, one denoiser run per grid
/// point.
std::vector<SweepRecord> sweep_true_mse(const Image& f, const Image& truth,
                                        const std::vector<double>& lambda_grid,
                                        const ParamDenoiser& M);

/// Index of the record minimizing the given field (ties go to the larger
/// lambda); records with the field absent or non-finite are skipped.
std::size_t argmin_mse(const std::vector<SweepRecord>& curve);
std::size_t argmin_sure(const std::vector<SweepRecord>& curve);

} // namespace scadtv
