#include "scadtv/estimators.hpp"

#include "scadtv/metrics.hpp"
#include "scadtv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scadtv {

void SureConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("SureConfig: epsilon must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("SureConfig: sigma must be > 0");
    if (probes < 1) throw std::invalid_argument("SureConfig: probes must be >= 1");
}

double estimate_sigma(const Image& f) {
    if (f.size() < 2)
        throw std::invalid_argument("estimate_sigma: image must have at least 2 pixels");
    std::vector<double> diffs;
    diffs.reserve(static_cast<std::size_t>(f.height) * (f.width - 1) +
                  static_cast<std::size_t>(f.height - 1) * f.width);
    for (int r = 0; r < f.height; ++r)
        for (int c = 0; c + 1 < f.width; ++c)
            diffs.push_back(std::abs(f.at(r, c + 1) - f.at(r, c)));
    for (int r = 0; r + 1 < f.height; ++r)
        for (int c = 0; c < f.width; ++c)
            diffs.push_back(std::abs(f.at(r + 1, c) - f.at(r, c)));

    const std::size_t n = diffs.size();
    const std::size_t mid = n / 2;
    std::nth_element(diffs.begin(), diffs.begin() + mid, diffs.end());
    double median = diffs[mid];
    if (n % 2 == 0) {
        // Even count: average the two central order statistics.
        const double below = *std::max_element(diffs.begin(), diffs.begin() + mid);
        median = 0.5 * (median + below);
    }
    return median / 0.954;
}

SureDetail monte_carlo_sure_detail(const Image& f, const Denoiser& M, const SureConfig& cfg) {
    cfg.validate();
    const double n = static_cast<double>(f.size());

    const Image denoised = M(f);
    require_same_shape(f, denoised, "monte_carlo_sure");

    SureDetail d;
    d.fidelity = mse(f, denoised);

    double div_sum = 0.0;
    for (int probe = 0; probe < cfg.probes; ++probe) {
        const Image b = gaussian_image(f.width, f.height, cfg.seed + static_cast<std::uint64_t>(probe));
        Image perturbed(f.width, f.height);
        for (std::size_t i = 0; i < f.size(); ++i)
            perturbed[i] = f[i] + cfg.epsilon * b[i];
        const Image denoised2 = M(perturbed);
        double dot = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            dot += b[i] * (denoised2[i] - denoised[i]);
        div_sum += dot / cfg.epsilon;
    }
    d.divergence = div_sum / cfg.probes;

    const double s2 = cfg.sigma * cfg.sigma;
    d.sure = d.fidelity - s2 + 2.0 * s2 / n * d.divergence;
    d.finite = std::isfinite(d.sure);
    return d;
}

double monte_carlo_sure(const Image& f, const Denoiser& M, const SureConfig& cfg) {
    return monte_carlo_sure_detail(f, M, cfg).sure;
}

namespace {

std::size_t argmin_field(const std::vector<SweepRecord>& curve,
                         std::optional<double> SweepRecord::* field, const char* what) {
    std::size_t best = curve.size();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& v = curve[i].*field;
        if (!v || !std::isfinite(*v)) continue;
        if (best == curve.size() || *v <= *(curve[best].*field)) best = i;
    }
    if (best == curve.size())
        throw std::runtime_error(std::string(what) + ": no finite values in the curve");
    return best;
}

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("lambda grid must be nonempty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("lambda grid must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("lambda grid must be strictly ascending");
    }
}

} // namespace

std::size_t argmin_mse(const std::vector<SweepRecord>& curve) {
    return argmin_field(curve, &SweepRecord::mse, "argmin_mse");
}

std::size_t argmin_sure(const std::vector<SweepRecord>& curve) {
    return argmin_field(curve, &SweepRecord::sure, "argmin_sure");
}

SureSelection select_lambda_sure(const Image& f, const std::vector<double>& lambda_grid,
                                 const ParamDenoiser& M, const SureConfig& cfg) {
    cfg.validate();
    check_grid(lambda_grid);

    SureSelection sel;
    sel.curve.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        const auto detail = monte_carlo_sure_detail(
            f, [&](const Image& img) { return M(img, lambda); }, cfg);
        SweepRecord rec;
        rec.lambda = lambda;
        rec.sure = detail.sure;
        sel.curve.push_back(rec);
    }
    sel.lambda = sel.curve[argmin_sure(sel.curve)].lambda;
    return sel;
}

std::vector<SweepRecord> sweep_true_mse(const Image& f, const Image& truth,
                                        const std::vector<double>& lambda_grid,
                                        const ParamDenoiser& M) {
    require_same_shape(f, truth, "sweep_true_mse");
    check_grid(lambda_grid);

    std::vector<SweepRecord> curve;
    curve.reserve(lambda_grid.size());
    for (double lambda : lambda_grid) {
        SweepRecord rec;
        rec.lambda = lambda;
        rec.mse = mse(truth, M(f, lambda));
        curve.push_back(rec);
    }
    return curve;
}

} // namespace scadtv
