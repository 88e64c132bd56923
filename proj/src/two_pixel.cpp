#include "scadtv/two_pixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scadtv {

std::string to_string(TwoPixelBranch b) {
    switch (b) {
        case TwoPixelBranch::no_shrinkage: return "no_shrinkage";
        case TwoPixelBranch::pooled: return "pooled";
        case TwoPixelBranch::interior_stationary: return "interior_stationary";
        case TwoPixelBranch::tv_shrunk: return "tv_shrunk";
        case TwoPixelBranch::tv_pooled: return "tv_pooled";
    }
    return "?";
}

double two_pixel_objective(double y1, double y2, double t1, double t2,
                           const TwoPixelPenalty& pen) {
    const double r1 = y1 - t1, r2 = y2 - t2;
    return r1 * r1 + r2 * r2 + pen(std::abs(t1 - t2));
}

namespace {

TwoPixelSolution make_solution(double y1, double y2, double t1, double t2,
                               TwoPixelBranch branch, const TwoPixelPenalty& pen,
                               bool swapped) {
    if (swapped) std::swap(t1, t2);
    TwoPixelSolution s;
    s.theta1 = t1;
    s.theta2 = t2;
    s.branch = branch;
    s.objective = swapped ? two_pixel_objective(y2, y1, t1, t2, pen)
                          : two_pixel_objective(y1, y2, t1, t2, pen);
    return s;
}

} // namespace

TwoPixelSolution two_pixel_scad(double y1, double y2, const ScadParams& p) {
    p.validate();
    const bool swapped = y1 < y2;
    if (swapped) std::swap(y1, y2);
    const TwoPixelPenalty pen = TwoPixelPenalty::scad(p);

    const double d = y1 - y2;
    const double s = y1 + y2;
    const double lam = p.lambda, a = p.a;

    if (d > a * lam)
        return make_solution(y1, y2, y1, y2, TwoPixelBranch::no_shrinkage, pen, swapped);
    if (d < lam)
        return make_solution(y1, y2, s / 2.0, s / 2.0, TwoPixelBranch::pooled, pen, swapped);

    // lam <= d <= a*lam: compare the pooled point against each stationary
    // point x of x + p'(x) = d that lies inside its branch's interval.
    // In the reduced variable x = t1 - t2 (with t1 + t2 = s fixed) the
    // objective is (d-x)^2/2 + p(x).
    const auto reduced = [&](double x) { return 0.5 * (d - x) * (d - x) + scad_value(x, p); };

    double best_x = 0.0;
    double best_q = reduced(0.0); // pooled; preferred on ties
    const double x1 = d - lam;
    if (x1 >= 0.0 && x1 < lam && reduced(x1) < best_q) {
        best_q = reduced(x1);
        best_x = x1;
    }
    if (a > 2.0) {
        const double x2 = ((a - 1.0) * d - a * lam) / (a - 2.0);
        if (x2 >= lam && x2 <= a * lam && reduced(x2) < best_q) {
            best_q = reduced(x2);
            best_x = x2;
        }
    }

    const TwoPixelBranch branch =
        best_x == 0.0 ? TwoPixelBranch::pooled : TwoPixelBranch::interior_stationary;
    return make_solution(y1, y2, (s + best_x) / 2.0, (s - best_x) / 2.0, branch, pen, swapped);
}

TwoPixelSolution two_pixel_tv(double y1, double y2, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("two_pixel_tv: lambda must be > 0");
    const bool swapped = y1 < y2;
    if (swapped) std::swap(y1, y2);
    const TwoPixelPenalty pen = TwoPixelPenalty::tv(lambda);

    const double d = y1 - y2;
    if (d > lambda)
        return make_solution(y1, y2, y1 - lambda / 2.0, y2 + lambda / 2.0,
                             TwoPixelBranch::tv_shrunk, pen, swapped);
    const double m = (y1 + y2) / 2.0;
    return make_solution(y1, y2, m, m, TwoPixelBranch::tv_pooled, pen, swapped);
}

TwoPixelSolution two_pixel_brute_force(double y1, double y2, const TwoPixelPenalty& pen,
                                       double grid_halfwidth, double grid_step) {
    if (!(grid_step > 0.0))
        throw std::invalid_argument("two_pixel_brute_force: grid_step must be > 0");
    if (grid_halfwidth < 0.0)
        throw std::invalid_argument("two_pixel_brute_force: grid_halfwidth must be >= 0");

    const double lo = std::min(y1, y2) - grid_halfwidth;
    const double hi = std::max(y1, y2) + grid_halfwidth;

    // Grid nodes lo, lo+step, ... plus hi itself so the corners are always
    // visited even when step exceeds the range.
    const auto node_count = static_cast<long long>(std::floor((hi - lo) / grid_step)) + 1;

    const auto node = [&](long long k) {
        const double v = lo + static_cast<double>(k) * grid_step;
        return v < hi ? v : hi;
    };

    TwoPixelSolution best;
    best.objective = std::numeric_limits<double>::infinity();
    for (long long i = 0; i <= node_count; ++i) {
        const double t1 = node(i);
        for (long long j = 0; j <= node_count; ++j) {
            const double t2 = node(j);
            const double q = two_pixel_objective(y1, y2, t1, t2, pen);
            if (q < best.objective) {
                best.objective = q;
                best.theta1 = t1;
                best.theta2 = t2;
            }
        }
        if (node(i) == hi) break;
    }

    const double d = std::abs(y1 - y2);
    const double x = std::abs(best.theta1 - best.theta2);
    if (pen.kind == TwoPixelPenalty::Kind::tv)
        best.branch = x <= grid_step ? TwoPixelBranch::tv_pooled : TwoPixelBranch::tv_shrunk;
    else if (x <= grid_step)
        best.branch = TwoPixelBranch::pooled;
    else if (std::abs(x - d) <= grid_step)
        best.branch = TwoPixelBranch::no_shrinkage;
    else
        best.branch = TwoPixelBranch::interior_stationary;
    return best;
}

double default_grid_halfwidth(const TwoPixelPenalty& pen) {
    if (pen.kind == TwoPixelPenalty::Kind::scad)
        return pen.scad_params.lambda * (pen.scad_params.a + 1.0);
    return pen.tv_lambda * 2.0;
}

double default_grid_step(double y1, double y2) {
    return std::max(1e-3, std::abs(y1 - y2) * 1e-4);
}

} // namespace scadtv
