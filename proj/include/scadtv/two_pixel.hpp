#pragma once

#include "scadtv/penalty.hpp"

#include <string>

namespace scadtv {

enum class TwoPixelBranch { no_shrinkage, pooled, interior_stationary, tv_shrunk, tv_pooled };

std::string to_string(TwoPixelBranch b);

/// Minimizer of (y1-t1)^2 + (y2-t2)^2 + penalty(|t1-t2|) with the branch it
/// came from. The sum t1+t2 always equals y1+y2.
struct TwoPixelSolution {
    double theta1 = 0.0;
    double theta2 = 0.0;
    TwoPixelBranch branch = TwoPixelBranch::pooled;
    double objective = 0.0;
};

/// Penalty variant for the two-pixel objective and its brute-force oracle.
struct TwoPixelPenalty {
    enum class Kind { scad, tv } kind;
    ScadParams scad_params;
    double tv_lambda;

    static TwoPixelPenalty scad(const ScadParams& p) { return {Kind::scad, p, 0.0}; }
    static TwoPixelPenalty tv(double lambda) { return {Kind::tv, ScadParams{}, lambda}; }

    double operator()(double abs_diff) const {
        return kind == Kind::scad ? scad_value(abs_diff, scad_params) : tv_lambda * abs_diff;
    }
};

/// The objective Q(t1, t2) evaluated directly.
double two_pixel_objective(double y1, double y2, double t1, double t2,
                           const TwoPixelPenalty& pen);

/// Closed-form minimizer with the SCAD penalty. Large differences
/// (|y1-y2| > a*lambda) pass through unchanged; small ones (< lambda) pool
/// to the mean; in between, the pooled point and the valid stationary
/// points of x + p'(x) = |y1-y2| are compared explicitly.
TwoPixelSolution two_pixel_scad(double y1, double y2, const ScadParams& p);

/// Closed-form minimizer with the TV penalty lambda*|t1-t2|: differences
/// above lambda shrink by exactly lambda, the rest pool to the mean.
TwoPixelSolution two_pixel_tv(double y1, double y2, double lambda);

/// Exhaustive grid search over [min(y)-halfwidth, max(y)+halfwidth]^2;
/// the verification oracle for the closed forms.
TwoPixelSolution two_pixel_brute_force(double y1, double y2, const TwoPixelPenalty& pen,
                                       double grid_halfwidth, double grid_step);

/// Grid defaults used by the CLI's --verify mode.
double default_grid_halfwidth(const TwoPixelPenalty& pen);
double default_grid_step(double y1, double y2);

} // namespace scadtv
