#pragma once

#include <stdexcept>

namespace scadtv {

/// Parameters of the SCAD penalty. The shape parameter a must exceed 2 so
/// that x + scad_derivative(x) is strictly increasing on the middle branch.
struct ScadParams {
    double lambda = 1.0;
    double a = 3.7;

    ScadParams() = default;
    ScadParams(double lambda_, double a_) : lambda(lambda_), a(a_) { validate(); }

    void validate() const {
        if (!(lambda > 0.0)) throw std::invalid_argument("ScadParams: lambda must be > 0");
        if (!(a > 2.0)) throw std::invalid_argument("ScadParams: a must be > 2");
    }
};

/// Parameters of the spatially adaptive TV weight: regularization strength
/// and the stabilization offset e added to the derivative magnitudes.
struct SatvParams {
    double lambda = 1.0;
    double e = 10.0;

    SatvParams() = default;
    SatvParams(double lambda_, double e_) : lambda(lambda_), e(e_) { validate(); }

    void validate() const {
        if (!(lambda > 0.0)) throw std::invalid_argument("SatvParams: lambda must be > 0");
        if (!(e > 0.0)) throw std::invalid_argument("SatvParams: e must be > 0");
    }
};

/// Derivative of the SCAD penalty:
///   lambda                       for theta <= lambda,
///   (a*lambda - theta)+/(a-1)    for theta >  lambda,
/// so it equals lambda near zero, decays linearly, and vanishes beyond
/// a*lambda. Continuous and nonincreasing on [0, inf).
inline double scad_derivative(double theta, const ScadParams& p) {
    p.validate();
    if (theta < 0.0) throw std::domain_error("scad_derivative: theta must be >= 0");
    if (theta <= p.lambda) return p.lambda;
    double clipped = p.a * p.lambda - theta;
    if (clipped <= 0.0) return 0.0;
    return clipped / (p.a - 1.0);
}

/// SCAD penalty value, the antiderivative of scad_derivative with p(0) = 0:
/// linear on [0, lambda], a quadratic blend on (lambda, a*lambda], and the
/// constant plateau (a+1)*lambda^2/2 beyond a*lambda.
inline double scad_value(double theta, const ScadParams& p) {
    p.validate();
    if (theta < 0.0) throw std::domain_error("scad_value: theta must be >= 0");
    double lam = p.lambda, a = p.a;
    if (theta <= lam) return lam * theta;
    if (theta <= a * lam)
        return -(theta * theta - 2.0 * a * lam * theta + lam * lam) / (2.0 * (a - 1.0));
    return (a + 1.0) * lam * lam / 2.0;
}

/// The function x + scad_derivative(x), which governs the stationarity
/// condition of the two-pixel problem. Piecewise: lambda+x below lambda,
/// a*lambda/(a-1) + (1 - 1/(a-1))*x up to a*lambda, then x. Strictly
/// increasing for x > 0 with infimum lambda as x -> 0+.
inline double stationarity_lhs(double x, const ScadParams& p) {
    if (x < 0.0) throw std::domain_error("stationarity_lhs: x must be >= 0");
    return x + scad_derivative(x, p);
}

/// Spatially adaptive TV weight 1/(|gx|+e) + 1/(|gy|+e). Small where the
/// derivatives are large (edges), bounded above by 2/e.
inline double satv_weight(double gx, double gy, double e) {
    if (!(e > 0.0)) throw std::domain_error("satv_weight: e must be > 0");
    double ax = gx < 0.0 ? -gx : gx;
    double ay = gy < 0.0 ? -gy : gy;
    return 1.0 / (ax + e) + 1.0 / (ay + e);
}

} // namespace scadtv
