#pragma once

#include "ksexact/core.hpp"

namespace ksexact {

// Stumpff functions c_k(z) = Σ (-z)^n / (2n+k)!, k = 0..3.
// For z > 0 with x = √z: c0 = cos x, c1 = sin x / x, c2 = (1 - cos x)/z,
// c3 = (x - sin x)/x³; hyperbolic counterparts for z < 0.
struct Stumpff {
    double c0, c1, c2, c3;
};

// Below this |z| the power series is summed; above it the closed forms are used.
inline constexpr double kStumpffSeriesThreshold = 1.0;

Stumpff stumpff(double z);

// Coefficients of the exact flow of dQ/ds = P/4, dP/ds = 2E Q over a step h.
// c = cos ωh (cosh νh, 1), s_over_w = sin ωh / ω (sinh νh / ν, h),
// w2 = ω² = -E/2. c² + w2·s_over_w² = 1 in every regime.
struct TrigKernels {
    double c = 1.0;
    double s_over_w = 0.0;
    double w2 = 0.0;
};

TrigKernels kernels(double E, double h);

// Effective step of the midpoint form: (2/ω) tan(ωh/2), continued to
// (2/ν) tanh(νh/2) for E > 0 and h for E = 0. Throws StepTooLarge when
// ω|h| >= π on the elliptic branch.
double delta(double E, double h);

struct OscillatorPair {
    Vec4 Q;
    Vec4 P;
};

// Exact flow map (entire in h; no pole).
OscillatorPair exact_step(const Vec4& Q, const Vec4& P, double E, double h);

// Closed-form solve of
//   (Q' - Q)/d = (P' + P)/8,   (P' - P)/d = E (Q' + Q).
// With d = delta(E, h) this reproduces exact_step; with d = h it is the
// second-order implicit midpoint rule. Throws StepTooLarge when the
// 2x2 block determinant 1 - E d²/8 vanishes.
OscillatorPair midpoint_form_step(const Vec4& Q, const Vec4& P, double E, double step_param);

// |P|²/8 - E|Q|²; equals k on KS lifts of Kepler states with energy E.
double oscillator_invariant(const Vec4& Q, const Vec4& P, double E);

}  // namespace ksexact
