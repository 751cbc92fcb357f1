#include "ksexact/oscillator.hpp"

#include <cfloat>
#include <numbers>

namespace ksexact {

namespace {

double series(double z, int k) {
    // (2n+k)! grows fast enough that 30 terms cover |z| < 1 to full precision.
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    double term = 1.0 / fact;
    double sum = term;
    for (int n = 1; n < 30; ++n) {
        term *= -z / static_cast<double>((2 * n + k - 1) * (2 * n + k));
        sum += term;
        if (std::fabs(term) <= 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

}  // namespace

Stumpff stumpff(double z) {
    if (std::fabs(z) < kStumpffSeriesThreshold)
        return {series(z, 0), series(z, 1), series(z, 2), series(z, 3)};
    if (z > 0.0) {
        const double x = std::sqrt(z);
        const double sn = std::sin(x);
        const double half = std::sin(0.5 * x);
        return {std::cos(x), sn / x, 2.0 * half * half / z, (x - sn) / (z * x)};
    }
    const double x = std::sqrt(-z);
    const double sh = std::sinh(x);
    const double half = std::sinh(0.5 * x);
    return {std::cosh(x), sh / x, 2.0 * half * half / -z, (sh - x) / (-z * x)};
}

TrigKernels kernels(double E, double h) {
    const double w2 = -E / 2.0;
    const Stumpff st = stumpff(w2 * h * h);
    return {st.c0, h * st.c1, w2};
}

double delta(double E, double h) {
    if (E < 0.0) {
        const double omega = std::sqrt(-E / 2.0);
        if (!(omega * std::fabs(h) < std::numbers::pi))
            throw Error(ErrorKind::StepTooLarge,
                        "delta: elliptic step must satisfy omega*|h| < pi (tangent pole)");
    }
    const TrigKernels kr = kernels(E, h);
    // tan(x/2) = sin x / (1 + cos x), continued to every regime.
    return kr.s_over_w / (0.5 * (1.0 + kr.c));
}

OscillatorPair exact_step(const Vec4& Q, const Vec4& P, double E, double h) {
    const TrigKernels kr = kernels(E, h);
    return {kr.c * Q + (0.25 * kr.s_over_w) * P, (-4.0 * kr.w2 * kr.s_over_w) * Q + kr.c * P};
}

OscillatorPair midpoint_form_step(const Vec4& Q, const Vec4& P, double E, double step_param) {
    const double a = step_param / 8.0;
    const double b = E * step_param;
    const double ab = a * b;
    const double det = 1.0 - ab;
    if (!(std::fabs(det) > 4.0 * DBL_EPSILON * (1.0 + std::fabs(ab))))
        throw Error(ErrorKind::StepTooLarge,
                    "midpoint_form_step: singular system (1 - E*d^2/8 = 0)");
    // The four coordinate pairs (Q_i, P_i) decouple into identical 2x2 solves.
    const double inv = 1.0 / det;
    const double diag = (1.0 + ab) * inv;
    return {diag * Q + (2.0 * a * inv) * P, (2.0 * b * inv) * Q + diag * P};
}

double oscillator_invariant(const Vec4& Q, const Vec4& P, double E) {
    return norm2(P) / 8.0 - E * norm2(Q);
}

}  // namespace ksexact
