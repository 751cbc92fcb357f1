#pragma once

#include "ksexact/core.hpp"

namespace ksexact {

// w = (|Q|², |P|², Q·P, t). Along the oscillator flow with dt/ds = |Q|²
// it obeys the linear system dw/ds = Ω w.
struct ExtendedState {
    double w1 = 0.0;  // |Q|²
    double w2 = 0.0;  // |P|²
    double w3 = 0.0;  // Q·P
    double t = 0.0;

    static ExtendedState from(const Vec4& Q, const Vec4& P, double t) {
        return {norm2(Q), norm2(P), dot(Q, P), t};
    }
};

struct Mat4 {
    std::array<double, 16> a{};  // row-major

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(4 * r + c)]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(4 * r + c)]; }

    static Mat4 identity();
    friend Mat4 operator*(const Mat4& x, const Mat4& y);
    friend Mat4 operator+(const Mat4& x, const Mat4& y);
    friend Mat4 operator*(double s, const Mat4& x);
    ExtendedState apply(const ExtendedState& w) const;
    double max_abs() const;
};

// Ω with rows (0,0,1/2,0), (0,0,4E,0), (2E,1/4,0,0), (1,0,0,0).
// Satisfies Ω⁴ = 2E Ω².
Mat4 omega_matrix(double E);

// exp(hΩ) = I + hΩ + h² c2(4z) Ω² + h³ c3(4z) Ω³ with z = -E h²/2, which is
// the full series once Ω⁴ = 2E Ω² is used to fold the higher powers.
Mat4 exp_omega(double E, double h);

// Physical time after a fictitious step h: t + ∫₀ʰ |Q(s)|² ds evaluated in
// closed form from |Q|², |P|² and Q·P. Valid for every sign of E.
double time_step(const Vec4& Q, const Vec4& P, double t, double E, double h);

// Same increment with |P|² eliminated through |P|²/8 - E|Q|² = k.
// Throws InconsistentInvariant when that relation is off by more than
// invariant_rel_tol relative to max(|k|, |P|²/8, |E||Q|²).
double time_step_energy_form(const Vec4& Q, const Vec4& P, double t, double E, double k,
                             double h, double invariant_rel_tol = 1e-8);

struct RootFindOptions {
    double rel_tol = 1e-12;
    int max_iterations = 64;
};

// Finds h > 0 with time_step(Q, P, t, E, h) - t = dt_target by safeguarded
// Newton (dt/dh = |Q(s+h)|² > 0). On the elliptic branch h is confined to
// (0, π/ω); a target outside that window raises RootFind and the caller
// must split the interval.
double solve_step_for_time(const Vec4& Q, const Vec4& P, double t, double E, double dt_target,
                           const RootFindOptions& opts = {});

}  // namespace ksexact
