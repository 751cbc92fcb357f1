#include "ksexact/time_map.hpp"

#include <limits>
#include <numbers>

#include "ksexact/oscillator.hpp"

namespace ksexact {

Mat4 Mat4::identity() {
    Mat4 m;
    for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
    return m;
}

Mat4 operator*(const Mat4& x, const Mat4& y) {
    Mat4 m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += x(r, k) * y(k, c);
            m(r, c) = s;
        }
    return m;
}

Mat4 operator+(const Mat4& x, const Mat4& y) {
    Mat4 m;
    for (std::size_t i = 0; i < 16; ++i) m.a[i] = x.a[i] + y.a[i];
    return m;
}

Mat4 operator*(double s, const Mat4& x) {
    Mat4 m;
    for (std::size_t i = 0; i < 16; ++i) m.a[i] = s * x.a[i];
    return m;
}

ExtendedState Mat4::apply(const ExtendedState& w) const {
    const std::array<double, 4> v{w.w1, w.w2, w.w3, w.t};
    std::array<double, 4> out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[static_cast<std::size_t>(r)] += (*this)(r, c) * v[static_cast<std::size_t>(c)];
    return {out[0], out[1], out[2], out[3]};
}

double Mat4::max_abs() const {
    double m = 0.0;
    for (double x : a) m = std::fmax(m, std::fabs(x));
    return m;
}

Mat4 omega_matrix(double E) {
    Mat4 m;
    m(0, 2) = 0.5;
    m(1, 2) = 4.0 * E;
    m(2, 0) = 2.0 * E;
    m(2, 1) = 0.25;
    m(3, 0) = 1.0;
    return m;
}

Mat4 exp_omega(double E, double h) {
    const Mat4 om = omega_matrix(E);
    const Mat4 om2 = om * om;
    const Mat4 om3 = om2 * om;
    const Stumpff st = stumpff(-2.0 * E * h * h);
    return Mat4::identity() + h * om + (h * h * st.c2) * om2 + (h * h * h * st.c3) * om3;
}

namespace {

// Coefficients of |Q|², |P|², Q·P in ∫₀ʰ |Q(s)|² ds. In trigonometric form
// they read sin(2hω)/(4ω) + h/2, (h/2 - sin(2hω)/(4ω))/(16ω²) and
// sin²(hω)/(4ω²); here each is expressed through Stumpff functions of 4z so
// the same code covers E < 0, E = 0 and E > 0.
struct TimeCoefficients {
    double q2, p2, qp;
    double two_h_c1;  // sin(2hω)/(2ω)
    double h3_c3;     // (2hω - sin 2hω)/(8ω³)
};

TimeCoefficients time_coefficients(double E, double h) {
    const Stumpff st = stumpff(-2.0 * E * h * h);
    const double h3c3 = h * h * h * st.c3;
    return {0.5 * h * (1.0 + st.c1), h3c3 / 8.0, 0.5 * h * h * st.c2, h * st.c1, h3c3};
}

double time_increment(const Vec4& Q, const Vec4& P, double E, double h) {
    const TimeCoefficients tc = time_coefficients(E, h);
    return tc.q2 * norm2(Q) + tc.p2 * norm2(P) + tc.qp * dot(Q, P);
}

}  // namespace

double time_step(const Vec4& Q, const Vec4& P, double t, double E, double h) {
    return t + time_increment(Q, P, E, h);
}

double time_step_energy_form(const Vec4& Q, const Vec4& P, double t, double E, double k,
                             double h, double invariant_rel_tol) {
    const double q2 = norm2(Q);
    const double p2_8 = norm2(P) / 8.0;
    const double scale = std::fmax(std::fabs(k), std::fmax(p2_8, std::fabs(E) * q2));
    if (std::fabs(p2_8 - E * q2 - k) > invariant_rel_tol * scale)
        throw Error(ErrorKind::InconsistentInvariant,
                    "time_step_energy_form: |P|^2/8 - E|Q|^2 does not match k");
    const TimeCoefficients tc = time_coefficients(E, h);
    return t + k * tc.h3_c3 + tc.two_h_c1 * q2 + tc.qp * dot(Q, P);
}

double solve_step_for_time(const Vec4& Q, const Vec4& P, double /*t*/, double E,
                           double dt_target, const RootFindOptions& opts) {
    if (!(dt_target > 0.0) || !std::isfinite(dt_target))
        throw Error(ErrorKind::InvalidArgument, "solve_step_for_time: dt_target must be > 0");
    const double q2 = norm2(Q);
    if (!(q2 > 0.0))
        throw Error(ErrorKind::DegenerateFibre, "solve_step_for_time: |Q| must be > 0");

    auto residual = [&](double h) { return time_increment(Q, P, E, h) - dt_target; };
    auto slope = [&](double h) { return norm2(exact_step(Q, P, E, h).Q); };

    double lo = 0.0;
    double hi = 0.0;
    double h = dt_target / q2;
    if (E < 0.0) {
        hi = std::numbers::pi / std::sqrt(-E / 2.0);
        if (residual(hi) < 0.0)
            throw Error(ErrorKind::RootFind,
                        "solve_step_for_time: target not reachable within omega*h < pi");
        if (!(h < hi)) h = 0.5 * hi;
    } else {
        hi = h;
        int grow = 0;
        while (residual(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++grow > 200 || !std::isfinite(hi))
                throw Error(ErrorKind::RootFind, "solve_step_for_time: cannot bracket target");
        }
        if (!(h > lo && h < hi)) h = 0.5 * (lo + hi);
    }

    const double ftol = opts.rel_tol * dt_target * 0.25;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const double f = residual(h);
        if (std::fabs(f) <= ftol) return h;
        if (f < 0.0) lo = h; else hi = h;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return h;
        const double d = slope(h);
        double next = (d > 0.0) ? h - f / d : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        h = next;
    }
    throw Error(ErrorKind::RootFind, "solve_step_for_time: no convergence");
}

}  // namespace ksexact
