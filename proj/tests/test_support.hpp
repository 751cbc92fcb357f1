#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "ksexact/core.hpp"
#include "ksexact/ks_map.hpp"

namespace ksexact::testing {

template <std::size_t N>
double rel_err(const Vec<N>& got, const Vec<N>& want) {
    return max_abs(got - want) / std::fmax(max_abs(want), 1e-300);
}

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::fmax(std::fabs(want), 1e-300);
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

    Vec3 direction() {
        std::normal_distribution<double> g;
        Vec3 v{{g(eng_), g(eng_), g(eng_)}};
        return (1.0 / norm(v)) * v;
    }

    // |q| uniform in [rmin, rmax] along a random direction.
    Vec3 position(double rmin = 0.1, double rmax = 10.0) { return uniform(rmin, rmax) * direction(); }

    Vec3 cube(double half) { return Vec3{{uniform(-half, half), uniform(-half, half), uniform(-half, half)}}; }

    Vec4 vec4(double half) {
        return Vec4{{uniform(-half, half), uniform(-half, half), uniform(-half, half), uniform(-half, half)}};
    }

    // Random uniform orthogonal matrix (rows) via Gram-Schmidt.
    std::array<Vec3, 3> rotation() {
        std::array<Vec3, 3> r;
        r[0] = direction();
        Vec3 b = direction();
        b = b - dot(b, r[0]) * r[0];
        r[1] = (1.0 / norm(b)) * b;
        r[2] = cross(r[0], r[1]);
        return r;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline Vec3 apply(const std::array<Vec3, 3>& m, const Vec3& v) {
    return Vec3{{dot(m[0], v), dot(m[1], v), dot(m[2], v)}};
}

// Classical RK4 with fixed step on a generic first-order system; used as an
// independent reference for the linear oscillator and the two-body flow.
template <class State, class Rhs>
State rk4_reference(State y, double span, int n, Rhs rhs) {
    const double h = span / n;
    for (int i = 0; i < n; ++i) {
        const State k1 = rhs(y);
        const State k2 = rhs(y + (0.5 * h) * k1);
        const State k3 = rhs(y + (0.5 * h) * k2);
        const State k4 = rhs(y + h * k3);
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// Adaptive Simpson quadrature.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 50) {
    std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
            int d) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
               rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

}  // namespace ksexact::testing
