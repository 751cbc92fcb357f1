#include <numbers>

#include "doctest.h"
#include "ksexact/ks_map.hpp"
#include "ksexact/oscillator.hpp"
#include "test_support.hpp"

using namespace ksexact;
using ksexact::testing::Gen;
using ksexact::testing::rel_err;

namespace {

constexpr double pi = std::numbers::pi;

// Power series written out independently of the library's Stumpff code.
double taylor_cosh(double x) {
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 40; ++n) {
        term *= x * x / ((2.0 * n - 1.0) * (2.0 * n));
        sum += term;
    }
    return sum;
}

double taylor_sinh(double x) {
    double term = x, sum = x;
    for (int n = 1; n < 40; ++n) {
        term *= x * x / ((2.0 * n) * (2.0 * n + 1.0));
        sum += term;
    }
    return sum;
}

using State8 = Vec<8>;

// Reference: fine-step RK4 on dQ/ds = P/4, dP/ds = 2E Q.
OscillatorPair reference_flow(const Vec4& Q, const Vec4& P, double E, double h, int n = 4096) {
    State8 y;
    for (int i = 0; i < 4; ++i) {
        y[static_cast<std::size_t>(i)] = Q[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(i + 4)] = P[static_cast<std::size_t>(i)];
    }
    auto rhs = [E](const State8& s) {
        State8 d;
        for (std::size_t i = 0; i < 4; ++i) {
            d[i] = 0.25 * s[i + 4];
            d[i + 4] = 2.0 * E * s[i];
        }
        return d;
    };
    y = testing::rk4_reference(y, h, n, rhs);
    OscillatorPair out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.Q[i] = y[i];
        out.P[i] = y[i + 4];
    }
    return out;
}

double state_rel_err(const OscillatorPair& a, const OscillatorPair& b) {
    return std::fmax(rel_err(a.Q, b.Q), rel_err(a.P, b.P));
}

}  // namespace

TEST_CASE("kernels at hand-checked points") {
    const auto a = kernels(-0.5, pi);
    CHECK(std::fabs(a.c) <= 1e-15);
    CHECK(a.s_over_w == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(a.w2 == 0.25);

    const auto b = kernels(0.0, 2.0);
    CHECK(b.c == 1.0);
    CHECK(b.s_over_w == 2.0);

    const auto c = kernels(2.0, 1.0);
    CHECK(rel_err(c.c, taylor_cosh(1.0)) <= 1e-15);
    CHECK(rel_err(c.s_over_w, taylor_sinh(1.0)) <= 1e-15);
    CHECK(c.c == doctest::Approx(1.5430806).epsilon(1e-7));
    CHECK(c.s_over_w == doctest::Approx(1.1752012).epsilon(1e-7));
    CHECK(c.w2 == -1.0);
}

TEST_CASE("Stumpff series and closed forms meet at the threshold") {
    for (double z : {-1.0, 1.0}) {
        const double below = std::nextafter(z, 0.0);
        const auto s0 = stumpff(below);
        const auto s1 = stumpff(z);
        CHECK(rel_err(s0.c0, s1.c0) <= 1e-15);
        CHECK(rel_err(s0.c1, s1.c1) <= 1e-15);
        CHECK(rel_err(s0.c2, s1.c2) <= 1e-15);
        CHECK(rel_err(s0.c3, s1.c3) <= 1e-14);
    }
    // c3(1) = 1 - sin 1 = 0.158529015192103...
    CHECK(rel_err(stumpff(1.0).c3, 1.0 - std::sin(1.0)) <= 1e-15);
    CHECK(stumpff(0.0).c2 == 0.5);
    CHECK(stumpff(0.0).c3 == doctest::Approx(1.0 / 6.0).epsilon(1e-16));
}

TEST_CASE("kernels satisfy c^2 + w2 s^2 = 1 in every regime") {
    Gen gen(8);
    for (int i = 0; i < 2000; ++i) {
        const double E = gen.uniform(-4.0, 4.0) * std::pow(10.0, gen.uniform(-10.0, 0.0));
        const double h = gen.uniform(-1.5, 1.5);
        const auto kr = kernels(E, h);
        const double lhs = kr.c * kr.c + kr.w2 * kr.s_over_w * kr.s_over_w;
        CHECK(std::fabs(lhs - 1.0) <= 1e-14 * std::fmax(1.0, kr.c * kr.c));
    }
}

TEST_CASE("delta values and pole") {
    CHECK(rel_err(delta(-0.5, pi * 0.999999), 4.0 * std::tan(pi * 0.999999 / 4.0)) <= 1e-14);
    CHECK(rel_err(delta(-0.5, pi), 4.0) <= 1e-15);
    CHECK(delta(0.0, 0.37) == 0.37);
    CHECK(delta(0.0, -2.0) == -2.0);
    CHECK(rel_err(delta(2.0, 2.0), 2.0 * std::tanh(1.0)) <= 1e-15);
    CHECK(delta(2.0, 2.0) == doctest::Approx(1.5231883).epsilon(1e-7));

    // ω = 0.5: pole at |h| = 2π.
    try {
        delta(-0.5, 2.0 * pi);
        FAIL("expected pole");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepTooLarge);
    }
    CHECK_THROWS_AS(delta(-0.5, -7.0), Error);
    CHECK_NOTHROW(delta(-0.5, 6.28));
}

TEST_CASE("delta is continuous across E = 0") {
    CHECK(std::fabs(delta(1e-8, 1.0) - delta(-1e-8, 1.0)) <= 1e-9);
    // δ(h) = h (1 + ω²h²/12 + ...) with ω² = -E/2.
    for (double E : {1e-8, -1e-8, 1e-6, -1e-6}) {
        const double h = 1.0;
        const double taylor = h * (1.0 + (-E / 2.0) * h * h / 12.0);
        CHECK(std::fabs(delta(E, h) - taylor) <= 1e-14);
    }
}

TEST_CASE("exact_step special cases") {
    const auto q = exact_step({{1, 0, 0, 0}}, {{0, 0, 0, 0}}, -0.5, pi);
    CHECK(max_abs(q.Q) <= 1e-15);
    CHECK(rel_err(q.P, Vec4{{-2, 0, 0, 0}}) <= 1e-15);

    Gen gen(4);
    for (int i = 0; i < 20; ++i) {
        const Vec4 Q = gen.vec4(1.0), P = gen.vec4(1.0);
        const auto id = exact_step(Q, P, gen.uniform(-3.0, 3.0), 0.0);
        CHECK(id.Q == Q);
        CHECK(id.P == P);
    }
}

TEST_CASE("exact_step matches a fine-step reference solution") {
    const auto got = exact_step({{1, 0, 0, 0}}, {{0, 2, 0, 0}}, -0.5, 0.7);
    const auto ref = reference_flow({{1, 0, 0, 0}}, {{0, 2, 0, 0}}, -0.5, 0.7);
    CHECK(max_abs(got.Q - ref.Q) <= 1e-12);
    CHECK(max_abs(got.P - ref.P) <= 1e-12);

    Gen gen(12);
    for (int i = 0; i < 10; ++i) {
        const Vec4 Q = gen.vec4(1.0), P = gen.vec4(1.0);
        const double E = gen.uniform(-2.0, 2.0);
        const double h = gen.uniform(-1.2, 1.2);
        CHECK(state_rel_err(exact_step(Q, P, E, h), reference_flow(Q, P, E, h)) <= 1e-12);
    }
}

TEST_CASE("exact_step is a flow (group property)") {
    Gen gen(21);
    for (int i = 0; i < 300; ++i) {
        const Vec4 Q = gen.vec4(1.0), P = gen.vec4(2.0);
        const double E = gen.uniform(-2.0, 2.0);
        const double h1 = gen.uniform(-1.0, 1.0), h2 = gen.uniform(-1.0, 1.0);
        const auto a = exact_step(Q, P, E, h1);
        const auto two = exact_step(a.Q, a.P, E, h2);
        const auto one = exact_step(Q, P, E, h1 + h2);
        // relative to the state scale (components can pass through zero)
        const double scale = std::fmax(max_abs(one.Q), max_abs(one.P) / 4.0);
        CHECK(max_abs(two.Q - one.Q) <= 1e-13 * scale);
        CHECK(max_abs(two.P - one.P) <= 4e-13 * scale);
    }
}

TEST_CASE("oscillator_invariant values and conservation") {
    CHECK(oscillator_invariant({{1, 0, 0, 0}}, {{0, 2, 0, 0}}, -0.5) == 1.0);
    CHECK(oscillator_invariant({{0, 0, 0, 0}}, {{0, 0, 0, 0}}, 3.0) == 0.0);

    Gen gen(31);
    for (int i = 0; i < 300; ++i) {
        const Vec4 Q = gen.vec4(1.0), P = gen.vec4(2.0);
        const double E = (i == 0) ? 2.0 : gen.uniform(-2.0, 2.0);
        const double h = (i == 0) ? 1.3 : gen.uniform(-1.3, 1.3);
        const double before = oscillator_invariant(Q, P, E);
        const double scale = norm2(P) / 8.0 + std::fabs(E) * norm2(Q);
        const auto ex = exact_step(Q, P, E, h);
        CHECK(std::fabs(oscillator_invariant(ex.Q, ex.P, E) - before) <= 1e-13 * scale);
        const double d = gen.uniform(-1.0, 1.0);
        const auto mid = midpoint_form_step(Q, P, E, d);
        CHECK(std::fabs(oscillator_invariant(mid.Q, mid.P, E) - before) <= 1e-13 * scale);
    }
}

TEST_CASE("exact_step preserves the bilinear constraint") {
    Gen gen(41);
    for (int i = 0; i < 300; ++i) {
        const auto [Q, P] = ks_lift(gen.position(), gen.cube(1.5));
        const double E = gen.uniform(-2.0, 2.0);
        const auto ex = exact_step(Q, P, E, gen.uniform(-2.0, 2.0));
        CHECK(std::fabs(bilinear_constraint(ex.Q, ex.P)) <= 1e-13 * constraint_scale(ex.Q, ex.P));
    }
}

TEST_CASE("midpoint form with delta(h) equals the explicit exact step") {
    const Vec4 Q{{1, 0, 0, 0}}, P{{0, 2, 0, 0}};
    {
        const auto mid = midpoint_form_step(Q, P, -0.5, delta(-0.5, 0.7));
        const auto ex = exact_step(Q, P, -0.5, 0.7);
        CHECK(max_abs(mid.Q - ex.Q) <= 1e-14);
        CHECK(max_abs(mid.P - ex.P) <= 1e-14);
    }
    Gen gen(51);
    for (double E : {-0.5, 0.0, 2.0})
        for (double h : {0.01, 0.5, 1.0, 5.0}) {
            if (h == 5.0 && E >= 0.0) continue;  // 5.0 is the extra elliptic sample (ωh < π)
            for (int i = 0; i < 10; ++i) {
                const Vec4 Qr = gen.vec4(1.0), Pr = gen.vec4(1.0);
                const auto mid = midpoint_form_step(Qr, Pr, E, delta(E, h));
                const auto ex = exact_step(Qr, Pr, E, h);
                CHECK(state_rel_err(mid, ex) <= 1e-13);
            }
        }
}

TEST_CASE("midpoint_form_step edge cases") {
    const Vec4 Q{{0.3, 0.1, -0.2, 0.4}}, P{{1, -1, 0.5, 0.2}};
    const auto id = midpoint_form_step(Q, P, -0.5, 0.0);
    CHECK(id.Q == Q);
    CHECK(id.P == P);
    // 1 - E d²/8 = 0 at E = 8, d = 1.
    try {
        midpoint_form_step(Q, P, 8.0, 1.0);
        FAIL("expected singular system");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::StepTooLarge);
    }
    CHECK_NOTHROW(midpoint_form_step(Q, P, -8.0, 1.0));
}

TEST_CASE("midpoint form with d = h is second order") {
    const Vec4 Q{{1, 0, 0, 0}}, P{{0, 2, 0, 0}};
    const double E = -0.5;
    // Local: one step of h = 0.1 deviates from exact by O(h³) and keeps the invariant.
    const auto mid = midpoint_form_step(Q, P, E, 0.1);
    const auto ex = exact_step(Q, P, E, 0.1);
    CHECK(std::fabs(oscillator_invariant(mid.Q, mid.P, E) - 1.0) <= 1e-14);
    const double local = std::fmax(max_abs(mid.Q - ex.Q), max_abs(mid.P - ex.P));
    CHECK(local > 0.0);
    CHECK(local < 1e-3);

    // Global error over s in [0, 4]: halving h divides it by about 4.
    auto global_error = [&](double h) {
        Vec4 q = Q, p = P;
        const int n = static_cast<int>(std::lround(4.0 / h));
        for (int j = 0; j < n; ++j) {
            const auto nx = midpoint_form_step(q, p, E, h);
            q = nx.Q;
            p = nx.P;
        }
        const auto ref = exact_step(Q, P, E, 4.0);
        return std::fmax(max_abs(q - ref.Q), max_abs(p - ref.P));
    };
    const double ratio = global_error(0.1) / global_error(0.05);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
}
