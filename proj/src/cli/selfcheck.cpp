#include "ksexact/selfcheck.hpp"

#include <cstdio>
#include <functional>
#include <random>

#include "ksexact/diagnostics.hpp"
#include "ksexact/ks_map.hpp"
#include "ksexact/oscillator.hpp"
#include "ksexact/propagator.hpp"
#include "ksexact/time_map.hpp"

namespace ksexact {

namespace {

template <std::size_t N>
double rel_diff(const Vec<N>& a, const Vec<N>& b) {
    const double s = std::fmax(max_abs(b), 1e-300);
    return max_abs(a - b) / s;
}

double rel_diff(double a, double b) { return std::fabs(a - b) / std::fmax(std::fabs(b), 1e-300); }

struct Rng {
    std::mt19937_64 eng{20240607};
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
    Vec3 direction() {
        std::normal_distribution<double> g;
        Vec3 v{{g(eng), g(eng), g(eng)}};
        return (1.0 / norm(v)) * v;
    }
    Vec3 position() { return uniform(0.1, 10.0) * direction(); }
    Vec3 momentum() { return Vec3{{uniform(-1.5, 1.5), uniform(-1.5, 1.5), uniform(-1.5, 1.5)}}; }
};

double ks_roundtrip() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 q = rng.position();
        const Vec3 p = rng.momentum();
        const auto [Q, P] = ks_lift(q, p);
        const auto back = ks_project(Q, P);
        worst = std::fmax(worst, rel_diff(back.q, q));
        worst = std::fmax(worst, rel_diff(back.p, p));
        worst = std::fmax(worst, 10.0 * std::fabs(bilinear_constraint(Q, P)) / constraint_scale(Q, P));
    }
    return worst;
}

double ks_identities() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto [Q, P] = ks_lift(rng.position(), rng.momentum());
        const auto [q, p] = ks_project(Q, P);
        const double Q2 = norm2(Q);
        worst = std::fmax(worst, rel_diff(norm2(q), Q2 * Q2));
        worst = std::fmax(worst, rel_diff(norm2(P), 4.0 * norm2(p) * Q2));
        // Energy-law equivalence: |P|²/8 - E|Q|² reproduces k.
        const double k = rng.uniform(0.5, 2.0);
        const double E = energy(q, p, k);
        worst = std::fmax(worst, std::fabs(oscillator_invariant(Q, P, E) - k) /
                                     std::fmax(k, std::fabs(E) * Q2));
    }
    return worst;
}

double oscillator_exactness() {
    const Vec4 Q{{0.3, -0.7, 0.2, 0.5}};
    const Vec4 P{{1.1, 0.4, -0.9, 0.6}};
    double worst = 0.0;
    for (double E : {-0.5, 0.0, 2.0})
        for (double h : {0.01, 0.5, 1.0}) {
            const auto ex = exact_step(Q, P, E, h);
            const auto mid = midpoint_form_step(Q, P, E, delta(E, h));
            worst = std::fmax(worst, rel_diff(mid.Q, ex.Q));
            worst = std::fmax(worst, rel_diff(mid.P, ex.P));
            const auto two = exact_step(ex.Q, ex.P, E, 0.5 * h);
            const auto one = exact_step(Q, P, E, 1.5 * h);
            worst = std::fmax(worst, rel_diff(two.Q, one.Q) * 0.1);
        }
    return worst;
}

double omega_identity() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double E = rng.uniform(-5.0, 5.0);
        const Mat4 om = omega_matrix(E);
        const Mat4 om2 = om * om;
        const Mat4 diff = om2 * om2 + (-2.0 * E) * om2;
        worst = std::fmax(worst, diff.max_abs() / std::fmax(1.0, E * E));
    }
    return worst;
}

double time_formulas() {
    Rng rng;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double k = 1.0;
        const auto [Q, P] = ks_lift(rng.position(), rng.momentum());
        const auto [q, p] = ks_project(Q, P);
        const double E = energy(q, p, k);
        const double h = rng.uniform(0.01, 1.0);
        const double t0 = rng.uniform(0.0, 10.0);
        const double a = exp_omega(E, h).apply(ExtendedState::from(Q, P, t0)).t - t0;
        const double b = time_step(Q, P, t0, E, h) - t0;
        const double c = time_step_energy_form(Q, P, t0, E, k, h) - t0;
        worst = std::fmax(worst, std::fmax(rel_diff(a, b), std::fmax(rel_diff(b, c), rel_diff(a, c))));
    }
    return worst;
}

double exact_propagation() {
    const KeplerState init{{{0.4, 0.0, 0.0}}, {{0.0, 2.0, 0.0}}, 0.0};
    const auto traj = propagate_exact(init, 1.0, FixedFictitious{0.1, 500});
    const auto err = trajectory_error(traj, 1.0);
    return std::fmax(err.max_abs_position_error, err.max_abs_momentum_error);
}

double conservation() {
    const KeplerState init{{{0.4, 0.0, 0.0}}, {{0.0, 2.0, 0.0}}, 0.0};
    const auto traj = propagate_exact(init, 1.0, FixedFictitious{0.1, 630});
    const auto rep = conservation_report(traj, 1.0);
    return std::fmax(std::fmax(rep.energy_drift, rep.angmom_drift),
                     std::fmax(rep.lrl_drift, rep.constraint_residual_max.value_or(0.0)));
}

}  // namespace

std::vector<CheckGroupResult> run_selfcheck(const SelfcheckOptions& opts) {
    struct Group {
        const char* name;
        std::function<double()> run;
        double threshold;
    };
    const std::vector<Group> groups = {
        {"ks_roundtrip", ks_roundtrip, 1e-12},
        {"ks_identities", ks_identities, 1e-13},
        {"oscillator_exactness", oscillator_exactness, 1e-13},
        {"omega_identity", omega_identity, 1e-13},
        {"time_formulas", time_formulas, 1e-12},
        {"exact_propagation", exact_propagation, 1e-10},
        {"conservation", conservation, 1e-11},
    };
    std::vector<CheckGroupResult> out;
    for (const auto& g : groups) {
        CheckGroupResult r;
        r.name = g.name;
        r.threshold = g.threshold;
        try {
            r.worst = g.run();
        } catch (const std::exception&) {
            r.worst = std::numeric_limits<double>::infinity();
        }
        if (opts.inject_fault == g.name) r.worst += 1e3 * g.threshold;
        r.passed = r.worst <= g.threshold;
        out.push_back(r);
    }
    return out;
}

int report_selfcheck(const std::vector<CheckGroupResult>& results, std::ostream& out) {
    bool ok = true;
    for (const auto& r : results) {
        char line[160];
        std::snprintf(line, sizeof line, "%-4s %-22s worst=%.3e threshold=%.1e\n",
                      r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.threshold);
        out << line;
        ok = ok && r.passed;
    }
    out << (ok ? "selfcheck: all groups passed\n" : "selfcheck: FAILED\n");
    return ok ? 0 : 1;
}

}  // namespace ksexact
