#include "ksexact/propagator.hpp"

#include <numbers>

#include "ksexact/diagnostics.hpp"
#include "ksexact/ks_map.hpp"
#include "ksexact/oscillator.hpp"
#include "ksexact/time_map.hpp"

namespace ksexact {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::ExactKS: return "exact";
        case Method::MidpointKS: return "midpoint";
        case Method::RK4: return "rk4";
        case Method::StormerVerlet: return "verlet";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
    for (Method m : {Method::ExactKS, Method::MidpointKS, Method::RK4, Method::StormerVerlet})
        if (method_name(m) == name) return m;
    return std::nullopt;
}

namespace {

void validate_common(const KeplerState& initial, double k, int n_steps) {
    require_noncollision(initial.q, "propagate");
    if (!is_finite(initial.p) || !std::isfinite(initial.t))
        throw Error(ErrorKind::InvalidArgument, "propagate: non-finite initial state");
    if (!(k > 0.0) || !std::isfinite(k))
        throw Error(ErrorKind::InvalidArgument, "propagate: k must be > 0");
    if (n_steps < 0) throw Error(ErrorKind::InvalidArgument, "propagate: n_steps must be >= 0");
}

void require_positive_step(double h, const char* name) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw Error(ErrorKind::InvalidArgument, std::string("propagate: ") + name + " must be > 0");
}

Sample ks_sample(double s, double t, const Vec4& Q, const Vec4& P, double k) {
    const auto [q, p] = ks_project(Q, P);
    Sample smp;
    smp.s = s;
    smp.t = t;
    smp.kepler = {q, p, t};
    smp.oscillator = OscillatorState{Q, P, s};
    smp.diagnostics = {energy(q, p, k), angular_momentum(q, p), bilinear_constraint(Q, P)};
    return smp;
}

Sample plain_sample(const KeplerState& st, double k) {
    Sample smp;
    smp.s = st.t;
    smp.t = st.t;
    smp.kepler = st;
    smp.diagnostics = {energy(st.q, st.p, k), angular_momentum(st.q, st.p), std::nullopt};
    return smp;
}

}  // namespace

Trajectory propagate_exact(const KeplerState& initial, double k, const Schedule& schedule) {
    const int n_steps = std::visit([](const auto& s) { return s.n_steps; }, schedule);
    validate_common(initial, k, n_steps);
    const double E = energy(initial.q, initial.p, k);

    Trajectory traj;
    traj.meta.method = std::string(method_name(Method::ExactKS));
    traj.meta.params = {k, E};

    auto [Q, P] = ks_lift(initial.q, initial.p);
    double t = initial.t;
    double s = 0.0;
    traj.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.samples.push_back(ks_sample(s, t, Q, P, k));

    if (const auto* ff = std::get_if<FixedFictitious>(&schedule)) {
        require_positive_step(ff->h, "h");
        traj.meta.schedule = "fictitious";
        traj.meta.step_sizes = {ff->h};
        for (int j = 1; j <= n_steps; ++j) {
            t = time_step(Q, P, t, E, ff->h);
            const auto next = exact_step(Q, P, E, ff->h);
            Q = next.Q;
            P = next.P;
            s = j * ff->h;
            traj.samples.push_back(ks_sample(s, t, Q, P, k));
        }
        return traj;
    }

    const auto& fp = std::get<FixedPhysical>(schedule);
    require_positive_step(fp.dt, "dt");
    traj.meta.schedule = "physical";
    traj.meta.step_sizes = {fp.dt};
    // Sub-step used when an elliptic interval needs more than ω h < π.
    const double split_h = E < 0.0 ? 0.5 * std::numbers::pi / std::sqrt(-E / 2.0) : 0.0;
    for (int j = 1; j <= n_steps; ++j) {
        double remaining = fp.dt;
        for (int guard = 0;; ++guard) {
            if (guard > 1000000)
                throw Error(ErrorKind::StepTooLarge, "propagate_exact: interval splitting did not terminate");
            if (E < 0.0) {
                const double reach = time_step(Q, P, 0.0, E, split_h);
                if (reach < remaining) {
                    t = time_step(Q, P, t, E, split_h);
                    const auto next = exact_step(Q, P, E, split_h);
                    Q = next.Q;
                    P = next.P;
                    s += split_h;
                    remaining -= reach;
                    continue;
                }
            }
            const double h = solve_step_for_time(Q, P, t, E, remaining);
            t = time_step(Q, P, t, E, h);
            const auto next = exact_step(Q, P, E, h);
            Q = next.Q;
            P = next.P;
            s += h;
            break;
        }
        traj.samples.push_back(ks_sample(s, t, Q, P, k));
    }
    return traj;
}

Trajectory propagate_midpoint_ks(const KeplerState& initial, double k, double h, int n_steps) {
    validate_common(initial, k, n_steps);
    require_positive_step(h, "h");
    const double E = energy(initial.q, initial.p, k);

    Trajectory traj;
    traj.meta.method = std::string(method_name(Method::MidpointKS));
    traj.meta.params = {k, E};
    traj.meta.schedule = "fictitious";
    traj.meta.step_sizes = {h};

    auto [Q, P] = ks_lift(initial.q, initial.p);
    double t = initial.t;
    traj.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.samples.push_back(ks_sample(0.0, t, Q, P, k));
    for (int j = 1; j <= n_steps; ++j) {
        const auto next = midpoint_form_step(Q, P, E, h);
        t += h * norm2(0.5 * (Q + next.Q));
        Q = next.Q;
        P = next.P;
        traj.samples.push_back(ks_sample(j * h, t, Q, P, k));
    }
    return traj;
}

namespace {

Vec3 acceleration(const Vec3& q, double k) {
    const double r2 = norm2(q);
    const double r = std::sqrt(r2);
    return (-k / (r2 * r)) * q;
}

}  // namespace

Trajectory propagate_baseline(const KeplerState& initial, double k, double dt, int n_steps,
                              Method method) {
    validate_common(initial, k, n_steps);
    require_positive_step(dt, "dt");
    if (method != Method::RK4 && method != Method::StormerVerlet)
        throw Error(ErrorKind::InvalidArgument, "propagate_baseline: method must be rk4 or verlet");

    Trajectory traj;
    traj.meta.method = std::string(method_name(method));
    traj.meta.params = {k, energy(initial.q, initial.p, k)};
    traj.meta.schedule = "physical";
    traj.meta.step_sizes = {dt};

    const double r_min = 1e-9 * norm(initial.q);
    KeplerState st = initial;
    traj.samples.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.samples.push_back(plain_sample(st, k));
    for (int j = 1; j <= n_steps; ++j) {
        KeplerState nx;
        if (method == Method::RK4) {
            const Vec3 k1q = st.p, k1p = acceleration(st.q, k);
            const Vec3 k2q = st.p + (0.5 * dt) * k1p, k2p = acceleration(st.q + (0.5 * dt) * k1q, k);
            const Vec3 k3q = st.p + (0.5 * dt) * k2p, k3p = acceleration(st.q + (0.5 * dt) * k2q, k);
            const Vec3 k4q = st.p + dt * k3p, k4p = acceleration(st.q + dt * k3q, k);
            nx.q = st.q + (dt / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
            nx.p = st.p + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        } else {
            const Vec3 p_half = st.p + (0.5 * dt) * acceleration(st.q, k);
            nx.q = st.q + dt * p_half;
            nx.p = p_half + (0.5 * dt) * acceleration(nx.q, k);
        }
        nx.t = initial.t + j * dt;
        if (!is_finite(nx.q) || !is_finite(nx.p) || !(norm(nx.q) >= r_min)) {
            traj.meta.aborted = true;
            traj.meta.abort_reason = "collision approach at step " + std::to_string(j);
            break;
        }
        st = nx;
        traj.samples.push_back(plain_sample(st, k));
    }
    return traj;
}

}  // namespace ksexact
