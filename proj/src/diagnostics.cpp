#include "ksexact/diagnostics.hpp"

#include <functional>
#include <limits>
#include <numbers>

#include "ksexact/ks_map.hpp"

namespace ksexact {

Vec3 angular_momentum(const Vec3& q, const Vec3& p) { return cross(q, p); }

Vec3 lrl_vector(const Vec3& q, const Vec3& p, double k) {
    require_noncollision(q, "lrl_vector");
    return cross(p, cross(q, p)) - (k / norm(q)) * q;
}

namespace {

constexpr double kParabolicBand = 1e-12;

// Monotone-increasing F with F' > 0: Newton iteration kept inside [lo, hi].
double safeguarded_newton(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          double x) {
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) lo = x; else hi = x;
        const double d = df(x);
        double next = (d > 0.0) ? x - fx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-15 * std::fmax(1.0, std::fabs(x)) ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::fmax(1.0, std::fabs(x)))
            return next;
        x = next;
    }
    throw Error(ErrorKind::Oracle, "analytic_reference: Kepler equation did not converge");
}

// Expand [lo, hi] around x0 until f changes sign.
void bracket(const std::function<double(double)>& f, double x0, double& lo, double& hi) {
    double w = 1.0;
    lo = x0 - w;
    hi = x0 + w;
    for (int i = 0; i < 200 && f(lo) > 0.0; ++i) { w *= 2.0; lo = x0 - w; }
    for (int i = 0; i < 200 && f(hi) < 0.0; ++i) { w *= 2.0; hi = x0 + w; }
    if (!(f(lo) <= 0.0 && f(hi) >= 0.0))
        throw Error(ErrorKind::Oracle, "analytic_reference: cannot bracket anomaly");
}

struct LagrangeCoefficients {
    double f, g, fdot, gdot;
};

}  // namespace

KeplerState analytic_reference(const KeplerState& initial, double k, double t_query) {
    const Vec3& q0 = initial.q;
    const Vec3& p0 = initial.p;
    require_noncollision(q0, "analytic_reference");
    if (!(k > 0.0)) throw Error(ErrorKind::InvalidArgument, "analytic_reference: k must be > 0");
    const double dt = t_query - initial.t;
    if (dt == 0.0) return initial;

    const double r0 = norm(q0);
    if (!(norm(cross(q0, p0)) > 1e-14 * r0 * norm(p0)) || norm2(p0) == 0.0)
        throw Error(ErrorKind::Oracle, "analytic_reference: rectilinear orbit (L = 0)");

    const double E = energy(q0, p0, k);
    const double sk = std::sqrt(k);
    const double sigma0 = dot(q0, p0) / sk;
    LagrangeCoefficients lc{};

    if (std::fabs(E) * r0 / k <= kParabolicBand) {
        // sqrt(k) dt = r0 x + sigma0 x²/2 + x³/6
        auto F = [&](double x) { return r0 * x + 0.5 * sigma0 * x * x + x * x * x / 6.0 - sk * dt; };
        auto dF = [&](double x) { return r0 + sigma0 * x + 0.5 * x * x; };
        double lo = 0.0, hi = 0.0;
        const double x0 = sk * dt / r0;
        bracket(F, x0, lo, hi);
        const double x = safeguarded_newton(F, dF, lo, hi, x0);
        const double r = dF(x);
        lc.f = 1.0 - x * x / (2.0 * r0);
        lc.g = dt - x * x * x / (6.0 * sk);
        lc.fdot = -sk * x / (r * r0);
        lc.gdot = 1.0 - x * x / (2.0 * r);
    } else if (E < 0.0) {
        const double a = -k / (2.0 * E);
        const double sa = std::sqrt(a);
        const double n = sk / (a * sa);
        const double period = 2.0 * std::numbers::pi / n;
        const double dtr = dt - std::round(dt / period) * period;
        const double es = sigma0 / sa;      // e sin E0
        const double ec = 1.0 - r0 / a;     // e cos E0
        const double M = n * dtr;
        auto one_minus_cos = [](double x) { const double s = std::sin(0.5 * x); return 2.0 * s * s; };
        auto F = [&](double x) { return x + es * one_minus_cos(x) - ec * std::sin(x) - M; };
        auto dF = [&](double x) { return 1.0 + es * std::sin(x) - ec * std::cos(x); };
        const double x = safeguarded_newton(F, dF, M - 3.0, M + 3.0, M);
        const double omc = one_minus_cos(x);
        const double r = a * dF(x);
        lc.f = 1.0 - (a / r0) * omc;
        lc.g = dtr - (x - std::sin(x)) / n;
        lc.fdot = -std::sqrt(k * a) * std::sin(x) / (r * r0);
        lc.gdot = 1.0 - (a / r) * omc;
    } else {
        const double alpha = k / (2.0 * E);
        const double sal = std::sqrt(alpha);
        const double n = sk / (alpha * sal);
        const double es = sigma0 / sal;     // e sinh H0
        const double ec = 1.0 + r0 / alpha; // e cosh H0
        const double M = n * dt;
        auto cosh_minus_one = [](double x) { const double s = std::sinh(0.5 * x); return 2.0 * s * s; };
        auto F = [&](double x) { return es * cosh_minus_one(x) + ec * std::sinh(x) - x - M; };
        auto dF = [&](double x) { return es * std::sinh(x) + ec * std::cosh(x) - 1.0; };
        double lo = 0.0, hi = 0.0;
        const double x0 = std::asinh(M / ec);
        bracket(F, x0, lo, hi);
        const double x = safeguarded_newton(F, dF, lo, hi, x0);
        const double cm1 = cosh_minus_one(x);
        const double r = alpha * dF(x);
        lc.f = 1.0 - (alpha / r0) * cm1;
        lc.g = dt - (std::sinh(x) - x) / n;
        lc.fdot = -std::sqrt(k * alpha) * std::sinh(x) / (r * r0);
        lc.gdot = 1.0 - (alpha / r) * cm1;
    }

    KeplerState out;
    out.q = lc.f * q0 + lc.g * p0;
    out.p = lc.fdot * q0 + lc.gdot * p0;
    out.t = t_query;
    return out;
}

namespace {

double scalar_drift(double value, double ref) {
    const double d = std::fabs(value - ref);
    return std::fabs(ref) > kRelativeDriftFloor ? d / std::fabs(ref) : d;
}

double vector_drift(const Vec3& value, const Vec3& ref) {
    const double d = max_abs(value - ref);
    const double m = norm(ref);
    return m > kRelativeDriftFloor ? d / m : d;
}

}  // namespace

ConservationReport conservation_report(const Trajectory& traj, double k, bool with_series) {
    if (traj.samples.empty())
        throw Error(ErrorKind::EmptyTrajectory, "conservation_report: trajectory has no samples");
    const auto& first = traj.samples.front().kepler;
    const double E0 = energy(first.q, first.p, k);
    const Vec3 L0 = angular_momentum(first.q, first.p);
    const Vec3 A0 = lrl_vector(first.q, first.p, k);

    ConservationReport rep;
    for (const auto& smp : traj.samples) {
        const auto& ks = smp.kepler;
        const double E = energy(ks.q, ks.p, k);
        rep.energy_drift = std::fmax(rep.energy_drift, scalar_drift(E, E0));
        rep.angmom_drift = std::fmax(rep.angmom_drift, vector_drift(angular_momentum(ks.q, ks.p), L0));
        rep.lrl_drift = std::fmax(rep.lrl_drift, vector_drift(lrl_vector(ks.q, ks.p, k), A0));
        if (smp.oscillator) {
            const auto& os = *smp.oscillator;
            const double scale = constraint_scale(os.Q, os.P);
            const double c = std::fabs(bilinear_constraint(os.Q, os.P));
            const double rel = scale > 0.0 ? c / scale : c;
            rep.constraint_residual_max = std::fmax(rep.constraint_residual_max.value_or(0.0), rel);
        }
        if (with_series) rep.energy_series.push_back(E);
    }
    return rep;
}

ErrorStats trajectory_error(const Trajectory& traj, double k) {
    if (traj.samples.empty())
        throw Error(ErrorKind::EmptyTrajectory, "trajectory_error: trajectory has no samples");
    const KeplerState& init = traj.samples.front().kepler;
    ErrorStats st;
    double sum_sq = 0.0;
    for (const auto& smp : traj.samples) {
        const KeplerState ref = analytic_reference(init, k, smp.kepler.t);
        const Vec3 dq = smp.kepler.q - ref.q;
        const Vec3 dp = smp.kepler.p - ref.p;
        st.max_abs_position_error = std::fmax(st.max_abs_position_error, max_abs(dq));
        st.max_abs_momentum_error = std::fmax(st.max_abs_momentum_error, max_abs(dp));
        st.max_rel_position_error =
            std::fmax(st.max_rel_position_error, norm(dq) / std::fmax(1.0, norm(ref.q)));
        st.max_rel_momentum_error =
            std::fmax(st.max_rel_momentum_error, norm(dp) / std::fmax(1.0, norm(ref.p)));
        sum_sq += norm2(dq);
        ++st.sample_count;
    }
    st.rms_position_error = std::sqrt(sum_sq / static_cast<double>(st.sample_count));
    return st;
}

}  // namespace ksexact
