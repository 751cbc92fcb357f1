#pragma once

#include <optional>
#include <vector>

#include "ksexact/core.hpp"

namespace ksexact {

struct ConservationReport {
    double energy_drift = 0.0;   // max |E_j - E_0| / |E_0|
    double angmom_drift = 0.0;   // max_j max_i |L_j,i - L_0,i| / |L_0|
    double lrl_drift = 0.0;      // same for the Laplace-Runge-Lenz vector
    std::optional<double> constraint_residual_max;  // max |bilinear| / (|Q||P|)
    std::vector<double> energy_series;              // filled on request
};

struct ErrorStats {
    double max_abs_position_error = 0.0;  // max over samples and components
    double max_abs_momentum_error = 0.0;
    double rms_position_error = 0.0;      // rms over samples of |q - q_ref|
    double max_rel_position_error = 0.0;  // |q - q_ref| / max(1, |q_ref|)
    double max_rel_momentum_error = 0.0;
    std::size_t sample_count = 0;
};

Vec3 angular_momentum(const Vec3& q, const Vec3& p);

// p × (q × p) - k q/|q|; magnitude k·e.
Vec3 lrl_vector(const Vec3& q, const Vec3& p, double k);

// Drift below this reference magnitude is reported in absolute terms.
inline constexpr double kRelativeDriftFloor = 1e-10;

// Closed-form two-body flow from `initial` to physical time t_query.
// Elliptic orbits solve Kepler's equation in eccentric-anomaly difference
// form, hyperbolic orbits its hyperbolic-anomaly counterpart, and
// |E| r0 / k <= 1e-12 is treated as parabolic through the Barker cubic.
// Rectilinear (L = 0) orbits are rejected with ErrorKind::Oracle.
KeplerState analytic_reference(const KeplerState& initial, double k, double t_query);

ConservationReport conservation_report(const Trajectory& traj, double k, bool with_series = false);

// Compares every sample against analytic_reference(sample 0, k, t_j).
ErrorStats trajectory_error(const Trajectory& traj, double k);

}  // namespace ksexact
