#pragma once

#include <string_view>
#include <variant>

#include "ksexact/core.hpp"

namespace ksexact {

enum class Method { ExactKS, MidpointKS, RK4, StormerVerlet };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

struct FixedFictitious {
    double h = 0.0;
    int n_steps = 0;
};

struct FixedPhysical {
    double dt = 0.0;
    int n_steps = 0;
};

using Schedule = std::variant<FixedFictitious, FixedPhysical>;

// Exact integrator: KS lift, exact oscillator steps with the closed-form time
// map, projection back to (q, p). E is frozen at energy(q0, p0, k).
// FixedPhysical schedules solve for the fictitious step that lands on each
// physical node, splitting elliptic intervals that would cross ω h = π.
Trajectory propagate_exact(const KeplerState& initial, double k, const Schedule& schedule);

// Second-order conservative scheme: midpoint form with d = h, time advanced
// by t += h |(Q_j + Q_{j+1})/2|².
Trajectory propagate_midpoint_ks(const KeplerState& initial, double k, double h, int n_steps);

// Fixed-step RK4 or Störmer-Verlet directly on dq/dt = p, dp/dt = -k q/|q|³.
// Samples use s = t. A close approach (|q| < 1e-9 |q0|) or a non-finite
// state stops the run and sets meta.aborted.
Trajectory propagate_baseline(const KeplerState& initial, double k, double dt, int n_steps,
                              Method method);

}  // namespace ksexact
