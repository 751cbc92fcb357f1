#pragma once

#include "ksexact/core.hpp"

namespace ksexact {

// Kustaanheimo-Stiefel map between the 4D oscillator and the 3D Kepler problem.

struct KsResiduals {
    double constraint = 0.0;       // P1 Q4 - P2 Q3 + P3 Q2 - P4 Q1
    double norm_identity_q = 0.0;  // |q|² - |Q|⁴
    double norm_identity_p = 0.0;  // |P|² - 4|p|²|Q|²
};

struct KsPair {
    Vec4 Q;
    Vec4 P;
};

struct PhysicalPair {
    Vec3 q;
    Vec3 p;
};

// Rows of the 3x4 matrix M(Q) with p = M(Q) P / (2|Q|²).
std::array<Vec4, 3> ks_matrix(const Vec4& Q);

// Projection R⁴×R⁴ → R³×R³. Accepts pairs that violate the bilinear
// constraint; the norm identities only hold when it is satisfied.
PhysicalPair ks_project(const Vec4& Q, const Vec4& P);

// Gauge-fixed lift: Q4 = 0 when q1 >= 0, Q3 = 0 otherwise; P = 2 M(Q)ᵀ p.
// The result satisfies the bilinear constraint and |Q|² = |q|.
KsPair ks_lift(const Vec3& q, const Vec3& p);

double bilinear_constraint(const Vec4& Q, const Vec4& P);

KsResiduals ks_residuals(const Vec4& Q, const Vec4& P);

// Natural scale for the bilinear constraint: |Q|·|P|.
double constraint_scale(const Vec4& Q, const Vec4& P);

}  // namespace ksexact
