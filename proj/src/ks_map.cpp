#include "ksexact/ks_map.hpp"

namespace ksexact {

namespace {

void require_nondegenerate(const Vec4& Q, const char* where) {
    if (!is_finite(Q))
        throw Error(ErrorKind::InvalidArgument, std::string(where) + ": non-finite Q");
    if (!(norm2(Q) > 0.0))
        throw Error(ErrorKind::DegenerateFibre, std::string(where) + ": |Q| must be > 0");
}

}  // namespace

std::array<Vec4, 3> ks_matrix(const Vec4& Q) {
    return {{
        {{Q[0], -Q[1], -Q[2], Q[3]}},
        {{Q[1], Q[0], -Q[3], -Q[2]}},
        {{Q[2], Q[3], Q[0], Q[1]}},
    }};
}

PhysicalPair ks_project(const Vec4& Q, const Vec4& P) {
    require_nondegenerate(Q, "ks_project");
    const Vec3 q{{Q[0] * Q[0] - Q[1] * Q[1] - Q[2] * Q[2] + Q[3] * Q[3],
                  2.0 * (Q[0] * Q[1] - Q[2] * Q[3]),
                  2.0 * (Q[0] * Q[2] + Q[1] * Q[3])}};
    const auto M = ks_matrix(Q);
    const double inv = 1.0 / (2.0 * norm2(Q));
    const Vec3 p{{dot(M[0], P) * inv, dot(M[1], P) * inv, dot(M[2], P) * inv}};
    return {q, p};
}

KsPair ks_lift(const Vec3& q, const Vec3& p) {
    require_noncollision(q, "ks_lift");
    const double r = norm(q);
    Vec4 Q;
    if (q[0] >= 0.0) {
        Q[0] = std::sqrt(0.5 * (r + q[0]));
        Q[1] = q[1] / (2.0 * Q[0]);
        Q[2] = q[2] / (2.0 * Q[0]);
        Q[3] = 0.0;
    } else {
        Q[1] = std::sqrt(0.5 * (r - q[0]));
        Q[0] = q[1] / (2.0 * Q[1]);
        Q[3] = q[2] / (2.0 * Q[1]);
        Q[2] = 0.0;
    }
    // P = 2 Mᵀ p; M Mᵀ = |Q|² I makes this the exact inverse of the momentum map.
    const auto M = ks_matrix(Q);
    Vec4 P = 2.0 * (p[0] * M[0] + p[1] * M[1] + p[2] * M[2]);
    return {Q, P};
}

double bilinear_constraint(const Vec4& Q, const Vec4& P) {
    return P[0] * Q[3] - P[1] * Q[2] + P[2] * Q[1] - P[3] * Q[0];
}

double constraint_scale(const Vec4& Q, const Vec4& P) { return norm(Q) * norm(P); }

KsResiduals ks_residuals(const Vec4& Q, const Vec4& P) {
    const auto [q, p] = ks_project(Q, P);
    const double Q2 = norm2(Q);
    return {bilinear_constraint(Q, P), norm2(q) - Q2 * Q2, norm2(P) - 4.0 * norm2(p) * Q2};
}

}  // namespace ksexact
