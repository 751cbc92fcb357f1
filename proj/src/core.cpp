#include "ksexact/core.hpp"

namespace ksexact {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::CollisionState: return "collision state";
        case ErrorKind::DegenerateFibre: return "degenerate KS fibre";
        case ErrorKind::StepTooLarge: return "step too large";
        case ErrorKind::InconsistentInvariant: return "inconsistent invariant";
        case ErrorKind::RootFind: return "root-find failure";
        case ErrorKind::Oracle: return "oracle failure";
        case ErrorKind::EmptyTrajectory: return "empty trajectory";
        case ErrorKind::InvalidArgument: return "invalid argument";
    }
    return "unknown error";
}

void require_noncollision(const Vec3& q, const char* where) {
    if (!is_finite(q))
        throw Error(ErrorKind::InvalidArgument, std::string(where) + ": non-finite position");
    if (!(norm2(q) > 0.0))
        throw Error(ErrorKind::CollisionState, std::string(where) + ": |q| must be > 0");
}

double energy(const Vec3& q, const Vec3& p, double k) {
    require_noncollision(q, "energy");
    return 0.5 * norm2(p) - k / norm(q);
}

FrequencyClass classify_frequency(double E, double zero_tol) {
    if (E < -zero_tol) return {Elliptic{std::sqrt(-E / 2.0)}, E};
    if (E > zero_tol) return {Hyperbolic{std::sqrt(E / 2.0)}, E};
    return {Parabolic{}, E};
}

}  // namespace ksexact
