#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ksexact {

// Error classes surfaced by the library. The CLI maps every kind except
// InvalidArgument to exit code 1.
enum class ErrorKind {
    CollisionState,
    DegenerateFibre,
    StepTooLarge,
    InconsistentInvariant,
    RootFind,
    Oracle,
    EmptyTrajectory,
    InvalidArgument,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Fixed-size real vector. Vec<3> carries Kepler positions and momenta,
// Vec<4> the regularized oscillator coordinates.
template <std::size_t N>
struct Vec {
    std::array<double, N> c{};

    constexpr double& operator[](std::size_t i) { return c[i]; }
    constexpr double operator[](std::size_t i) const { return c[i]; }

    constexpr Vec& operator+=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) c[i] += o.c[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o) {
        for (std::size_t i = 0; i < N; ++i) c[i] -= o.c[i];
        return *this;
    }
    constexpr Vec& operator*=(double a) {
        for (auto& x : c) x *= a;
        return *this;
    }

    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
    friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
    friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

using Vec3 = Vec<3>;
using Vec4 = Vec<4>;

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
constexpr double norm2(const Vec<N>& a) { return dot(a, a); }

template <std::size_t N>
double norm(const Vec<N>& a) { return std::sqrt(norm2(a)); }

template <std::size_t N>
double max_abs(const Vec<N>& a) {
    double m = 0.0;
    for (double x : a.c) m = std::fmax(m, std::fabs(x));
    return m;
}

template <std::size_t N>
bool is_finite(const Vec<N>& a) {
    for (double x : a.c)
        if (!std::isfinite(x)) return false;
    return true;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

// Physical state of the Kepler problem; p is momentum per unit mass.
struct KeplerState {
    Vec3 q;
    Vec3 p;
    double t = 0.0;
};

// Regularized state: position/momentum of the 4D oscillator at fictitious time s.
struct OscillatorState {
    Vec4 Q;
    Vec4 P;
    double s = 0.0;
};

// Gravitational coupling k and the (frozen) orbit energy E.
struct Params {
    double k = 1.0;
    double E = 0.0;
};

struct Elliptic {
    double omega;  // ω = sqrt(-E/2)
};
struct Hyperbolic {
    double nu;  // ν = sqrt(E/2)
};
struct Parabolic {};

struct FrequencyClass {
    std::variant<Elliptic, Hyperbolic, Parabolic> regime;
    double E = 0.0;

    bool is_elliptic() const { return std::holds_alternative<Elliptic>(regime); }
    bool is_hyperbolic() const { return std::holds_alternative<Hyperbolic>(regime); }
    bool is_parabolic() const { return std::holds_alternative<Parabolic>(regime); }

    // Stumpff argument z(h) = ω²h² = -E h²/2 (negative on the hyperbolic branch).
    double z(double h) const { return -E * h * h / 2.0; }
};

// Per-sample diagnostics. ks_constraint is absent for unregularized baselines.
struct SampleDiagnostics {
    double energy = 0.0;
    Vec3 angular_momentum;
    std::optional<double> ks_constraint;
};

struct Sample {
    double s = 0.0;
    double t = 0.0;
    KeplerState kepler;
    std::optional<OscillatorState> oscillator;
    SampleDiagnostics diagnostics;
};

struct TrajectoryMeta {
    std::string method;
    std::vector<double> step_sizes;  // h for fictitious schedules, dt for physical ones
    std::string schedule;            // "fictitious" or "physical"
    Params params;
    bool aborted = false;
    std::string abort_reason;
};

struct Trajectory {
    std::vector<Sample> samples;
    TrajectoryMeta meta;
};

// E = |p|²/2 - k/|q|. Throws CollisionState when q = 0.
double energy(const Vec3& q, const Vec3& p, double k);

// Total over the reals: Elliptic for E < -zero_tol, Hyperbolic for E > zero_tol,
// Parabolic otherwise.
FrequencyClass classify_frequency(double E, double zero_tol = 0.0);

// Throws CollisionState unless |q| > 0 and q finite.
void require_noncollision(const Vec3& q, const char* where);

}  // namespace ksexact
