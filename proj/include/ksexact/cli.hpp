#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ksexact/core.hpp"
#include "ksexact/propagator.hpp"

namespace ksexact::cli {

enum class OutputFormat { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
    Method method = Method::ExactKS;
    double k = 1.0;
    Vec3 q0;
    Vec3 p0;
    std::optional<double> h;   // fictitious step (exact, midpoint)
    std::optional<double> dt;  // physical step (exact, rk4, verlet)
    int steps = 0;
    OutputFormat format = OutputFormat::Csv;
    std::string out_path;      // empty: stdout
};

struct CompareConfig {
    std::vector<Method> methods;
    double k = 1.0;
    Vec3 q0;
    Vec3 p0;
    std::optional<double> h;
    std::optional<double> dt;
    int steps = 0;
    bool oracle = false;
    OutputFormat format = OutputFormat::Csv;
    std::string out_path;
};

// Thrown for invalid configurations; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses "x,y,z" (no spaces).
Vec3 parse_vec3(const std::string& text);

// Checks every module precondition the run depends on. Throws UsageError.
void validate(const RunConfig& cfg);
void validate(const CompareConfig& cfg);

// Runs the configured propagation.
Trajectory run(const RunConfig& cfg);

int cmd_propagate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_selfcheck(std::ostream& out, const std::string& inject_fault = {});

// Full command-line entry point: `propagate`, `compare`, `selfcheck`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ksexact::cli
