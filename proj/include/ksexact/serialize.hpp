#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "ksexact/core.hpp"

namespace ksexact {

// Exact header of the trajectory CSV.
inline constexpr std::string_view kCsvHeader =
    "step,s,t,qx,qy,qz,px,py,pz,energy,Lx,Ly,Lz,ks_constraint";

// Fixed 17-significant-digit scientific notation ("%.16e").
std::string format_csv_number(double x);

std::string trajectory_to_csv(const Trajectory& traj);

// Doubles are written in shortest round-trip form, so
// trajectory_to_json(trajectory_from_json(trajectory_to_json(t))) is byte-identical.
nlohmann::json trajectory_to_json_value(const Trajectory& traj);
std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(std::string_view text);

}  // namespace ksexact
