#include "ksexact/serialize.hpp"

#include <cstdio>

namespace ksexact {

std::string format_csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out(kCsvHeader);
    out += '\n';
    for (std::size_t j = 0; j < traj.samples.size(); ++j) {
        const Sample& smp = traj.samples[j];
        const auto& ks = smp.kepler;
        const auto& d = smp.diagnostics;
        out += std::to_string(j);
        for (double v : {smp.s, smp.t, ks.q[0], ks.q[1], ks.q[2], ks.p[0], ks.p[1], ks.p[2],
                         d.energy, d.angular_momentum[0], d.angular_momentum[1],
                         d.angular_momentum[2]}) {
            out += ',';
            out += format_csv_number(v);
        }
        out += ',';
        if (d.ks_constraint) out += format_csv_number(*d.ks_constraint);
        out += '\n';
    }
    return out;
}

namespace {

using nlohmann::json;

template <std::size_t N>
json vec_json(const Vec<N>& v) {
    return json(v.c);
}

template <std::size_t N>
Vec<N> vec_from(const json& j) {
    Vec<N> v;
    if (!j.is_array() || j.size() != N)
        throw Error(ErrorKind::InvalidArgument, "trajectory json: bad vector length");
    for (std::size_t i = 0; i < N; ++i) v[i] = j.at(i).get<double>();
    return v;
}

}  // namespace

nlohmann::json trajectory_to_json_value(const Trajectory& traj) {
    json meta = {
        {"method", traj.meta.method},
        {"schedule", traj.meta.schedule},
        {"step_sizes", traj.meta.step_sizes},
        {"k", traj.meta.params.k},
        {"E", traj.meta.params.E},
        {"aborted", traj.meta.aborted},
        {"abort_reason", traj.meta.abort_reason},
    };
    json samples = json::array();
    for (std::size_t j = 0; j < traj.samples.size(); ++j) {
        const Sample& smp = traj.samples[j];
        json row = {
            {"step", j},
            {"s", smp.s},
            {"t", smp.t},
            {"q", vec_json(smp.kepler.q)},
            {"p", vec_json(smp.kepler.p)},
            {"energy", smp.diagnostics.energy},
            {"L", vec_json(smp.diagnostics.angular_momentum)},
            {"ks_constraint", nullptr},
            {"Q", nullptr},
            {"P", nullptr},
        };
        if (smp.diagnostics.ks_constraint) row["ks_constraint"] = *smp.diagnostics.ks_constraint;
        if (smp.oscillator) {
            row["Q"] = vec_json(smp.oscillator->Q);
            row["P"] = vec_json(smp.oscillator->P);
        }
        samples.push_back(std::move(row));
    }
    return {{"meta", std::move(meta)}, {"samples", std::move(samples)}};
}

std::string trajectory_to_json(const Trajectory& traj) {
    return trajectory_to_json_value(traj).dump(1) + "\n";
}

Trajectory trajectory_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("trajectory json: ") + e.what());
    }
    try {
        Trajectory traj;
        const json& meta = doc.at("meta");
        traj.meta.method = meta.at("method").get<std::string>();
        traj.meta.schedule = meta.at("schedule").get<std::string>();
        traj.meta.step_sizes = meta.at("step_sizes").get<std::vector<double>>();
        traj.meta.params = {meta.at("k").get<double>(), meta.at("E").get<double>()};
        traj.meta.aborted = meta.at("aborted").get<bool>();
        traj.meta.abort_reason = meta.at("abort_reason").get<std::string>();
        for (const json& row : doc.at("samples")) {
            Sample smp;
            smp.s = row.at("s").get<double>();
            smp.t = row.at("t").get<double>();
            smp.kepler = {vec_from<3>(row.at("q")), vec_from<3>(row.at("p")), smp.t};
            smp.diagnostics.energy = row.at("energy").get<double>();
            smp.diagnostics.angular_momentum = vec_from<3>(row.at("L"));
            if (!row.at("ks_constraint").is_null())
                smp.diagnostics.ks_constraint = row.at("ks_constraint").get<double>();
            if (!row.at("Q").is_null())
                smp.oscillator = OscillatorState{vec_from<4>(row.at("Q")), vec_from<4>(row.at("P")), smp.s};
            traj.samples.push_back(std::move(smp));
        }
        return traj;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("trajectory json: ") + e.what());
    }
}

}  // namespace ksexact
