#include "ksexact/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ksexact/diagnostics.hpp"
#include "ksexact/selfcheck.hpp"
#include "ksexact/serialize.hpp"

namespace ksexact::cli {

Vec3 parse_vec3(const std::string& text) {
    Vec3 v;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t end = text.find(',', pos);
        if ((i < 2) != (end != std::string::npos))
            throw UsageError("expected a comma-separated triple x,y,z, got '" + text + "'");
        const std::string part = text.substr(pos, i < 2 ? end - pos : std::string::npos);
        std::size_t used = 0;
        try {
            v[i] = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (part.empty() || used != part.size() || !std::isfinite(v[i]))
            throw UsageError("invalid vector component '" + part + "' in '" + text + "'");
        pos = end + 1;
    }
    return v;
}

namespace {

void validate_state(double k, const Vec3& q0, const Vec3& p0, int steps) {
    if (!(k > 0.0) || !std::isfinite(k)) throw UsageError("--k must be > 0");
    if (!(norm2(q0) > 0.0)) throw UsageError("--q: collision state, |q| must be > 0");
    if (!is_finite(p0)) throw UsageError("--p must be finite");
    if (steps < 0) throw UsageError("--steps must be >= 0");
}

void validate_step(const std::optional<double>& v, const char* flag) {
    if (v && (!(*v > 0.0) || !std::isfinite(*v)))
        throw UsageError(std::string(flag) + " must be > 0");
}

void validate_method_steps(Method m, const std::optional<double>& h, const std::optional<double>& dt) {
    switch (m) {
        case Method::ExactKS:
            if (!h && !dt) throw UsageError("method exact requires --h or --dt");
            break;
        case Method::MidpointKS:
            if (!h) throw UsageError("method midpoint requires --h");
            break;
        case Method::RK4:
        case Method::StormerVerlet:
            if (!dt) throw UsageError("method " + std::string(method_name(m)) + " requires --dt");
            break;
    }
}

Trajectory propagate_one(Method m, const KeplerState& init, double k, std::optional<double> h,
                         std::optional<double> dt, int steps) {
    switch (m) {
        case Method::ExactKS:
            if (h) return propagate_exact(init, k, FixedFictitious{*h, steps});
            return propagate_exact(init, k, FixedPhysical{*dt, steps});
        case Method::MidpointKS:
            return propagate_midpoint_ks(init, k, *h, steps);
        case Method::RK4:
        case Method::StormerVerlet:
            return propagate_baseline(init, k, *dt, steps, m);
    }
    throw UsageError("unknown method");
}

int emit(const std::string& payload, const std::string& path, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
        out << payload;
        return out ? kExitOk : kExitRuntime;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot open output file '" << path << "'\n";
        return kExitRuntime;
    }
    f << payload;
    return f ? kExitOk : kExitRuntime;
}

}  // namespace

void validate(const RunConfig& cfg) {
    validate_state(cfg.k, cfg.q0, cfg.p0, cfg.steps);
    validate_step(cfg.h, "--h");
    validate_step(cfg.dt, "--dt");
    if (cfg.h && cfg.dt) throw UsageError("--h and --dt are mutually exclusive for propagate");
    validate_method_steps(cfg.method, cfg.h, cfg.dt);
}

void validate(const CompareConfig& cfg) {
    if (cfg.methods.empty()) throw UsageError("--methods must name at least one method");
    validate_state(cfg.k, cfg.q0, cfg.p0, cfg.steps);
    validate_step(cfg.h, "--h");
    validate_step(cfg.dt, "--dt");
    for (Method m : cfg.methods) validate_method_steps(m, cfg.h, cfg.dt);
}

Trajectory run(const RunConfig& cfg) {
    return propagate_one(cfg.method, {cfg.q0, cfg.p0, 0.0}, cfg.k, cfg.h, cfg.dt, cfg.steps);
}

int cmd_propagate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    Trajectory traj;
    try {
        traj = run(cfg);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    const std::string payload =
        cfg.format == OutputFormat::Csv ? trajectory_to_csv(traj) : trajectory_to_json(traj);
    const int rc = emit(payload, cfg.out_path, out, err);
    if (traj.meta.aborted) {
        err << "error: integration aborted (" << traj.meta.abort_reason << "); partial trajectory written\n";
        return kExitRuntime;
    }
    return rc;
}

int cmd_compare(const CompareConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    const KeplerState init{cfg.q0, cfg.p0, 0.0};
    struct Row {
        Method method;
        ConservationReport rep;
        std::optional<ErrorStats> err;
        bool aborted;
    };
    std::vector<Row> rows;
    try {
        for (Method m : cfg.methods) {
            const Trajectory traj = propagate_one(m, init, cfg.k, cfg.h, cfg.dt, cfg.steps);
            Row r{m, conservation_report(traj, cfg.k), std::nullopt, traj.meta.aborted};
            if (cfg.oracle) r.err = trajectory_error(traj, cfg.k);
            rows.push_back(std::move(r));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    std::string payload;
    if (cfg.format == OutputFormat::Csv) {
        payload =
            "method,energy_drift,angmom_drift,lrl_drift,constraint_residual_max,"
            "max_abs_position_error,max_abs_momentum_error,rms_position_error,sample_count,aborted\n";
        for (const auto& r : rows) {
            payload += std::string(method_name(r.method));
            for (double v : {r.rep.energy_drift, r.rep.angmom_drift, r.rep.lrl_drift})
                payload += "," + format_csv_number(v);
            payload += ",";
            if (r.rep.constraint_residual_max) payload += format_csv_number(*r.rep.constraint_residual_max);
            if (r.err) {
                for (double v : {r.err->max_abs_position_error, r.err->max_abs_momentum_error,
                                 r.err->rms_position_error})
                    payload += "," + format_csv_number(v);
                payload += "," + std::to_string(r.err->sample_count);
            } else {
                payload += ",,,,";
            }
            payload += r.aborted ? ",1\n" : ",0\n";
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json o = {
                {"method", method_name(r.method)},
                {"energy_drift", r.rep.energy_drift},
                {"angmom_drift", r.rep.angmom_drift},
                {"lrl_drift", r.rep.lrl_drift},
                {"constraint_residual_max", nullptr},
                {"aborted", r.aborted},
            };
            if (r.rep.constraint_residual_max) o["constraint_residual_max"] = *r.rep.constraint_residual_max;
            if (r.err) {
                o["max_abs_position_error"] = r.err->max_abs_position_error;
                o["max_abs_momentum_error"] = r.err->max_abs_momentum_error;
                o["rms_position_error"] = r.err->rms_position_error;
                o["sample_count"] = r.err->sample_count;
            }
            arr.push_back(std::move(o));
        }
        payload = arr.dump(1) + "\n";
    }
    return emit(payload, cfg.out_path, out, err);
}

int cmd_selfcheck(std::ostream& out, const std::string& inject_fault) {
    return report_selfcheck(run_selfcheck({inject_fault}), out);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact conservative Kepler integrator via KS regularization"};
    app.set_help_flag("--help", "print help");  // -h would shadow --h
    app.require_subcommand(1);

    std::string q_text, p_text, method_text, methods_text, format_text = "csv";
    RunConfig run_cfg;
    CompareConfig cmp_cfg;
    std::optional<double> h, dt;
    double k = 1.0;
    int steps = 0;
    std::string out_path;
    bool oracle = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--k", k, "gravitational coupling (> 0)");
        sub->add_option("--q", q_text, "initial position x,y,z")->required();
        sub->add_option("--p", p_text, "initial momentum x,y,z")->required();
        sub->add_option("--h", h, "fictitious-time step (exact, midpoint)");
        sub->add_option("--dt", dt, "physical-time step (exact, rk4, verlet)");
        sub->add_option("--steps", steps, "number of steps")->required();
        sub->add_option("--format", format_text, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out_path, "output path (default stdout)");
    };

    auto* prop = app.add_subcommand("propagate", "propagate one orbit and write the trajectory");
    prop->add_option("--method", method_text, "exact, midpoint, rk4 or verlet")
        ->required()
        ->check(CLI::IsMember({"exact", "midpoint", "rk4", "verlet"}));
    add_common(prop);

    auto* cmp = app.add_subcommand("compare", "conservation and error table for several methods");
    cmp->add_option("--methods", methods_text, "comma-separated method list")->required();
    cmp->add_flag("--oracle", oracle, "include errors against the analytic two-body solution");
    add_common(cmp);

    auto* chk = app.add_subcommand("selfcheck", "run the built-in invariant suite");
    (void)chk;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    if (chk->parsed()) return cmd_selfcheck(out);

    const OutputFormat fmt = format_text == "json" ? OutputFormat::Json : OutputFormat::Csv;
    Vec3 q0, p0;
    try {
        q0 = parse_vec3(q_text);
        p0 = parse_vec3(p_text);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (prop->parsed()) {
        run_cfg.method = *parse_method(method_text);
        run_cfg.k = k;
        run_cfg.q0 = q0;
        run_cfg.p0 = p0;
        run_cfg.h = h;
        run_cfg.dt = dt;
        run_cfg.steps = steps;
        run_cfg.format = fmt;
        run_cfg.out_path = out_path;
        return cmd_propagate(run_cfg, out, err);
    }

    std::stringstream ss(methods_text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto m = parse_method(item);
        if (!m) {
            err << "usage error: unknown method '" << item << "'\n";
            return kExitUsage;
        }
        cmp_cfg.methods.push_back(*m);
    }
    cmp_cfg.k = k;
    cmp_cfg.q0 = q0;
    cmp_cfg.p0 = p0;
    cmp_cfg.h = h;
    cmp_cfg.dt = dt;
    cmp_cfg.steps = steps;
    cmp_cfg.oracle = oracle;
    cmp_cfg.format = fmt;
    cmp_cfg.out_path = out_path;
    return cmd_compare(cmp_cfg, out, err);
}

}  // namespace ksexact::cli
