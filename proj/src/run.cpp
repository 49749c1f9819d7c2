#include "mcread/run.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mcread/analytic.hpp"
#include "mcread/io.hpp"
#include "mcread/rng.hpp"

namespace mcread {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(Error::Code code) {
    switch (code) {
        case Error::Code::config: return 2;
        case Error::Code::integrator_instability: return 4;
        case Error::Code::fit_failure: return 5;
        case Error::Code::io: return 6;
        default: return 3;  // precondition, dimension, singularity, degenerate
    }
}

namespace {

const char* code_name(Error::Code code) {
    switch (code) {
        case Error::Code::invalid_dimension: return "invalid_dimension";
        case Error::Code::dimension_mismatch: return "dimension_mismatch";
        case Error::Code::singularity: return "singularity";
        case Error::Code::precondition: return "precondition";
        case Error::Code::integrator_instability: return "integrator_instability";
        case Error::Code::degenerate: return "degenerate";
        case Error::Code::fit_failure: return "fit_failure";
        case Error::Code::config: return "config";
        case Error::Code::io: return "io";
    }
    return "unknown";
}

struct ArtifactSink {
    fs::path dir;
    std::vector<std::string> names;

    explicit ArtifactSink(const std::string& d) : dir(d) { fs::create_directories(dir); }

    std::string path(const std::string& name) {
        names.push_back(name);
        return (dir / name).string();
    }
};

json traj_diag_json(const Trajectory& t) {
    json j;
    j["prep"] = to_string(t.prep_label);
    j["max_trace_drift"] = t.max_trace_drift;
    j["max_hermiticity_residual"] = t.max_herm_residual;
    j["max_top_fock_population"] = t.max_top_fock;
    j["qubit_slew_ratio"] = t.qubit_slew_ratio;
    j["warnings"] = t.warnings;
    if (t.n_levels() >= 3) j["leakage"] = leakage(t);
    return j;
}

void write_manifest(const ExperimentConfig& cfg, ArtifactSink& sink) {
    json m;
    m["config_hash"] = config_hash(cfg);
    m["seed"] = cfg.run.seed;
    std::vector<std::string> arts = sink.names;
    std::sort(arts.begin(), arts.end());
    m["artifacts"] = arts;
    m["version"] = kVersion;
    write_text_file((sink.dir / "manifest.json").string(), m.dump(2) + "\n");
}

void do_simulate(const ExperimentConfig& cfg, ArtifactSink& sink) {
    SystemParams params = cfg.to_system_params();
    DispersiveConstants constants = dispersive_constants(params);
    ProtocolSpec spec = cfg.to_protocol_spec(params, constants);
    EvolveOptions opts;
    opts.dt = cfg.run.dt_s;
    opts.sample_interval = cfg.run.sample_interval_s;
    opts.auto_refine = true;
    ProtocolResult result = run_protocol(params, spec, opts, cfg.to_frame());

    write_trajectory_csv(sink.path("trajectory_g.csv"), result.traj_g);
    write_trajectory_csv(sink.path("trajectory_e.csv"), result.traj_e);
    json d;
    d["initial_rate_per_s"] = result.diagnostics.initial_rate;
    d["max_separation"] = result.diagnostics.max_separation;
    d["time_of_max_s"] = result.diagnostics.time_of_max;
    d["trajectory_g"] = traj_diag_json(result.traj_g);
    d["trajectory_e"] = traj_diag_json(result.traj_e);
    write_text_file(sink.path("diagnostics.json"), d.dump(2) + "\n");
}

void do_analytic(const ExperimentConfig& cfg, ArtifactSink& sink) {
    SystemParams params = cfg.to_system_params();
    DispersiveConstants constants = dispersive_constants(params);
    ProtocolSpec spec = cfg.to_protocol_spec(params, constants);
    PulseSchedule sch = build_schedule(spec, params, constants);

    AnalyticTrajectoryParams ap;
    ap.omega_q_drive = sch.segments[0].omega_q;
    ap.omega_r_drive = sch.segments[0].omega_r;
    ap.chi = constants.chi;
    ap.g = params.g;
    ap.kappa = params.kappa();

    for (PrepLabel label : {PrepLabel::g, PrepLabel::e}) {
        Trajectory t;
        t.prep_label = label;
        t.populations.assign(2, {});
        for (double time = 0;; time += cfg.run.sample_interval_s) {
            bool last = time >= spec.duration;
            double ts = last ? spec.duration : time;
            Complex a = analytic_trajectory(ap, label, ts);
            t.times.push_back(ts);
            t.alpha.push_back(a);
            t.photon_number.push_back(std::norm(a));
            t.populations[0].push_back(label == PrepLabel::g ? 1.0 : 0.0);
            t.populations[1].push_back(label == PrepLabel::e ? 1.0 : 0.0);
            if (last) break;
        }
        write_trajectory_csv(
            sink.path(label == PrepLabel::g ? "analytic_g.csv" : "analytic_e.csv"), t);
    }
}

void do_shots(const ExperimentConfig& cfg, ArtifactSink& sink) {
    SystemParams params = cfg.to_system_params();
    DispersiveConstants constants = dispersive_constants(params);
    ProtocolSpec spec = cfg.to_protocol_spec(params, constants);
    EvolveOptions opts;
    opts.dt = cfg.run.dt_s;
    opts.sample_interval = cfg.run.sample_interval_s;
    opts.auto_refine = true;
    ProtocolResult result = run_protocol(params, spec, opts, cfg.to_frame());

    NoiseModel noise = cfg.to_noise_model();
    WeightFunctions weights = matched_weights(result.traj_g, result.traj_e);

    NoiseModel noise_g = noise;
    noise_g.seed = mix64(noise.seed ^ 0x67A1B3C5ULL);
    auto shots = sample_shots(result.traj_g, weights, noise_g, cfg.run.n_shots,
                              cfg.noise.thermal_eps, &result.traj_e);
    NoiseModel noise_e = noise;
    noise_e.seed = mix64(noise.seed ^ 0x155D4F2EULL);
    auto shots_e =
        sample_shots(result.traj_e, weights, noise_e, cfg.run.n_shots, 0.0, nullptr);
    shots.insert(shots.end(), shots_e.begin(), shots_e.end());

    auto [ref_g, ref_e] = references(shots);
    assign(shots, ref_g, ref_e);
    write_shots_csv(sink.path("shots.csv"), shots);
    write_histogram_csv(sink.path("histogram.csv"), label_histogram(shots, ref_g, ref_e, 101));

    json summary;
    summary["eps_total"] = total_error(shots);
    summary["ref_g"] = {ref_g.real(), ref_g.imag()};
    summary["ref_e"] = {ref_e.real(), ref_e.imag()};
    summary["sigma_quadrature"] = noise.sigma_quadrature;
    summary["n_shots_per_label"] = cfg.run.n_shots;
    summary["thermal_eps"] = cfg.noise.thermal_eps;
    summary["weights_re_degenerate"] = weights.re_degenerate;
    summary["weights_im_degenerate"] = weights.im_degenerate;
    write_text_file(sink.path("shots_summary.json"), summary.dump(2) + "\n");

    if (!cfg.run.tau_grid_s.empty()) {
        auto curve = error_vs_time(result.traj_g, result.traj_e, noise, cfg.run.n_shots,
                                   cfg.run.tau_grid_s, cfg.noise.thermal_eps,
                                   cfg.run.eps_prep);
        write_error_curve_csv(sink.path("error_curve.csv"), curve);
    }
}

void do_sweep_phase(const ExperimentConfig& cfg, ArtifactSink& sink) {
    SystemParams params = cfg.to_system_params();
    DispersiveConstants constants = dispersive_constants(params);
    ProtocolSpec spec = cfg.to_protocol_spec(params, constants);
    PulseSchedule sch = build_schedule(spec, params, constants);

    AnalyticTrajectoryParams ap;
    ap.omega_r_drive = sch.segments[0].omega_r;
    ap.chi = constants.chi;
    ap.g = params.g;
    ap.kappa = params.kappa();
    double mag = std::abs(sch.segments[0].omega_q);

    std::ostringstream csv;
    csv << "phi_q_rad, re_s_g, im_s_g, re_s_e, im_s_e\n";
    for (int i = 0; i < cfg.run.n_phase_points; ++i) {
        double phi = kTwoPi * i / cfg.run.n_phase_points;
        ap.omega_q_drive = std::polar(mag, phi);
        Complex sg = steady_state(ap, PrepLabel::g);
        Complex se = steady_state(ap, PrepLabel::e);
        csv << format_double(phi) << ", " << format_double(sg.real()) << ", "
            << format_double(sg.imag()) << ", " << format_double(se.real()) << ", "
            << format_double(se.imag()) << "\n";
    }
    write_text_file(sink.path("steady_state_locus.csv"), csv.str());

    ap.omega_q_drive = mag;
    SteadyStateCircle circ = steady_state_circle(ap);
    json j;
    j["center_g"] = {circ.center_g.real(), circ.center_g.imag()};
    j["center_e"] = {circ.center_e.real(), circ.center_e.imag()};
    j["radius_g"] = circ.radius_g;
    j["radius_e"] = circ.radius_e;
    write_text_file(sink.path("circles.json"), j.dump(2) + "\n");
}

void do_reset(const ExperimentConfig& cfg, ArtifactSink& sink) {
    SystemParams params = cfg.to_system_params();
    DispersiveConstants constants = dispersive_constants(params);
    ProtocolSpec spec = cfg.to_protocol_spec(params, constants);
    if (spec.kind != ProtocolKind::unconditional_reset)
        spec = make_preset("reset", params, constants, cfg.protocol.duration_s,
                           cfg.protocol.photon_target);
    ResetResult res = reset_residual_detailed(params, spec, cfg.run.dt_s);

    ResetTail tail;
    tail.flip_duration = res.hold_time;
    tail.final_displacement = res.displacement;
    spec.reset_tail = tail;
    EvolveOptions opts;
    opts.dt = cfg.run.dt_s;
    opts.sample_interval = cfg.run.sample_interval_s;
    opts.auto_refine = true;
    ProtocolResult traced = run_protocol(params, spec, opts, Frame::dispersive);
    write_trajectory_csv(sink.path("reset_g.csv"), traced.traj_g);
    write_trajectory_csv(sink.path("reset_e.csv"), traced.traj_e);

    json j;
    j["residual"] = res.residual;
    j["hold_time_s"] = res.hold_time;
    j["half_turn_s"] = kTwoPi / 2.0 / std::abs(constants.chi);
    j["displacement"] = {res.displacement.real(), res.displacement.imag()};
    j["merge_gap"] = res.merge_gap;
    write_text_file(sink.path("reset.json"), j.dump(2) + "\n");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!isspace((unsigned char)ch)) {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    return read_text_file(path);
}

std::vector<ShotRecord> parse_shots_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<ShotRecord> shots;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;  // header
        }
        auto cells = split_csv_line(line);
        if (cells.size() < 3)
            throw Error(Error::Code::io, "shots CSV row needs re_S, im_S, true_label");
        ShotRecord r;
        r.value = {std::stod(cells[0]), std::stod(cells[1])};
        r.true_label = cells[2] == "e" ? PrepLabel::e : PrepLabel::g;
        r.assigned_label = r.true_label;
        shots.push_back(r);
    }
    if (shots.empty()) throw Error(Error::Code::io, "shots CSV has no data rows");
    return shots;
}

void parse_decay_csv(const std::string& text, std::vector<double>& lengths,
                     std::vector<double>& survival) {
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (first) {
            first = false;
            // headerless files are accepted too
            try {
                std::stod(cells[0]);
            } catch (...) {
                continue;
            }
        }
        if (cells.size() < 2)
            throw Error(Error::Code::io, "decay CSV rows need length, survival");
        lengths.push_back(std::stod(cells[0]));
        survival.push_back(std::stod(cells[1]));
    }
    if (lengths.empty()) throw Error(Error::Code::io, "decay CSV has no data rows");
}

void do_fit(const ExperimentConfig& cfg, const CommandRequest& req, ArtifactSink& sink) {
    if (req.fit_kind == "two-gaussian") {
        auto shots = parse_shots_csv(read_input(req.input_path));
        auto [ref_g, ref_e] = references(shots);
        std::vector<double> z;
        auto all = project_onto_axis(shots, ref_g, ref_e);
        for (size_t i = 0; i < shots.size(); ++i)
            if (shots[i].true_label == PrepLabel::g) z.push_back(all[i]);
        TwoGaussianFit fit = fit_two_gaussian(z);
        json j;
        j["eps_th"] = fit.eps_th;
        j["center_g"] = fit.center_g;
        j["center_e"] = fit.center_e;
        j["sigma"] = fit.sigma;
        j["residual"] = fit.residual;
        j["converged"] = fit.converged;
        j["t_eff_K"] =
            effective_temperature(fit.eps_th, kTwoPi * cfg.system.omega_q_hz);
        write_text_file(sink.path("fit_two_gaussian.json"), j.dump(2) + "\n");
        std::cout << j.dump(2) << "\n";
    } else if (req.fit_kind == "rb") {
        std::vector<double> lengths, survival;
        parse_decay_csv(read_input(req.input_path), lengths, survival);
        RbFit ref_fit = fit_rb_decay(lengths, survival);
        json j;
        j["reference"] = {{"A", ref_fit.amplitude},
                          {"p", ref_fit.p},
                          {"B", ref_fit.offset},
                          {"residual", ref_fit.residual}};
        if (!req.interleaved_path.empty()) {
            std::vector<double> li, yi;
            parse_decay_csv(read_input(req.interleaved_path), li, yi);
            RbFit int_fit = fit_rb_decay(li, yi);
            double eps_gate = rb_gate_error(int_fit.p, ref_fit.p);
            j["interleaved"] = {{"A", int_fit.amplitude},
                                {"p", int_fit.p},
                                {"B", int_fit.offset},
                                {"residual", int_fit.residual}};
            j["eps_gate"] = eps_gate;
            j["eps_prep"] = eps_gate + cfg.noise.thermal_eps;
        }
        write_text_file(sink.path("fit_rb.json"), j.dump(2) + "\n");
        std::cout << j.dump(2) << "\n";
    } else {
        throw Error(Error::Code::config,
                    "unknown fit kind '" + req.fit_kind + "' (use two-gaussian or rb)");
    }
}

}  // namespace

int run_command(const ExperimentConfig& cfg, const CommandRequest& req) {
    std::string out_dir =
        req.out_dir_override.empty() ? cfg.run.output_dir : req.out_dir_override;
    try {
        ArtifactSink sink(out_dir);
        if (req.subcommand == "simulate") {
            do_simulate(cfg, sink);
        } else if (req.subcommand == "analytic") {
            do_analytic(cfg, sink);
        } else if (req.subcommand == "shots") {
            do_shots(cfg, sink);
        } else if (req.subcommand == "sweep-phase") {
            do_sweep_phase(cfg, sink);
        } else if (req.subcommand == "reset") {
            do_reset(cfg, sink);
        } else if (req.subcommand == "fit") {
            do_fit(cfg, req, sink);
        } else {
            throw Error(Error::Code::config, "unknown subcommand '" + req.subcommand + "'");
        }
        write_manifest(cfg, sink);
        return 0;
    } catch (const Error& e) {
        json err;
        err["error"] = code_name(e.code());
        err["message"] = e.what();
        err["exit_code"] = exit_code_for(e.code());
        std::cerr << err.dump(2) << "\n";
        try {
            write_text_file((fs::path(out_dir) / "error.json").string(), err.dump(2) + "\n");
        } catch (...) {
        }
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        json err;
        err["error"] = "internal";
        err["message"] = e.what();
        err["exit_code"] = 1;
        std::cerr << err.dump(2) << "\n";
        return 1;
    }
}

}  // namespace mcread
