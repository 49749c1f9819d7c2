#include "mcread/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mcread {

using nlohmann::json;

namespace {

// Field-by-field strict extraction.
struct SectionReader {
    const json& obj;
    std::string section;
    std::vector<std::string> known;

    SectionReader(const json& j, std::string name) : obj(j), section(std::move(name)) {
        if (!obj.is_object())
            throw Error(Error::Code::config, "section '" + section + "' must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        known.push_back(key);
        auto it = obj.find(key);
        if (it == obj.end()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw Error(Error::Code::config,
                        "field '" + section + "." + key + "' has the wrong type");
        }
    }

    void finish() const {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const auto& k : known)
                if (k == it.key()) ok = true;
            if (!ok)
                throw Error(Error::Code::config,
                            "unknown key '" + it.key() + "' in section '" + section + "'");
        }
    }
};

void require(bool cond, const std::string& field, const std::string& what) {
    if (!cond) throw Error(Error::Code::config, "field '" + field + "': " + what);
}

void validate(const ExperimentConfig& c) {
    require(c.system.g_hz > 0, "system.g_hz", "must be positive");
    require(c.system.omega_r_hz > 0, "system.omega_r_hz", "must be positive");
    require(c.system.kappa_i_hz >= 0, "system.kappa_i_hz", "must be non-negative");
    require(c.system.kappa_x_hz >= 0, "system.kappa_x_hz", "must be non-negative");
    require(c.system.gamma_1_per_s >= 0, "system.gamma_1_per_s", "must be non-negative");
    require(c.system.n_transmon >= 2, "system.n_transmon", "must be >= 2");
    require(c.system.n_fock >= 2, "system.n_fock", "must be >= 2");
    require(c.system.n_transmon * c.system.n_fock <= 4096, "system.n_fock",
            "n_transmon * n_fock must not exceed 4096");
    require(c.protocol.duration_s > 0, "protocol.duration_s", "must be positive");
    require(c.protocol.omega_q_mag_hz >= 0, "protocol.omega_q_mag_hz", "must be >= 0");
    require(c.protocol.omega_r_mag_hz >= 0, "protocol.omega_r_mag_hz", "must be >= 0");
    require(c.protocol.photon_target > 0, "protocol.photon_target", "must be positive");
    require(c.protocol.rise_time_s >= 0, "protocol.rise_time_s", "must be >= 0");
    require(c.protocol.flip_duration_s >= 0, "protocol.flip_duration_s", "must be >= 0");
    require(c.noise.noise_factor >= 1.0, "noise.noise_factor", "must be >= 1 (vacuum floor)");
    require(c.noise.sigma_quadrature >= 0, "noise.sigma_quadrature", "must be >= 0");
    require(c.noise.thermal_eps >= 0 && c.noise.thermal_eps < 1, "noise.thermal_eps",
            "must lie in [0, 1)");
    require(c.noise.reference_window_s > 0, "noise.reference_window_s", "must be positive");
    require(c.run.dt_s > 0, "run.dt_s", "must be positive");
    require(c.run.sample_interval_s > 0, "run.sample_interval_s", "must be positive");
    require(c.run.n_shots >= 1, "run.n_shots", "must be >= 1");
    require(c.run.n_phase_points >= 2, "run.n_phase_points", "must be >= 2");
    for (double tau : c.run.tau_grid_s)
        require(tau > 0, "run.tau_grid_s", "entries must be positive");

    static const std::vector<std::string> presets = {
        "conventional", "qubit-only",  "multichannel", "multichannel-imprecise",
        "vacuum-lock",  "reset",       "custom"};
    bool preset_ok = false;
    for (const auto& s : presets) preset_ok |= s == c.protocol.preset;
    require(preset_ok, "protocol.preset", "unknown preset '" + c.protocol.preset + "'");
    static const std::vector<std::string> kinds = {"conventional", "qubit_only",
                                                   "multichannel", "vacuum_lock",
                                                   "unconditional_reset"};
    bool kind_ok = false;
    for (const auto& s : kinds) kind_ok |= s == c.protocol.kind;
    require(kind_ok, "protocol.kind", "unknown kind '" + c.protocol.kind + "'");
    require(c.protocol.frame == "rotating" || c.protocol.frame == "dispersive" ||
                c.protocol.frame == "displaced",
            "protocol.frame", "must be rotating, dispersive, or displaced");
}

ExperimentConfig from_json(const json& doc) {
    if (!doc.is_object()) throw Error(Error::Code::config, "config root must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "system" && it.key() != "protocol" && it.key() != "noise" &&
            it.key() != "run")
            throw Error(Error::Code::config, "unknown top-level section '" + it.key() + "'");

    ExperimentConfig c;
    if (doc.contains("system")) {
        SectionReader r(doc["system"], "system");
        r.get("g_hz", c.system.g_hz);
        r.get("omega_r_hz", c.system.omega_r_hz);
        r.get("omega_q_hz", c.system.omega_q_hz);
        r.get("anharmonicity_hz", c.system.anharmonicity_hz);
        r.get("kappa_i_hz", c.system.kappa_i_hz);
        r.get("kappa_x_hz", c.system.kappa_x_hz);
        r.get("gamma_1_per_s", c.system.gamma_1_per_s);
        r.get("omega_d_hz", c.system.omega_d_hz);
        r.get("n_transmon", c.system.n_transmon);
        r.get("n_fock", c.system.n_fock);
        r.finish();
    }
    if (doc.contains("protocol")) {
        SectionReader r(doc["protocol"], "protocol");
        r.get("preset", c.protocol.preset);
        r.get("kind", c.protocol.kind);
        r.get("duration_s", c.protocol.duration_s);
        r.get("omega_q_mag_hz", c.protocol.omega_q_mag_hz);
        r.get("omega_r_mag_hz", c.protocol.omega_r_mag_hz);
        r.get("phi_q_rad", c.protocol.phi_q_rad);
        r.get("phi_r_rad", c.protocol.phi_r_rad);
        r.get("photon_target", c.protocol.photon_target);
        r.get("rise_time_s", c.protocol.rise_time_s);
        r.get("flip_duration_s", c.protocol.flip_duration_s);
        r.get("frame", c.protocol.frame);
        r.finish();
    }
    if (doc.contains("noise")) {
        SectionReader r(doc["noise"], "noise");
        r.get("noise_factor", c.noise.noise_factor);
        r.get("sigma_quadrature", c.noise.sigma_quadrature);
        r.get("thermal_eps", c.noise.thermal_eps);
        r.get("reference_window_s", c.noise.reference_window_s);
        r.finish();
    }
    if (doc.contains("run")) {
        SectionReader r(doc["run"], "run");
        r.get("dt_s", c.run.dt_s);
        r.get("sample_interval_s", c.run.sample_interval_s);
        r.get("n_shots", c.run.n_shots);
        r.get("tau_grid_s", c.run.tau_grid_s);
        r.get("seed", c.run.seed);
        r.get("output_dir", c.run.output_dir);
        r.get("n_phase_points", c.run.n_phase_points);
        r.get("eps_prep", c.run.eps_prep);
        r.finish();
    }
    validate(c);
    return c;
}

json to_json(const ExperimentConfig& c) {
    json doc;
    doc["system"] = {{"g_hz", c.system.g_hz},
                     {"omega_r_hz", c.system.omega_r_hz},
                     {"omega_q_hz", c.system.omega_q_hz},
                     {"anharmonicity_hz", c.system.anharmonicity_hz},
                     {"kappa_i_hz", c.system.kappa_i_hz},
                     {"kappa_x_hz", c.system.kappa_x_hz},
                     {"gamma_1_per_s", c.system.gamma_1_per_s},
                     {"omega_d_hz", c.system.omega_d_hz},
                     {"n_transmon", c.system.n_transmon},
                     {"n_fock", c.system.n_fock}};
    doc["protocol"] = {{"preset", c.protocol.preset},
                       {"kind", c.protocol.kind},
                       {"duration_s", c.protocol.duration_s},
                       {"omega_q_mag_hz", c.protocol.omega_q_mag_hz},
                       {"omega_r_mag_hz", c.protocol.omega_r_mag_hz},
                       {"phi_q_rad", c.protocol.phi_q_rad},
                       {"phi_r_rad", c.protocol.phi_r_rad},
                       {"photon_target", c.protocol.photon_target},
                       {"rise_time_s", c.protocol.rise_time_s},
                       {"flip_duration_s", c.protocol.flip_duration_s},
                       {"frame", c.protocol.frame}};
    doc["noise"] = {{"noise_factor", c.noise.noise_factor},
                    {"sigma_quadrature", c.noise.sigma_quadrature},
                    {"thermal_eps", c.noise.thermal_eps},
                    {"reference_window_s", c.noise.reference_window_s}};
    doc["run"] = {{"dt_s", c.run.dt_s},
                  {"sample_interval_s", c.run.sample_interval_s},
                  {"n_shots", c.run.n_shots},
                  {"tau_grid_s", c.run.tau_grid_s},
                  {"seed", c.run.seed},
                  {"output_dir", c.run.output_dir},
                  {"n_phase_points", c.run.n_phase_points},
                  {"eps_prep", c.run.eps_prep}};
    return doc;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Error::Code::config, std::string("config parse error: ") + e.what());
    }
    return from_json(doc);
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Code::io, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) { return to_json(c).dump(2); }

std::string apply_override(const std::string& config_text, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw Error(Error::Code::config,
                    "override must look like section.key=value, got '" + assignment + "'");
    std::string path = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);
    auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= path.size())
        throw Error(Error::Code::config,
                    "override path must be section.key, got '" + path + "'");
    std::string section = path.substr(0, dot);
    std::string key = path.substr(dot + 1);

    json doc;
    try {
        doc = config_text.empty() ? json::object() : json::parse(config_text);
    } catch (const json::exception& e) {
        throw Error(Error::Code::config, std::string("config parse error: ") + e.what());
    }
    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // bare strings (preset names, paths)
    }
    doc[section][key] = parsed;
    return doc.dump(2);
}

std::string config_hash(const ExperimentConfig& c) {
    std::string canon = serialize_config(c);
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

SystemParams ExperimentConfig::to_system_params() const {
    SystemParams p = SystemParams::make(
        kTwoPi * system.g_hz, kTwoPi * system.omega_r_hz,
        kTwoPi * (system.omega_q_hz - system.omega_r_hz), kTwoPi * system.anharmonicity_hz,
        kTwoPi * system.kappa_i_hz, kTwoPi * system.kappa_x_hz, system.n_transmon,
        system.n_fock);
    p.gamma_1 = system.gamma_1_per_s;
    if (system.omega_d_hz != 0.0) p.omega_d = kTwoPi * system.omega_d_hz;
    return p;
}

ProtocolSpec ExperimentConfig::to_protocol_spec(const SystemParams& p,
                                                const DispersiveConstants& c) const {
    ProtocolSpec spec;
    if (protocol.preset != "custom") {
        spec = make_preset(protocol.preset, p, c, protocol.duration_s,
                           protocol.photon_target);
    } else {
        if (protocol.kind == "conventional") spec.kind = ProtocolKind::conventional;
        else if (protocol.kind == "qubit_only") spec.kind = ProtocolKind::qubit_only;
        else if (protocol.kind == "multichannel") spec.kind = ProtocolKind::multichannel;
        else if (protocol.kind == "vacuum_lock") spec.kind = ProtocolKind::vacuum_lock;
        else spec.kind = ProtocolKind::unconditional_reset;
        spec.duration = protocol.duration_s;
        spec.phi_q = protocol.phi_q_rad;
        spec.phi_r = protocol.phi_r_rad;
    }
    if (protocol.omega_q_mag_hz > 0) spec.omega_q_mag = kTwoPi * protocol.omega_q_mag_hz;
    if (protocol.omega_r_mag_hz > 0) spec.omega_r_mag = kTwoPi * protocol.omega_r_mag_hz;
    spec.rise_time = protocol.rise_time_s;
    if (protocol.flip_duration_s > 0 && spec.kind == ProtocolKind::unconditional_reset) {
        ResetTail tail;
        tail.flip_duration = protocol.flip_duration_s;
        spec.reset_tail = tail;
    }
    return spec;
}

NoiseModel ExperimentConfig::to_noise_model() const {
    if (noise.sigma_quadrature > 0) {
        NoiseModel m;
        m.sigma_quadrature = noise.sigma_quadrature;
        m.sample_interval = run.sample_interval_s;
        m.seed = run.seed;
        return m;
    }
    return NoiseModel::calibrated(noise.noise_factor, noise.reference_window_s,
                                  run.sample_interval_s, run.seed);
}

Frame ExperimentConfig::to_frame() const {
    if (protocol.frame == "rotating") return Frame::rotating;
    if (protocol.frame == "displaced") return Frame::displaced;
    return Frame::dispersive;
}

bool operator==(const ExperimentConfig::System& a, const ExperimentConfig::System& b) {
    return a.g_hz == b.g_hz && a.omega_r_hz == b.omega_r_hz && a.omega_q_hz == b.omega_q_hz &&
           a.anharmonicity_hz == b.anharmonicity_hz && a.kappa_i_hz == b.kappa_i_hz &&
           a.kappa_x_hz == b.kappa_x_hz && a.gamma_1_per_s == b.gamma_1_per_s &&
           a.omega_d_hz == b.omega_d_hz && a.n_transmon == b.n_transmon &&
           a.n_fock == b.n_fock;
}
bool operator==(const ExperimentConfig::Protocol& a, const ExperimentConfig::Protocol& b) {
    return a.preset == b.preset && a.kind == b.kind && a.duration_s == b.duration_s &&
           a.omega_q_mag_hz == b.omega_q_mag_hz && a.omega_r_mag_hz == b.omega_r_mag_hz &&
           a.phi_q_rad == b.phi_q_rad && a.phi_r_rad == b.phi_r_rad &&
           a.photon_target == b.photon_target && a.rise_time_s == b.rise_time_s &&
           a.flip_duration_s == b.flip_duration_s && a.frame == b.frame;
}
bool operator==(const ExperimentConfig::Noise& a, const ExperimentConfig::Noise& b) {
    return a.noise_factor == b.noise_factor && a.sigma_quadrature == b.sigma_quadrature &&
           a.thermal_eps == b.thermal_eps && a.reference_window_s == b.reference_window_s;
}
bool operator==(const ExperimentConfig::Run& a, const ExperimentConfig::Run& b) {
    return a.dt_s == b.dt_s && a.sample_interval_s == b.sample_interval_s &&
           a.n_shots == b.n_shots && a.tau_grid_s == b.tau_grid_s && a.seed == b.seed &&
           a.output_dir == b.output_dir && a.n_phase_points == b.n_phase_points &&
           a.eps_prep == b.eps_prep;
}
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.system == b.system && a.protocol == b.protocol && a.noise == b.noise &&
           a.run == b.run;
}

}  // namespace mcread
