#pragma once

#include <string>
#include <vector>

#include "mcread/protocols.hpp"
#include "mcread/singleshot.hpp"

namespace mcread {

/// Reference constants of the bundled sample that are reported but not
/// derivable from the model parameters.
namespace sample_constants {
constexpr double kMeasuredChi = -kTwoPi * 1.6e6;     // rad/s, resonator pull measurement
constexpr double kOmegaQubit = kTwoPi * 7.86e9;      // rad/s
constexpr double kT1TableSeconds = 3.5e-6;           // energy decay, parameter table
constexpr double kT1QuotedSeconds = 3.0e-6;          // energy decay as quoted in prose
constexpr double kRamseySeconds = 3.0e-6;            // Ramsey decay
constexpr double kThermalEps = 0.006;                // thermal excitation probability
}  // namespace sample_constants

/// Fully validated experiment description. All frequencies in the config
/// file are ordinary frequencies in Hz and converted to angular units
/// here; durations are seconds.
struct ExperimentConfig {
    struct System {
        double g_hz = 130e6;
        double omega_r_hz = 6.02e9;
        double omega_q_hz = 7.86e9;
        double anharmonicity_hz = -264e6;
        double kappa_i_hz = 0.5e6;
        double kappa_x_hz = 1.5e6;
        double gamma_1_per_s = 0.0;
        double omega_d_hz = 0.0;  // 0 = auto: omega_r - chi1/2
        int n_transmon = 4;
        int n_fock = 30;
    } system;

    struct Protocol {
        std::string preset = "conventional";  // or "custom"
        std::string kind = "conventional";    // used when preset == "custom"
        double duration_s = 280e-9;
        double omega_q_mag_hz = 0.0;  // 0 = from the power policy
        double omega_r_mag_hz = 0.0;
        double phi_q_rad = 0.0;
        double phi_r_rad = 0.0;
        double photon_target = 2.5;
        double rise_time_s = 0.0;
        double flip_duration_s = 0.0;  // 0 = pi/|chi|
        std::string frame = "rotating";
    } protocol;

    struct Noise {
        double noise_factor = 1.3;       // amplifier factor F >= 1
        double sigma_quadrature = 0.0;   // 0 = calibrate from noise_factor
        double thermal_eps = sample_constants::kThermalEps;
        double reference_window_s = 420e-9;
    } noise;

    struct Run {
        double dt_s = 2e-11;
        double sample_interval_s = 2e-9;
        int n_shots = 10000;
        std::vector<double> tau_grid_s;
        uint64_t seed = 1;
        std::string output_dir = "out";
        int n_phase_points = 32;
        double eps_prep = 0.0;
    } run;

    SystemParams to_system_params() const;
    ProtocolSpec to_protocol_spec(const SystemParams& p, const DispersiveConstants& c) const;
    NoiseModel to_noise_model() const;
    Frame to_frame() const;
};

/// Strict parser: unknown keys, missing sections of the wrong type, and
/// unit violations are errors with field-path diagnostics. Omitted fields
/// take the bundled-sample defaults.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical (sorted-key) serialization; parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& c);

/// Applies a dotted-path override like "run.seed=7" or
/// "protocol.preset=multichannel" to a config document.
std::string apply_override(const std::string& config_text, const std::string& assignment);

/// FNV-1a hash of the canonical serialization; changes iff any field does.
std::string config_hash(const ExperimentConfig& c);

bool operator==(const ExperimentConfig::System& a, const ExperimentConfig::System& b);
bool operator==(const ExperimentConfig::Protocol& a, const ExperimentConfig::Protocol& b);
bool operator==(const ExperimentConfig::Noise& a, const ExperimentConfig::Noise& b);
bool operator==(const ExperimentConfig::Run& a, const ExperimentConfig::Run& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace mcread
