#pragma once

#include <optional>
#include <string>

#include "mcread/analytic.hpp"
#include "mcread/lindblad.hpp"

namespace mcread {

enum class ProtocolKind {
    conventional,        // resonator drive only
    qubit_only,          // qubit drive only
    multichannel,        // both channels, phased for fast separation
    vacuum_lock,         // i Omega_r = Omega_q chi / g, pins alpha_g to vacuum
    unconditional_reset  // measurement, virtual-origin flip, final displacement
};

/// Reset-specific tail: hold time with the virtual origin flipped, then a
/// short resonator-only segment applying the given net displacement.
struct ResetTail {
    double flip_duration = 0;        // seconds
    Complex final_displacement = 0;  // net amplitude shift applied at the end
};

struct ProtocolSpec {
    ProtocolKind kind = ProtocolKind::conventional;
    double duration = 0;       // measurement segment, seconds
    double omega_q_mag = 0;    // rad/s
    double omega_r_mag = 0;    // rad/s
    double phi_q = 0;          // radians
    double phi_r = 0;          // radians
    double rise_time = 0;      // cosine turn-on ramp, seconds
    std::optional<ResetTail> reset_tail;

    Complex omega_q() const { return std::polar(omega_q_mag, phi_q); }
    Complex omega_r() const { return std::polar(omega_r_mag, phi_r); }
    void validate() const;
};

/// Single-channel reference amplitudes the dB offsets apply to: the
/// resonator amplitude that holds the conventional g-branch at
/// photon_target photons in steady state, and the qubit amplitude whose
/// virtual-origin displacement has the same magnitude.
struct DriveReference {
    double omega_r_ref = 0;
    double omega_q_ref = 0;
};

DriveReference reference_drives(const SystemParams& p, const DispersiveConstants& c,
                                double photon_target = 2.5);

/// Amplitude factor for a power change in dB.
double db_amplitude(double db);

/// Named presets: "conventional", "qubit-only", "multichannel",
/// "multichannel-imprecise" (resonator phase off by 0.1 rad),
/// "vacuum-lock", "reset". Multichannel powers sit 2 dB (resonator) and
/// 1 dB (qubit) below the single-channel references; the relative phase
/// puts the resonator drive along the virtual-origin rotation axis.
ProtocolSpec make_preset(const std::string& name, const SystemParams& p,
                         const DispersiveConstants& c, double duration,
                         double photon_target = 2.5);

/// Uniform power rescale of both channels.
ProtocolSpec scale_drives(ProtocolSpec spec, double factor);

PulseSchedule build_schedule(const ProtocolSpec& spec, const SystemParams& p,
                             const DispersiveConstants& c);

struct SeparationDiagnostics {
    std::vector<double> separation;  // |alpha_e - alpha_g| per snapshot
    double initial_rate = 0;         // finite difference at t = 0, 1/s
    double max_separation = 0;
    double time_of_max = 0;
};

struct ProtocolResult {
    Trajectory traj_g, traj_e;
    SeparationDiagnostics diagnostics;
};

/// Runs the two preparations concurrently and derives the separation
/// diagnostics from the paired snapshots.
ProtocolResult run_protocol(const SystemParams& p, const ProtocolSpec& spec,
                            const EvolveOptions& opts, Frame frame = Frame::dispersive);

struct ResetResult {
    double residual = 0;       // max over preparations of |alpha(t_end)|
    double hold_time = 0;      // tuned flip segment length
    Complex displacement = 0;  // tuned final displacement
    double merge_gap = 0;      // |alpha_e - alpha_g| at the chosen merge time
};

/// Tunes the hold time within +/-10% of pi/|chi| (the transmon's
/// level-dependent rotation rates shift the ideal merge time) and the
/// final displacement, then reports the worst-case residual amplitude.
ResetResult reset_residual_detailed(const SystemParams& p, ProtocolSpec spec, double dt);

double reset_residual(const SystemParams& p, const ProtocolSpec& spec, double dt);

struct LeakageCalibration {
    ProtocolSpec spec;        // multichannel preset at the calibrated powers
    double scale = 0;         // applied amplitude factor
    double leakage_g = 0;     // measured on the full multilevel model
    double leakage_e = 0;
};

/// Scales the multichannel drives to the largest power that keeps the
/// population outside the computational subspace below the threshold in
/// the full multilevel rotating-frame simulation (drive maximized subject
/// to negligible third-level excitation). margin < 1 backs off the
/// closed-form estimate before the simulation check.
LeakageCalibration calibrate_leakage_limited(const SystemParams& p, double duration,
                                             double threshold = 0.01, double margin = 0.7);

}  // namespace mcread
