#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mcread/pulses.hpp"
#include "mcread/system.hpp"

namespace mcread {

enum class Frame { rotating, dispersive, displaced };

enum class PrepLabel { g, e, custom };

inline const char* to_string(PrepLabel l) {
    switch (l) {
        case PrepLabel::g: return "g";
        case PrepLabel::e: return "e";
        default: return "custom";
    }
}

/// Initial condition of the joint state. By default the resonator starts
/// in vacuum; a full joint density matrix can be supplied instead.
struct InitialState {
    PrepLabel label = PrepLabel::g;
    std::optional<Matrix> qubit_rho;  // transmon-space density, tensored with vacuum
    std::optional<Matrix> joint_rho;  // full joint density (rotating/dispersive only)

    static InitialState ground() { return {PrepLabel::g, std::nullopt, std::nullopt}; }
    static InitialState excited() { return {PrepLabel::e, std::nullopt, std::nullopt}; }
    static InitialState qubit(const Matrix& rho) {
        return {PrepLabel::custom, rho, std::nullopt};
    }
    static InitialState joint(const Matrix& rho) {
        return {PrepLabel::custom, std::nullopt, rho};
    }
};

struct EvolveOptions {
    double dt = 0;                   // required, seconds
    double sample_interval = 2e-9;   // snapshot spacing, seconds
    bool override_dt_guard = false;  // skip the accuracy guard (stability still enforced)
    bool auto_refine = false;        // refine dt per segment to meet the guard instead of
                                     // erroring (used by multi-segment protocol runs whose
                                     // short strong segments need finer steps)
    double trace_tol = 1e-4;         // abort threshold for |tr(rho) - 1|
    double truncation_warn = 1e-3;   // top-Fock-level population warning threshold
    std::function<void(double, const Matrix&)> state_observer;  // called per snapshot
};

/// Time series of resonator expectation values and transmon populations
/// for one preparation, plus per-run hygiene diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<Complex> alpha;                    // <a>(t)
    std::vector<std::vector<double>> populations;  // populations[level][i]
    std::vector<double> photon_number;             // <a^dag a>(t)
    PrepLabel prep_label = PrepLabel::g;

    std::vector<std::string> warnings;
    double max_trace_drift = 0;
    double max_herm_residual = 0;
    double max_top_fock = 0;
    double qubit_slew_ratio = 0;  // max |dOmega_q/dt| / (Delta^2/sqrt(2))

    int n_levels() const { return int(populations.size()); }
    size_t n_samples() const { return times.size(); }
    Complex alpha_at_end() const { return alpha.empty() ? Complex(0) : alpha.back(); }
};

/// L[a]rho = a rho a^dag - (a^dag a rho + rho a^dag a)/2 for a general
/// square matrix a; traceless by construction.
Matrix lindblad_dissipator(const Matrix& a, const Matrix& rho);

/// Integrates rho' = -i[H, rho] + kappa L[a] rho (+ gamma_1 L[lowering] rho
/// when enabled) with classic fixed-step 4th-order Runge-Kutta, recording
/// snapshots every sample_interval. Step boundaries align exactly with
/// segment boundaries. The density matrix is re-symmetrized after every
/// step; trace drift beyond trace_tol aborts with an instability error.
Trajectory evolve(const SystemParams& params, const PulseSchedule& schedule,
                  const InitialState& initial, const EvolveOptions& opts, Frame frame);

/// Max over time of the population outside the computational subspace
/// (levels f and above). Requires a trajectory with >= 3 transmon levels.
double leakage(const Trajectory& traj);

}  // namespace mcread
