#pragma once

#include <utility>
#include <vector>

#include "mcread/operators.hpp"

namespace mcread {

/// Sink for non-fatal diagnostics (dispersive-validity warnings etc.).
using WarningSink = std::vector<std::string>;

/// Physical constants of the coupled transmon-resonator system.
/// All frequencies and rates are angular (rad/s). The transmon level
/// detunings follow Delta_k = k*Delta + k(k-1)/2 * anharmonicity with
/// Delta_0 = 0, unless set explicitly.
///
/// Tensor ordering is fixed as transmon (x) resonator everywhere; joint
/// index = level * n_fock + fock.
struct SystemParams {
    double g = 0;         // qubit-resonator coupling g0
    double omega_r = 0;   // resonator frequency
    double omega_d = 0;   // shared drive frequency for both channels
    std::vector<double> level_detunings;  // Delta_k, k = 0..n_transmon-1
    double anharmonicity = 0;             // alpha = -E_c/hbar, negative
    double kappa_i = 0;                   // internal resonator loss
    double kappa_x = 0;                   // external resonator loss
    double gamma_1 = 0;                   // optional qubit decay, default off
    int n_transmon = 2;
    int n_fock = 2;

    double kappa() const { return kappa_i + kappa_x; }
    double delta() const { return level_detunings.size() > 1 ? level_detunings[1] : 0.0; }
    int dim() const { return n_transmon * n_fock; }

    /// Parameters of the reference sample this package ships with
    /// (g/2pi = 130 MHz, omega_r/2pi = 6.02 GHz, qubit at 7.86 GHz,
    /// anharmonicity -264 MHz, kappa_x/2pi = 1.5 MHz, kappa_i/2pi = 0.5 MHz).
    /// omega_d defaults to omega_r - chi1/2 so the two computational-state
    /// rotation rates are +/- chi.
    static SystemParams sample_transmon(int n_transmon = 4, int n_fock = 30);

    /// Fills level_detunings from (delta, anharmonicity) and resolves the
    /// self-referential default omega_d = omega_r - chi1/2 by fixed point.
    static SystemParams make(double g, double omega_r, double delta, double anharmonicity,
                             double kappa_i, double kappa_x, int n_transmon, int n_fock);

    void validate() const;
};

/// chi0 = g0^2/Dtilde_1, chi1 = g1^2/(Dtilde_2 - Dtilde_1), chi = chi0 - chi1/2,
/// plus the shifted detunings Dtilde_k = omega_k - k*omega_d.
struct DispersiveConstants {
    double chi0 = 0;
    double chi1 = 0;
    double chi = 0;
    std::vector<double> delta_tilde;
};

/// Transmon ladder Delta_k = k*delta + k(k-1)/2 * anharmonicity.
std::vector<double> transmon_detunings(double delta, double anharmonicity, int n_levels);

/// g_k = g*sqrt(k+1), lambda_k = sqrt(k+1) for k = 0..n_transmon-2.
std::pair<std::vector<double>, std::vector<double>> coupling_ladder(const SystemParams& p);

/// Shifted detunings Dtilde_k = Delta_k + k(omega_r - omega_d).
std::vector<double> shifted_detunings(const SystemParams& p);

DispersiveConstants dispersive_constants(const SystemParams& p, WarningSink* warnings = nullptr);

/// Laboratory-frame Hamiltonian at time t with real drive waveforms
/// built from the complex amplitudes:
///   Omega(t) = Re(Omega) cos(omega_d t) + Im(Omega) sin(omega_d t).
/// Kept for unit tests of the rotating-frame transformation; time
/// evolution always runs in the rotating frame.
Matrix build_lab_hamiltonian(const SystemParams& p, double t, Complex omega_q_drive,
                             Complex omega_r_drive);

/// Frame rotating at omega_d after the rotating-wave approximation:
///   (omega_r - omega_d) a^dag a + sum_k Dtilde_k |k><k|
///   + { i Omega_r a^dag + sum_k [g_k a^dag + Omega_q lambda_k] |k+1><k| + H.c. }
Matrix build_rotating_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                  Complex omega_r_drive);

/// Dispersive-frame Hamiltonian restricted to the lowest min(n_transmon, 3)
/// transmon levels, second order in g_k/Dtilde, including the cross-drive
/// terms (qubit drive displacing the resonator, resonator drive tilting the
/// qubit). Two-level truncation (n_transmon = 2) sets g1 = chi1 = 0 and
/// reduces to the sigma_z form with sigma_z = |g><g| - |e><e|.
Matrix build_dispersive_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                    Complex omega_r_drive, WarningSink* warnings = nullptr);

/// Same physics written in the frame displaced by the virtual origin
/// alpha_vo = -Omega_q/g (b = a - alpha_vo). The qubit-state-dependent
/// linear drive terms cancel exactly; what remains on b^dag is
/// i Omega_r + alpha_vo (omega_r - omega_d). The global energy constant
/// (omega_r-omega_d)|alpha_vo|^2 - 2 Im(Omega_r conj(alpha_vo)) is kept so
/// the matrix is unitarily equivalent to the dispersive builder without an
/// arbitrary offset.
Matrix build_displaced_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                   Complex omega_r_drive, WarningSink* warnings = nullptr);

/// Qubit-state-conditional variant of the dispersive frame: per level j,
/// E_j + w_j a^dag a + (beta_j a^dag + H.c.) with the inter-level
/// drive/tilt terms dropped. This block-diagonal form is what the
/// closed-form trajectory solution describes; the engine integrates it for
/// frame=dispersive (the tilt terms act at (Omega/Dtilde_1)^2 but would
/// force GHz-resolution steps).
Matrix build_dispersive_block_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                          Complex omega_r_drive,
                                          WarningSink* warnings = nullptr);

/// Conditional displaced-frame variant (b = a - alpha_vo): sector pulls on
/// b^dag b with the common drive i Omega_r + alpha_vo (omega_r - omega_d)
/// on b^dag, plus the sector energy constants.
Matrix build_displaced_block_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                         Complex omega_r_drive,
                                         WarningSink* warnings = nullptr);

/// Sector energy constants E_j of the dispersive frame. For preparations
/// without inter-level coherences these act as per-sector gauge phases;
/// the engine subtracts them so the step-size guard reflects the actual
/// resonator dynamics instead of the ~GHz qubit splitting.
std::vector<double> dispersive_sector_energies(const SystemParams& p);

/// Same for the displaced frame (includes the global offset).
std::vector<double> displaced_sector_energies(const SystemParams& p, Complex omega_q_drive,
                                              Complex omega_r_drive);

}  // namespace mcread
