#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mcread/lindblad.hpp"

namespace mcread {

/// Matched-filter integration weights, each channel normalized so that
/// sum(w * dt) = 1. A channel with no separation anywhere is flagged
/// degenerate and zeroed; the integral then uses the other quadrature only.
struct WeightFunctions {
    std::vector<double> times;
    std::vector<double> w_re, w_im;  // 1/s
    bool re_degenerate = false;
    bool im_degenerate = false;
};

/// Per-sample additive Gaussian noise on each quadrature of alpha(t).
struct NoiseModel {
    double sigma_quadrature = 0;  // photon^{1/2} units, per quadrature per sample
    double sample_interval = 2e-9;
    uint64_t seed = 0;

    /// Pins sigma so that a vacuum input integrated with uniform weights
    /// over reference_window has per-quadrature variance noise_factor/2
    /// (the vacuum husimi variance of 1/2 photon times the amplifier
    /// factor F >= 1).
    static NoiseModel calibrated(double noise_factor, double reference_window,
                                 double sample_interval, uint64_t seed);
};

struct ShotRecord {
    Complex value;               // integrated observable S
    PrepLabel true_label;        // intended preparation
    PrepLabel assigned_label;    // nearest-reference assignment
};

/// Weights from the g/e separation: w_re ~ |Re(alpha_e - alpha_g)|,
/// w_im ~ |Im(alpha_e - alpha_g)|, each normalized independently.
/// n_samples limits the window (0 = full trajectory). Trajectories must
/// share their time grid. Zero separation everywhere is an error.
WeightFunctions matched_weights(const Trajectory& traj_g, const Trajectory& traj_e,
                                size_t n_samples = 0);

/// Uniform weights over the first n_samples points (fallback for
/// no-information inputs).
WeightFunctions uniform_weights(const Trajectory& traj, size_t n_samples = 0);

/// Noiseless weighted integral of a trajectory.
Complex integrate_observable(const Trajectory& traj, const WeightFunctions& weights);

/// Draws n_shots integrated single-shot values for the given preparation.
/// With probability thermal_eps the preparation flips and the shot
/// integrates flip_traj instead (required when thermal_eps > 0). Shots are
/// deterministic in (noise.seed, shot index) regardless of batching.
std::vector<ShotRecord> sample_shots(const Trajectory& traj, const WeightFunctions& weights,
                                     const NoiseModel& noise, int n_shots, double thermal_eps,
                                     const Trajectory* flip_traj = nullptr);

/// Per-label means of S over shots labeled by preparation.
std::pair<Complex, Complex> references(const std::vector<ShotRecord>& shots);

/// Nearest-reference assignment, ties to g. Errors when ref_g == ref_e.
void assign(std::vector<ShotRecord>& shots, Complex ref_g, Complex ref_e);

/// eps_total = [p(e|g) + p(g|e)]/2 against the intended labels.
double total_error(const std::vector<ShotRecord>& shots);

struct ErrorCurvePoint {
    double tau = 0;
    double eps_total = 0;
};

/// Full campaign: for each tau rebuild weights on [0, tau], sample both
/// preparations, assign against per-tau references, report eps_total
/// (minus eps_prep when supplied). Degenerate separation falls back to
/// uniform weights, yielding the no-information result.
std::vector<ErrorCurvePoint> error_vs_time(const Trajectory& traj_g, const Trajectory& traj_e,
                                           const NoiseModel& noise, int n_shots,
                                           const std::vector<double>& taus,
                                           double thermal_eps = 0.0, double eps_prep = 0.0);

/// Two-Gaussian mixture fit of projected shot values (shared sigma):
/// density (1-eps) N(center_g, sigma) + eps N(center_e, sigma).
struct TwoGaussianFit {
    double eps_th = 0;
    double center_g = 0;
    double center_e = 0;
    double sigma = 0;
    double residual = 0;
    bool converged = false;
};

TwoGaussianFit fit_two_gaussian(const std::vector<double>& samples);

/// T_eff = hbar omega_q / [k_B log(1/eps_th)].
double effective_temperature(double eps_th, double omega_q);

/// Least-squares fit of A p^L + B with 0 < p < 1.
struct RbFit {
    double amplitude = 0;  // A
    double p = 0;
    double offset = 0;     // B
    double residual = 0;
    bool converged = false;
};

RbFit fit_rb_decay(const std::vector<double>& lengths,
                   const std::vector<double>& survival);

/// eps_gate = (1 - p_interleaved / p_reference)/2.
double rb_gate_error(double p_interleaved, double p_reference);

/// Signed projection of shots onto the line through (ref_g, ref_e),
/// measured from the midpoint; the histogram axis for the thermal fit.
std::vector<double> project_onto_axis(const std::vector<ShotRecord>& shots, Complex ref_g,
                                      Complex ref_e);

struct HistogramRow {
    double bin_center;
    long count_g;
    long count_e;
};

/// Fixed-bin histogram of the projected values, split by intended label.
std::vector<HistogramRow> label_histogram(const std::vector<ShotRecord>& shots, Complex ref_g,
                                          Complex ref_e, int n_bins);

}  // namespace mcread
