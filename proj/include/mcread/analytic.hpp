#pragma once

#include "mcread/lindblad.hpp"
#include "mcread/operators.hpp"

namespace mcread {

/// Inputs of the closed-form dispersive trajectory solution. The virtual
/// origin -Omega_q/g is always derived, never stored.
struct AnalyticTrajectoryParams {
    Complex omega_r_drive = 0;  // rad/s
    Complex omega_q_drive = 0;  // rad/s
    double chi = 0;             // rad/s
    double g = 0;               // rad/s
    double kappa = 0;           // rad/s

    Complex alpha_vo() const;
};

/// alpha_vo = -Omega_q/g. Errors when g = 0.
Complex virtual_origin(Complex omega_q_drive, double g);

/// Coherent amplitude at time t for the qubit held in g or e, resonator
/// starting from vacuum under constant drives:
///   alpha_{g/e}(t) = (i Omega_r -/+ Omega_q chi/g)/(i kappa/2 +/- chi)
///                    * [1 - exp(+/- i t chi - kappa t / 2)]
/// with the upper signs for g. The kappa = chi = 0 degenerate case returns
/// the linear-growth limit Omega_r * t.
Complex analytic_trajectory(const AnalyticTrajectoryParams& p, PrepLabel state, double t);

/// d alpha/dt of the same solution (used by tests and the separation-rate
/// diagnostics).
Complex analytic_trajectory_rate(const AnalyticTrajectoryParams& p, PrepLabel state, double t);

/// Long-time limit alpha^s_{g/e} = (i Omega_r -/+ Omega_q chi/g)/(i kappa/2 +/- chi).
Complex steady_state(const AnalyticTrajectoryParams& p, PrepLabel state);

/// Steady-state locus under a sweep of the qubit-drive phase at fixed
/// magnitudes: a circle per qubit state with center i Omega_r/(i kappa/2 +/- chi)
/// and radius |Omega_q chi / g| / |i kappa/2 +/- chi|.
struct SteadyStateCircle {
    Complex center_g, center_e;
    double radius_g = 0, radius_e = 0;
};

SteadyStateCircle steady_state_circle(const AnalyticTrajectoryParams& p);

/// Transmon dispersive-shift prediction chi = g^2 alpha / [Delta (Delta + alpha)].
double predicted_chi(double g, double delta, double anharmonicity);

}  // namespace mcread
