#include "mcread/analytic.hpp"

#include <cmath>

namespace mcread {

namespace {

double sign_of(PrepLabel state) {
    if (state == PrepLabel::custom)
        throw Error(Error::Code::precondition,
                    "analytic solution is defined for qubit eigenstates g and e only");
    return state == PrepLabel::g ? 1.0 : -1.0;
}

// Numerator/denominator of the saturation amplitude for sign s (+1: g).
Complex numerator(const AnalyticTrajectoryParams& p, double s) {
    Complex n = Complex(0, 1) * p.omega_r_drive;
    if (p.omega_q_drive != 0.0) {
        if (p.g == 0)
            throw Error(Error::Code::singularity, "qubit drive with g = 0 is undefined");
        n -= s * p.omega_q_drive * p.chi / p.g;
    }
    return n;
}

Complex denominator(const AnalyticTrajectoryParams& p, double s) {
    return Complex(0, 0.5 * p.kappa) + s * p.chi;
}

}  // namespace

Complex AnalyticTrajectoryParams::alpha_vo() const { return virtual_origin(omega_q_drive, g); }

Complex virtual_origin(Complex omega_q_drive, double g) {
    if (g == 0)
        throw Error(Error::Code::singularity, "virtual origin is undefined for g = 0");
    return -omega_q_drive / g;
}

Complex analytic_trajectory(const AnalyticTrajectoryParams& p, PrepLabel state, double t) {
    if (p.kappa < 0) throw Error(Error::Code::precondition, "kappa must be non-negative");
    double s = sign_of(state);
    Complex den = denominator(p, s);
    Complex z = Complex(-0.5 * p.kappa, s * p.chi);  // +/- i chi - kappa/2
    // Degenerate rotation-free lossless limit: the drive integrates linearly.
    if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(p.chi) + p.kappa)) {
        if (p.omega_q_drive != 0.0 && p.g == 0)
            throw Error(Error::Code::singularity, "qubit drive with g = 0 is undefined");
        Complex gain = p.omega_r_drive;
        if (p.g != 0) gain += Complex(0, s) * p.chi * p.omega_q_drive / p.g;  // -> 0 with chi
        return gain * t;
    }
    return numerator(p, s) / den * (1.0 - std::exp(z * t));
}

Complex analytic_trajectory_rate(const AnalyticTrajectoryParams& p, PrepLabel state, double t) {
    double s = sign_of(state);
    Complex den = denominator(p, s);
    Complex z = Complex(-0.5 * p.kappa, s * p.chi);
    if (std::abs(den) < 1e-12 * std::max(1.0, std::abs(p.chi) + p.kappa))
        return p.omega_r_drive;
    return -numerator(p, s) / den * z * std::exp(z * t);
}

Complex steady_state(const AnalyticTrajectoryParams& p, PrepLabel state) {
    if (!(p.kappa > 0) && p.chi == 0)
        throw Error(Error::Code::singularity,
                    "steady state requires kappa > 0 or chi != 0");
    double s = sign_of(state);
    Complex den = denominator(p, s);
    if (std::abs(den) == 0)
        throw Error(Error::Code::singularity, "steady state denominator vanishes");
    return numerator(p, s) / den;
}

SteadyStateCircle steady_state_circle(const AnalyticTrajectoryParams& p) {
    SteadyStateCircle c;
    Complex den_g = denominator(p, +1.0);
    Complex den_e = denominator(p, -1.0);
    if (std::abs(den_g) == 0 || std::abs(den_e) == 0)
        throw Error(Error::Code::singularity, "steady state denominator vanishes");
    c.center_g = Complex(0, 1) * p.omega_r_drive / den_g;
    c.center_e = Complex(0, 1) * p.omega_r_drive / den_e;
    double radial = 0;
    if (p.omega_q_drive != 0.0) {
        if (p.g == 0)
            throw Error(Error::Code::singularity, "qubit drive with g = 0 is undefined");
        radial = std::abs(p.omega_q_drive * p.chi / p.g);
    }
    c.radius_g = radial / std::abs(den_g);
    c.radius_e = radial / std::abs(den_e);
    return c;
}

double predicted_chi(double g, double delta, double anharmonicity) {
    if (delta == 0 || delta + anharmonicity == 0)
        throw Error(Error::Code::singularity,
                    "predicted chi: Delta and Delta + alpha must be nonzero");
    return g * g * anharmonicity / (delta * (delta + anharmonicity));
}

}  // namespace mcread
