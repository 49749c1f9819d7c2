#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mcread/analytic.hpp"
#include "mcread/config.hpp"

using namespace mcread;

namespace {

AnalyticTrajectoryParams sample_params() {
    AnalyticTrajectoryParams p;
    p.chi = -kTwoPi * 1.54e6;
    p.g = kTwoPi * 130e6;
    p.kappa = kTwoPi * 2e6;
    p.omega_r_drive = kTwoPi * 2.9e6 * Complex(0.6, 0.4);
    p.omega_q_drive = kTwoPi * 180e6 * Complex(-0.3, 0.8);
    return p;
}

// ODE right-hand side of the conditional mean,
// Omega_r +/- i chi (alpha - alpha_vo) - kappa alpha / 2, upper sign for g.
Complex ode_rhs(const AnalyticTrajectoryParams& p, PrepLabel s, Complex alpha) {
    double sign = s == PrepLabel::g ? 1.0 : -1.0;
    Complex avo = p.omega_q_drive == 0.0 ? Complex(0) : p.alpha_vo();
    return p.omega_r_drive + Complex(0, sign) * p.chi * (alpha - avo) - 0.5 * p.kappa * alpha;
}

}  // namespace

TEST_CASE("virtual origin") {
    CHECK(virtual_origin(0, kTwoPi * 130e6) == Complex(0));
    CHECK(virtual_origin(kTwoPi * 130e6, kTwoPi * 130e6) == Complex(-1));
    Complex oq = std::polar(1.0, 0.7);
    double arg = std::arg(virtual_origin(oq, 2.0));
    double expect = 0.7 - kTwoPi / 2.0;
    CHECK(std::abs(std::remainder(arg - expect, kTwoPi)) < 1e-12);
    CHECK_THROWS_AS((void)virtual_origin(1.0, 0.0), Error);
}

TEST_CASE("trajectory starts at vacuum and saturates to the steady state") {
    AnalyticTrajectoryParams p = sample_params();
    for (PrepLabel s : {PrepLabel::g, PrepLabel::e}) {
        CHECK(std::abs(analytic_trajectory(p, s, 0.0)) == 0.0);
        Complex target = steady_state(p, s);
        double t = 60.0 / p.kappa;
        CHECK(std::abs(analytic_trajectory(p, s, t) - target) <
              std::abs(target) * std::exp(-0.5 * p.kappa * t) + 1e-12);
        // envelope at intermediate times
        for (double tt : {50e-9, 150e-9, 400e-9})
            CHECK(std::abs(analytic_trajectory(p, s, tt) - target) <=
                  std::abs(target) * std::exp(-0.5 * p.kappa * tt) * (1 + 1e-9));
    }
}

TEST_CASE("solution satisfies the mean-field equation of motion") {
    AnalyticTrajectoryParams p = sample_params();
    const double h = 1e-12;
    for (PrepLabel s : {PrepLabel::g, PrepLabel::e}) {
        for (double t : {13e-9, 87e-9, 240e-9, 600e-9}) {
            Complex fd = (analytic_trajectory(p, s, t + h) - analytic_trajectory(p, s, t - h)) /
                         (2 * h);
            Complex rhs = ode_rhs(p, s, analytic_trajectory(p, s, t));
            CHECK(std::abs(fd - rhs) / std::abs(rhs) < 1e-6);
            // and the closed-form rate agrees with the finite difference
            CHECK(std::abs(analytic_trajectory_rate(p, s, t) - fd) / std::abs(rhs) < 1e-6);
        }
    }
}

TEST_CASE("initial separation speed is 2 |Omega_q| |chi| / g") {
    AnalyticTrajectoryParams p = sample_params();
    double expect = 2.0 * std::abs(p.omega_q_drive) * std::abs(p.chi) / p.g;
    Complex diff = analytic_trajectory_rate(p, PrepLabel::e, 0) -
                   analytic_trajectory_rate(p, PrepLabel::g, 0);
    CHECK(std::abs(diff) == doctest::Approx(expect).epsilon(1e-12));

    p.omega_r_drive = 0;  // the rate is resonator-drive independent
    diff = analytic_trajectory_rate(p, PrepLabel::e, 0) -
           analytic_trajectory_rate(p, PrepLabel::g, 0);
    CHECK(std::abs(diff) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("steady states") {
    AnalyticTrajectoryParams p = sample_params();
    p.omega_q_drive = 0;
    p.omega_r_drive = 0;
    CHECK(std::abs(steady_state(p, PrepLabel::g)) == 0.0);

    p.omega_r_drive = kTwoPi * 2.9e6;
    Complex sg = steady_state(p, PrepLabel::g);
    Complex se = steady_state(p, PrepLabel::e);
    Complex ig = Complex(0, 1) * p.omega_r_drive;
    CHECK(std::abs(sg - ig / Complex(p.chi, 0.5 * p.kappa)) < 1e-12 * std::abs(sg));
    CHECK(std::abs(se - ig / Complex(-p.chi, 0.5 * p.kappa)) < 1e-12 * std::abs(se));

    // vacuum lock: i Omega_r = Omega_q chi / g pins the g branch to vacuum
    p.omega_q_drive = kTwoPi * 150e6 * Complex(0.8, -0.2);
    p.omega_r_drive = Complex(0, -1) * p.omega_q_drive * p.chi / p.g;
    CHECK(std::abs(steady_state(p, PrepLabel::g)) < 1e-12);
    CHECK(std::abs(steady_state(p, PrepLabel::e)) > 0.1);
}

TEST_CASE("steady-state circles under a qubit-phase sweep") {
    AnalyticTrajectoryParams p = sample_params();
    SteadyStateCircle c = steady_state_circle(p);
    CHECK(c.radius_g == doctest::Approx(c.radius_e).epsilon(1e-12));

    // brute-force sweep confirms the center/radius pairing per branch
    double mag = std::abs(p.omega_q_drive);
    for (int k = 0; k < 64; ++k) {
        AnalyticTrajectoryParams q = p;
        q.omega_q_drive = std::polar(mag, kTwoPi * k / 64.0);
        CHECK(std::abs(std::abs(steady_state(q, PrepLabel::g) - c.center_g) - c.radius_g) <
              1e-9 * c.radius_g);
        CHECK(std::abs(std::abs(steady_state(q, PrepLabel::e) - c.center_e) - c.radius_e) <
              1e-9 * c.radius_e);
    }

    AnalyticTrajectoryParams no_q = p;
    no_q.omega_q_drive = 0;
    SteadyStateCircle c0 = steady_state_circle(no_q);
    CHECK(c0.radius_g == 0.0);
    CHECK(c0.radius_e == 0.0);

    // circle through the origin exactly when |center| = radius
    AnalyticTrajectoryParams lock = p;
    lock.omega_r_drive = Complex(0, -1) * lock.omega_q_drive * lock.chi / lock.g;
    SteadyStateCircle cl = steady_state_circle(lock);
    CHECK(std::abs(cl.center_g) == doctest::Approx(cl.radius_g).epsilon(1e-12));
    double closest = 1e30;
    for (int k = 0; k < 256; ++k) {
        AnalyticTrajectoryParams q = lock;
        q.omega_q_drive = std::polar(std::abs(lock.omega_q_drive), kTwoPi * k / 256.0);
        closest = std::min(closest, std::abs(steady_state(q, PrepLabel::g)));
    }
    CHECK(closest < 0.02 * cl.radius_g);
}

TEST_CASE("label swap with chi -> -chi is a symmetry for real drives") {
    AnalyticTrajectoryParams p = sample_params();
    p.omega_q_drive = kTwoPi * 120e6;
    p.omega_r_drive = kTwoPi * 3e6;
    AnalyticTrajectoryParams flipped = p;
    flipped.chi = -p.chi;
    for (double t : {30e-9, 100e-9, 400e-9}) {
        CHECK(std::abs(analytic_trajectory(p, PrepLabel::g, t) -
                       analytic_trajectory(flipped, PrepLabel::e, t)) < 1e-12);
        CHECK(std::abs(analytic_trajectory(p, PrepLabel::e, t) -
                       analytic_trajectory(flipped, PrepLabel::g, t)) < 1e-12);
    }
}

TEST_CASE("degenerate lossless limit grows linearly") {
    AnalyticTrajectoryParams p;
    p.chi = 0;
    p.kappa = 0;
    p.g = kTwoPi * 130e6;
    p.omega_r_drive = kTwoPi * 1e6 * Complex(0.3, 0.7);
    double t = 120e-9;
    CHECK(std::abs(analytic_trajectory(p, PrepLabel::g, t) - p.omega_r_drive * t) <
          1e-12 * std::abs(p.omega_r_drive) * t);
    CHECK_THROWS_AS((void)steady_state(p, PrepLabel::g), Error);
}

TEST_CASE("dispersive shift prediction at the sample point") {
    double g = kTwoPi * 130e6, delta = kTwoPi * 1.84e9, anh = -kTwoPi * 264e6;
    double chi = predicted_chi(g, delta, anh);
    CHECK(chi / kTwoPi / 1e6 == doctest::Approx(-1.5386).epsilon(1e-3));
    // within 0.15 MHz of the measured pull stored with the sample constants
    CHECK(std::abs(chi - sample_constants::kMeasuredChi) < kTwoPi * 0.15e6);
    // two-level limit at large anharmonicity
    CHECK(predicted_chi(g, delta, -1e6 * delta) ==
          doctest::Approx(g * g / delta).epsilon(1e-4));
    CHECK_THROWS_AS((void)predicted_chi(g, 0.0, anh), Error);
    CHECK_THROWS_AS((void)predicted_chi(g, delta, -delta), Error);
}
