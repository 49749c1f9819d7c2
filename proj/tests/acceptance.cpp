// Acceptance suite: one test case per release criterion, each printing a
// PASS/FAIL line with the measured numbers and its runtime.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <filesystem>

#include "mcread/io.hpp"
#include "mcread/rng.hpp"
#include "mcread/run.hpp"

using namespace mcread;
namespace fs = std::filesystem;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, bool pass, double seconds, const std::string& detail) {
    std::printf("[criterion %2d] %s  (%7.2f s)  %s\n", criterion, pass ? "PASS" : "FAIL",
                seconds, detail.c_str());
    std::fflush(stdout);
}

SystemParams two_level(int n_fock) {
    SystemParams p = SystemParams::sample_transmon(2, n_fock);
    p.omega_d = p.omega_r;  // chi1 = 0 for two levels, so this is the default choice
    return p;
}

AnalyticTrajectoryParams analytic_of(const SystemParams& p, Complex oq, Complex orr) {
    AnalyticTrajectoryParams a;
    a.omega_q_drive = oq;
    a.omega_r_drive = orr;
    a.chi = dispersive_constants(p).chi;
    a.g = p.g;
    a.kappa = p.kappa();
    return a;
}

// Amplifier noise factor: the documented calibration knob. Chosen so the
// two-level conventional 420 ns fidelity lands near the reported values
// while the error-ratio margin stays wide.
constexpr double kNoiseFactor = 1.3;

char buf[512];

}  // namespace

TEST_CASE("criterion 1: dispersive-shift prediction") {
    Stopwatch sw;
    double chi = predicted_chi(kTwoPi * 130e6, kTwoPi * 1.84e9, -kTwoPi * 264e6);
    double chi_mhz = chi / kTwoPi / 1e6;
    bool pass = std::abs(chi_mhz - (-1.5)) <= 0.05;
    double elapsed = sw.seconds();
    std::snprintf(buf, sizeof(buf),
                  "chi/2pi = %.4f MHz vs -1.5 +/- 0.05 MHz (measured reference %.2f MHz)",
                  chi_mhz, sample_constants::kMeasuredChi / kTwoPi / 1e6);
    report(1, pass && elapsed < 1e-3, elapsed, buf);
    CHECK(pass);
    CHECK(elapsed < 1e-3);
}

TEST_CASE("criterion 2: analytic-numeric trajectory oracle") {
    Stopwatch sw;
    SystemParams p = two_level(22);
    Complex orr = kTwoPi * 12.7e6 * Complex(0.8, -0.6);  // steady <n> ~ 1.9
    AnalyticTrajectoryParams ap = analytic_of(p, 0, orr);
    PulseSchedule sch;
    sch.segments.push_back({420e-9, 0, orr});
    EvolveOptions opts;
    opts.dt = 0.1e-9;
    opts.auto_refine = true;
    Trajectory t = evolve(p, sch, InitialState::ground(), opts, Frame::dispersive);
    double worst = 0, peak_n = 0;
    for (size_t i = 0; i < t.n_samples(); ++i) {
        worst = std::max(worst,
                         std::abs(t.alpha[i] - analytic_trajectory(ap, PrepLabel::g, t.times[i])));
        peak_n = std::max(peak_n, t.photon_number[i]);
    }
    double elapsed = sw.seconds();
    bool pass = worst <= 1e-3 && elapsed < 10.0;
    std::snprintf(buf, sizeof(buf), "max |alpha_num - alpha_closed| = %.2e (tol 1e-3), peak <n> = %.2f",
                  worst, peak_n);
    report(2, pass, elapsed, buf);
    CHECK(worst <= 1e-3);
    CHECK(elapsed < 10.0);
}

TEST_CASE("criterion 3: steady-state convergence on a drive grid") {
    Stopwatch sw;
    SystemParams p = two_level(10);
    double horizon = 10.0 / p.kappa();
    EvolveOptions opts;
    opts.dt = 0.2e-9;
    opts.sample_interval = 4e-9;
    opts.auto_refine = true;
    double worst = 0;
    for (double oq_mhz : {0.0, 15.0, 30.0}) {
        for (double orr_mhz : {0.0, 2.5, 5.0}) {
            Complex oq = kTwoPi * oq_mhz * 1e6 * std::polar(1.0, 0.3);
            Complex orr = kTwoPi * orr_mhz * 1e6 * std::polar(1.0, -0.9);
            AnalyticTrajectoryParams ap = analytic_of(p, oq, orr);
            PulseSchedule sch;
            sch.segments.push_back({horizon, oq, orr});
            for (PrepLabel label : {PrepLabel::g, PrepLabel::e}) {
                InitialState init =
                    label == PrepLabel::g ? InitialState::ground() : InitialState::excited();
                Trajectory t = evolve(p, sch, init, opts, Frame::dispersive);
                Complex target =
                    (oq == 0.0 && orr == 0.0) ? Complex(0) : steady_state(ap, label);
                worst = std::max(worst, std::abs(t.alpha_at_end() - target));
            }
        }
    }
    double elapsed = sw.seconds();
    bool pass = worst <= 5e-3 && elapsed < 120.0;
    std::snprintf(buf, sizeof(buf),
                  "max |alpha(10/kappa) - alpha_steady| = %.2e over the 3x3 grid (tol 5e-3)",
                  worst);
    report(3, pass, elapsed, buf);
    CHECK(worst <= 5e-3);
    CHECK(elapsed < 120.0);
}

TEST_CASE("criterion 4: initial separation-rate contrast") {
    Stopwatch sw;
    SystemParams p = two_level(8);
    DispersiveConstants c = dispersive_constants(p);
    EvolveOptions opts;
    opts.dt = 0.05e-9;
    opts.sample_interval = 2e-9;
    ProtocolSpec qubit_only = make_preset("qubit-only", p, c, 6e-9);
    ProtocolResult rq = run_protocol(p, qubit_only, opts);
    double expect = 2.0 * qubit_only.omega_q_mag * std::abs(c.chi) / p.g;
    double rate_err = std::abs(rq.diagnostics.initial_rate - expect) / expect;

    ProtocolSpec conv = make_preset("conventional", p, c, 6e-9);
    ProtocolResult rc = run_protocol(p, conv, opts);
    double sep_ratio = rc.diagnostics.separation[1] / rq.diagnostics.separation[1];

    double elapsed = sw.seconds();
    bool pass = rate_err <= 0.05 && sep_ratio < 0.10 && elapsed < 60.0;
    std::snprintf(buf, sizeof(buf),
                  "qubit-only rate off by %.2f%% (tol 5%%); conventional/qubit-only "
                  "separation at 2 ns = %.3f (tol < 0.10)",
                  100 * rate_err, sep_ratio);
    report(4, pass, elapsed, buf);
    CHECK(rate_err <= 0.05);
    CHECK(sep_ratio < 0.10);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 5: vacuum lock pins the ground branch") {
    Stopwatch sw;
    SystemParams p = two_level(28);
    DispersiveConstants c = dispersive_constants(p);
    ProtocolSpec spec =
        scale_drives(make_preset("vacuum-lock", p, c, 420e-9), db_amplitude(-3.0));
    EvolveOptions opts;
    opts.dt = 0.1e-9;
    opts.override_dt_guard = true;  // the guard keys on the empty Fock-edge splitting
    ProtocolResult r = run_protocol(p, spec, opts);
    double max_g = 0, max_e = 0;
    for (size_t i = 0; i < r.traj_g.n_samples(); ++i) {
        max_g = std::max(max_g, std::abs(r.traj_g.alpha[i]));
        max_e = std::max(max_e, std::abs(r.traj_e.alpha[i]));
    }
    double elapsed = sw.seconds();
    bool pass = max_g <= 0.05 * max_e && elapsed < 30.0;
    std::snprintf(buf, sizeof(buf), "max|alpha_g| = %.2e vs 0.05 * max|alpha_e| = %.2e",
                  max_g, 0.05 * max_e);
    report(5, pass, elapsed, buf);
    CHECK(max_g <= 0.05 * max_e);
    CHECK(elapsed < 30.0);
}

TEST_CASE("criterion 6: unconditional reset residual") {
    Stopwatch sw;
    SystemParams p = two_level(24);
    DispersiveConstants c = dispersive_constants(p);
    ProtocolSpec spec = scale_drives(make_preset("reset", p, c, 420e-9), db_amplitude(-3.0));
    ResetResult res = reset_residual_detailed(p, spec, 0.1e-9);
    double elapsed = sw.seconds();
    bool pass = res.residual <= 0.1 && elapsed < 60.0;
    std::snprintf(buf, sizeof(buf),
                  "residual = %.3f (tol 0.1), tuned hold = %.1f ns (half turn %.1f ns), "
                  "merge gap = %.2e",
                  res.residual, res.hold_time * 1e9,
                  kTwoPi / 2.0 / std::abs(c.chi) * 1e9, res.merge_gap);
    report(6, pass, elapsed, buf);
    CHECK(res.residual <= 0.1);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 7: error-curve speedup of the multichannel readout") {
    Stopwatch sw;
    SystemParams p = two_level(45);
    DispersiveConstants c = dispersive_constants(p);
    EvolveOptions opts;
    opts.dt = 0.1e-9;
    opts.override_dt_guard = true;  // empty Fock-edge pulls dominate the naive bound
    ProtocolResult conv = run_protocol(p, make_preset("conventional", p, c, 420e-9), opts);
    ProtocolResult mc = run_protocol(p, make_preset("multichannel", p, c, 420e-9), opts);

    NoiseModel noise = NoiseModel::calibrated(kNoiseFactor, 420e-9, opts.sample_interval, 20260809);
    std::vector<double> taus;
    for (int i = 0; i < 8; ++i) taus.push_back((100e-9) + i * (320e-9 / 7.0));
    const int n_shots = 10000;
    auto curve_conv = error_vs_time(conv.traj_g, conv.traj_e, noise, n_shots, taus,
                                    sample_constants::kThermalEps);
    NoiseModel noise_mc = noise;
    noise_mc.seed = mix64(noise.seed + 1);
    auto curve_mc = error_vs_time(mc.traj_g, mc.traj_e, noise_mc, n_shots, taus,
                                  sample_constants::kThermalEps);

    bool pass = true;
    std::string rows;
    for (size_t i = 0; i < taus.size(); ++i) {
        double ratio = curve_conv[i].eps_total / std::max(curve_mc[i].eps_total, 1e-9);
        char row[96];
        std::snprintf(row, sizeof(row), " %0.0f:%0.2f", taus[i] * 1e9, ratio);
        rows += row;
        if (taus[i] <= 350e-9 && ratio <= 1.3) pass = false;
    }
    double elapsed = sw.seconds();
    pass = pass && elapsed < 300.0;
    std::snprintf(buf, sizeof(buf), "eps_conv/eps_mc at tau(ns):ratio =%s (tol > 1.3 up to 350 ns)",
                  rows.c_str());
    report(7, pass, elapsed, buf);
    CHECK(pass);
    CHECK(elapsed < 300.0);
}

TEST_CASE("criterion 8: assignment error vs the gaussian-overlap oracle") {
    Stopwatch sw;
    const int n_samples = 64, n_shots = 10000;
    Trajectory tg, te;
    tg.prep_label = PrepLabel::g;
    te.prep_label = PrepLabel::e;
    tg.populations.assign(2, std::vector<double>(n_samples, 0.0));
    te.populations.assign(2, std::vector<double>(n_samples, 0.0));
    for (int i = 0; i < n_samples; ++i) {
        tg.times.push_back(i * 2e-9);
        te.times.push_back(i * 2e-9);
        tg.alpha.push_back(0.0);
        te.alpha.push_back(Complex(1.0, 0.0));
        tg.photon_number.push_back(0.0);
        te.photon_number.push_back(1.0);
    }
    WeightFunctions w = matched_weights(tg, te);
    bool pass = true;
    std::string rows;
    uint64_t seed = 4711;
    for (double sigma_s : {0.18, 0.25, 0.35, 0.5, 0.7}) {
        NoiseModel noise{sigma_s * std::sqrt(double(n_samples)), 2e-9, seed++};
        auto shots = sample_shots(tg, w, noise, n_shots, 0.0);
        NoiseModel ne = noise;
        ne.seed = seed++ + 5000;
        auto se_shots = sample_shots(te, w, ne, n_shots, 0.0);
        shots.insert(shots.end(), se_shots.begin(), se_shots.end());
        auto [rg, re] = references(shots);
        assign(shots, rg, re);
        double eps_hat = total_error(shots);
        double eps_ref = 0.5 * std::erfc(1.0 / (2 * std::sqrt(2.0) * sigma_s));
        double binom = std::sqrt(eps_ref * (1 - eps_ref) / (2.0 * n_shots));
        char row[64];
        std::snprintf(row, sizeof(row), " %.2f:%+.1f", sigma_s,
                      (eps_hat - eps_ref) / binom);
        rows += row;
        if (std::abs(eps_hat - eps_ref) > 3.0 * binom) pass = false;
    }
    double elapsed = sw.seconds();
    pass = pass && elapsed < 60.0;
    std::snprintf(buf, sizeof(buf), "deviation in binomial sigmas at each noise level:%s",
                  rows.c_str());
    report(8, pass, elapsed, buf);
    CHECK(pass);
    CHECK(elapsed < 60.0);
}

TEST_CASE("criterion 9: calibration fits") {
    Stopwatch sw;
    // two-gaussian thermal fraction on a Fig-scale synthetic sample
    GaussianSampler rng(98765);
    std::vector<double> samples;
    samples.reserve(500000);
    for (int i = 0; i < 500000; ++i) {
        bool excited = rng.uniform() < 0.006;
        samples.push_back((excited ? 6.0 : 0.0) + rng.normal());
    }
    TwoGaussianFit fit = fit_two_gaussian(samples);
    bool eps_ok = fit.converged && std::abs(fit.eps_th - 0.006) <= 0.002;

    double t_eff = effective_temperature(0.006, kTwoPi * 7.86e9);
    bool t_ok = std::abs(t_eff - 0.073) <= 1e-3;

    std::vector<double> lengths = {1, 2, 4, 8, 16, 32, 64, 128, 256};
    std::vector<double> y_ref, y_pi;
    for (double l : lengths) {
        y_ref.push_back(0.5 * std::pow(0.99, l) + 0.5);
        y_pi.push_back(0.5 * std::pow(0.9504, l) + 0.5);
    }
    RbFit ref = fit_rb_decay(lengths, y_ref);
    RbFit inter = fit_rb_decay(lengths, y_pi);
    bool rb_ok = std::abs(ref.amplitude - 0.5) < 1e-3 && std::abs(ref.p - 0.99) < 1e-3 &&
                 std::abs(ref.offset - 0.5) < 1e-3;
    double eps_gate = rb_gate_error(inter.p, ref.p);
    double eps_prep = eps_gate + 0.006;
    bool arith_ok = std::abs(eps_gate - 0.020) < 1e-4 && std::abs(eps_prep - 0.026) < 1e-4;

    double elapsed = sw.seconds();
    bool pass = eps_ok && t_ok && rb_ok && arith_ok && elapsed < 120.0;
    std::snprintf(buf, sizeof(buf),
                  "eps_th = %.4f (0.006 +/- 0.002), T_eff = %.1f mK (73 +/- 1), rb p = %.6f, "
                  "eps_gate = %.3f%%, eps_prep = %.3f%%",
                  fit.eps_th, t_eff * 1e3, ref.p, 100 * eps_gate, 100 * eps_prep);
    report(9, pass, elapsed, buf);
    CHECK(eps_ok);
    CHECK(t_ok);
    CHECK(rb_ok);
    CHECK(arith_ok);
    CHECK(elapsed < 120.0);
}

TEST_CASE("criterion 10: engine hygiene") {
    Stopwatch sw;
    // trace and hermiticity over a microsecond of driven evolution
    SystemParams p = two_level(14);
    Complex orr = kTwoPi * 5e6;
    PulseSchedule sch;
    sch.segments.push_back({1000e-9, 0, orr});
    EvolveOptions opts;
    opts.dt = 0.2e-9;
    opts.auto_refine = true;
    Trajectory t = evolve(p, sch, InitialState::ground(), opts, Frame::dispersive);
    bool trace_ok = t.max_trace_drift <= 1e-6;
    bool herm_ok = t.max_herm_residual <= 1e-12;

    // fourth-order convergence on a smooth problem with an exact reference
    AnalyticTrajectoryParams ap = analytic_of(p, 0, kTwoPi * 1.5e6);
    auto worst_error = [&](double dt) {
        PulseSchedule s2;
        s2.segments.push_back({120e-9, 0, kTwoPi * 1.5e6});
        EvolveOptions o2;
        o2.dt = dt;
        SystemParams p2 = two_level(8);
        Trajectory tt = evolve(p2, s2, InitialState::ground(), o2, Frame::dispersive);
        double worst = 0;
        for (size_t i = 0; i < tt.n_samples(); ++i)
            worst = std::max(worst, std::abs(tt.alpha[i] - analytic_trajectory(
                                                               ap, PrepLabel::g, tt.times[i])));
        return worst;
    };
    double ratio = worst_error(2e-9) / worst_error(1e-9);
    bool conv_ok = ratio >= 12.0;

    // leakage at the leakage-limited paper-rule powers, full multilevel model
    SystemParams full = SystemParams::sample_transmon(4, 30);
    LeakageCalibration cal = calibrate_leakage_limited(full, 280e-9, 0.01, 0.7);
    double leak = std::max(cal.leakage_g, cal.leakage_e);
    bool leak_ok = leak < 0.01;

    double elapsed = sw.seconds();
    bool pass = trace_ok && herm_ok && conv_ok && leak_ok && elapsed < 120.0;
    std::snprintf(buf, sizeof(buf),
                  "trace drift %.1e (tol 1e-6); herm %.1e (tol 1e-12); dt-halving ratio %.1f "
                  "(tol >= 12); leakage %.4f at calibrated drives scale %.3f (tol < 0.01)",
                  t.max_trace_drift, t.max_herm_residual, ratio, leak, cal.scale);
    report(10, pass, elapsed, buf);
    CHECK(trace_ok);
    CHECK(herm_ok);
    CHECK(conv_ok);
    CHECK(leak_ok);
    CHECK(elapsed < 120.0);
}

TEST_CASE("criterion 11: byte-identical reruns") {
    Stopwatch sw;
    ExperimentConfig cfg = parse_config_text(R"({
      "system": {"n_transmon": 2, "n_fock": 30},
      "protocol": {"preset": "multichannel", "duration_s": 2.4e-7,
                    "photon_target": 1.0, "frame": "dispersive"},
      "noise": {"noise_factor": 1.3, "reference_window_s": 2.4e-7},
      "run": {"dt_s": 2e-10, "n_shots": 400, "seed": 12345,
               "tau_grid_s": [1e-7, 2e-7]}
    })");
    fs::path d1 = fs::temp_directory_path() / "mcread_acc_det_1";
    fs::path d2 = fs::temp_directory_path() / "mcread_acc_det_2";
    fs::remove_all(d1);
    fs::remove_all(d2);

    bool pass = true;
    std::string checked;
    for (const char* sub : {"shots", "simulate"}) {
        CommandRequest req;
        req.subcommand = sub;
        req.out_dir_override = d1.string();
        pass &= run_command(cfg, req) == 0;
        req.out_dir_override = d2.string();
        pass &= run_command(cfg, req) == 0;
        for (const auto& entry : fs::directory_iterator(d1)) {
            std::string name = entry.path().filename().string();
            if (read_text_file(entry.path().string()) !=
                read_text_file((d2 / name).string())) {
                pass = false;
                checked += " MISMATCH:" + name;
            }
        }
        checked += std::string(" ") + sub;
    }
    fs::remove_all(d1);
    fs::remove_all(d2);
    double elapsed = sw.seconds();
    pass = pass && elapsed < 60.0;
    std::snprintf(buf, sizeof(buf), "compared artifact sets:%s", checked.c_str());
    report(11, pass, elapsed, buf);
    CHECK(pass);
    CHECK(elapsed < 60.0);
}
