#include "mcread/singleshot.hpp"

#include <algorithm>
#include <cmath>

#include "mcread/rng.hpp"

namespace mcread {

namespace {

constexpr double kHbar = 1.054571817e-34;  // J s
constexpr double kBoltzmann = 1.380649e-23;  // J/K

size_t window_samples(const Trajectory& traj, size_t n_samples) {
    size_t n = traj.n_samples();
    if (n_samples > 0) n = std::min(n, n_samples);
    if (n < 2)
        throw Error(Error::Code::precondition, "weights need at least two trajectory samples");
    return n;
}

std::vector<double> local_spacing(const std::vector<double>& times, size_t n) {
    std::vector<double> dt(n);
    for (size_t i = 0; i + 1 < n; ++i) dt[i] = times[i + 1] - times[i];
    dt[n - 1] = n >= 2 ? dt[n - 2] : 0.0;
    return dt;
}

}  // namespace

NoiseModel NoiseModel::calibrated(double noise_factor, double reference_window,
                                  double sample_interval, uint64_t seed) {
    if (noise_factor < 1.0)
        throw Error(Error::Code::precondition,
                    "amplifier noise factor must be >= 1 (vacuum floor)");
    double n = std::max(1.0, std::round(reference_window / sample_interval));
    NoiseModel m;
    m.sigma_quadrature = std::sqrt(0.5 * noise_factor * n);
    m.sample_interval = sample_interval;
    m.seed = seed;
    return m;
}

WeightFunctions matched_weights(const Trajectory& traj_g, const Trajectory& traj_e,
                                size_t n_samples) {
    if (traj_g.n_samples() != traj_e.n_samples())
        throw Error(Error::Code::dimension_mismatch,
                    "matched_weights: trajectories must share the time grid");
    size_t n = window_samples(traj_g, n_samples);
    for (size_t i = 0; i < n; ++i)
        if (std::abs(traj_g.times[i] - traj_e.times[i]) > 1e-15)
            throw Error(Error::Code::dimension_mismatch,
                        "matched_weights: trajectories must share the time grid");

    WeightFunctions w;
    w.times.assign(traj_g.times.begin(), traj_g.times.begin() + n);
    w.w_re.resize(n);
    w.w_im.resize(n);
    std::vector<double> dt = local_spacing(w.times, n);

    double norm_re = 0, norm_im = 0, scale = 0;
    for (size_t i = 0; i < n; ++i) {
        Complex sep = traj_e.alpha[i] - traj_g.alpha[i];
        w.w_re[i] = std::abs(sep.real());
        w.w_im[i] = std::abs(sep.imag());
        norm_re += w.w_re[i] * dt[i];
        norm_im += w.w_im[i] * dt[i];
        scale = std::max({scale, w.w_re[i], w.w_im[i]});
    }
    if (scale <= 0)
        throw Error(Error::Code::degenerate,
                    "matched_weights: trajectories are identical (zero separation everywhere)");
    double floor = 1e-12 * scale * (w.times.back() - w.times.front() + dt.back());
    w.re_degenerate = norm_re <= floor;
    w.im_degenerate = norm_im <= floor;
    for (size_t i = 0; i < n; ++i) {
        w.w_re[i] = w.re_degenerate ? 0.0 : w.w_re[i] / norm_re;
        w.w_im[i] = w.im_degenerate ? 0.0 : w.w_im[i] / norm_im;
    }
    return w;
}

WeightFunctions uniform_weights(const Trajectory& traj, size_t n_samples) {
    size_t n = window_samples(traj, n_samples);
    WeightFunctions w;
    w.times.assign(traj.times.begin(), traj.times.begin() + n);
    std::vector<double> dt = local_spacing(w.times, n);
    double total = 0;
    for (size_t i = 0; i < n; ++i) total += dt[i];
    w.w_re.assign(n, 1.0 / total);
    w.w_im.assign(n, 1.0 / total);
    return w;
}

Complex integrate_observable(const Trajectory& traj, const WeightFunctions& weights) {
    size_t n = weights.times.size();
    if (traj.n_samples() < n)
        throw Error(Error::Code::dimension_mismatch,
                    "integrate_observable: trajectory shorter than the weight window");
    std::vector<double> dt = local_spacing(weights.times, n);
    double re = 0, im = 0;
    for (size_t i = 0; i < n; ++i) {
        re += weights.w_re[i] * traj.alpha[i].real() * dt[i];
        im += weights.w_im[i] * traj.alpha[i].imag() * dt[i];
    }
    return {re, im};
}

std::vector<ShotRecord> sample_shots(const Trajectory& traj, const WeightFunctions& weights,
                                     const NoiseModel& noise, int n_shots, double thermal_eps,
                                     const Trajectory* flip_traj) {
    if (n_shots < 1) throw Error(Error::Code::precondition, "n_shots must be >= 1");
    if (thermal_eps < 0 || thermal_eps >= 1)
        throw Error(Error::Code::precondition, "thermal_eps must lie in [0, 1)");
    if (thermal_eps > 0 && flip_traj == nullptr)
        throw Error(Error::Code::precondition,
                    "thermal_eps > 0 needs the flipped-state trajectory");
    if (!(noise.sigma_quadrature > 0))
        throw Error(Error::Code::precondition, "sigma_quadrature must be positive");

    size_t n = weights.times.size();
    std::vector<double> dt = local_spacing(weights.times, n);
    std::vector<ShotRecord> shots;
    shots.reserve(n_shots);
    for (int k = 0; k < n_shots; ++k) {
        GaussianSampler rng(mix64(noise.seed ^ mix64(uint64_t(k) + 0x51ED2701ULL)));
        bool flipped = thermal_eps > 0 && rng.uniform() < thermal_eps;
        const Trajectory& src = flipped ? *flip_traj : traj;
        double re = 0, im = 0;
        for (size_t i = 0; i < n; ++i) {
            double xi_re = rng.normal();
            double xi_im = rng.normal();
            re += weights.w_re[i] * (src.alpha[i].real() + noise.sigma_quadrature * xi_re) *
                  dt[i];
            im += weights.w_im[i] * (src.alpha[i].imag() + noise.sigma_quadrature * xi_im) *
                  dt[i];
        }
        ShotRecord rec;
        rec.value = {re, im};
        rec.true_label = traj.prep_label;  // intended preparation, not the flipped one
        rec.assigned_label = rec.true_label;
        shots.push_back(rec);
    }
    return shots;
}

std::pair<Complex, Complex> references(const std::vector<ShotRecord>& shots) {
    Complex sum_g = 0, sum_e = 0;
    long n_g = 0, n_e = 0;
    for (const auto& s : shots) {
        if (s.true_label == PrepLabel::g) {
            sum_g += s.value;
            ++n_g;
        } else if (s.true_label == PrepLabel::e) {
            sum_e += s.value;
            ++n_e;
        }
    }
    if (n_g == 0 || n_e == 0)
        throw Error(Error::Code::precondition,
                    "references need at least one shot per preparation label");
    return {sum_g / double(n_g), sum_e / double(n_e)};
}

void assign(std::vector<ShotRecord>& shots, Complex ref_g, Complex ref_e) {
    if (ref_g == ref_e)
        throw Error(Error::Code::degenerate, "assignment references coincide");
    for (auto& s : shots)
        s.assigned_label =
            std::abs(s.value - ref_g) <= std::abs(s.value - ref_e) ? PrepLabel::g
                                                                   : PrepLabel::e;
}

double total_error(const std::vector<ShotRecord>& shots) {
    long n_g = 0, n_e = 0, wrong_g = 0, wrong_e = 0;
    for (const auto& s : shots) {
        if (s.true_label == PrepLabel::g) {
            ++n_g;
            if (s.assigned_label != PrepLabel::g) ++wrong_g;
        } else if (s.true_label == PrepLabel::e) {
            ++n_e;
            if (s.assigned_label != PrepLabel::e) ++wrong_e;
        }
    }
    if (n_g == 0 || n_e == 0)
        throw Error(Error::Code::precondition, "total_error needs both preparation labels");
    return 0.5 * (double(wrong_g) / n_g + double(wrong_e) / n_e);
}

std::vector<ErrorCurvePoint> error_vs_time(const Trajectory& traj_g, const Trajectory& traj_e,
                                           const NoiseModel& noise, int n_shots,
                                           const std::vector<double>& taus, double thermal_eps,
                                           double eps_prep) {
    double duration = traj_g.times.empty() ? 0.0 : traj_g.times.back();
    std::vector<ErrorCurvePoint> curve;
    curve.reserve(taus.size());
    for (size_t ti = 0; ti < taus.size(); ++ti) {
        double tau = taus[ti];
        if (tau > duration * (1.0 + 1e-12))
            throw Error(Error::Code::precondition,
                        "error_vs_time: tau exceeds the trajectory duration");
        size_t n = 0;
        while (n < traj_g.n_samples() && traj_g.times[n] <= tau * (1.0 + 1e-12)) ++n;

        WeightFunctions w;
        try {
            w = matched_weights(traj_g, traj_e, n);
        } catch (const Error& e) {
            if (e.code() != Error::Code::degenerate) throw;
            w = uniform_weights(traj_g, n);  // no information: coin-flip regime
        }

        NoiseModel local = noise;
        local.seed = mix64(noise.seed ^ mix64(0xE9A50000ULL + ti));
        auto shots = sample_shots(traj_g, w, local, n_shots, thermal_eps, &traj_e);
        NoiseModel local_e = noise;
        local_e.seed = mix64(noise.seed ^ mix64(0xE9A51111ULL + ti));
        auto shots_e = sample_shots(traj_e, w, local_e, n_shots, 0.0, nullptr);
        shots.insert(shots.end(), shots_e.begin(), shots_e.end());

        auto [ref_g, ref_e] = references(shots);
        if (ref_g == ref_e) ref_e += Complex(1e-300, 0);  // coin-flip fallback stays defined
        assign(shots, ref_g, ref_e);
        curve.push_back({tau, total_error(shots) - eps_prep});
    }
    return curve;
}

namespace {

double normal_pdf(double x, double mu, double sigma) {
    double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(kTwoPi));
}

struct BinnedDensity {
    std::vector<double> x, y;
};

BinnedDensity bin_density(const std::vector<double>& samples, int n_bins) {
    auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *mn_it, hi = *mx_it;
    double pad = 1e-3 * (hi - lo + 1e-300);
    lo -= pad;
    hi += pad;
    double bw = (hi - lo) / n_bins;
    BinnedDensity b;
    b.x.resize(n_bins);
    b.y.assign(n_bins, 0.0);
    for (int i = 0; i < n_bins; ++i) b.x[i] = lo + (i + 0.5) * bw;
    for (double s : samples) {
        int idx = std::min(n_bins - 1, std::max(0, int((s - lo) / bw)));
        b.y[idx] += 1.0;
    }
    double norm = samples.size() * bw;
    for (double& v : b.y) v /= norm;
    return b;
}

}  // namespace

TwoGaussianFit fit_two_gaussian(const std::vector<double>& samples) {
    if (samples.size() < 1000)
        throw Error(Error::Code::precondition,
                    "fit_two_gaussian needs at least 1000 samples");
    const int n_bins = 256;
    BinnedDensity hist = bin_density(samples, n_bins);

    // Deterministic initialization: primary mode, robust sigma from the IQR,
    // secondary mode away from the primary, mixture weight from its mass.
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    double q1 = sorted[sorted.size() / 4];
    double q3 = sorted[(3 * sorted.size()) / 4];
    double sigma0 = std::max((q3 - q1) / 1.349, 1e-12 * (sorted.back() - sorted.front() + 1e-300));

    int mode1 = 0;
    for (int i = 0; i < n_bins; ++i)
        if (hist.y[i] > hist.y[mode1]) mode1 = i;
    double c_g0 = hist.x[mode1];
    int mode2 = -1;
    for (int i = 0; i < n_bins; ++i) {
        if (std::abs(hist.x[i] - c_g0) < 3.0 * sigma0) continue;
        if (mode2 < 0 || hist.y[i] > hist.y[mode2]) mode2 = i;
    }
    double c_e0 = mode2 >= 0 ? hist.x[mode2] : c_g0 + 4.0 * sigma0;
    double mass2 = 0;
    for (double s : samples)
        if (std::abs(s - c_e0) < 2.0 * sigma0) mass2 += 1.0;
    double eps0 = std::clamp(mass2 / samples.size(), 1e-6, 0.5);

    // Levenberg-Marquardt on (eps, c_g, c_e, sigma).
    double eps = eps0, cg = c_g0, ce = c_e0, sg = sigma0;
    auto sse = [&](double e, double a, double b, double s) {
        double acc = 0;
        for (int i = 0; i < n_bins; ++i) {
            double f = (1 - e) * normal_pdf(hist.x[i], a, s) + e * normal_pdf(hist.x[i], b, s);
            double r = f - hist.y[i];
            acc += r * r;
        }
        return acc;
    };
    double lambda = 1e-3;
    double current = sse(eps, cg, ce, sg);
    bool converged = false;
    for (int iter = 0; iter < 400; ++iter) {
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        for (int i = 0; i < n_bins; ++i) {
            double pg = normal_pdf(hist.x[i], cg, sg);
            double pe = normal_pdf(hist.x[i], ce, sg);
            double zg = (hist.x[i] - cg) / sg;
            double ze = (hist.x[i] - ce) / sg;
            double f = (1 - eps) * pg + eps * pe;
            double r = f - hist.y[i];
            Eigen::Vector4d j;
            j(0) = pe - pg;
            j(1) = (1 - eps) * pg * zg / sg;
            j(2) = eps * pe * ze / sg;
            j(3) = (1 - eps) * pg * (zg * zg - 1.0) / sg + eps * pe * (ze * ze - 1.0) / sg;
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Vector4d step =
            (jtj + lambda * Eigen::Matrix4d(jtj.diagonal().asDiagonal())).ldlt().solve(-jtr);
        double ne = std::clamp(eps + step(0), 1e-9, 0.5);
        double ncg = cg + step(1);
        double nce = ce + step(2);
        double nsg = std::max(sg + step(3), 1e-6 * sigma0);
        double trial = sse(ne, ncg, nce, nsg);
        if (std::isnan(trial)) {
            lambda *= 10;
            continue;
        }
        if (trial < current) {
            double rel = std::abs(current - trial) / (current + 1e-300);
            eps = ne;
            cg = ncg;
            ce = nce;
            sg = nsg;
            current = trial;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-14) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }

    TwoGaussianFit fit;
    fit.eps_th = eps;
    fit.center_g = cg;
    fit.center_e = ce;
    fit.sigma = sg;
    fit.residual = current;
    // Unidentifiable mixture: coincident centers make eps meaningless.
    fit.converged = converged && std::abs(cg - ce) > 0.05 * sg;
    if (!std::isfinite(current))
        throw Error(Error::Code::fit_failure,
                    "two-gaussian fit diverged; residual = " + std::to_string(current));
    return fit;
}

double effective_temperature(double eps_th, double omega_q) {
    if (!(eps_th > 0) || !(eps_th < 1))
        throw Error(Error::Code::precondition, "eps_th must lie strictly inside (0, 1)");
    return kHbar * omega_q / (kBoltzmann * std::log(1.0 / eps_th));
}

RbFit fit_rb_decay(const std::vector<double>& lengths, const std::vector<double>& survival) {
    if (lengths.size() != survival.size())
        throw Error(Error::Code::dimension_mismatch, "fit_rb_decay: size mismatch");
    std::vector<double> distinct(lengths);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4)
        throw Error(Error::Code::precondition, "fit_rb_decay needs >= 4 distinct lengths");
    for (double y : survival)
        if (y < 0 || y > 1)
            throw Error(Error::Code::precondition, "survival probabilities must be in [0, 1]");

    // For fixed p the model is linear in (A, B); profile the SSE over p.
    auto profiled = [&](double p, double* a_out = nullptr, double* b_out = nullptr) {
        double s_xx = 0, s_x = 0, s_xy = 0, s_y = 0, n = double(lengths.size());
        for (size_t i = 0; i < lengths.size(); ++i) {
            double x = std::pow(p, lengths[i]);
            s_xx += x * x;
            s_x += x;
            s_xy += x * survival[i];
            s_y += survival[i];
        }
        double det = s_xx * n - s_x * s_x;
        double a, b;
        if (std::abs(det) < 1e-300) {
            a = 0;
            b = s_y / n;
        } else {
            a = (s_xy * n - s_x * s_y) / det;
            b = (s_xx * s_y - s_x * s_xy) / det;
        }
        double acc = 0;
        for (size_t i = 0; i < lengths.size(); ++i) {
            double r = a * std::pow(p, lengths[i]) + b - survival[i];
            acc += r * r;
        }
        if (a_out) *a_out = a;
        if (b_out) *b_out = b;
        return acc;
    };

    // Coarse bracket, then golden-section refinement.
    const double lo_lim = 1e-6, hi_lim = 1.0 - 1e-12;
    int best = 0;
    const int grid = 512;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        double p = lo_lim + (hi_lim - lo_lim) * (i + 0.5) / grid;
        double s = profiled(p);
        if (s < best_sse) {
            best_sse = s;
            best = i;
        }
    }
    double lo = lo_lim + (hi_lim - lo_lim) * std::max(0, best - 1) / double(grid);
    double hi = lo_lim + (hi_lim - lo_lim) * std::min(grid, best + 2) / double(grid);
    const double gr = 0.6180339887498949;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = profiled(a), fb = profiled(b);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - gr * (hi - lo);
            fa = profiled(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + gr * (hi - lo);
            fb = profiled(b);
        }
    }
    RbFit fit;
    double p_star = 0.5 * (lo + hi);
    fit.residual = profiled(p_star, &fit.amplitude, &fit.offset);
    fit.p = p_star;
    fit.converged = std::isfinite(fit.residual);
    if (!fit.converged)
        throw Error(Error::Code::fit_failure, "rb decay fit failed to converge");
    return fit;
}

double rb_gate_error(double p_interleaved, double p_reference) {
    if (!(p_reference > 0) || !(p_reference <= 1) || !(p_interleaved > 0))
        throw Error(Error::Code::precondition, "rb_gate_error needs decay constants in (0, 1]");
    return 0.5 * (1.0 - p_interleaved / p_reference);
}

std::vector<double> project_onto_axis(const std::vector<ShotRecord>& shots, Complex ref_g,
                                      Complex ref_e) {
    if (ref_g == ref_e)
        throw Error(Error::Code::degenerate, "projection axis is undefined");
    Complex axis = (ref_e - ref_g) / std::abs(ref_e - ref_g);
    Complex mid = 0.5 * (ref_g + ref_e);
    std::vector<double> z;
    z.reserve(shots.size());
    for (const auto& s : shots) z.push_back(std::real(std::conj(axis) * (s.value - mid)));
    return z;
}

std::vector<HistogramRow> label_histogram(const std::vector<ShotRecord>& shots, Complex ref_g,
                                          Complex ref_e, int n_bins) {
    std::vector<double> z = project_onto_axis(shots, ref_g, ref_e);
    auto [mn_it, mx_it] = std::minmax_element(z.begin(), z.end());
    double lo = *mn_it, hi = *mx_it;
    double pad = 1e-3 * (hi - lo + 1e-300);
    lo -= pad;
    hi += pad;
    double bw = (hi - lo) / n_bins;
    std::vector<HistogramRow> rows(n_bins);
    for (int i = 0; i < n_bins; ++i) rows[i] = {lo + (i + 0.5) * bw, 0, 0};
    for (size_t k = 0; k < shots.size(); ++k) {
        int idx = std::min(n_bins - 1, std::max(0, int((z[k] - lo) / bw)));
        if (shots[k].true_label == PrepLabel::g)
            ++rows[idx].count_g;
        else
            ++rows[idx].count_e;
    }
    return rows;
}

}  // namespace mcread
