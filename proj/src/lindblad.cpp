#include "mcread/lindblad.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace mcread {

Matrix lindblad_dissipator(const Matrix& a, const Matrix& rho) {
    if (a.rows() != a.cols() || rho.rows() != rho.cols() || a.rows() != rho.rows())
        throw Error(Error::Code::dimension_mismatch,
                    "lindblad_dissipator: jump operator and state dimensions differ");
    Matrix ada = a.adjoint() * a;
    return a * rho * a.adjoint() - 0.5 * (ada * rho + rho * ada);
}

namespace {

// H(Oq, Or) decomposed over the real/imaginary drive components. Exact for
// the rotating and conditional-dispersive builders, which are linear in
// both drives; the displaced builder is linear in Omega_r only, so there
// Omega_q is baked into h0.
struct LinearModel {
    Matrix h0, xq, yq, xr, yr;

    void assemble(Complex oq, Complex orr, Matrix& h) const {
        h = h0;
        if (oq.real() != 0) h += oq.real() * xq;
        if (oq.imag() != 0) h += oq.imag() * yq;
        if (orr.real() != 0) h += orr.real() * xr;
        if (orr.imag() != 0) h += orr.imag() * yr;
    }
};

LinearModel decompose(const std::function<Matrix(Complex, Complex)>& builder) {
    LinearModel m;
    m.h0 = builder(0, 0);
    m.xq = builder(1, 0) - m.h0;
    m.yq = builder(Complex(0, 1), 0) - m.h0;
    m.xr = builder(0, 1) - m.h0;
    m.yr = builder(0, Complex(0, 1)) - m.h0;
    return m;
}

// Subtract the per-sector gauge energies from a block-diagonal model.
void strip_sector_energies(Matrix& h, const std::vector<double>& energies, int nf) {
    for (size_t j = 0; j < energies.size(); ++j)
        for (int f = 0; f < nf; ++f) h(j * nf + f, j * nf + f) -= energies[j];
}

bool has_intersector_coherence(const Matrix& rho, int nl, int nf) {
    for (int l1 = 0; l1 < nl; ++l1)
        for (int l2 = 0; l2 < nl; ++l2) {
            if (l1 == l2) continue;
            if (rho.block(l1 * nf, l2 * nf, nf, nf).cwiseAbs().maxCoeff() > 1e-14) return true;
        }
    return false;
}

// Right-hand side of the master equation with structured jump channels.
// rho' = M rho + (M rho)^dag + kappa (a+c) rho (a+c)^dag + gamma_1 T rho T^dag
// where M = -iH - (kappa/2)(a+c)^dag(a+c) - (gamma_1/2) T^dag T.
struct Rhs {
    int nl = 0, nf = 0, dim = 0;
    double kappa = 0, gamma1 = 0;
    Complex shift = 0;  // displaced-frame alpha_vo
    Matrix k_static;    // (kappa/2) J^dag J + (gamma_1/2) T^dag T
    Matrix m;           // -iH(t) - k_static, cached per drive value
    Complex cached_oq{std::numeric_limits<double>::quiet_NaN(), 0};
    Complex cached_or{std::numeric_limits<double>::quiet_NaN(), 0};
    const LinearModel* model = nullptr;
    std::vector<double> sqrt_f, sqrt_l;

    Matrix h_buf, prod, arho, rhoad, jump;

    void init(const LinearModel* mdl, int nl_, int nf_, double kappa_, double gamma1_,
              Complex shift_) {
        model = mdl;
        nl = nl_;
        nf = nf_;
        dim = nl * nf;
        kappa = kappa_;
        gamma1 = gamma1_;
        shift = shift_;
        sqrt_f.resize(nf);
        for (int f = 0; f < nf; ++f) sqrt_f[f] = std::sqrt(double(f));
        sqrt_l.resize(nl);
        for (int l = 0; l < nl; ++l) sqrt_l[l] = std::sqrt(double(l));

        Matrix a_full = Matrix::Zero(dim, dim);
        for (int l = 0; l < nl; ++l)
            for (int f = 0; f + 1 < nf; ++f) a_full(l * nf + f, l * nf + f + 1) = sqrt_f[f + 1];
        Matrix j = a_full + shift * Matrix::Identity(dim, dim);
        k_static = 0.5 * kappa * (j.adjoint() * j);
        if (gamma1 > 0) {
            Matrix t_full = Matrix::Zero(dim, dim);
            for (int l = 0; l + 1 < nl; ++l)
                for (int f = 0; f < nf; ++f)
                    t_full(l * nf + f, (l + 1) * nf + f) = sqrt_l[l + 1];
            k_static += 0.5 * gamma1 * (t_full.adjoint() * t_full);
        }
        h_buf.resize(dim, dim);
        prod.resize(dim, dim);
        arho.resize(dim, dim);
        rhoad.resize(dim, dim);
        jump.resize(dim, dim);
        m.resize(dim, dim);
    }

    void set_drives(Complex oq, Complex orr) {
        if (oq == cached_oq && orr == cached_or) return;
        cached_oq = oq;
        cached_or = orr;
        model->assemble(oq, orr, h_buf);
        m = Complex(0, -1) * h_buf - k_static;
    }

    // arho = a rho, rhoad = rho a^dag (Fock index shifts).
    void apply_a_left(const Matrix& rho) {
        for (int l = 0; l < nl; ++l) {
            for (int f = 0; f + 1 < nf; ++f)
                arho.row(l * nf + f) = sqrt_f[f + 1] * rho.row(l * nf + f + 1);
            arho.row(l * nf + nf - 1).setZero();
        }
    }
    void apply_a_right(const Matrix& src, Matrix& dst) {
        for (int l = 0; l < nl; ++l) {
            for (int f = 0; f + 1 < nf; ++f)
                dst.col(l * nf + f) = sqrt_f[f + 1] * src.col(l * nf + f + 1);
            dst.col(l * nf + nf - 1).setZero();
        }
    }

    void eval(const Matrix& rho, Matrix& out) {
        prod.noalias() = m * rho;
        out = prod + prod.adjoint();
        if (kappa > 0) {
            apply_a_left(rho);            // a rho
            apply_a_right(arho, jump);    // a rho a^dag
            if (shift != 0.0) {
                apply_a_right(rho, rhoad);  // rho a^dag
                jump += shift * rhoad + std::conj(shift) * arho + std::norm(shift) * rho;
            }
            out += kappa * jump;
        }
        if (gamma1 > 0) {
            jump.setZero();
            for (int l1 = 0; l1 + 1 < nl; ++l1)
                for (int l2 = 0; l2 + 1 < nl; ++l2)
                    jump.block(l1 * nf, l2 * nf, nf, nf) =
                        sqrt_l[l1 + 1] * sqrt_l[l2 + 1] *
                        rho.block((l1 + 1) * nf, (l2 + 1) * nf, nf, nf);
            out += gamma1 * jump;
        }
    }
};

struct SampleClock {
    double interval;
    double next = 0;
    bool due(double t, double step) { return t >= next - 0.5 * step; }
    void advance(double t) {
        do next += interval;
        while (next <= t + 1e-18);
    }
};

double max_abs_eigenvalue(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

std::string format_seconds(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e s", t);
    return buf;
}

}  // namespace

Trajectory evolve(const SystemParams& params, const PulseSchedule& schedule,
                  const InitialState& initial, const EvolveOptions& opts, Frame frame) {
    params.validate();
    schedule.validate();
    if (!(opts.dt > 0)) throw Error(Error::Code::precondition, "evolve: dt must be positive");

    const int nl = frame == Frame::rotating ? params.n_transmon : std::min(params.n_transmon, 3);
    const int nf = params.n_fock;
    const int dim = nl * nf;

    Complex alpha_vo = 0;
    if (frame == Frame::displaced) {
        if (schedule.rise_time > 0)
            throw Error(Error::Code::precondition,
                        "displaced frame requires rise_time = 0 (the frame is tied to a "
                        "constant qubit amplitude)");
        for (const auto& s : schedule.segments)
            if (s.omega_q != schedule.segments.front().omega_q)
                throw Error(Error::Code::precondition,
                            "displaced frame requires a constant qubit amplitude across "
                            "segments");
        alpha_vo = -schedule.segments.front().omega_q / params.g;
    }

    // Initial joint state.
    Matrix rho;
    if (initial.joint_rho) {
        if (initial.joint_rho->rows() != dim || initial.joint_rho->cols() != dim)
            throw Error(Error::Code::dimension_mismatch,
                        "evolve: custom joint state has wrong dimension");
        rho = *initial.joint_rho;
    } else {
        Matrix qubit;
        if (initial.qubit_rho) {
            if (initial.qubit_rho->rows() != nl || initial.qubit_rho->cols() != nl)
                throw Error(Error::Code::dimension_mismatch,
                            "evolve: custom qubit state must be " + std::to_string(nl) + "x" +
                                std::to_string(nl) + " in this frame");
            qubit = *initial.qubit_rho;
        } else {
            qubit = ket_bra(nl, initial.label == PrepLabel::e ? 1 : 0,
                            initial.label == PrepLabel::e ? 1 : 0);
        }
        Vector res = frame == Frame::displaced ? coherent_state(nf, -alpha_vo)
                                               : Vector(Vector::Unit(nf, 0));
        Matrix res_rho = res * res.adjoint();
        rho = kron(qubit, res_rho);
    }

    // Frame-specific Hamiltonian model.
    std::function<Matrix(Complex, Complex)> builder;
    bool gauge_sectors = false;
    std::vector<double> sector_energies;
    switch (frame) {
        case Frame::rotating:
            builder = [&](Complex oq, Complex orr) {
                return build_rotating_hamiltonian(params, oq, orr);
            };
            break;
        case Frame::dispersive:
            builder = [&](Complex oq, Complex orr) {
                return build_dispersive_block_hamiltonian(params, oq, orr);
            };
            gauge_sectors = !has_intersector_coherence(rho, nl, nf);
            if (gauge_sectors) sector_energies = dispersive_sector_energies(params);
            break;
        case Frame::displaced: {
            Complex oq_fixed = schedule.segments.front().omega_q;
            builder = [&, oq_fixed](Complex, Complex orr) {
                return build_displaced_block_hamiltonian(params, oq_fixed, orr);
            };
            gauge_sectors = !has_intersector_coherence(rho, nl, nf);
            if (gauge_sectors)
                sector_energies = displaced_sector_energies(
                    params, oq_fixed, schedule.segments.front().omega_r);
            break;
        }
    }
    auto gauged_builder = [&](Complex oq, Complex orr) {
        Matrix h = builder(oq, orr);
        if (gauge_sectors) strip_sector_energies(h, sector_energies, nf);
        return h;
    };
    LinearModel model = decompose(gauged_builder);

    Rhs rhs;
    rhs.init(&model, nl, nf, params.kappa(), params.gamma_1, alpha_vo);

    Trajectory traj;
    traj.prep_label = initial.label;
    traj.populations.assign(nl, {});

    // Adiabaticity figure of merit for the qubit-drive turn-on.
    {
        double delta1 = shifted_detunings(params)[1];
        double limit = delta1 * delta1 / std::sqrt(2.0);
        double slew = schedule.max_qubit_slew();
        traj.qubit_slew_ratio = limit > 0 ? slew / limit : 0.0;
    }

    auto record = [&](double t) {
        traj.times.push_back(t);
        Complex b_mean = 0;
        double nb = 0, top = 0;
        for (int l = 0; l < nl; ++l) {
            double pop = 0;
            for (int f = 0; f < nf; ++f) {
                double d = rho(l * nf + f, l * nf + f).real();
                pop += d;
                nb += f * d;
                if (f + 1 < nf) b_mean += rhs.sqrt_f[f + 1] * rho(l * nf + f + 1, l * nf + f);
            }
            traj.populations[l].push_back(pop);
            top += rho(l * nf + nf - 1, l * nf + nf - 1).real();
        }
        traj.alpha.push_back(alpha_vo + b_mean);
        traj.photon_number.push_back(nb + 2.0 * std::real(std::conj(alpha_vo) * b_mean) +
                                     std::norm(alpha_vo));
        traj.max_top_fock = std::max(traj.max_top_fock, top);
        if (opts.state_observer) opts.state_observer(t, rho);
    };

    SampleClock clock{opts.sample_interval};
    record(0.0);
    clock.advance(0.0);

    Matrix k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), tmp(dim, dim);
    double seg_start = 0;
    for (size_t si = 0; si < schedule.segments.size(); ++si) {
        const Segment& seg = schedule.segments[si];
        const Complex prev_q = si > 0 ? schedule.segments[si - 1].omega_q : Complex(0);
        const Complex prev_r = si > 0 ? schedule.segments[si - 1].omega_r : Complex(0);
        auto drive_local = [&](double tau) -> DrivePair {
            if (schedule.rise_time > 0 && tau < schedule.rise_time) {
                double w = 0.5 * (1.0 - std::cos(kTwoPi / 2.0 * tau / schedule.rise_time));
                return {prev_q + (seg.omega_q - prev_q) * w,
                        prev_r + (seg.omega_r - prev_r) * w};
            }
            return {seg.omega_q, seg.omega_r};
        };

        // Step-size guard against the plateau Hamiltonian of this segment.
        double dt_seg = opts.dt;
        {
            Matrix h_seg = gauged_builder(seg.omega_q, seg.omega_r);
            double e_max = max_abs_eigenvalue(h_seg);
            double drive_mag = std::max(std::abs(seg.omega_q), std::abs(seg.omega_r));
            double f_max_hz = (e_max + drive_mag) / kTwoPi;
            double dt_lim = f_max_hz > 0 ? 1.0 / (50.0 * f_max_hz)
                                         : std::numeric_limits<double>::infinity();
            if (opts.dt > dt_lim) {
                if (opts.auto_refine)
                    dt_seg = dt_lim;
                else if (!opts.override_dt_guard)
                    throw Error(Error::Code::precondition,
                                "evolve: dt exceeds the accuracy guard 1/(50 f_max) = " +
                                    format_seconds(dt_lim) +
                                    " for this segment; reduce dt or set the override flag");
            }
            double rate_scale =
                e_max + drive_mag + params.kappa() * nf + params.gamma_1 * nl;
            if (dt_seg * rate_scale > 2.5)
                throw Error(Error::Code::integrator_instability,
                            "evolve: dt is beyond the RK4 stability limit for this segment "
                            "even with the guard overridden; reduce dt");
        }

        long n_steps = std::max(1L, long(std::ceil(seg.duration / dt_seg - 1e-12)));
        double h = seg.duration / double(n_steps);
        for (long step = 0; step < n_steps; ++step) {
            double tau = step * h;
            auto d1 = drive_local(tau);
            rhs.set_drives(d1.omega_q, d1.omega_r);
            rhs.eval(rho, k1);
            auto d2 = drive_local(tau + 0.5 * h);
            rhs.set_drives(d2.omega_q, d2.omega_r);
            tmp = rho + (0.5 * h) * k1;
            rhs.eval(tmp, k2);
            tmp = rho + (0.5 * h) * k2;
            rhs.eval(tmp, k3);
            auto d3 = drive_local(std::min(tau + h, seg.duration));
            rhs.set_drives(d3.omega_q, d3.omega_r);
            tmp = rho + h * k3;
            rhs.eval(tmp, k4);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
            traj.max_herm_residual = std::max(traj.max_herm_residual, herm);
            rho = 0.5 * (rho + rho.adjoint()).eval();

            double drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
            traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
            if (drift > opts.trace_tol)
                throw Error(Error::Code::integrator_instability,
                            "evolve: trace drift " + std::to_string(drift) +
                                " exceeds tolerance; the step size is too large for this "
                                "problem — reduce dt");

            double t = seg_start + (step + 1) * h;
            if (clock.due(t, h)) {
                record(t);
                clock.advance(t);
            }
        }
        seg_start += seg.duration;
    }
    if (traj.times.empty() || traj.times.back() < seg_start - 1e-15) record(seg_start);

    if (traj.max_top_fock > opts.truncation_warn)
        traj.warnings.push_back(
            "truncation: top Fock level population reached " +
            std::to_string(traj.max_top_fock) +
            "; increase n_fock for trustworthy results");
    return traj;
}

double leakage(const Trajectory& traj) {
    if (traj.n_levels() < 3)
        throw Error(Error::Code::precondition,
                    "leakage is not applicable: trajectory was computed with fewer than 3 "
                    "transmon levels");
    double worst = 0;
    for (size_t i = 0; i < traj.n_samples(); ++i) {
        double above = 0;
        for (int l = 2; l < traj.n_levels(); ++l) above += traj.populations[l][i];
        worst = std::max(worst, above);
    }
    return worst;
}

}  // namespace mcread
