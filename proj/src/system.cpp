#include "mcread/system.hpp"

#include <cmath>

namespace mcread {

namespace {

constexpr int kDimGuard = 4096;

void check_dim_guard(const SystemParams& p) {
    if (p.n_transmon * p.n_fock > kDimGuard)
        throw Error(Error::Code::invalid_dimension,
                    "joint Hilbert space dimension " + std::to_string(p.n_transmon * p.n_fock) +
                        " exceeds the dense-matrix guard of " + std::to_string(kDimGuard));
}

// chi1 for a candidate drive frequency; used to resolve the
// omega_d = omega_r - chi1/2 default, which is self-referential through
// the shifted detunings.
double chi1_at(double g, const std::vector<double>& detunings, double omega_r, double omega_d,
               int n_transmon) {
    if (n_transmon < 3) return 0.0;
    double dt1 = detunings[1] + (omega_r - omega_d);
    double dt2 = detunings[2] + 2.0 * (omega_r - omega_d);
    double g1 = g * std::sqrt(2.0);
    return g1 * g1 / (dt2 - dt1);
}

}  // namespace

std::vector<double> transmon_detunings(double delta, double anharmonicity, int n_levels) {
    std::vector<double> d(n_levels);
    for (int k = 0; k < n_levels; ++k)
        d[k] = k * delta + 0.5 * k * (k - 1) * anharmonicity;
    return d;
}

SystemParams SystemParams::make(double g, double omega_r, double delta, double anharmonicity,
                                double kappa_i, double kappa_x, int n_transmon, int n_fock) {
    SystemParams p;
    p.g = g;
    p.omega_r = omega_r;
    p.anharmonicity = anharmonicity;
    p.kappa_i = kappa_i;
    p.kappa_x = kappa_x;
    p.n_transmon = n_transmon;
    p.n_fock = n_fock;
    p.level_detunings = transmon_detunings(delta, anharmonicity, n_transmon);
    p.omega_d = omega_r;
    for (int it = 0; it < 8; ++it) {
        double c1 = chi1_at(g, p.level_detunings, omega_r, p.omega_d, n_transmon);
        p.omega_d = omega_r - 0.5 * c1;
    }
    p.validate();
    return p;
}

SystemParams SystemParams::sample_transmon(int n_transmon, int n_fock) {
    const double g = kTwoPi * 130e6;
    const double omega_r = kTwoPi * 6.02e9;
    const double omega_q = kTwoPi * 7.86e9;
    const double anh = -kTwoPi * 264e6;
    const double kappa_i = kTwoPi * 0.5e6;
    const double kappa_x = kTwoPi * 1.5e6;
    return make(g, omega_r, omega_q - omega_r, anh, kappa_i, kappa_x, n_transmon, n_fock);
}

void SystemParams::validate() const {
    if (n_transmon < 2)
        throw Error(Error::Code::invalid_dimension, "n_transmon must be >= 2");
    if (n_fock < 2) throw Error(Error::Code::invalid_dimension, "n_fock must be >= 2");
    if (kappa_i < 0 || kappa_x < 0)
        throw Error(Error::Code::precondition, "loss rates must be non-negative");
    if (gamma_1 < 0) throw Error(Error::Code::precondition, "gamma_1 must be non-negative");
    if ((int)level_detunings.size() != n_transmon)
        throw Error(Error::Code::precondition,
                    "level_detunings must have one entry per transmon level");
    if (level_detunings[0] != 0.0)
        throw Error(Error::Code::precondition, "Delta_0 must be zero");
    check_dim_guard(*this);
}

std::pair<std::vector<double>, std::vector<double>> coupling_ladder(const SystemParams& p) {
    std::vector<double> gk(p.n_transmon - 1), lk(p.n_transmon - 1);
    for (int k = 0; k + 1 < p.n_transmon; ++k) {
        lk[k] = std::sqrt(double(k + 1));
        gk[k] = p.g * lk[k];
    }
    return {gk, lk};
}

std::vector<double> shifted_detunings(const SystemParams& p) {
    std::vector<double> dt(p.n_transmon);
    for (int k = 0; k < p.n_transmon; ++k)
        dt[k] = p.level_detunings[k] + k * (p.omega_r - p.omega_d);
    return dt;
}

DispersiveConstants dispersiveConstantsImpl(const SystemParams& p, int levels,
                                            WarningSink* warnings) {
    DispersiveConstants c;
    c.delta_tilde = shifted_detunings(p);
    auto [gk, lk] = coupling_ladder(p);
    if (c.delta_tilde[1] == 0.0)
        throw Error(Error::Code::singularity,
                    "dispersive constants: shifted detuning Dtilde_1 is zero (drive resonant "
                    "with the qubit transition)");
    c.chi0 = gk[0] * gk[0] / c.delta_tilde[1];
    if (levels >= 3) {
        double gap = c.delta_tilde[2] - c.delta_tilde[1];
        if (gap == 0.0)
            throw Error(Error::Code::singularity,
                        "dispersive constants: Dtilde_2 equals Dtilde_1 (degenerate e-f gap)");
        c.chi1 = gk[1] * gk[1] / gap;
    }
    c.chi = c.chi0 - 0.5 * c.chi1;
    if (warnings) {
        for (int k = 0; k + 1 < levels; ++k) {
            double gap = c.delta_tilde[k + 1] - c.delta_tilde[k];
            double ratio = std::abs(gk[k] / gap);
            if (ratio > 0.2)
                warnings->push_back("dispersive validity: |g_" + std::to_string(k) +
                                    "/(Dtilde_" + std::to_string(k + 1) + "-Dtilde_" +
                                    std::to_string(k) + ")| = " + std::to_string(ratio) +
                                    " exceeds 0.2");
        }
    }
    return c;
}

DispersiveConstants dispersive_constants(const SystemParams& p, WarningSink* warnings) {
    return dispersiveConstantsImpl(p, std::min(p.n_transmon, 3), warnings);
}

Matrix build_lab_hamiltonian(const SystemParams& p, double t, Complex omega_q_drive,
                             Complex omega_r_drive) {
    check_dim_guard(p);
    const int nq = p.n_transmon, nf = p.n_fock;
    Matrix a = annihilation(nf);
    Matrix iq = Matrix::Identity(nq, nq);
    Matrix ir = Matrix::Identity(nf, nf);
    auto [gk, lk] = coupling_ladder(p);

    Matrix h = p.omega_r * kron(iq, Matrix(a.adjoint() * a));
    for (int k = 0; k < nq; ++k) {
        double omega_k = k * p.omega_r + p.level_detunings[k];
        h += omega_k * kron(ket_bra(nq, k, k), ir);
    }
    Matrix x_res = a.adjoint() + a;  // a^dag + a
    for (int k = 0; k + 1 < nq; ++k) {
        Matrix flip = ket_bra(nq, k, k + 1) + ket_bra(nq, k + 1, k);
        h += gk[k] * kron(flip, x_res);
    }
    auto waveform = [&](Complex omega) {
        return omega.real() * std::cos(p.omega_d * t) + omega.imag() * std::sin(p.omega_d * t);
    };
    double wq = waveform(omega_q_drive);
    for (int k = 0; k + 1 < nq; ++k) {
        Matrix flip = ket_bra(nq, k, k + 1) + ket_bra(nq, k + 1, k);
        h += 2.0 * wq * lk[k] * kron(flip, ir);
    }
    double wr = waveform(omega_r_drive);
    h += Complex(0, 2.0) * wr * kron(iq, Matrix(a.adjoint() - a));
    return h;
}

Matrix build_rotating_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                  Complex omega_r_drive) {
    check_dim_guard(p);
    const int nq = p.n_transmon, nf = p.n_fock;
    Matrix a = annihilation(nf);
    Matrix iq = Matrix::Identity(nq, nq);
    Matrix ir = Matrix::Identity(nf, nf);
    auto [gk, lk] = coupling_ladder(p);
    std::vector<double> dt = shifted_detunings(p);

    Matrix h = (p.omega_r - p.omega_d) * kron(iq, Matrix(a.adjoint() * a));
    for (int k = 0; k < nq; ++k) h += dt[k] * kron(ket_bra(nq, k, k), ir);

    Matrix drive = Complex(0, 1) * omega_r_drive * kron(iq, Matrix(a.adjoint()));
    for (int k = 0; k + 1 < nq; ++k) {
        // excitation-conserving coupling: photon raised, transmon lowered
        drive += gk[k] * kron(ket_bra(nq, k, k + 1), Matrix(a.adjoint()));
        drive += omega_q_drive * lk[k] * kron(ket_bra(nq, k + 1, k), ir);
    }
    h += drive + drive.adjoint();
    return h;
}

namespace {

// Shared scaffolding for the dispersive-frame builders: number of kept
// levels, constants, and the per-sector pulls/energies.
struct DispersiveParts {
    int levels;                    // min(n_transmon, 3)
    DispersiveConstants c;
    double delta_r;                // omega_r - omega_d
    std::vector<double> pull;      // coefficient of a^dag a per sector
    std::vector<double> g_ladder;  // g_k for the kept rungs
};

DispersiveParts dispersive_parts(const SystemParams& p, WarningSink* warnings) {
    DispersiveParts d;
    d.levels = std::min(p.n_transmon, 3);
    d.c = dispersiveConstantsImpl(p, d.levels, warnings);
    d.delta_r = p.omega_r - p.omega_d;
    d.pull = {d.delta_r - d.c.chi0, d.delta_r + d.c.chi0 - d.c.chi1};
    if (d.levels >= 3) d.pull.push_back(d.delta_r + d.c.chi1);
    auto [gk, lk] = coupling_ladder(p);
    d.g_ladder = gk;
    return d;
}

}  // namespace

Matrix build_dispersive_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                    Complex omega_r_drive, WarningSink* warnings) {
    DispersiveParts d = dispersive_parts(p, warnings);
    const int nq = d.levels, nf = p.n_fock;
    const double chi0 = d.c.chi0, chi1 = d.c.chi1;
    const double g0 = d.g_ladder[0];
    Matrix a = annihilation(nf);
    Matrix ad = a.adjoint();
    Matrix iq = Matrix::Identity(nq, nq);
    Matrix ir = Matrix::Identity(nf, nf);

    std::vector<double> energy = {0.0, d.c.delta_tilde[1] + chi0};
    if (nq >= 3) energy.push_back(d.c.delta_tilde[2] + chi1);

    Matrix h = Matrix::Zero(nq * nf, nq * nf);
    for (int j = 0; j < nq; ++j) {
        h += energy[j] * kron(ket_bra(nq, j, j), ir);
        h += d.pull[j] * kron(ket_bra(nq, j, j), Matrix(ad * a));
    }

    // Qubit drive: inter-level rungs plus the sector-dependent resonator
    // displacement it generates.
    Matrix half = omega_q_drive * kron(ket_bra(nq, 1, 0), ir);
    if (nq >= 3) half += omega_q_drive * std::sqrt(2.0) * kron(ket_bra(nq, 2, 1), ir);
    std::vector<Complex> qd_disp = {-omega_q_drive * chi0 / g0,
                                    omega_q_drive * (chi0 - chi1) / g0};
    if (nq >= 3) qd_disp.push_back(omega_q_drive * chi1 / g0);
    for (int j = 0; j < nq; ++j) half += qd_disp[j] * kron(ket_bra(nq, j, j), ad);

    // Resonator drive and the qubit tilt it generates.
    half += Complex(0, 1) * omega_r_drive * kron(iq, ad);
    half += Complex(0, 1) * omega_r_drive * (chi0 / g0) * kron(ket_bra(nq, 1, 0), ir);
    if (nq >= 3)
        half += Complex(0, 1) * omega_r_drive * (chi1 / d.g_ladder[1]) *
                kron(ket_bra(nq, 2, 1), ir);

    h += half + half.adjoint();
    return h;
}

Matrix build_displaced_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                   Complex omega_r_drive, WarningSink* warnings) {
    DispersiveParts d = dispersive_parts(p, warnings);
    const int nq = d.levels, nf = p.n_fock;
    const double chi0 = d.c.chi0, chi1 = d.c.chi1;
    const double g0 = d.g_ladder[0];
    const Complex alpha_vo = -omega_q_drive / g0;
    const double avo2 = std::norm(alpha_vo);
    Matrix b = annihilation(nf);
    Matrix bd = b.adjoint();
    Matrix iq = Matrix::Identity(nq, nq);
    Matrix ir = Matrix::Identity(nf, nf);

    std::vector<double> energy = {chi0 * avo2,
                                  d.c.delta_tilde[1] + chi0 - avo2 * (chi0 - chi1)};
    if (nq >= 3) energy.push_back(d.c.delta_tilde[2] + chi1 * (1.0 - avo2));

    Matrix h = Matrix::Zero(nq * nf, nq * nf);
    for (int j = 0; j < nq; ++j) {
        h += energy[j] * kron(ket_bra(nq, j, j), ir);
        h += d.pull[j] * kron(ket_bra(nq, j, j), Matrix(bd * b));
    }

    Matrix half =
        (-alpha_vo * d.g_ladder[0] + Complex(0, 1) * omega_r_drive * chi0 / g0) *
        kron(ket_bra(nq, 1, 0), ir);
    if (nq >= 3)
        half += (-alpha_vo * d.g_ladder[1] +
                 Complex(0, 1) * omega_r_drive * chi1 / d.g_ladder[1]) *
                kron(ket_bra(nq, 2, 1), ir);
    half += (Complex(0, 1) * omega_r_drive + alpha_vo * d.delta_r) * kron(iq, bd);
    h += half + half.adjoint();

    // Global energy offset dropped by the displacement bookkeeping; kept so
    // this matrix is exactly the displaced image of the dispersive one.
    double offset = d.delta_r * avo2 - 2.0 * std::imag(omega_r_drive * std::conj(alpha_vo));
    h += offset * Matrix::Identity(nq * nf, nq * nf);
    return h;
}

Matrix build_dispersive_block_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                          Complex omega_r_drive, WarningSink* warnings) {
    DispersiveParts d = dispersive_parts(p, warnings);
    const int nq = d.levels, nf = p.n_fock;
    const double chi0 = d.c.chi0, chi1 = d.c.chi1;
    const double g0 = d.g_ladder[0];
    Matrix a = annihilation(nf);
    Matrix ad = a.adjoint();
    Matrix ir = Matrix::Identity(nf, nf);

    std::vector<double> energy = {0.0, d.c.delta_tilde[1] + chi0};
    if (nq >= 3) energy.push_back(d.c.delta_tilde[2] + chi1);
    std::vector<Complex> drive = {Complex(0, 1) * omega_r_drive - omega_q_drive * chi0 / g0,
                                  Complex(0, 1) * omega_r_drive +
                                      omega_q_drive * (chi0 - chi1) / g0};
    if (nq >= 3) drive.push_back(Complex(0, 1) * omega_r_drive + omega_q_drive * chi1 / g0);

    Matrix h = Matrix::Zero(nq * nf, nq * nf);
    for (int j = 0; j < nq; ++j) {
        Matrix sector = energy[j] * ir + d.pull[j] * (ad * a) + drive[j] * ad +
                        std::conj(drive[j]) * a;
        h += kron(ket_bra(nq, j, j), sector);
    }
    return h;
}

std::vector<double> dispersive_sector_energies(const SystemParams& p) {
    DispersiveParts d = dispersive_parts(p, nullptr);
    std::vector<double> energy = {0.0, d.c.delta_tilde[1] + d.c.chi0};
    if (d.levels >= 3) energy.push_back(d.c.delta_tilde[2] + d.c.chi1);
    return energy;
}

std::vector<double> displaced_sector_energies(const SystemParams& p, Complex omega_q_drive,
                                              Complex omega_r_drive) {
    DispersiveParts d = dispersive_parts(p, nullptr);
    const double chi0 = d.c.chi0, chi1 = d.c.chi1;
    const Complex alpha_vo = -omega_q_drive / d.g_ladder[0];
    const double avo2 = std::norm(alpha_vo);
    const double offset =
        d.delta_r * avo2 - 2.0 * std::imag(omega_r_drive * std::conj(alpha_vo));
    std::vector<double> energy = {chi0 * avo2 + offset,
                                  d.c.delta_tilde[1] + chi0 - avo2 * (chi0 - chi1) + offset};
    if (d.levels >= 3) energy.push_back(d.c.delta_tilde[2] + chi1 * (1.0 - avo2) + offset);
    return energy;
}

Matrix build_displaced_block_hamiltonian(const SystemParams& p, Complex omega_q_drive,
                                         Complex omega_r_drive, WarningSink* warnings) {
    DispersiveParts d = dispersive_parts(p, warnings);
    const int nq = d.levels, nf = p.n_fock;
    const double chi0 = d.c.chi0, chi1 = d.c.chi1;
    const Complex alpha_vo = -omega_q_drive / d.g_ladder[0];
    const double avo2 = std::norm(alpha_vo);
    Matrix b = annihilation(nf);
    Matrix bd = b.adjoint();
    Matrix ir = Matrix::Identity(nf, nf);

    std::vector<double> energy = {chi0 * avo2,
                                  d.c.delta_tilde[1] + chi0 - avo2 * (chi0 - chi1)};
    if (nq >= 3) energy.push_back(d.c.delta_tilde[2] + chi1 * (1.0 - avo2));
    const Complex drive = Complex(0, 1) * omega_r_drive + alpha_vo * d.delta_r;
    const double offset =
        d.delta_r * avo2 - 2.0 * std::imag(omega_r_drive * std::conj(alpha_vo));

    Matrix h = Matrix::Zero(nq * nf, nq * nf);
    for (int j = 0; j < nq; ++j) {
        Matrix sector = (energy[j] + offset) * ir + d.pull[j] * (bd * b) + drive * bd +
                        std::conj(drive) * b;
        h += kron(ket_bra(nq, j, j), sector);
    }
    return h;
}

}  // namespace mcread
