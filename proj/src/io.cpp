#include "mcread/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mcread {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Error::Code::io, "cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out = open_out(path);
    out << "t_s, re_alpha, im_alpha, n_photon";
    for (int l = 0; l < traj.n_levels(); ++l) out << ", p" << l;
    out << "\n";
    for (size_t i = 0; i < traj.n_samples(); ++i) {
        out << format_double(traj.times[i]) << ", " << format_double(traj.alpha[i].real())
            << ", " << format_double(traj.alpha[i].imag()) << ", "
            << format_double(traj.photon_number[i]);
        for (int l = 0; l < traj.n_levels(); ++l)
            out << ", " << format_double(traj.populations[l][i]);
        out << "\n";
    }
}

void write_shots_csv(const std::string& path, const std::vector<ShotRecord>& shots) {
    std::ofstream out = open_out(path);
    out << "re_S, im_S, true_label, assigned_label\n";
    for (const auto& s : shots)
        out << format_double(s.value.real()) << ", " << format_double(s.value.imag()) << ", "
            << to_string(s.true_label) << ", " << to_string(s.assigned_label) << "\n";
}

void write_histogram_csv(const std::string& path, const std::vector<HistogramRow>& rows) {
    std::ofstream out = open_out(path);
    out << "bin_center, count_g, count_e\n";
    for (const auto& r : rows)
        out << format_double(r.bin_center) << ", " << r.count_g << ", " << r.count_e << "\n";
}

void write_error_curve_csv(const std::string& path,
                           const std::vector<ErrorCurvePoint>& curve) {
    std::ofstream out = open_out(path);
    out << "tau_s, eps_total\n";
    for (const auto& p : curve)
        out << format_double(p.tau) << ", " << format_double(p.eps_total) << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Error::Code::io, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mcread
