#pragma once

#include <string>
#include <vector>

#include "mcread/lindblad.hpp"
#include "mcread/protocols.hpp"
#include "mcread/singleshot.hpp"

namespace mcread {

/// Shortest-faithful decimal representation (17 significant digits).
std::string format_double(double v);

/// Header: t_s, re_alpha, im_alpha, n_photon, p0, p1, ...
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Header: re_S, im_S, true_label, assigned_label
void write_shots_csv(const std::string& path, const std::vector<ShotRecord>& shots);

/// Header: bin_center, count_g, count_e
void write_histogram_csv(const std::string& path, const std::vector<HistogramRow>& rows);

/// Header: tau_s, eps_total
void write_error_curve_csv(const std::string& path, const std::vector<ErrorCurvePoint>& curve);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace mcread
