#pragma once

#include <vector>

#include "mcread/operators.hpp"

namespace mcread {

/// One piecewise-constant stretch of the two drive envelopes.
struct Segment {
    double duration = 0;   // seconds
    Complex omega_q = 0;   // qubit-channel amplitude, rad/s
    Complex omega_r = 0;   // resonator-channel amplitude, rad/s
};

struct DrivePair {
    Complex omega_q;
    Complex omega_r;
};

/// Piecewise-constant complex drive envelopes with a common drive
/// frequency. rise_time > 0 applies a cosine ramp of that length at the
/// start of every segment, interpolating from the previous segment's
/// amplitudes (from zero at t = 0).
struct PulseSchedule {
    std::vector<Segment> segments;
    double rise_time = 0;

    double total_duration() const;
    void validate() const;

    /// Segment index containing time t (clamped to the last segment).
    int segment_index(double t) const;

    /// Drive amplitudes at time t, including ramps.
    DrivePair drive_at(double t) const;

    /// Largest |dOmega_q/dt| over the schedule. Infinity when a qubit
    /// amplitude steps with rise_time = 0.
    double max_qubit_slew() const;
};

}  // namespace mcread
