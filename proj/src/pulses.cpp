#include "mcread/pulses.hpp"

#include <cmath>
#include <limits>

namespace mcread {

double PulseSchedule::total_duration() const {
    double t = 0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

void PulseSchedule::validate() const {
    if (segments.empty())
        throw Error(Error::Code::precondition, "pulse schedule has no segments");
    double min_dur = std::numeric_limits<double>::infinity();
    for (const auto& s : segments) {
        if (!(s.duration > 0))
            throw Error(Error::Code::precondition, "segment durations must be positive");
        min_dur = std::min(min_dur, s.duration);
    }
    if (rise_time < 0)
        throw Error(Error::Code::precondition, "rise_time must be non-negative");
    if (rise_time > 0.5 * min_dur)
        throw Error(Error::Code::precondition,
                    "rise_time must not exceed half the shortest segment");
}

int PulseSchedule::segment_index(double t) const {
    double start = 0;
    for (size_t i = 0; i < segments.size(); ++i) {
        if (t < start + segments[i].duration) return int(i);
        start += segments[i].duration;
    }
    return int(segments.size()) - 1;
}

DrivePair PulseSchedule::drive_at(double t) const {
    int idx = segment_index(t);
    double start = 0;
    for (int i = 0; i < idx; ++i) start += segments[i].duration;
    const Segment& s = segments[idx];
    Complex prev_q = idx > 0 ? segments[idx - 1].omega_q : Complex(0);
    Complex prev_r = idx > 0 ? segments[idx - 1].omega_r : Complex(0);
    double local = t - start;
    if (rise_time > 0 && local < rise_time) {
        double w = 0.5 * (1.0 - std::cos(kTwoPi / 2.0 * local / rise_time));
        return {prev_q + (s.omega_q - prev_q) * w, prev_r + (s.omega_r - prev_r) * w};
    }
    return {s.omega_q, s.omega_r};
}

double PulseSchedule::max_qubit_slew() const {
    double slew = 0;
    Complex prev = 0;
    for (const auto& s : segments) {
        double step = std::abs(s.omega_q - prev);
        if (step > 0) {
            if (rise_time <= 0) return std::numeric_limits<double>::infinity();
            // peak slope of the cosine ramp
            slew = std::max(slew, step * kTwoPi / 4.0 / rise_time);
        }
        prev = s.omega_q;
    }
    return slew;
}

}  // namespace mcread
