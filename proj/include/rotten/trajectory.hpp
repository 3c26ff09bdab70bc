#pragma once

/**
 * Magnetization trajectories during a pulse train.
 *
 * Each pulse is a fixed-axis rotation, so the Bloch vector a fraction s of
 * the way through pulse j is R(axis_j, s * theta_j * sqrt(1 + f^2)) applied
 * to the vector at the start of the pulse. Samples sit at s = k/m, so
 * doubling m reproduces every coarser sample bit for bit.
 */

#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rotten/errors.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"

namespace rotten {

inline constexpr int kDefaultSamplesPerPulse = 256;

struct TrajectorySample {
    /// Cumulative nominal nutation angle (radians) since the first pulse began.
    double progress = 0.0;
    BlochVector v;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    BlochVector initial_state;
    /// Sample index at which each pulse ends (and the next one begins).
    std::vector<std::size_t> pulse_boundaries;

    [[nodiscard]] const BlochVector& endpoint() const { return samples.back().v; }
};

/// samples_per_pulse is the number of steps per pulse; the trajectory holds
/// 1 + pulses * samples_per_pulse samples.
inline Trajectory trace(std::span<const Pulse> pulses, const OffResonance& off, const BlochVector& initial,
                        int samples_per_pulse = kDefaultSamplesPerPulse) {
    if (pulses.empty()) throw DomainError("trajectory needs at least one pulse");
    if (samples_per_pulse < 2) throw DomainError("samples_per_pulse must be at least 2");
    const double n0 = initial.norm();
    if (!(n0 > 0.0 && n0 <= 1.0 + 1e-12)) throw NormalizationError("initial Bloch vector must have norm in (0, 1]");

    Trajectory t;
    t.initial_state = initial;
    t.samples.reserve(1 + pulses.size() * static_cast<std::size_t>(samples_per_pulse));
    t.samples.push_back({0.0, initial});

    const double f = off.f();
    const double scale = std::hypot(1.0, f);
    BlochVector start = initial;
    double progress = 0.0;
    for (const Pulse& p : pulses) {
        const BlochVector axis{std::cos(p.phi()) / scale, std::sin(p.phi()) / scale, f / scale};
        const double full = p.theta() * scale;
        for (int k = 1; k <= samples_per_pulse; ++k) {
            const double s = static_cast<double>(k) / samples_per_pulse;
            const Rotation r = Rotation::from_axis_angle(axis, s * full);
            t.samples.push_back({progress + s * p.theta(), apply(r, start)});
        }
        start = t.samples.back().v;
        progress += p.theta();
        t.pulse_boundaries.push_back(t.samples.size() - 1);
    }
    return t;
}

/// `progress,vx,vy,vz` rows at 17 significant digits.
inline void write_trajectory_csv(std::ostream& out, const Trajectory& t, const std::string& header = {}) {
    std::istringstream lines{header};
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    out << "progress,vx,vy,vz\n" << std::setprecision(17);
    for (const auto& s : t.samples) out << s.progress << ',' << s.v.x << ',' << s.v.y << ',' << s.v.z << '\n';
}

}  // namespace rotten
