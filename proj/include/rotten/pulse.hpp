#pragma once

// Hard RF pulses with resonance-offset error and three-pulse sequences.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "rotten/errors.hpp"
#include "rotten/rotor.hpp"

namespace rotten {

/// Wrap an angle into [0, 2pi).
inline double wrap_two_pi(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

/// Smallest signed difference a - b on the circle, in (-pi, pi].
inline double circular_difference(double a, double b) {
    double d = std::remainder(a - b, 2.0 * std::numbers::pi);
    if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return d;
}

/// Nominal nutation angle theta and in-plane phase phi, both in radians.
/// A negative theta is stored as |theta| with the phase advanced by pi.
class Pulse {
public:
    constexpr Pulse() = default;
    Pulse(double theta, double phi) {
        if (!std::isfinite(theta) || !std::isfinite(phi))
            throw DomainError("pulse angles must be finite");
        if (theta < 0.0) {
            theta = -theta;
            phi += std::numbers::pi;
        }
        theta_ = theta;
        phi_ = wrap_two_pi(phi);
    }

    [[nodiscard]] constexpr double theta() const { return theta_; }
    [[nodiscard]] constexpr double phi() const { return phi_; }

    constexpr bool operator==(const Pulse&) const = default;

private:
    double theta_ = 0.0;
    double phi_ = 0.0;
};

/// Off-resonance fraction f = delta / nu1. The frequencies are kept as
/// metadata when the value was built from them.
class OffResonance {
public:
    constexpr OffResonance() = default;
    explicit OffResonance(double f) : f_{f} {
        if (!std::isfinite(f)) throw DomainError("off-resonance fraction must be finite");
    }

    static OffResonance from_frequencies(double delta_hz, double nu1_hz) {
        if (!(nu1_hz > 0.0) || !std::isfinite(nu1_hz))
            throw DomainError("nutation rate nu1 must be positive");
        if (!std::isfinite(delta_hz)) throw DomainError("resonance offset must be finite");
        OffResonance o{delta_hz / nu1_hz};
        o.delta_hz_ = delta_hz;
        o.nu1_hz_ = nu1_hz;
        return o;
    }

    [[nodiscard]] constexpr double f() const { return f_; }
    [[nodiscard]] constexpr std::optional<double> delta_hz() const { return delta_hz_; }
    [[nodiscard]] constexpr std::optional<double> nu1_hz() const { return nu1_hz_; }

    /// Tilt of the effective nutation axis away from +z, tan(tilt) = 1/f.
    [[nodiscard]] double tilt_angle() const { return std::atan2(1.0, f_); }

    [[nodiscard]] OffResonance mirrored() const { return OffResonance{-f_}; }

private:
    double f_ = 0.0;
    std::optional<double> delta_hz_;
    std::optional<double> nu1_hz_;
};

/// Ideal rotation theta_phi that a sequence is meant to implement.
struct TargetRotation {
    double theta = 0.0;
    double phi = 0.0;
};

/// Three pulses with the first and last identical, plus the tailoring offset
/// and the ideal rotation they stand for.
class CompositeSequence {
public:
    static constexpr double kOuterPulseTolerance = 1e-12;

    CompositeSequence(std::array<Pulse, 3> pulses, double f_star, TargetRotation target)
        : pulses_{pulses}, f_star_{f_star}, target_{target} {
        const Pulse& a = pulses_[0];
        const Pulse& c = pulses_[2];
        if (std::abs(a.theta() - c.theta()) > kOuterPulseTolerance ||
            std::abs(circular_difference(a.phi(), c.phi())) > kOuterPulseTolerance)
            throw DomainError("first and last pulses of a composite sequence must be identical");
        if (!std::isfinite(f_star)) throw DomainError("f_star must be finite");
    }

    [[nodiscard]] const std::array<Pulse, 3>& pulses() const { return pulses_; }
    [[nodiscard]] double f_star() const { return f_star_; }
    [[nodiscard]] const TargetRotation& target() const { return target_; }

    [[nodiscard]] CompositeSequence with_pulse(std::size_t index, Pulse p) const {
        auto ps = pulses_;
        ps.at(index) = p;
        return CompositeSequence{ps, f_star_, target_};
    }

private:
    std::array<Pulse, 3> pulses_;
    double f_star_;
    TargetRotation target_;
};

/// exp(-i theta (I_x cos phi + I_y sin phi + I_z f)): rotation by
/// theta sqrt(1 + f^2) about (cos phi, sin phi, f) / sqrt(1 + f^2).
inline Rotation pulse_propagator(const Pulse& p, const OffResonance& off) {
    const double f = off.f();
    const double scale = std::hypot(1.0, f);
    const BlochVector axis{std::cos(p.phi()) / scale, std::sin(p.phi()) / scale, f / scale};
    const double half = 0.5 * p.theta() * scale;
    const double s = std::sin(half);
    return Rotation::from_quaternion(std::cos(half), s * axis.x, s * axis.y, s * axis.z);
}

inline Rotation ideal_propagator(double theta, double phi) {
    return pulse_propagator(Pulse{theta, phi}, OffResonance{0.0});
}

inline Rotation ideal_propagator(const TargetRotation& t) { return ideal_propagator(t.theta, t.phi); }

/// Product of the pulse propagators in time order: the last pulse ends up
/// leftmost.
inline Rotation pulses_propagator(std::span<const Pulse> pulses, const OffResonance& off) {
    Rotation u;
    for (const Pulse& p : pulses) u = compose(pulse_propagator(p, off), u);
    return u;
}

/// U = U3 U2 U1 evaluated at `off` (which need not equal f_star).
inline Rotation sequence_propagator(const CompositeSequence& s, const OffResonance& off) {
    return pulses_propagator(s.pulses(), off);
}

}  // namespace rotten
