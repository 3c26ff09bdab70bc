#pragma once

/**
 * Closed-form construction of offset-tailored three-pulse rotors.
 *
 * For a target theta_phi and tailoring fraction f* the sequence is
 *
 *     (theta1, phi1 + phi) (theta2, phi2 + phi) (theta1, phi1 + phi)
 *
 * with theta1 = pi / sqrt(1 + f*^2), theta2 = theta / sqrt(1 + f*^2),
 * phi1 = +-arccos(sqrt(1 + f*^2) / 2) and phi2 = pi - phi1, so that
 * cos(phi1 - phi2) = (1 - f*^2) / 2. The propagator at +f* and at -f* equals
 * the ideal rotation up to global phase. Real phases exist only for
 * |f*| <= sqrt(3).
 */

#include <cmath>
#include <numbers>
#include <sstream>

#include "rotten/errors.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"

namespace rotten {

inline constexpr double kSqrt3 = std::numbers::sqrt3;

/// Slack on the |f*| <= sqrt(3) bound so the double nearest sqrt(3) passes.
inline constexpr double kOffsetBoundSlack = 1e-12;

enum class Branch { positive, negative };

struct SynthesisRequest {
    double theta = 0.0;
    double phi = 0.0;
    double f_star = 0.0;
    Branch branch = Branch::positive;
};

inline void check_offset_in_range(double f_star) {
    if (!std::isfinite(f_star) || std::abs(f_star) > kSqrt3 + kOffsetBoundSlack) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "off-resonance fraction |f*| = " << std::abs(f_star)
            << " exceeds sqrt(3): the tailored phases have no real solution";
        throw OffsetOutOfRange(msg.str());
    }
}

inline CompositeSequence synthesize(const SynthesisRequest& req) {
    if (!(req.theta > 0.0 && req.theta < 2.0 * std::numbers::pi))
        throw DomainError("target nutation angle must lie in (0, 2pi)");
    check_offset_in_range(req.f_star);

    const double f = std::abs(req.f_star);
    const double scale = std::hypot(1.0, f);
    const double outer_theta = std::numbers::pi / scale;
    const double middle_theta = req.theta / scale;

    // arccos(scale / 2) has infinite slope at the bound; offsets within the
    // slack of sqrt(3) are taken to be the bound itself, where phi1 = 0.
    double phi1 = std::abs(f - kSqrt3) <= kOffsetBoundSlack
                      ? 0.0
                      : std::atan2(std::sqrt(std::max(0.0, 3.0 - f * f)), scale);
    if (req.branch == Branch::negative) phi1 = -phi1;
    const double phi2 = std::numbers::pi - phi1;

    const Pulse outer{outer_theta, phi1 + req.phi};
    const Pulse middle{middle_theta, phi2 + req.phi};
    return CompositeSequence{{outer, middle, outer}, f, TargetRotation{req.theta, req.phi}};
}

struct VerificationReport {
    double distance_at_plus_f = 0.0;
    double distance_at_minus_f = 0.0;
    /// |cos(phi1 - phi2) - (1 - f*^2) / 2|
    double phase_relation_residual = 0.0;

    [[nodiscard]] double worst() const {
        return std::max({distance_at_plus_f, distance_at_minus_f, phase_relation_residual});
    }
};

inline VerificationReport verify(const CompositeSequence& seq) {
    const Rotation ideal = ideal_propagator(seq.target());
    const OffResonance plus{seq.f_star()};
    VerificationReport r;
    r.distance_at_plus_f = distance_up_to_phase(sequence_propagator(seq, plus), ideal);
    r.distance_at_minus_f = distance_up_to_phase(sequence_propagator(seq, plus.mirrored()), ideal);
    const double dphi = seq.pulses()[0].phi() - seq.pulses()[1].phi();
    const double f2 = seq.f_star() * seq.f_star();
    r.phase_relation_residual = std::abs(std::cos(dphi) - (1.0 - f2) / 2.0);
    return r;
}

}  // namespace rotten
