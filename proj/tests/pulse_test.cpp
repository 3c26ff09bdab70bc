#include "rotten/pulse.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "rotten/synthesis.hpp"

using namespace rotten;

namespace {
constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);
}  // namespace

TEST(Pulse, NegativeThetaFlipsPhase) {
    const Pulse p{-pi / 2, 0.25};
    EXPECT_DOUBLE_EQ(p.theta(), pi / 2);
    EXPECT_DOUBLE_EQ(p.phi(), 0.25 + pi);
    EXPECT_LT(distance_up_to_phase(pulse_propagator(p, OffResonance{0.0}), pulse_propagator(Pulse{pi / 2, 0.25}, OffResonance{0.0}).inverse()),
              1e-15);
}

TEST(Pulse, PhaseWrapsIntoRange) {
    EXPECT_DOUBLE_EQ(Pulse(1.0, -pi / 2).phi(), 3 * pi / 2);
    EXPECT_NEAR(Pulse(1.0, 5 * pi).phi(), pi, 1e-15);
    EXPECT_EQ(Pulse(1.0, 2 * pi).phi(), 0.0);
    EXPECT_THROW(Pulse(std::nan(""), 0.0), DomainError);
}

TEST(OffResonance, FromFrequencies) {
    const auto o = OffResonance::from_frequencies(9240.0, 9240.0 / sqrt3);
    EXPECT_NEAR(o.f(), sqrt3, 1e-12);
    ASSERT_TRUE(o.delta_hz().has_value());
    EXPECT_EQ(*o.delta_hz(), 9240.0);
    EXPECT_THROW(OffResonance::from_frequencies(10.0, 0.0), DomainError);
    EXPECT_THROW(OffResonance::from_frequencies(10.0, -5.0), DomainError);
    EXPECT_FALSE(OffResonance{1.0}.nu1_hz().has_value());
}

TEST(OffResonance, TiltAngle) {
    EXPECT_NEAR(OffResonance{sqrt3}.tilt_angle(), pi / 6, 1e-15);
    EXPECT_NEAR(OffResonance{0.0}.tilt_angle(), pi / 2, 1e-15);
    EXPECT_NEAR(std::tan(OffResonance{0.4}.tilt_angle()), 1 / 0.4, 1e-12);
}

TEST(CompositeSequence, OuterPulsesMustMatch) {
    const Pulse a{1.0, 0.2}, b{0.5, 1.0};
    EXPECT_NO_THROW(CompositeSequence({a, b, a}, 1.0, {0.5, 0.0}));
    EXPECT_THROW(CompositeSequence({a, b, Pulse{1.0, 0.3}}, 1.0, {0.5, 0.0}), DomainError);
    EXPECT_THROW(CompositeSequence({a, b, Pulse{1.1, 0.2}}, 1.0, {0.5, 0.0}), DomainError);
}

TEST(PulsePropagator, OnResonanceHalfTurn) {
    const Rotation r = pulse_propagator(Pulse{pi, 0.0}, OffResonance{0.0});
    EXPECT_LT(distance_up_to_phase(r, from_axis_angle(BlochVector::Ix(), pi)), 1e-15);
    EXPECT_LT(max_abs_diff(apply(r, BlochVector::Iz()), {0, 0, -1}), 1e-15);
}

TEST(PulsePropagator, TiltedHalfTurnAtSqrt3) {
    const Rotation r = pulse_propagator(Pulse{pi / 2, 0.0}, OffResonance{sqrt3});
    EXPECT_LT(distance_up_to_phase(r, from_axis_angle({0.5, 0.0, sqrt3 / 2}, pi)), 1e-15);
    EXPECT_GT(oracle::overlap(oracle::from_rotation(r), oracle::pulse(pi / 2, 0.0, sqrt3)), 1.0 - 1e-13);
    EXPECT_LT(max_abs_diff(apply(r, BlochVector::Iz()), {sqrt3 / 2, 0.0, 0.5}), 1e-15);
}

TEST(IdealPropagator, Examples) {
    EXPECT_LT(max_abs_diff(apply(ideal_propagator(pi / 2, 0.0), BlochVector::Iz()), {0, -1, 0}), 1e-15);
    EXPECT_EQ(distance_up_to_phase(ideal_propagator(0.0, 1.234), Rotation{}), 0.0);
    const Rotation y180 = ideal_propagator(pi, pi / 2);
    EXPECT_LT(max_abs_diff(apply(y180, BlochVector::Ix()), {-1, 0, 0}), 1e-15);
    EXPECT_LT(max_abs_diff(apply(y180, BlochVector::Iz()), {0, 0, -1}), 1e-15);
}

TEST(SequencePropagator, ZeroPulsesAreIdentity) {
    const Pulse zero{0.0, 0.3};
    const CompositeSequence s{{zero, Pulse{0.0, 1.0}, zero}, 1.0, {1.0, 0.0}};
    for (double f : {-2.0, 0.0, 0.7, 3.0}) EXPECT_EQ(distance_up_to_phase(sequence_propagator(s, OffResonance{f}), Rotation{}), 0.0);
}

TEST(SequencePropagator, OrderIsLastPulseLeftmost) {
    const Pulse a{1.0, 0.2}, b{0.5, 1.9};
    const CompositeSequence s{{a, b, a}, 0.8, {0.5, 0.0}};
    const double f = 0.6;
    const auto expected = oracle::mul(oracle::pulse(1.0, 0.2, f), oracle::mul(oracle::pulse(0.5, 1.9, f), oracle::pulse(1.0, 0.2, f)));
    EXPECT_GT(oracle::overlap(oracle::from_rotation(sequence_propagator(s, OffResonance{f})), expected), 1.0 - 1e-13);
}

TEST(SequencePropagator, TailoredNinetyXAtBothOffsets) {
    const auto seq = synthesize({pi / 2, 0.0, sqrt3});
    const Rotation ideal = ideal_propagator(pi / 2, 0.0);
    const Rotation plus = sequence_propagator(seq, OffResonance{sqrt3});
    const Rotation minus = sequence_propagator(seq, OffResonance{-sqrt3});
    EXPECT_LT(distance_up_to_phase(plus, ideal), 1e-10);
    EXPECT_LT(distance_up_to_phase(minus, plus), 1e-10);
}

TEST(PulseProperties, SymmetricFamilyGrid) {
    for (double f_star : {0.1, 0.5, 1.0, std::sqrt(2.0), sqrt3}) {
        for (int deg = 10; deg <= 350; deg += 10) {
            const auto seq = synthesize({deg * pi / 180.0, 0.0, f_star});
            EXPECT_LT(distance_up_to_phase(sequence_propagator(seq, OffResonance{f_star}),
                                           sequence_propagator(seq, OffResonance{-f_star})),
                      1e-10)
                << "theta=" << deg << " f*=" << f_star;
        }
    }
}

TEST(PulseProperties, GeneratorNormLaw) {
    std::mt19937_64 rng{99};
    std::uniform_real_distribution<double> theta{0.0, 2.0 * pi}, phi{0.0, 2.0 * pi}, fd{-3.0, 3.0};
    for (int i = 0; i < 1000; ++i) {
        const double t = theta(rng), p = phi(rng), f = fd(rng);
        const Rotation r = pulse_propagator(Pulse{t, p}, OffResonance{f});
        const double expected = std::fmod(t * std::hypot(1.0, f), 4.0 * pi);
        // angle() is in [0, 2pi]; q and -q give a and 4pi - a about the same axis.
        const double a = r.angle();
        const double err = std::min(std::abs(a - expected), std::abs((4.0 * pi - a) - expected));
        EXPECT_LT(err, 1e-10) << "theta=" << t << " f=" << f;
        EXPECT_GT(oracle::overlap(oracle::from_rotation(r), oracle::pulse(t, p, f)), 1.0 - 1e-12);
    }
}

TEST(PulseProperties, ZeroOffsetReducesToIdeal) {
    std::mt19937_64 rng{3};
    std::uniform_real_distribution<double> u{0.0, 2.0 * pi};
    for (int i = 0; i < 500; ++i) {
        const Pulse p{u(rng), u(rng)};
        EXPECT_LT(distance_up_to_phase(pulse_propagator(p, OffResonance{0.0}), ideal_propagator(p.theta(), p.phi())), 1e-12);
    }
}
