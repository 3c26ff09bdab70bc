// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "cli_app.hpp"
#include "rotten/rotten.hpp"

using namespace rotten;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

constexpr double kPi = std::numbers::pi;

double deg(double d) { return deg_to_rad(d); }

double circ_deg(double a_deg, double b_deg) { return std::abs(std::remainder(a_deg - b_deg, 360.0)); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const std::vector<double> kGridF{0.05, 0.3, 0.7, 1.0, 1.3, std::numbers::sqrt2, 1.6, kSqrt3};

template <class Cell>
double over_grid(Cell cell) {
    double worst = 0.0;
    for (int t = 5; t <= 355; t += 5)
        for (int p = 0; p < 360; p += 45)
            for (double f : kGridF) worst = std::max(worst, cell(deg(t), deg(p), f));
    return worst;
}

Outcome ac1() {
    const auto seq = synthesize({kPi / 2, 0.0, kSqrt3});
    const double want_theta[3]{90, 45, 90}, want_phi[3]{0, 180, 0};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
        worst = std::max(worst, std::abs(rad_to_deg(seq.pulses()[k].theta()) - want_theta[k]));
        worst = std::max(worst, circ_deg(rad_to_deg(seq.pulses()[k].phi()), want_phi[k]));
    }
    return {worst <= 1e-10, fmt("max angle deviation %.3e deg", worst)};
}

Outcome ac2() {
    const double worst = over_grid([](double t, double p, double f) {
        return verify(synthesize({t, p, f})).worst();
    });
    return {worst < 1e-10, fmt("max distance to target at +-f* %.3e over 4544 cells", worst)};
}

Outcome ac3() {
    const double worst = over_grid([](double t, double p, double f) {
        const auto seq = synthesize({t, p, f});
        return distance_up_to_phase(sequence_propagator(seq, OffResonance{f}),
                                    sequence_propagator(seq, OffResonance{-f}));
    });
    return {worst < 1e-10, fmt("max distance U(+f*) vs U(-f*) %.3e", worst)};
}

Outcome ac4() {
    int rejected = 0;
    for (double f : {1.7330, 2.0, 3.0}) {
        try {
            (void)synthesize({kPi / 2, 0.0, f});
        } catch (const OffsetOutOfRange&) {
            ++rejected;
        }
    }
    bool boundary_ok = true;
    try {
        (void)synthesize({kPi / 2, 0.0, cli::parse_fraction("sqrt3")});
    } catch (const std::exception&) {
        boundary_ok = false;
    }
    return {rejected == 3 && boundary_ok,
            fmt("%.0f of 3 out-of-range offsets rejected, sqrt3 token accepted: %.0f", rejected, boundary_ok)};
}

Outcome ac5() {
    const TargetRotation target{kPi / 2, 0.0};
    const auto s = scan(target, kSqrt3, -3.0, 3.0, 601);
    const auto i0 = s.find(0.0), ip = s.find(kSqrt3), im = s.find(-kSqrt3);
    if (i0 == s.size() || ip == s.size() || im == s.size()) return {false, "anchor rows missing"};
    double asym = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto j = s.find(-s.f_values[i]);
        if (j == s.size()) return {false, "grid is not mirror-symmetric"};
        asym = std::max(asym, std::abs(s.lambda_composite[i] - s.lambda_composite[j]));
    }
    // Independent 2x2 evaluation of the simple pulse at the anchors.
    const auto ideal = oracle::pulse(kPi / 2, 0.0, 0.0);
    const double ref = oracle::overlap(oracle::pulse(kPi / 2, 0.0, kSqrt3), ideal);
    const double l0 = s.lambda_simple[i0];
    const double lc = std::min(s.lambda_composite[ip], s.lambda_composite[im]);
    const double ls_p = s.lambda_simple[ip], ls_m = s.lambda_simple[im];
    const bool ok = std::abs(l0 - 1.0) <= 1e-12 && lc >= 1.0 - 1e-10 && asym < 1e-10 &&
                    std::abs(ls_p - 0.35355) <= 1e-4 && std::abs(ls_m - 0.35355) <= 1e-4 &&
                    std::abs(ls_p - ref) < 1e-12;
    return {ok, fmt("lambda_simple(0)=%.15f min lambda_composite(+-sqrt3)=%.15f lambda_simple(sqrt3)=%.8f", l0, lc,
                    ls_p) +
                    fmt(" asymmetry %.2e", asym)};
}

Outcome ac6() {
    const auto seq = synthesize({kPi / 2, 0.0, kSqrt3});
    const BlochVector starts[3]{BlochVector::Ix(), BlochVector::Iy(), BlochVector::Iz()};
    const BlochVector ends[3]{{1, 0, 0}, {0, 0, 1}, {0, -1, 0}};
    double worst = 0.0;
    for (double f : {kSqrt3, -kSqrt3})
        for (int k = 0; k < 3; ++k) {
            const auto t = trace(seq.pulses(), OffResonance{f}, starts[k]);
            worst = std::max(worst, max_abs_diff(t.endpoint(), ends[k]));
        }
    const Pulse simple[1]{Pulse{kPi / 2, 0.0}};
    const auto t = trace(simple, OffResonance{kSqrt3}, BlochVector::Iz());
    worst = std::max(worst, max_abs_diff(t.endpoint(), BlochVector{std::sqrt(3.0) / 2, 0.0, 0.5}));
    return {worst < 1e-9, fmt("max endpoint deviation %.3e", worst)};
}

Outcome ac7() {
    const auto sys = glycine_like_system();
    const auto simple = acquire(sys, excite(sys, ExcitationMode::simple, kPi / 2));
    const auto rot = acquire(sys, excite(sys, ExcitationMode::rotten, kPi / 2));
    double simple_dev = 0.0, rotten_dev = 0.0;
    for (std::size_t k = 0; k < sys.lines.size(); ++k) {
        const double expected = sys.lines[k].offset_hz > 0 ? 90.0 : -90.0;
        simple_dev = std::max(simple_dev, circ_deg(simple.line_phases_deg[k], expected));
        rotten_dev = std::max(rotten_dev, circ_deg(rot.line_phases_deg[k], 0.0));
    }
    return {simple_dev <= 1.0 && rotten_dev <= 0.1,
            fmt("simple phases %+.4f/%+.4f deg, rotten phases %+.6f", simple.line_phases_deg[0],
                simple.line_phases_deg[1], rot.line_phases_deg[0]) +
                fmt("/%+.6f deg", rot.line_phases_deg[1])};
}

Outcome ac8() {
    double worst_j = 0.0, worst_d = 0.0;
    int converged = 0, cases = 0;
    for (double t : {30.0, 90.0, 180.0, 270.0})
        for (double f : {0.5, 1.0, kSqrt3}) {
            ++cases;
            const OptimizationProblem problem{{deg(t), 0.0}, f};
            const auto r = solve(problem, 1, 200000);
            converged += r.converged ? 1 : 0;
            worst_j = std::max(worst_j, r.objective_value);
            const auto pulses = pulses_from_params(problem, r.params);
            const auto seq = synthesize({deg(t), 0.0, f});
            for (double s : {f, -f})
                worst_d = std::max(worst_d, distance_up_to_phase(pulses_propagator(pulses, OffResonance{s}),
                                                                 sequence_propagator(seq, OffResonance{s})));
        }
    return {converged == cases && worst_j < 1e-9 && worst_d < 1e-6,
            fmt("%.0f/12 converged, max J %.3e, max distance to analytic %.3e", converged, worst_j, worst_d)};
}

Outcome ac9() {
    constexpr int kCases = 1000;
    std::mt19937_64 rng{20261015};
    std::uniform_real_distribution<double> angle{0.0, 2 * kPi}, off{-3.0, 3.0};
    double compose_err = 0.0, norm_err = 0.0, endpoint_err = 0.0, law_err = 0.0;
    for (int i = 0; i < kCases; ++i) {
        const auto a = oracle::random_rotation(rng), b = oracle::random_rotation(rng);
        compose_err = std::max(
            compose_err, 1.0 - oracle::overlap(oracle::from_rotation(compose(a, b)),
                                               oracle::mul(oracle::from_rotation(a), oracle::from_rotation(b))));

        const auto v = oracle::random_unit_vector(rng);
        norm_err = std::max(norm_err, std::abs(apply(a, v).norm() - 1.0));

        const std::array<Pulse, 3> pulses{Pulse{angle(rng), angle(rng)}, Pulse{angle(rng), angle(rng)},
                                          Pulse{angle(rng), angle(rng)}};
        const OffResonance o{off(rng)};
        const auto t = trace(pulses, o, v, 16);
        endpoint_err = std::max(endpoint_err, max_abs_diff(t.endpoint(), apply(pulses_propagator(pulses, o), v)));

        const Pulse p{angle(rng), angle(rng)};
        const double f = off(rng);
        const double expected = std::remainder(p.theta() * std::sqrt(1 + f * f), 4 * kPi);
        const double got = pulse_propagator(p, OffResonance{f}).angle();
        // Rotation angles are defined modulo 2 pi once q and -q are identified.
        law_err = std::max(law_err, std::abs(std::remainder(got - std::abs(expected), 2 * kPi)));
    }
    const bool ok = compose_err < 1e-12 && norm_err < 1e-12 && endpoint_err < 1e-9 && law_err < 1e-9;
    return {ok, fmt("%.0f cases each: composition %.2e, norm %.2e, ", kCases, compose_err, norm_err) +
                    fmt("trajectory endpoint %.2e, generator-norm law %.2e", endpoint_err, law_err)};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1 special-case synthesis", ac1, 0.001},
        {"AC2 perfect-rotor exactness", ac2, 1.0},
        {"AC3 +-f symmetry", ac3, 1.0},
        {"AC4 offset range bound", ac4, 1.0},
        {"AC5 fidelity scan anchors", ac5, 0.5},
        {"AC6 trajectory endpoints", ac6, 0.1},
        {"AC7 two-line phase errors", ac7, 0.5},
        {"AC8 numeric oracle equivalence", ac8, 30.0},
        {"AC9 randomized properties", ac9, 10.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string{"exception: "} + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = elapsed <= c.budget_s;
        const bool pass = o.ok && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s %s: %s (%.3f s of %.3f s)%s\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), elapsed,
                    c.budget_s, in_time ? "" : " over time budget");
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
