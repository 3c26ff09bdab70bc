#pragma once

// Rotor fidelity and off-resonance scans.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rotten/errors.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"
#include "rotten/synthesis.hpp"

namespace rotten {

/// |Tr(T^dagger A)| / 2, i.e. |cos(e/2)| for the residual rotation angle e.
inline double rotor_fidelity(const Rotation& actual, const Rotation& target) {
    return 1.0 - distance_up_to_phase(actual, target);
}

struct FidelityScan {
    std::vector<double> f_values;
    std::vector<double> lambda_simple;
    std::vector<double> lambda_composite;
    TargetRotation target;
    double f_star = 0.0;

    [[nodiscard]] std::size_t size() const { return f_values.size(); }
    /// Index of the row whose f equals `f` exactly, or size() when absent.
    [[nodiscard]] std::size_t find(double f) const {
        const auto it = std::find(f_values.begin(), f_values.end(), f);
        return static_cast<std::size_t>(it - f_values.begin());
    }
};

struct ScanOptions {
    /// Insert f = 0 and f = +-f_star into the grid when they fall inside the
    /// range, so the tailored offsets always have an exact row.
    bool include_anchors = true;
    unsigned threads = 1;
};

/// Uniform n_points grid over [f_min, f_max] (plus anchors), evaluating the
/// single pulse (theta, phi) and the sequence synthesized once at f_star.
inline FidelityScan scan(const TargetRotation& target, double f_star, double f_min, double f_max, int n_points,
                         const ScanOptions& opts = {}) {
    if (n_points < 2) throw DomainError("scan needs at least 2 points");
    if (!(f_min < f_max)) throw DomainError("scan range requires f_min < f_max");
    const CompositeSequence seq = synthesize({target.theta, target.phi, f_star, Branch::positive});

    FidelityScan out;
    out.target = target;
    out.f_star = seq.f_star();
    // Weighted form keeps a symmetric range exactly mirror-symmetric.
    const double last = n_points - 1;
    for (int i = 0; i < n_points; ++i)
        out.f_values.push_back(((last - i) * f_min + i * f_max) / last);
    if (opts.include_anchors) {
        for (double a : {0.0, seq.f_star(), -seq.f_star()})
            if (a >= f_min && a <= f_max) out.f_values.push_back(a);
        std::sort(out.f_values.begin(), out.f_values.end());
        out.f_values.erase(std::unique(out.f_values.begin(), out.f_values.end()), out.f_values.end());
    }

    const std::size_t n = out.f_values.size();
    out.lambda_simple.resize(n);
    out.lambda_composite.resize(n);
    const Rotation ideal = ideal_propagator(target);
    const Pulse simple{target.theta, target.phi};
    auto fill = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n; i += stride) {
            const OffResonance off{out.f_values[i]};
            out.lambda_simple[i] = rotor_fidelity(pulse_propagator(simple, off), ideal);
            out.lambda_composite[i] = rotor_fidelity(sequence_propagator(seq, off), ideal);
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n)));
    if (workers == 1) {
        fill(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(fill, t, workers);
    }
    return out;
}

/// `f,lambda_simple,lambda_composite` rows at 17 significant digits, preceded
/// by `header` lines as `#` comments.
inline void write_scan_csv(std::ostream& out, const FidelityScan& s, const std::string& header = {}) {
    std::istringstream lines{header};
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    out << "f,lambda_simple,lambda_composite\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i)
        out << s.f_values[i] << ',' << s.lambda_simple[i] << ',' << s.lambda_composite[i] << '\n';
}

}  // namespace rotten
