#pragma once

/**
 * Two-resonance excitation and acquisition analogue.
 *
 * Each line starts at equilibrium (0, 0, 1), is excited by a single pulse or
 * by a tailored three-pulse sequence at its own f_k = delta_k / nu1, and
 * then contributes amp_k (v_x + i v_y) exp(i 2pi delta_k t) exp(-t / T2) to
 * the FID. The spectrum is the discrete Fourier transform of the FID with
 * the frequency axis centred on zero.
 *
 * Phases are referenced per line: a line excited to exactly -y is pure
 * absorption (0 degrees) at its peak bin, including the small dispersive
 * contribution a finite, off-bin acquisition adds. +x therefore reads +90.
 */

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fftw3.h>
#include <json.hpp>

#include "rotten/errors.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"
#include "rotten/synthesis.hpp"

namespace rotten {

struct SpectralLine {
    double offset_hz = 0.0;
    double amplitude = 1.0;
};

struct SpinSystem {
    std::vector<SpectralLine> lines;
    double nu1_hz = 0.0;
    double t2_s = 0.0;
    double dwell_s = 0.0;
    int points = 0;

    void validate() const {
        if (lines.empty()) throw DomainError("spin system needs at least one line");
        if (!(nu1_hz > 0.0)) throw DomainError("nu1_hz must be positive");
        if (!(t2_s > 0.0)) throw DomainError("t2_s must be positive");
        if (!(dwell_s > 0.0)) throw DomainError("dwell_s must be positive");
        if (points < 2) throw DomainError("points must be at least 2");
    }

    /// Warning text when the acquisition window is shorter than 5 T2.
    [[nodiscard]] std::optional<std::string> coverage_warning() const {
        if (dwell_s * points >= 5.0 * t2_s) return std::nullopt;
        std::ostringstream msg;
        msg << "acquisition window " << dwell_s * points << " s is shorter than 5*T2 = " << 5.0 * t2_s
            << " s; lines will show truncation wiggles";
        return msg.str();
    }

    [[nodiscard]] double off_resonance_fraction(std::size_t line) const { return lines.at(line).offset_hz / nu1_hz; }
};

/// Two singlets at +-9240 Hz excited with nu1 = 9240 / sqrt(3) Hz (f = sqrt(3)).
inline SpinSystem glycine_like_system() {
    SpinSystem s;
    s.lines = {{9240.0, 1.0}, {-9240.0, 1.0}};
    s.nu1_hz = 9240.0 / kSqrt3;
    s.t2_s = 0.05;
    s.dwell_s = 20e-6;
    s.points = 16384;
    return s;
}

enum class ExcitationMode { simple, rotten };

/// Post-pulse Bloch vector of every line, starting from (0, 0, 1). Rotten
/// mode tailors one sequence at f* = |delta_1| / nu1 and applies it to all lines.
inline std::vector<BlochVector> excite(const SpinSystem& sys, ExcitationMode mode, double target_theta) {
    sys.validate();
    std::vector<BlochVector> out;
    out.reserve(sys.lines.size());
    if (mode == ExcitationMode::simple) {
        const Pulse p{target_theta, 0.0};
        for (std::size_t k = 0; k < sys.lines.size(); ++k)
            out.push_back(apply(pulse_propagator(p, OffResonance::from_frequencies(sys.lines[k].offset_hz, sys.nu1_hz)),
                                BlochVector::Iz()));
        return out;
    }
    for (std::size_t k = 0; k < sys.lines.size(); ++k) check_offset_in_range(sys.off_resonance_fraction(k));
    const CompositeSequence seq = synthesize({target_theta, 0.0, sys.off_resonance_fraction(0), Branch::positive});
    for (std::size_t k = 0; k < sys.lines.size(); ++k)
        out.push_back(apply(sequence_propagator(seq, OffResonance::from_frequencies(sys.lines[k].offset_hz, sys.nu1_hz)),
                            BlochVector::Iz()));
    return out;
}

struct Spectrum {
    std::vector<double> frequency_hz;
    /// Zero-order corrected so that -y magnetization is real positive.
    std::vector<std::complex<double>> bins;
    /// Peak bin of each line (index into bins).
    std::vector<std::size_t> line_bins;
    /// Reference response of a unit -y line at each line's peak bin.
    std::vector<std::complex<double>> line_references;
    /// Measured phase of every line in degrees.
    std::vector<double> line_phases_deg;
};

namespace detail {

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

/// Forward DFT X[k] = sum_n x[n] exp(-2 pi i k n / N).
inline std::vector<std::complex<double>> forward_dft(std::vector<std::complex<double>> data) {
    std::vector<std::complex<double>> out(data.size());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(data.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan{
        fftw_plan_dft_1d(static_cast<int>(data.size()), in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE)};
    if (!plan) throw std::runtime_error("FFTW could not create a plan");
    fftw_execute(plan.get());
    return out;
}

/// DFT bin `k` (unshifted index) of exp((i 2pi delta - 1/T2) n dwell), in
/// closed form as a geometric series.
inline std::complex<double> decaying_line_bin(double delta_hz, double t2_s, double dwell_s, int n, int k) {
    using namespace std::complex_literals;
    const double arg = 2.0 * std::numbers::pi * (delta_hz * dwell_s - static_cast<double>(k) / n);
    const std::complex<double> z = std::exp(std::complex<double>{-dwell_s / t2_s, arg});
    const std::complex<double> zn = std::exp(static_cast<double>(n) * std::complex<double>{-dwell_s / t2_s, arg});
    if (std::abs(1.0 - z) < 1e-300) return static_cast<double>(n);
    return (1.0 - zn) / (1.0 - z);
}

}  // namespace detail

/// Index into the centred spectrum closest to `hz`.
inline std::size_t nearest_bin(const SpinSystem& sys, double hz) {
    const double width = 1.0 / (sys.dwell_s * sys.points);
    const long half = sys.points / 2;
    long idx = std::lround(hz / width) + half;
    idx = std::clamp<long>(idx, 0, sys.points - 1);
    return static_cast<std::size_t>(idx);
}

inline double phase_error(const Spectrum& spec, std::size_t line_index) {
    if (line_index >= spec.line_bins.size()) throw DomainError("line index out of range");
    const std::complex<double> s = spec.bins.at(spec.line_bins[line_index]);
    if (std::abs(s) == 0.0) throw UndefinedPhase("spectrum has zero magnitude at the line's peak bin");
    double deg = rad_to_deg(std::arg(s * std::conj(spec.line_references[line_index])));
    if (deg <= -180.0) deg += 360.0;
    return deg;
}

inline Spectrum acquire(const SpinSystem& sys, const std::vector<BlochVector>& post_pulse) {
    sys.validate();
    if (post_pulse.size() != sys.lines.size())
        throw DomainError("expected one Bloch vector per line");
    using namespace std::complex_literals;
    const auto n = static_cast<std::size_t>(sys.points);

    // Times i: the receiver reference puts -y on the real axis.
    std::vector<std::complex<double>> fid(n, 0.0);
    for (std::size_t k = 0; k < sys.lines.size(); ++k) {
        const auto& line = sys.lines[k];
        const std::complex<double> transverse = line.amplitude * 1i * std::complex<double>{post_pulse[k].x, post_pulse[k].y};
        for (std::size_t j = 0; j < n; ++j) {
            const double t = static_cast<double>(j) * sys.dwell_s;
            fid[j] += transverse * std::exp(std::complex<double>{-t / sys.t2_s, 2.0 * std::numbers::pi * line.offset_hz * t});
        }
    }
    const auto raw = detail::forward_dft(std::move(fid));

    Spectrum spec;
    spec.bins.resize(n);
    spec.frequency_hz.resize(n);
    const std::size_t half = n / 2;
    const double width = 1.0 / (sys.dwell_s * sys.points);
    for (std::size_t i = 0; i < n; ++i) {
        spec.bins[i] = raw[(i + half) % n];
        spec.frequency_hz[i] = (static_cast<double>(i) - static_cast<double>(half)) * width;
    }
    for (std::size_t k = 0; k < sys.lines.size(); ++k) {
        const std::size_t bin = nearest_bin(sys, sys.lines[k].offset_hz);
        spec.line_bins.push_back(bin);
        const int raw_index = static_cast<int>((bin + n - half) % n);
        spec.line_references.push_back(
            detail::decaying_line_bin(sys.lines[k].offset_hz, sys.t2_s, sys.dwell_s, sys.points, raw_index));
    }
    for (std::size_t k = 0; k < sys.lines.size(); ++k) {
        try {
            spec.line_phases_deg.push_back(phase_error(spec, k));
        } catch (const UndefinedPhase&) {
            spec.line_phases_deg.push_back(std::nan(""));
        }
    }
    return spec;
}

inline nlohmann::json to_json(const SpinSystem& sys) {
    nlohmann::json doc;
    doc["lines"] = nlohmann::json::array();
    for (const auto& l : sys.lines) doc["lines"].push_back({{"offset_hz", l.offset_hz}, {"amplitude", l.amplitude}});
    doc["nu1_hz"] = sys.nu1_hz;
    doc["t2_s"] = sys.t2_s;
    doc["dwell_s"] = sys.dwell_s;
    doc["points"] = sys.points;
    return doc;
}

inline SpinSystem spin_system_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw FormatError("spin system config must be an object");
    auto number = [](const nlohmann::json& obj, const char* key, const std::string& where) {
        if (!obj.is_object() || !obj.contains(key)) throw FormatError(where + ": missing field '" + key + "'");
        if (!obj.at(key).is_number()) throw FormatError(where + "." + key + ": expected a number");
        return obj.at(key).get<double>();
    };
    SpinSystem sys;
    if (!doc.contains("lines") || !doc.at("lines").is_array()) throw FormatError("config: missing array field 'lines'");
    for (std::size_t i = 0; i < doc.at("lines").size(); ++i) {
        const auto& l = doc.at("lines")[i];
        const std::string where = "lines[" + std::to_string(i) + "]";
        SpectralLine line;
        line.offset_hz = number(l, "offset_hz", where);
        line.amplitude = l.contains("amplitude") ? number(l, "amplitude", where) : 1.0;
        sys.lines.push_back(line);
    }
    sys.nu1_hz = number(doc, "nu1_hz", "config");
    sys.t2_s = number(doc, "t2_s", "config");
    sys.dwell_s = number(doc, "dwell_s", "config");
    if (!doc.contains("points") || !doc.at("points").is_number_integer())
        throw FormatError("config.points: expected an integer");
    sys.points = doc.at("points").get<int>();
    try {
        sys.validate();
    } catch (const DomainError& e) {
        throw FormatError(std::string{"config: "} + e.what());
    }
    return sys;
}

/// `freq_hz,real,imag,magnitude` rows followed by a `#` summary of line phases.
inline void write_spectrum_csv(std::ostream& out, const SpinSystem& sys, const Spectrum& spec,
                               const std::string& header = {}) {
    std::istringstream lines{header};
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
    out << "freq_hz,real,imag,magnitude\n" << std::setprecision(17);
    for (std::size_t i = 0; i < spec.bins.size(); ++i)
        out << spec.frequency_hz[i] << ',' << spec.bins[i].real() << ',' << spec.bins[i].imag() << ','
            << std::abs(spec.bins[i]) << '\n';
    out << std::setprecision(6);
    for (std::size_t k = 0; k < spec.line_phases_deg.size(); ++k)
        out << "# line " << k << " offset_hz=" << sys.lines[k].offset_hz << " phase_deg=" << spec.line_phases_deg[k]
            << '\n';
}

}  // namespace rotten
