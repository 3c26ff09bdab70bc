#pragma once

// Command-line front end: synth, scan, trajectory, spectrum, verify.
// Exit codes: 0 success, 2 usage or domain error, 1 internal error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotten/rotten.hpp"

namespace rotten::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kNegSqrt3Token = "neg-sqrt3";

/// Decimal, or the exact tokens sqrt3 / -sqrt3 / +sqrt3.
inline double parse_fraction(const std::string& token) {
    if (token == "sqrt3" || token == "+sqrt3") return kSqrt3;
    if (token == "-sqrt3" || token == kNegSqrt3Token) return -kSqrt3;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw UsageError("cannot parse off-resonance value '" + token + "' (use a decimal or sqrt3)");
    }
    if (used != token.size() || !std::isfinite(v))
        throw UsageError("cannot parse off-resonance value '" + token + "' (use a decimal or sqrt3)");
    return v;
}

inline BlochVector parse_initial_state(const std::string& token) {
    if (token == "Ix") return BlochVector::Ix();
    if (token == "Iy") return BlochVector::Iy();
    if (token == "Iz") return BlochVector::Iz();
    throw UsageError("unknown initial state '" + token + "' (expected Ix, Iy or Iz)");
}

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s{buf};
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

namespace detail {

inline std::string join_invocation(const std::vector<std::string>& args) {
    std::string s = "rotten";
    for (const auto& a : args) s += " " + a;
    return s;
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out{path};
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

inline void finish(std::ofstream& out, const std::string& path) {
    if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace detail

struct Options {
    unsigned threads = 1;

    std::string theta_deg, phi_deg, f_star, f_eval, f_min, f_max, n_points;
    std::string out_path;
    std::string branch = "positive";

    std::string mode, initial, out_prefix = "trajectory";
    int samples = kDefaultSamplesPerPulse;

    std::string config_path, spectrum_out = "spectrum.csv", theta_spectrum_deg = "90";

    std::string sequence_path;
    bool numeric = false;
    std::uint64_t seed = 1;
    std::int64_t budget = 200000;
};

inline double parse_angle_deg(const std::string& token, const char* what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw UsageError(std::string{"cannot parse "} + what + " '" + token + "'");
    }
    if (used != token.size() || !std::isfinite(v)) throw UsageError(std::string{"cannot parse "} + what + " '" + token + "'");
    return v;
}

inline void print_verification(std::ostream& out, const VerificationReport& r) {
    out << std::setprecision(3) << std::scientific;
    out << "distance at +f*: " << r.distance_at_plus_f << '\n';
    out << "distance at -f*: " << r.distance_at_minus_f << '\n';
    out << "phase relation residual: " << r.phase_relation_residual << '\n';
    out << std::defaultfloat << std::setprecision(6);
}

inline int cmd_synth(const Options& o, const std::string& header, std::ostream& out) {
    const double theta = parse_angle_deg(o.theta_deg, "theta");
    const double phi = parse_angle_deg(o.phi_deg, "phi");
    const double f = parse_fraction(o.f_star);
    if (o.branch != "positive" && o.branch != "negative") throw UsageError("branch must be positive or negative");
    const auto seq = synthesize({deg_to_rad(theta), deg_to_rad(phi), f,
                                 o.branch == "negative" ? Branch::negative : Branch::positive});
    const std::string path = o.out_path.empty() ? "sequence.json" : o.out_path;
    auto file = detail::open_output(path);
    write_sequence(file, seq, header);
    detail::finish(file, path);

    out << "pulse  theta_deg      phi_deg\n";
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& p = seq.pulses()[i];
        out << "  " << (i + 1) << "    " << std::setw(11) << fixed(rad_to_deg(p.theta())) << "  " << std::setw(11)
            << fixed(rad_to_deg(p.phi())) << '\n';
    }
    print_verification(out, verify(seq));
    out << "wrote " << path << '\n';
    return 0;
}

inline int cmd_scan(const Options& o, const std::string& header, std::ostream& out) {
    const double theta = deg_to_rad(parse_angle_deg(o.theta_deg, "theta"));
    const double phi = deg_to_rad(parse_angle_deg(o.phi_deg, "phi"));
    const double f = parse_fraction(o.f_star);
    const double f_min = parse_fraction(o.f_min);
    const double f_max = parse_fraction(o.f_max);
    int n = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(o.n_points, &used);
        if (used != o.n_points.size()) throw UsageError("");
    } catch (const std::exception&) {
        throw UsageError("cannot parse point count '" + o.n_points + "'");
    }
    if (n < 2) throw UsageError("scan needs at least 2 points");
    if (!(f_min < f_max)) throw UsageError("scan range requires f_min < f_max");

    const auto s = scan({theta, phi}, f, f_min, f_max, n, ScanOptions{true, o.threads});
    const std::string path = o.out_path.empty() ? "scan.csv" : o.out_path;
    auto file = detail::open_output(path);
    write_scan_csv(file, s, header);
    detail::finish(file, path);

    out << "f                      lambda_simple        lambda_composite\n" << std::setprecision(12);
    for (double probe : {-s.f_star, 0.0, s.f_star}) {
        const auto i = s.find(probe);
        if (i == s.size()) continue;
        out << std::setw(20) << std::left << s.f_values[i] << "   " << std::setw(20) << s.lambda_simple[i] << " "
            << s.lambda_composite[i] << std::right << '\n';
    }
    out << "wrote " << path << " (" << s.size() << " rows)\n";
    return 0;
}

inline int cmd_trajectory(const Options& o, const std::string& header, std::ostream& out) {
    if (o.mode != "simple" && o.mode != "rotten") throw UsageError("mode must be simple or rotten");
    const double theta = deg_to_rad(parse_angle_deg(o.theta_deg, "theta"));
    const double phi = deg_to_rad(parse_angle_deg(o.phi_deg, "phi"));
    const double f_eval = parse_fraction(o.f_eval);
    const BlochVector initial = parse_initial_state(o.initial);
    if (o.samples < 2) throw UsageError("samples per pulse must be at least 2");

    std::vector<Pulse> pulses;
    if (o.mode == "simple") {
        pulses.emplace_back(theta, phi);
    } else {
        if (o.f_star == "-") throw UsageError("rotten mode needs a tailoring offset f_star");
        const auto seq = synthesize({theta, phi, parse_fraction(o.f_star), Branch::positive});
        pulses.assign(seq.pulses().begin(), seq.pulses().end());
    }
    const auto t = trace(pulses, OffResonance{f_eval}, initial, o.samples);

    const std::string csv_path = o.out_prefix + ".csv";
    auto csv = detail::open_output(csv_path);
    write_trajectory_csv(csv, t, header);
    detail::finish(csv, csv_path);
    for (Projection p : {Projection::xy, Projection::xz, Projection::yz}) {
        const std::string path = o.out_prefix + "_" + std::string{projection_name(p)} + ".svg";
        GrapefruitStyle style;
        style.title = o.mode + " " + o.theta_deg + "/" + o.phi_deg + " from " + o.initial + " at f=" + o.f_eval + " (" +
                      std::string{projection_name(p)} + ")";
        export_grapefruit(t, p, path, style);
    }
    const auto& e = t.endpoint();
    out << "endpoint: (" << fixed(e.x) << ", " << fixed(e.y) << ", " << fixed(e.z) << ")\n";
    out << "wrote " << csv_path << " and " << o.out_prefix << "_{xy,xz,yz}.svg\n";
    return 0;
}

inline int cmd_spectrum(const Options& o, const std::string& header, std::ostream& out, std::ostream& err) {
    if (o.mode != "simple" && o.mode != "rotten") throw UsageError("mode must be simple or rotten");
    SpinSystem sys = glycine_like_system();
    if (!o.config_path.empty()) {
        std::ifstream in{o.config_path};
        if (!in) throw UsageError("cannot open config '" + o.config_path + "'");
        sys = spin_system_from_json(parse_commented_json(in));
    }
    if (auto w = sys.coverage_warning()) err << "warning: " << *w << '\n';
    const double theta = deg_to_rad(parse_angle_deg(o.theta_spectrum_deg, "theta"));
    const auto mode = o.mode == "simple" ? ExcitationMode::simple : ExcitationMode::rotten;
    const auto spec = acquire(sys, excite(sys, mode, theta));

    std::string full_header = header + "\nconfig " + to_json(sys).dump();
    auto file = detail::open_output(o.spectrum_out);
    write_spectrum_csv(file, sys, spec, full_header);
    detail::finish(file, o.spectrum_out);

    for (std::size_t k = 0; k < spec.line_phases_deg.size(); ++k)
        out << "line " << k << ": offset " << fixed(sys.lines[k].offset_hz, 1) << " Hz, f = "
            << fixed(sys.off_resonance_fraction(k), 6) << ", phase " << fixed(spec.line_phases_deg[k], 3) << " deg\n";
    out << "wrote " << o.spectrum_out << '\n';
    return 0;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
    CompositeSequence seq = [&] {
        try {
            return read_sequence_file(o.sequence_path);
        } catch (const FormatError& e) {
            throw UsageError(e.what());
        }
    }();
    out << "target: theta " << fixed(rad_to_deg(seq.target().theta)) << " deg, phi "
        << fixed(rad_to_deg(seq.target().phi)) << " deg, f* " << std::setprecision(17) << seq.f_star()
        << std::setprecision(6) << '\n';
    print_verification(out, verify(seq));
    if (!o.numeric) return 0;

    const OptimizationProblem problem{seq.target(), seq.f_star(), Parameterization::symmetric};
    SolverConfig cfg;
    cfg.threads = o.threads;
    const auto result = solve(problem, o.seed, o.budget, cfg);
    const auto numeric_pulses = pulses_from_params(problem, result.params);
    double agreement = 0.0;
    for (double f : {seq.f_star(), -seq.f_star()}) {
        const OffResonance off{f};
        agreement = std::max(agreement, distance_up_to_phase(pulses_propagator(numeric_pulses, off),
                                                             sequence_propagator(seq, off)));
    }
    out << "numeric oracle: " << (result.converged ? "converged" : "not converged") << ", J = " << std::scientific
        << std::setprecision(3) << result.objective_value << ", evaluations = " << result.iterations << '\n';
    out << "oracle agreement (max distance at +-f*): " << agreement << std::defaultfloat << std::setprecision(6)
        << '\n';
    out << "numeric pulses (deg):";
    for (const auto& p : numeric_pulses) out << " (" << fixed(rad_to_deg(p.theta()), 4) << ", " << fixed(rad_to_deg(p.phi()), 4) << ")";
    out << '\n';
    return 0;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Offset-tailored three-pulse composite rotors", "rotten"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--threads", o.threads, "Worker threads for scans and solver restarts")->check(CLI::Range(1u, 256u));

    auto* synth = app.add_subcommand("synth", "Synthesize a tailored sequence");
    synth->add_option("theta_deg", o.theta_deg, "Target nutation angle (degrees)")->required();
    synth->add_option("phi_deg", o.phi_deg, "Target phase (degrees)")->required();
    synth->add_option("f_star", o.f_star, "Tailoring off-resonance fraction (decimal or sqrt3)")->required();
    synth->add_option("-o,--out", o.out_path, "Sequence file (default sequence.json)");
    synth->add_option("--branch", o.branch, "Phase branch: positive or negative");

    auto* scan_cmd = app.add_subcommand("scan", "Rotor fidelity against off-resonance fraction");
    scan_cmd->add_option("theta_deg", o.theta_deg)->required();
    scan_cmd->add_option("phi_deg", o.phi_deg)->required();
    scan_cmd->add_option("f_star", o.f_star)->required();
    scan_cmd->add_option("f_min", o.f_min)->required();
    scan_cmd->add_option("f_max", o.f_max)->required();
    scan_cmd->add_option("n", o.n_points)->required();
    scan_cmd->add_option("-o,--out", o.out_path, "Scan file (default scan.csv)");

    auto* traj = app.add_subcommand("trajectory", "Bloch trajectory and grapefruit plots");
    traj->add_option("mode", o.mode, "simple or rotten")->required();
    traj->add_option("theta_deg", o.theta_deg)->required();
    traj->add_option("phi_deg", o.phi_deg)->required();
    traj->add_option("f_star", o.f_star, "Tailoring offset ('-' for simple mode)")->required();
    traj->add_option("f_eval", o.f_eval, "Offset at which the pulses act")->required();
    traj->add_option("initial", o.initial, "Ix, Iy or Iz")->required();
    traj->add_option("-o,--out-prefix", o.out_prefix, "Prefix for .csv and _{xy,xz,yz}.svg outputs");
    traj->add_option("--samples", o.samples, "Steps per pulse");

    auto* spectrum = app.add_subcommand("spectrum", "Two-line excitation spectrum");
    spectrum->add_option("mode", o.mode, "simple or rotten")->required();
    spectrum->add_option("config", o.config_path, "Spin-system JSON (default: glycine-like two-line system)");
    spectrum->add_option("-o,--out", o.spectrum_out, "Spectrum file");
    spectrum->add_option("--theta", o.theta_spectrum_deg, "Excitation angle (degrees)");

    auto* verify_cmd = app.add_subcommand("verify", "Check a sequence file");
    verify_cmd->add_option("sequence", o.sequence_path)->required();
    verify_cmd->add_flag("--numeric", o.numeric, "Cross-check with the numerical solver");
    verify_cmd->add_option("--seed", o.seed);
    verify_cmd->add_option("--budget", o.budget, "Objective evaluations for --numeric");

    // CLI11 reads "-sqrt3" and "-.5" as short flags; rewrite them to forms it
    // accepts as positionals.
    std::vector<std::string> argv_store{"rotten"};
    for (const auto& a : args) {
        if (a == "-sqrt3")
            argv_store.push_back(kNegSqrt3Token);
        else if (a.size() > 2 && a[0] == '-' && a[1] == '.')
            argv_store.push_back("-0" + a.substr(1));
        else
            argv_store.push_back(a);
    }
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const std::string header = "invocation: " + detail::join_invocation(args);
    try {
        if (*synth) return cmd_synth(o, header, out);
        if (*scan_cmd) return cmd_scan(o, header, out);
        if (*traj) return cmd_trajectory(o, header, out);
        if (*spectrum) return cmd_spectrum(o, header, out, err);
        if (*verify_cmd) return cmd_verify(o, out);
    } catch (const OffsetOutOfRange& e) {
        err << "error: " << e.what() << " (tailoring requires |f| <= sqrt(3))\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NormalizationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace rotten::cli
