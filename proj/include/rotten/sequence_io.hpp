#pragma once

// Text format for composite sequences. Angles are stored in degrees:
//
//   {"target": {"theta_deg": 90, "phi_deg": 0}, "f_star": 1.732...,
//    "pulses": [{"theta_deg": 90, "phi_deg": 0}, ... x3]}
//
// Leading `//` comment lines (provenance headers) are accepted on input.

#include <array>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rotten/errors.hpp"
#include "rotten/pulse.hpp"
#include "rotten/rotor.hpp"

namespace rotten {

inline nlohmann::json to_json(const CompositeSequence& seq) {
    nlohmann::json doc;
    doc["target"] = {{"theta_deg", rad_to_deg(seq.target().theta)},
                     {"phi_deg", rad_to_deg(seq.target().phi)}};
    doc["f_star"] = seq.f_star();
    doc["pulses"] = nlohmann::json::array();
    for (const Pulse& p : seq.pulses())
        doc["pulses"].push_back({{"theta_deg", rad_to_deg(p.theta())}, {"phi_deg", rad_to_deg(p.phi())}});
    return doc;
}

namespace detail {

inline double number_field(const nlohmann::json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw FormatError(where + ": missing field '" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw FormatError(where + "." + key + ": expected a number");
    return v.get<double>();
}

}  // namespace detail

inline CompositeSequence sequence_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw FormatError("sequence document must be an object");
    if (!doc.contains("target")) throw FormatError("missing field 'target'");
    const auto& t = doc.at("target");
    TargetRotation target{deg_to_rad(detail::number_field(t, "theta_deg", "target")),
                          deg_to_rad(detail::number_field(t, "phi_deg", "target"))};
    const double f_star = detail::number_field(doc, "f_star", "sequence");
    if (!doc.contains("pulses") || !doc.at("pulses").is_array())
        throw FormatError("missing array field 'pulses'");
    const auto& ps = doc.at("pulses");
    if (ps.size() != 3)
        throw FormatError("pulses: expected exactly 3 entries, got " + std::to_string(ps.size()));
    std::array<Pulse, 3> pulses;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::string where = "pulses[" + std::to_string(i) + "]";
        pulses[i] = Pulse{deg_to_rad(detail::number_field(ps[i], "theta_deg", where)),
                          deg_to_rad(detail::number_field(ps[i], "phi_deg", where))};
    }
    try {
        return CompositeSequence{pulses, f_star, target};
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

inline nlohmann::json parse_commented_json(std::istream& in) {
    try {
        return nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string{"malformed document: "} + e.what());
    }
}

inline CompositeSequence read_sequence(std::istream& in) { return sequence_from_json(parse_commented_json(in)); }

inline CompositeSequence read_sequence_file(const std::string& path) {
    std::ifstream in{path};
    if (!in) throw FormatError("cannot open sequence file '" + path + "'");
    return read_sequence(in);
}

/// Writes `header` lines as `//` comments followed by the JSON body.
inline void write_sequence(std::ostream& out, const CompositeSequence& seq, const std::string& header = {}) {
    std::istringstream lines{header};
    for (std::string line; std::getline(lines, line);) out << "// " << line << '\n';
    out << to_json(seq).dump(2) << '\n';
}

}  // namespace rotten
