#include "qdburst/scenario.hpp"

#include <algorithm>

#include "qdburst/errors.hpp"

namespace qdburst {

namespace {

Rational rational_field(const nlohmann::json& node, const char* key) {
    if (!node.contains(key)) fail(ErrorKind::InvalidSpec, std::string("missing field '") + key + "'");
    const auto& value = node.at(key);
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return make_rational(value.get<std::int64_t>());
    fail(ErrorKind::InvalidSpec, std::string("field '") + key + "' must be an integer or a \"num/den\" string");
}

}  // namespace

std::int64_t Scenario::flow_count() const {
    std::int64_t total = 0;
    for (const auto& g : groups_) total += g.count;
    return total;
}

Rational Scenario::max_packet_size() const {
    Rational best = groups_.front().packet_size;
    for (const auto& g : groups_) best = std::max(best, g.packet_size);
    return best;
}

std::int64_t Scenario::total_burst_quanta() const {
    return to_int64(ceil_of(total_burst_ / quantum_));
}

Rational default_quantum(const std::vector<FlowGroupSpec>& groups) {
    std::vector<Rational> sizes;
    sizes.reserve(groups.size());
    for (const auto& g : groups) sizes.push_back(g.packet_size);
    return rational_gcd(sizes);
}

Scenario validate_scenario(const ScenarioSpec& spec) {
    if (spec.groups.empty()) fail(ErrorKind::InvalidSpec, "scenario has no flow groups");
    for (std::size_t i = 0; i < spec.groups.size(); ++i) {
        const auto& g = spec.groups[i];
        const std::string where = "group " + std::to_string(i) + ": ";
        if (g.count < 1) fail(ErrorKind::InvalidSpec, where + "count must be >= 1");
        if (sgn(g.period) <= 0) fail(ErrorKind::InvalidSpec, where + "period must be > 0");
        if (sgn(g.packet_size) <= 0) fail(ErrorKind::InvalidSpec, where + "packet_size must be > 0");
    }

    Scenario out;
    out.groups_ = spec.groups;
    out.mode_ = spec.mode;
    out.quantum_ = spec.quantum.value_or(default_quantum(spec.groups));
    if (sgn(out.quantum_) <= 0) fail(ErrorKind::InvalidSpec, "quantum must be > 0");

    if (out.mode_ == QuantizationMode::Strict) {
        for (const auto& g : spec.groups) {
            const Rational ratio = g.packet_size / out.quantum_;
            if (ratio.get_den() != 1) {
                fail(ErrorKind::InvalidSpec, "packet size " + format_rational(g.packet_size) +
                                                 " is not a multiple of quantum " + format_rational(out.quantum_));
            }
        }
    }

    out.total_rate_ = 0;
    out.total_burst_ = 0;
    for (const auto& g : spec.groups) {
        out.total_rate_ += g.rate();
        out.total_burst_ += g.burst();
    }
    return out;
}

ScenarioSpec scenario_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) fail(ErrorKind::InvalidSpec, "scenario must be a JSON object");
    if (!doc.contains("groups") || !doc.at("groups").is_array()) {
        fail(ErrorKind::InvalidSpec, "scenario needs a 'groups' array");
    }
    ScenarioSpec spec;
    for (const auto& node : doc.at("groups")) {
        if (!node.is_object()) fail(ErrorKind::InvalidSpec, "group entries must be objects");
        if (!node.contains("count") || !node.at("count").is_number_integer()) {
            fail(ErrorKind::InvalidSpec, "group 'count' must be an integer");
        }
        FlowGroupSpec g;
        g.count = node.at("count").get<std::int64_t>();
        g.period = rational_field(node, "period");
        g.packet_size = rational_field(node, "packet_size");
        spec.groups.push_back(std::move(g));
    }
    if (doc.contains("quantum")) spec.quantum = rational_field(doc, "quantum");
    if (doc.contains("quantization")) {
        const auto mode = doc.at("quantization").get<std::string>();
        if (mode == "strict") {
            spec.mode = QuantizationMode::Strict;
        } else if (mode == "ceil") {
            spec.mode = QuantizationMode::Ceil;
        } else {
            fail(ErrorKind::InvalidSpec, "quantization must be 'strict' or 'ceil'");
        }
    }
    return spec;
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : scenario.groups()) {
        groups.push_back({{"count", g.count},
                          {"period", format_rational(g.period)},
                          {"packet_size", format_rational(g.packet_size)}});
    }
    return {{"groups", groups},
            {"quantum", format_rational(scenario.quantum())},
            {"quantization", scenario.mode() == QuantizationMode::Strict ? "strict" : "ceil"}};
}

Scenario unit_homogeneous_scenario(std::int64_t flows) {
    ScenarioSpec spec;
    spec.groups.push_back({flows, Rational(1), Rational(1)});
    spec.quantum = Rational(1);
    return validate_scenario(spec);
}

}  // namespace qdburst
