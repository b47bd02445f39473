#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qdburst/rational.hpp"

namespace qdburst {

// A homogeneous group of periodic flows: `count` flows, each emitting one
// packet of `packet_size` bits every `period` seconds.
struct FlowGroupSpec {
    std::int64_t count = 0;
    Rational period;
    Rational packet_size;

    Rational rate() const { return Rational(count) * packet_size / period; }
    Rational burst() const { return Rational(count) * packet_size; }
};

// How packet sizes that are not integer multiples of the quantum are handled.
enum class QuantizationMode {
    Strict,  // reject
    Ceil,    // round the group's burst extent up to the next quantum
};

// Scenario as read from a config file, before validation.
struct ScenarioSpec {
    std::vector<FlowGroupSpec> groups;
    std::optional<Rational> quantum;
    QuantizationMode mode = QuantizationMode::Strict;
};

// Validated scenario with derived totals. Immutable.
class Scenario {
public:
    const std::vector<FlowGroupSpec>& groups() const { return groups_; }
    const Rational& quantum() const { return quantum_; }
    QuantizationMode mode() const { return mode_; }

    // r^tot and l^tot, exact.
    const Rational& total_rate() const { return total_rate_; }
    const Rational& total_burst() const { return total_burst_; }

    std::int64_t flow_count() const;
    Rational max_packet_size() const;
    // Deterministic bound l^tot expressed in quanta, rounded up.
    std::int64_t total_burst_quanta() const;

private:
    friend Scenario validate_scenario(const ScenarioSpec& spec);

    std::vector<FlowGroupSpec> groups_;
    Rational quantum_;
    QuantizationMode mode_ = QuantizationMode::Strict;
    Rational total_rate_;
    Rational total_burst_;
};

// Gcd of the packet sizes: the coarsest quantum every size is a multiple of.
Rational default_quantum(const std::vector<FlowGroupSpec>& groups);

// Throws Error(InvalidSpec) on an empty group list, non-positive fields, or a
// packet size that is not a multiple of the quantum in strict mode.
Scenario validate_scenario(const ScenarioSpec& spec);

// {"groups":[{"count":int,"period":"p/q","packet_size":"p/q"}...],"quantum":"p/q"}
// Rationals may be strings "num/den" or JSON integers. Optional extra key
// "quantization": "strict" | "ceil".
ScenarioSpec scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

// Convenience: `groups` identical flows with period and packet size 1.
Scenario unit_homogeneous_scenario(std::int64_t flows);

}  // namespace qdburst
