#include <doctest.h>

#include <random>

#include "qdburst/curve.hpp"
#include "qdburst/errors.hpp"
#include "qdburst/scenario.hpp"

using namespace qdburst;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Io;
}

ScenarioSpec single_group(std::int64_t count, const char* period, const char* size) {
    ScenarioSpec spec;
    spec.groups.push_back({count, parse_rational(period), parse_rational(size)});
    spec.quantum = Rational(1);
    return spec;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational(" -4 ") == Rational(-4));
    CHECK(format_rational(parse_rational("10/4")) == "5/2");
    CHECK(format_rational(Rational(7)) == "7");
    CHECK(kind_of([] { parse_rational("1/0"); }) == ErrorKind::InvalidSpec);
    CHECK(kind_of([] { parse_rational("1.5"); }) == ErrorKind::InvalidSpec);
    CHECK(kind_of([] { parse_rational(""); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("rational gcd and lcm") {
    const std::vector<Rational> values{Rational(3, 2), Rational(1), Rational(5, 4)};
    CHECK(rational_gcd(values) == Rational(1, 4));
    CHECK(rational_lcm(values) == Rational(15));
    CHECK(floor_of(Rational(-3, 2)) == -2);
    CHECK(ceil_of(Rational(3, 2)) == 2);
}

TEST_CASE("validate_scenario examples") {
    SUBCASE("single flow") {
        const auto s = validate_scenario(single_group(1, "1", "1"));
        CHECK(s.total_rate() == 1);
        CHECK(s.total_burst() == 1);
    }
    SUBCASE("250 unit flows") {
        const auto s = validate_scenario(single_group(250, "1", "1"));
        CHECK(s.total_rate() == 250);
        CHECK(s.total_burst() == 250);
        CHECK(s.total_burst_quanta() == 250);
    }
    SUBCASE("empty groups") {
        ScenarioSpec spec;
        spec.quantum = Rational(1);
        CHECK(kind_of([&] { validate_scenario(spec); }) == ErrorKind::InvalidSpec);
    }
    SUBCASE("non-positive fields") {
        CHECK(kind_of([] { validate_scenario(single_group(0, "1", "1")); }) == ErrorKind::InvalidSpec);
        CHECK(kind_of([] { validate_scenario(single_group(1, "0", "1")); }) == ErrorKind::InvalidSpec);
        CHECK(kind_of([] { validate_scenario(single_group(1, "1", "-2")); }) == ErrorKind::InvalidSpec);
    }
    SUBCASE("strict quantum mismatch, ceil accepted") {
        auto spec = single_group(2, "1", "3/2");
        CHECK(kind_of([&] { validate_scenario(spec); }) == ErrorKind::InvalidSpec);
        spec.mode = QuantizationMode::Ceil;
        const auto s = validate_scenario(spec);
        CHECK(s.total_burst_quanta() == 3);
    }
    SUBCASE("default quantum is the gcd of packet sizes") {
        ScenarioSpec spec;
        spec.groups.push_back({2, Rational(1), Rational(3, 2)});
        spec.groups.push_back({1, Rational(2), Rational(1)});
        const auto s = validate_scenario(spec);
        CHECK(s.quantum() == Rational(1, 2));
    }
}

TEST_CASE("totals are exact sums of group rates and bursts") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> small(1, 9);
    for (int trial = 0; trial < 200; ++trial) {
        ScenarioSpec spec;
        Rational rate = 0;
        Rational burst = 0;
        const int groups = small(rng) % 4 + 1;
        for (int g = 0; g < groups; ++g) {
            FlowGroupSpec group{small(rng), make_rational(small(rng), small(rng)), make_rational(small(rng), 3)};
            group.period.canonicalize();
            group.packet_size.canonicalize();
            rate += Rational(group.count) * group.packet_size / group.period;
            burst += Rational(group.count) * group.packet_size;
            spec.groups.push_back(group);
        }
        const auto s = validate_scenario(spec);
        CHECK(s.total_rate() == rate);
        CHECK(s.total_burst() == burst);
    }
}

TEST_CASE("scenario JSON") {
    const auto doc = nlohmann::json::parse(R"({"groups":[{"count":3,"period":"1/2","packet_size":2}],"quantum":"1"})");
    const auto s = validate_scenario(scenario_from_json(doc));
    CHECK(s.groups().front().period == Rational(1, 2));
    CHECK(s.total_rate() == 12);
    const auto again = validate_scenario(scenario_from_json(scenario_to_json(s)));
    CHECK(again.total_rate() == s.total_rate());
    CHECK(again.quantum() == s.quantum());

    CHECK(kind_of([] { scenario_from_json(nlohmann::json::parse(R"({"groups":[{"count":1}]})")); }) ==
          ErrorKind::InvalidSpec);
    CHECK(kind_of([] { scenario_from_json(nlohmann::json::parse(R"([1,2])")); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("monotone_envelope examples") {
    const auto out = monotone_envelope(unit_grid_curve<double>({1.2, 0.5, 0.6, 0.0}));
    CHECK(out.eps == std::vector<double>{1.0, 0.5, 0.5, 0.0});

    const auto decreasing = unit_grid_curve<double>({0.9, 0.4, 0.1, 0.0});
    CHECK(monotone_envelope(decreasing).eps == decreasing.eps);

    const auto zeros = unit_grid_curve<double>({0.0, 0.0, 0.0});
    CHECK(monotone_envelope(zeros).eps == zeros.eps);

    const auto exact = monotone_envelope(unit_grid_curve<Rational>({Rational(3, 2), Rational(1, 3), Rational(1, 2)}));
    CHECK(exact.eps == std::vector<Rational>{1, Rational(1, 3), Rational(1, 3)});
}

TEST_CASE("monotone_envelope is idempotent and never increases an entry") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> value(-0.5, 1.5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> eps(1 + trial % 40);
        for (auto& e : eps) e = value(rng);
        const auto curve = unit_grid_curve(eps);
        const auto once = monotone_envelope(curve);
        CHECK(is_wide_sense_decreasing(once));
        CHECK(monotone_envelope(once).eps == once.eps);
        for (std::size_t k = 0; k < eps.size(); ++k) {
            CHECK(once.eps[k] <= std::max(0.0, std::min(1.0, eps[k])));
            CHECK(once.eps[k] >= 0.0);
        }
    }
}

TEST_CASE("cdf_from_tail builds Psi and psi") {
    const auto cdf = cdf_from_tail(unit_grid_curve<Rational>({1, Rational(3, 4), Rational(1, 4), 0}));
    CHECK(cdf.psi_cum == std::vector<Rational>{0, Rational(1, 4), Rational(3, 4), 1});
    CHECK(cdf.psi_mass == std::vector<Rational>{0, Rational(1, 4), Rational(1, 2), Rational(1, 4)});
    CHECK(kind_of([] { cdf_from_tail(unit_grid_curve<double>({0.1, 0.5})); }) == ErrorKind::InvalidArg);
}
