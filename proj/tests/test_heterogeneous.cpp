#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qdburst/errors.hpp"
#include "qdburst/heterogeneous.hpp"
#include "qdburst/homogeneous.hpp"

using namespace qdburst;

namespace {

FlowGroupSpec unit_group(std::int64_t count, std::int64_t size = 1) { return {count, Rational(1), Rational(size)}; }

// Deterministic step: eps = 1 below `size`, 0 from it.
template <class T>
BasicGroupBound<T> step_group(std::int64_t size) {
    std::vector<T> eps(static_cast<std::size_t>(size + 1), T(1));
    eps.back() = T(0);
    return group_bound_from_curve(unit_group(1, size), Rational(1), unit_grid_curve(std::move(eps)));
}

// Random decreasing exact curve ending at zero.
ExactGroupBound random_exact_group(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> length(1, 6);
    std::uniform_int_distribution<int> cut(0, 12);
    const int size = length(rng);
    std::vector<Rational> eps;
    Rational level = 1;
    for (int k = 0; k < size; ++k) {
        eps.push_back(level);
        level = level * cut(rng) / 12;
    }
    eps.push_back(0);
    return group_bound_from_curve(unit_group(1, size), Rational(1), unit_grid_curve(std::move(eps)));
}

}  // namespace

TEST_CASE("build_group_bound examples") {
    SUBCASE("single deterministic flow") {
        const auto g = build_group_bound(unit_group(1), Rational(1), BoundMethod::Dkw);
        CHECK(g.curve.eps == std::vector<double>{1.0, 0.0});
        CHECK(g.cdf.psi_cum == std::vector<double>{0.0, 1.0});
    }
    SUBCASE("250 flows, dkw pointwise after envelope") {
        const auto g = build_group_bound(unit_group(250), Rational(1), BoundMethod::Dkw);
        REQUIRE(g.curve.size() == 251);
        std::vector<double> raw;
        for (int b = 0; b <= 250; ++b) raw.push_back(dkw_tail_bound(250, 1, b));
        CHECK(g.curve.eps == monotone_envelope(unit_grid_curve(raw)).eps);
        CHECK(g.curve.eps.back() == 0.0);
    }
    SUBCASE("two flows, exact, b = 1") {
        const auto g = build_exact_group_bound(unit_group(2), Rational(1));
        CHECK(g.curve.eps[1] == 1);  // min(1, 2 u_1) with u_1 = 1/2
        CHECK(g.curve.eps[2] == 0);
    }
    SUBCASE("finer quantum lengthens the grid") {
        const auto g = build_group_bound(unit_group(4, 2), Rational(1, 2), BoundMethod::Exact);
        CHECK(g.curve.size() == 17);
        CHECK(g.cdf.psi_cum.back() == 1.0);
    }
}

TEST_CASE("cdf invariants of group bounds") {
    for (auto method : {BoundMethod::Dkw, BoundMethod::Exact}) {
        for (std::int64_t n : {1, 2, 7, 40}) {
            const auto g = build_group_bound(unit_group(n, 2), Rational(1), method);
            double sum = 0.0;
            for (std::size_t b = 0; b < g.cdf.psi_mass.size(); ++b) {
                CHECK(g.cdf.psi_mass[b] >= 0.0);
                sum += g.cdf.psi_mass[b];
                CHECK(g.cdf.psi_cum[b] == doctest::Approx(sum).epsilon(1e-12));
                if (b > 0) CHECK(g.cdf.psi_cum[b] >= g.cdf.psi_cum[b - 1]);
            }
        }
    }
}

TEST_CASE("convolve_groups examples") {
    SUBCASE("single group is the identity") {
        const std::vector<GroupBound> one{build_group_bound(unit_group(30), Rational(1), BoundMethod::Dkw)};
        CHECK(convolve_groups<double>(one).eps == one.front().curve.eps);
    }
    SUBCASE("deterministic bursts add") {
        const std::vector<GroupBound> steps{step_group<double>(1), step_group<double>(1)};
        CHECK(convolve_groups<double>(steps).eps == std::vector<double>{1.0, 1.0, 0.0});
        CHECK(union_bound_combine<double>(steps).eps == std::vector<double>{1.0, 1.0, 0.0});
    }
    SUBCASE("two groups of 500 flows: convolution below union") {
        const auto g = build_group_bound(unit_group(500), Rational(1), BoundMethod::Dkw);
        const std::vector<GroupBound> pair{g, g};
        const auto conv = convolve_groups<double>(pair);
        const auto uni = union_bound_combine<double>(pair);
        REQUIRE(conv.size() == uni.size());
        for (std::size_t b = 0; b < conv.size(); ++b) CHECK(conv.eps[b] <= uni.eps[b] + 1e-15);
        CHECK(conv.eps[1000] == 0.0);
    }
}

TEST_CASE("convolution matches the defining double sum") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<ExactGroupBound> pair{random_exact_group(rng), random_exact_group(rng)};
        const auto conv = convolve_groups<Rational>(pair);
        const auto cdf = oracle::two_group_cdf(pair[0].cdf.psi_mass, pair[1].cdf.psi_mass);
        REQUIRE(cdf.size() == conv.size());
        for (std::size_t b = 0; b < cdf.size(); ++b) CHECK(conv.eps[b] == 1 - cdf[b]);
    }
}

TEST_CASE("union bound matches exhaustive split enumeration") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<ExactGroupBound> bounds{random_exact_group(rng), random_exact_group(rng),
                                                  random_exact_group(rng)};
        const auto uni = union_bound_combine<Rational>(bounds);
        std::vector<std::vector<Rational>> curves;
        for (const auto& b : bounds) curves.push_back(b.curve.eps);
        for (std::size_t b = 0; b < uni.size(); ++b) CHECK(uni.eps[b] == oracle::union_by_enumeration(curves, b));
    }
}

TEST_CASE("exact combiners: dominance, order invariance, associativity, mass") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ExactGroupBound> bounds;
        const int g = 2 + trial % 3;
        for (int i = 0; i < g; ++i) bounds.push_back(random_exact_group(rng));

        const auto conv = convolve_groups<Rational>(bounds);
        const auto uni = union_bound_combine<Rational>(bounds);
        for (std::size_t b = 0; b < conv.size(); ++b) CHECK(conv.eps[b] <= uni.eps[b]);
        CHECK(conv.eps.back() == 0);

        auto shuffled = bounds;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(convolve_groups<Rational>(shuffled).eps == conv.eps);

        if (g == 3) {
            // ((1,2),3) versus (1,(2,3)) through explicit intermediate groups.
            auto wrap = [](const ExactTailCurve& c, std::int64_t size) {
                return group_bound_from_curve(unit_group(1, size), Rational(1), c);
            };
            const std::int64_t s01 = static_cast<std::int64_t>(bounds[0].curve.size() + bounds[1].curve.size()) - 2;
            const std::int64_t s12 = static_cast<std::int64_t>(bounds[1].curve.size() + bounds[2].curve.size()) - 2;
            const std::vector<ExactGroupBound> left_pair{bounds[0], bounds[1]};
            const std::vector<ExactGroupBound> right_pair{bounds[1], bounds[2]};
            const std::vector<ExactGroupBound> left{wrap(convolve_groups<Rational>(left_pair), s01), bounds[2]};
            const std::vector<ExactGroupBound> right{bounds[0], wrap(convolve_groups<Rational>(right_pair), s12)};
            CHECK(convolve_groups<Rational>(left).eps == convolve_groups<Rational>(right).eps);
        }
    }
}

TEST_CASE("float convolution is bit-identical under permutation") {
    std::vector<GroupBound> bounds;
    for (std::int64_t n : {3, 17, 8, 40}) bounds.push_back(build_group_bound(unit_group(n), Rational(1), BoundMethod::Dkw));
    const auto reference = convolve_groups<double>(bounds);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i) {
        std::shuffle(bounds.begin(), bounds.end(), rng);
        CHECK(convolve_groups<double>(bounds).eps == reference.eps);
    }
}

TEST_CASE("combined curve is zero from l^tot on and total mass is one") {
    const std::vector<GroupBound> bounds{build_group_bound(unit_group(4, 2), Rational(1), BoundMethod::Exact),
                                         build_group_bound(unit_group(3, 1), Rational(1), BoundMethod::Exact)};
    const auto conv = convolve_groups<double>(bounds);
    CHECK(conv.size() == 12);
    CHECK(conv.eps.back() == 0.0);
    const std::vector<ExactGroupBound> exact{build_exact_group_bound(unit_group(4, 2), Rational(1)),
                                             build_exact_group_bound(unit_group(3, 1), Rational(1))};
    const auto e = convolve_groups<Rational>(exact);
    CHECK(e.eps.back() == 0);
    CHECK(e.eps.front() <= 1);
}

TEST_CASE("quantum mismatch") {
    const std::vector<GroupBound> mixed{build_group_bound(unit_group(2), Rational(1), BoundMethod::Dkw),
                                        build_group_bound(unit_group(2), Rational(1, 2), BoundMethod::Dkw)};
    try {
        convolve_groups<double>(mixed);
        FAIL("expected QuantumMismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::QuantumMismatch);
    }
    CHECK_THROWS_AS(union_bound_combine<double>(mixed), Error);
}
