#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qdburst/errors.hpp"
#include "qdburst/homogeneous.hpp"
#include "qdburst/random.hpp"

namespace qdburst {

namespace {

constexpr std::size_t kNodes = 12;

struct GaussLegendre {
    std::array<double, kNodes> x{};
    std::array<double, kNodes> w{};

    GaussLegendre() {
        // Newton iteration on P_N from the Chebyshev initial guess.
        for (std::size_t i = 0; i < kNodes; ++i) {
            double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (kNodes + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = z;
                for (std::size_t k = 2; k <= kNodes; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = kNodes * (z * p1 - p0) / (z * z - 1.0);
                const double step = p1 / dp;
                z -= step;
                if (std::abs(step) < 1e-16) break;
            }
            x[i] = z;
            w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

const GaussLegendre& rule() {
    static const GaussLegendre instance;
    return instance;
}

// int_{u_level}^{upper} inner(level-1, y) dy, with inner(0, .) = 1.
double nested(const std::vector<double>& u, std::size_t level, double upper) {
    if (level == 0) return 1.0;
    const double lower = u[level - 1];
    if (upper <= lower) return 0.0;
    const auto& gl = rule();
    const double half = 0.5 * (upper - lower);
    const double mid = 0.5 * (upper + lower);
    double sum = 0.0;
    for (std::size_t i = 0; i < kNodes; ++i) {
        sum += gl.w[i] * nested(u, level - 1, mid + half * gl.x[i]);
    }
    return half * sum;
}

}  // namespace

EventEstimate event_probability_monte_carlo(const OrderStatThresholds& thresholds, std::uint64_t samples,
                                            std::uint64_t seed) {
    if (samples == 0) fail(ErrorKind::InvalidArg, "need at least one sample");
    const std::size_t order = thresholds.order();
    std::vector<double> u(order);
    for (std::size_t k = 0; k < order; ++k) u[k] = to_double(thresholds.u[k]);

    std::mt19937_64 rng(seed);
    std::vector<double> draws(order);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (auto& d : draws) d = uniform01(rng);
        std::sort(draws.begin(), draws.end());
        for (std::size_t k = 0; k < order; ++k) {
            if (draws[k] < u[k]) {
                ++hits;
                break;
            }
        }
    }
    EventEstimate out;
    out.samples = samples;
    out.probability = static_cast<double>(hits) / static_cast<double>(samples);
    out.standard_error = std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(samples));
    return out;
}

double event_probability_quadrature(const OrderStatThresholds& thresholds) {
    const std::size_t order = thresholds.order();
    if (order > 5) fail(ErrorKind::InvalidArg, "quadrature oracle supports at most 5 thresholds");
    std::vector<double> u(order);
    for (std::size_t k = 0; k < order; ++k) u[k] = to_double(thresholds.u[k]);
    double factorial = 1.0;
    for (std::size_t k = 2; k <= order; ++k) factorial *= static_cast<double>(k);
    const double survival = factorial * nested(u, order, 1.0);
    return std::clamp(1.0 - survival, 0.0, 1.0);
}

}  // namespace qdburst
