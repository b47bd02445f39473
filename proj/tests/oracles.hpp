#pragma once

// Test-only reference computations. Each one follows the defining formula
// directly and shares no code path with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "qdburst/curve.hpp"
#include "qdburst/scenario.hpp"
#include "qdburst/simulator.hpp"

namespace oracle {

using qdburst::Rational;

struct Event {
    double time;
    double bits;
};

inline double hyperperiod(const qdburst::Scenario& s) {
    std::vector<Rational> periods;
    for (const auto& g : s.groups()) periods.push_back(g.period);
    return qdburst::rational_lcm(periods).get_d();
}

// Arrivals in [0, horizon), equal times merged.
inline std::vector<Event> arrivals(const qdburst::Scenario& s, const qdburst::PhaseSample& phases, double horizon) {
    std::map<double, double> merged;
    std::size_t f = 0;
    for (const auto& g : s.groups()) {
        const double period = g.period.get_d();
        for (std::int64_t i = 0; i < g.count; ++i, ++f) {
            for (double t = phases.phases[f]; t < horizon; t += period) merged[t] += g.packet_size.get_d();
        }
    }
    std::vector<Event> out;
    for (const auto& [t, b] : merged) out.push_back({t, b});
    return out;
}

// sup over pairs T_i in [0, HP), T_i <= T_j < T_i + HP of
// bits(i..j) - r (T_j - T_i).
inline double pairwise_burstiness(const qdburst::Scenario& s, const qdburst::PhaseSample& phases) {
    const double hp = hyperperiod(s);
    const double rate = s.total_rate().get_d();
    const auto ev = arrivals(s, phases, 2.0 * hp);
    double best = 0.0;
    for (std::size_t i = 0; i < ev.size() && ev[i].time < hp; ++i) {
        double bits = 0.0;
        for (std::size_t j = i; j < ev.size() && ev[j].time < ev[i].time + hp; ++j) {
            bits += ev[j].bits;
            best = std::max(best, bits - rate * (ev[j].time - ev[i].time));
        }
    }
    return best;
}

// max over grid points s <= t in [0, 3 HP) of A[s,t) - r (t - s), with
// step HP / steps_per_hp. Grid rounding of both window ends costs at most
// 2 r step.
inline double dense_grid_burstiness(const qdburst::Scenario& s, const qdburst::PhaseSample& phases,
                                    int steps_per_hp = 10000) {
    const double hp = hyperperiod(s);
    const double rate = s.total_rate().get_d();
    const auto ev = arrivals(s, phases, 3.0 * hp);
    const double step = hp / steps_per_hp;
    const int points = 3 * steps_per_hp;
    // cumulative[k] = A[0, k step)
    std::vector<double> cumulative(points + 1, 0.0);
    std::size_t e = 0;
    double running = 0.0;
    for (int k = 0; k <= points; ++k) {
        const double t = k * step;
        while (e < ev.size() && ev[e].time < t) running += ev[e++].bits;
        cumulative[k] = running;
    }
    double best = 0.0;
    double min_prefix = 0.0;  // min over s <= t of A[0,s) - r s
    for (int k = 0; k <= points; ++k) {
        const double t = k * step;
        min_prefix = std::min(min_prefix, cumulative[k] - rate * t);
        best = std::max(best, cumulative[k] - rate * t - min_prefix);
    }
    return best;
}

// Psi(b) = sum over i + j <= b of psi_1(i) psi_2(j).
template <class T>
std::vector<T> two_group_cdf(const std::vector<T>& mass1, const std::vector<T>& mass2) {
    std::vector<T> out(mass1.size() + mass2.size() - 1, T(0));
    for (std::size_t b = 0; b < out.size(); ++b) {
        for (std::size_t i = 0; i < mass1.size(); ++i) {
            for (std::size_t j = 0; j < mass2.size(); ++j) {
                if (i + j <= b) out[b] += mass1[i] * mass2[j];
            }
        }
    }
    return out;
}

// min over all splits b_1 + ... + b_g = b of sum eps_i(b_i), eps_i = 0 past
// its end, by exhaustive enumeration.
template <class T>
T union_by_enumeration(const std::vector<std::vector<T>>& curves, std::size_t b) {
    T best(0);
    bool set = false;
    std::vector<std::size_t> split(curves.size(), 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t idx, std::size_t left) {
        if (idx + 1 == curves.size()) {
            split[idx] = left;
            T sum(0);
            for (std::size_t i = 0; i < curves.size(); ++i) {
                if (split[i] < curves[i].size()) sum += curves[i][split[i]];
            }
            if (!set || sum < best) {
                best = sum;
                set = true;
            }
            return;
        }
        for (std::size_t v = 0; v <= left; ++v) {
            split[idx] = v;
            rec(idx + 1, left - v);
        }
    };
    rec(0, b);
    return qdburst::clamp_probability(best);
}

}  // namespace oracle
