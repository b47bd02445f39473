#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "qdburst/curve.hpp"
#include "qdburst/errors.hpp"
#include "qdburst/scenario.hpp"

namespace qdburst {

enum class BoundMethod {
    Dkw,    // closed form, floating point
    Exact,  // order-statistic integral, exact rationals
};

// Per-group tail bound on the quantum grid 0..ceil(n l / quantum) together
// with the CDF lower bound derived from it.
template <class T>
struct BasicGroupBound {
    FlowGroupSpec group;
    Rational quantum;
    BasicTailCurve<T> curve;
    BasicCdfLowerBound<T> cdf;
};

using GroupBound = BasicGroupBound<double>;
using ExactGroupBound = BasicGroupBound<Rational>;

// Evaluates the chosen homogeneous bound at b = k * quantum for every grid
// index k, then applies monotone_envelope. Exact results are rounded to
// double here; use build_exact_group_bound to keep them exact.
GroupBound build_group_bound(const FlowGroupSpec& group, const Rational& quantum, BoundMethod method);
ExactGroupBound build_exact_group_bound(const FlowGroupSpec& group, const Rational& quantum);

// Wraps an arbitrary curve (envelope applied, forced to 0 past the group's
// deterministic bound).
template <class T>
BasicGroupBound<T> group_bound_from_curve(const FlowGroupSpec& group, const Rational& quantum,
                                          BasicTailCurve<T> curve) {
    if (!has_unit_grid(curve)) fail(ErrorKind::InvalidArg, "group curves need the grid 0..N");
    const Rational extent = group.burst() / quantum;
    for (std::size_t k = 0; k < curve.size(); ++k) {
        if (Rational(curve.grid[k]) >= extent) curve.eps[k] = T(0);
    }
    if (curve.eps.back() != T(0)) fail(ErrorKind::InvalidArg, "group curve must reach zero at its deterministic bound");
    BasicGroupBound<T> out{group, quantum, monotone_envelope(std::move(curve)), {}};
    out.cdf = cdf_from_tail(out.curve);
    return out;
}

namespace detail {

template <class T>
void check_same_quantum(std::span<const BasicGroupBound<T>> bounds) {
    if (bounds.empty()) fail(ErrorKind::InvalidArg, "nothing to combine");
    for (const auto& b : bounds) {
        if (b.quantum != bounds.front().quantum) fail(ErrorKind::QuantumMismatch, "group bounds use different quanta");
    }
}

template <class T>
Rational total_burst_quanta(std::span<const BasicGroupBound<T>> bounds) {
    Rational total = 0;
    for (const auto& b : bounds) total += b.group.burst();
    return total / bounds.front().quantum;
}

// Combined grid 0..sum of group extents, zeroed from l^tot on.
template <class T>
BasicTailCurve<T> finish_combined(std::vector<T> eps, const Rational& deterministic_quanta) {
    for (std::size_t k = 0; k < eps.size(); ++k) {
        if (Rational(static_cast<long>(k)) >= deterministic_quanta) eps[k] = T(0);
    }
    return monotone_envelope(unit_grid_curve(std::move(eps)));
}

}  // namespace detail

// eps(b) = 1 - (psi_1 * ... * psi_{g-1} * Psi_g)(b) for independent groups.
// Groups are folded in a canonical order so the result does not depend on
// the order of `bounds`, bit for bit.
template <class T>
BasicTailCurve<T> convolve_groups(std::span<const BasicGroupBound<T>> bounds) {
    detail::check_same_quantum(bounds);
    if (bounds.size() == 1) return bounds.front().curve;

    std::vector<const BasicGroupBound<T>*> order;
    for (const auto& b : bounds) order.push_back(&b);
    std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
        if (a->cdf.psi_mass.size() != b->cdf.psi_mass.size()) return a->cdf.psi_mass.size() < b->cdf.psi_mass.size();
        return std::lexicographical_compare(a->cdf.psi_mass.begin(), a->cdf.psi_mass.end(), b->cdf.psi_mass.begin(),
                                            b->cdf.psi_mass.end());
    });

    // Full pmf convolution of the psi_i; cumulating it gives
    // psi_1 * ... * psi_{g-1} * Psi_g on the whole support.
    std::vector<T> mass = order.front()->cdf.psi_mass;
    for (std::size_t i = 1; i < order.size(); ++i) {
        const auto& next = order[i]->cdf.psi_mass;
        std::vector<T> out(mass.size() + next.size() - 1, T(0));
        for (std::size_t a = 0; a < mass.size(); ++a) {
            if (mass[a] == T(0)) continue;
            for (std::size_t c = 0; c < next.size(); ++c) out[a + c] += mass[a] * next[c];
        }
        mass = std::move(out);
    }

    // Each psi_i sums to one, so 1 - Psi(b) is the mass above b. Summing that
    // mass from the top keeps deep tails accurate in floating point.
    std::vector<T> eps(mass.size());
    T above(0);
    for (std::size_t b = mass.size(); b-- > 0;) {
        eps[b] = above;
        above += mass[b];
    }
    return detail::finish_combined(std::move(eps), detail::total_burst_quanta(bounds));
}

// eps(b) = min over b_1 + ... + b_g = b of sum_i eps_i(b_i), as a left fold
// of discrete min-plus convolutions. Each eps_i ends at 0, so splits that
// run past a grid end never beat the ones kept in range.
template <class T>
BasicTailCurve<T> union_bound_combine(std::span<const BasicGroupBound<T>> bounds) {
    detail::check_same_quantum(bounds);
    if (bounds.size() == 1) return bounds.front().curve;

    std::vector<T> acc = bounds.front().curve.eps;
    for (std::size_t i = 1; i < bounds.size(); ++i) {
        const auto& next = bounds[i].curve.eps;
        const std::size_t len = acc.size() + next.size() - 1;
        std::vector<T> out(len);
        for (std::size_t b = 0; b < len; ++b) {
            bool set = false;
            T best(0);
            const std::size_t lo = b >= next.size() ? b - next.size() + 1 : 0;
            const std::size_t hi = std::min(b, acc.size() - 1);
            for (std::size_t a = lo; a <= hi; ++a) {
                T candidate = acc[a] + next[b - a];
                if (!set || candidate < best) {
                    best = candidate;
                    set = true;
                }
            }
            out[b] = best;
        }
        for (auto& v : out) v = clamp_probability(v);
        acc = std::move(out);
    }
    return detail::finish_combined(std::move(acc), detail::total_burst_quanta(bounds));
}

}  // namespace qdburst
