#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qdburst/errors.hpp"
#include "qdburst/rational.hpp"

namespace qdburst {

// Upper bounds eps[k] >= P(B > grid[k] * quantum) on an ascending integer
// grid of burst values counted in quanta. T is double or Rational.
template <class T>
struct BasicTailCurve {
    std::vector<std::int64_t> grid;
    std::vector<T> eps;

    std::size_t size() const { return grid.size(); }
};

using TailBoundCurve = BasicTailCurve<double>;
using ExactTailCurve = BasicTailCurve<Rational>;

// CDF lower bound of a burst measured in quanta: psi_cum[b] <= P(ceil(B) <= b)
// and psi_mass its increments, on b = 0..size-1.
template <class T>
struct BasicCdfLowerBound {
    std::vector<T> psi_mass;
    std::vector<T> psi_cum;
};

using CdfLowerBound = BasicCdfLowerBound<double>;
using ExactCdfLowerBound = BasicCdfLowerBound<Rational>;

template <class T>
T clamp_probability(const T& value) {
    if (value < T(0)) return T(0);
    if (value > T(1)) return T(1);
    return value;
}

// Running minimum from the left, clamped to [0,1]. Idempotent; never
// increases an entry.
template <class T>
BasicTailCurve<T> monotone_envelope(BasicTailCurve<T> curve) {
    if (curve.grid.size() != curve.eps.size()) fail(ErrorKind::InvalidArg, "grid and eps lengths differ");
    for (std::size_t k = 0; k < curve.eps.size(); ++k) {
        curve.eps[k] = clamp_probability(curve.eps[k]);
        if (k > 0 && curve.eps[k - 1] < curve.eps[k]) curve.eps[k] = curve.eps[k - 1];
    }
    return curve;
}

template <class T>
bool is_wide_sense_decreasing(const BasicTailCurve<T>& curve) {
    for (std::size_t k = 1; k < curve.eps.size(); ++k) {
        if (curve.eps[k - 1] < curve.eps[k]) return false;
    }
    return true;
}

// True when grid is exactly 0, 1, ..., size-1.
template <class T>
bool has_unit_grid(const BasicTailCurve<T>& curve) {
    for (std::size_t k = 0; k < curve.grid.size(); ++k) {
        if (curve.grid[k] != static_cast<std::int64_t>(k)) return false;
    }
    return !curve.grid.empty();
}

template <class T>
BasicTailCurve<T> unit_grid_curve(std::vector<T> eps) {
    BasicTailCurve<T> curve;
    curve.grid.resize(eps.size());
    for (std::size_t k = 0; k < eps.size(); ++k) curve.grid[k] = static_cast<std::int64_t>(k);
    curve.eps = std::move(eps);
    return curve;
}

// Psi(b) = 1 - eps(b), psi(0) = Psi(0), psi(b) = eps(b-1) - eps(b).
// Requires a unit grid and a wide-sense decreasing curve.
template <class T>
BasicCdfLowerBound<T> cdf_from_tail(const BasicTailCurve<T>& curve) {
    if (!has_unit_grid(curve)) fail(ErrorKind::InvalidArg, "cdf_from_tail needs a grid 0..N");
    if (!is_wide_sense_decreasing(curve)) fail(ErrorKind::InvalidArg, "cdf_from_tail needs a decreasing curve");
    BasicCdfLowerBound<T> cdf;
    const std::size_t n = curve.eps.size();
    cdf.psi_mass.resize(n);
    cdf.psi_cum.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
        cdf.psi_cum[b] = T(1) - curve.eps[b];
        cdf.psi_mass[b] = (b == 0) ? cdf.psi_cum[0] : T(curve.eps[b - 1] - curve.eps[b]);
    }
    return cdf;
}

inline TailBoundCurve to_double_curve(const ExactTailCurve& exact) {
    TailBoundCurve out;
    out.grid = exact.grid;
    out.eps.reserve(exact.eps.size());
    for (const auto& e : exact.eps) out.eps.push_back(to_double(e));
    return out;
}

}  // namespace qdburst
