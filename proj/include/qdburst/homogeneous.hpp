#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qdburst/rational.hpp"

namespace qdburst {

// Lower thresholds u_1..u_{n-1} (stored at index k-1) on the order
// statistics of n-1 iid uniforms. Wide-sense increasing, each in [0,1].
struct OrderStatThresholds {
    std::vector<Rational> u;

    std::size_t order() const { return u.size(); }  // n - 1
};

// Coefficients q_0..q_m of the m-th nested integral, q[j] multiplying y^j.
struct PolynomialCoeffs {
    std::vector<Rational> q;
};

using StageObserver = std::function<void(std::size_t stage, const PolynomialCoeffs&)>;

// u_k = [(k+1) - b/l]^+ / n for k = 1..n-1.
OrderStatThresholds homogeneous_thresholds(std::int64_t n, const Rational& packet_size, const Rational& burst);

// u_k = [l_1 + ... + l_{k+1} - b]^+ / l^tot for k = 1..n-1, sizes descending.
OrderStatThresholds same_period_thresholds(std::span<const Rational> sizes, const Rational& burst);

// P(U_(k) >= u_k for every k), i.e. (n-1)! times the nested integral
//   int_{u_{n-1}}^1 int_{u_{n-2}}^{y_{n-1}} ... int_{u_1}^{y_2} dy_1 ... dy_{n-1},
// evaluated exactly by integrating one polynomial per stage, inner to outer.
// Stages 1..start_stage must have zero thresholds; they collapse to the
// monomial y^start_stage. The observer, if set, sees every computed stage.
//
// Runs in integers: with D the common denominator of the thresholds, the
// stage-m polynomial scaled to z = D y has integer coefficients
// t_j = q_j D^(m-j), so every division is exact and no gcd is ever taken.
Rational order_statistic_survival(const OrderStatThresholds& thresholds, std::size_t start_stage,
                                  const StageObserver& observer = {});

// Same quantity with the recurrence carried out directly on rational
// coefficients q_j. Slower; kept as a cross-check of the integer form.
Rational order_statistic_survival_rational(const OrderStatThresholds& thresholds, std::size_t start_stage,
                                           const StageObserver& observer = {});

// Closed-form DKW bound n exp(-2(n-1)(floor(b/l)/(n-1) - 1/n)^2), clamped
// to [0,1]; 0 once b >= n l. n = 1 gives the deterministic step at b = l.
double dkw_tail_bound(std::int64_t n, const Rational& packet_size, const Rational& burst);

// True when the DKW expression is >= 1 before clamping, i.e. floor(b/l)
// is below 1 - 1/n + sqrt((n-1) ln 2 / 2).
bool dkw_bound_is_trivial(std::int64_t n, const Rational& packet_size, const Rational& burst);

// l * ceil(1 - 1/n + sqrt((n-1)(ln n - ln eps)/2)); eps in (0,1).
Rational quasi_det_burst(std::int64_t n, const Rational& packet_size, double eps);

// n (1 - p(n,l,b)) with p from order_statistic_survival; exact, clamped to
// [0,1]. 0 once b >= n l.
Rational exact_tail_bound(std::int64_t n, const Rational& packet_size, const Rational& burst);

// Smallest multiple of l whose exact_tail_bound is <= eps.
Rational exact_quasi_det_burst(std::int64_t n, const Rational& packet_size, double eps);

// Flows sharing one period with packet sizes l_1 >= ... >= l_n.
//
// eta = min { k/(n-1) - (l_1+...+l_{k+1})/l^tot : 1 <= k <= n-1, l_1+...+l_{k+1} > b }.
// Throws EmptyIndexSet when no k qualifies (b >= l^tot), InvalidArg on
// unsorted or non-positive sizes.
Rational same_period_eta(std::span<const Rational> sizes, const Rational& burst);

// n exp(-2(n-1)(eta + b/l^tot)^2), clamped; 1 while eta + b/l^tot < 0 and 0
// once b >= l^tot.
double same_period_dkw(std::span<const Rational> sizes, const Rational& burst);

// Smallest packet-boundary burst (a prefix sum l_1+...+l_j, capped at l^tot)
// whose same_period_dkw is <= eps. With equal sizes this is the closed form
// of quasi_det_burst, capped at l^tot.
Rational same_period_burst(std::span<const Rational> sizes, double eps);

// n (1 - p) with p from order_statistic_survival on same_period_thresholds;
// 0 once b >= l^tot.
Rational same_period_exact(std::span<const Rational> sizes, const Rational& burst);

struct EventEstimate {
    double probability = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

// Monte Carlo estimate of P(exists k: U_(k) < u_k) from sorted iid uniforms.
EventEstimate event_probability_monte_carlo(const OrderStatThresholds& thresholds, std::uint64_t samples,
                                            std::uint64_t seed);

// The same probability by nested Gauss-Legendre quadrature of the joint
// order-statistic density; limited to n - 1 <= 5 thresholds.
double event_probability_quadrature(const OrderStatThresholds& thresholds);

}  // namespace qdburst
