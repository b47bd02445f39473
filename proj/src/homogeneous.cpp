#include "qdburst/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdburst/errors.hpp"

namespace qdburst {

namespace {

void check_homogeneous_args(std::int64_t n, const Rational& packet_size, const Rational& burst) {
    if (n < 1) fail(ErrorKind::InvalidArg, "flow count must be >= 1, got " + std::to_string(n));
    if (sgn(packet_size) <= 0) fail(ErrorKind::InvalidArg, "packet size must be > 0");
    if (sgn(burst) < 0) fail(ErrorKind::InvalidArg, "burst must be >= 0");
}

void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::InvalidArg, "violation probability must lie in (0,1)");
}

// A single periodic flow has burstiness exactly l.
Rational single_flow_tail(const Rational& packet_size, const Rational& burst) {
    return burst >= packet_size ? Rational(0) : Rational(1);
}

void check_start_stage(const OrderStatThresholds& thresholds, std::size_t start_stage) {
    for (std::size_t k = 0; k < thresholds.order(); ++k) {
        const auto& u = thresholds.u[k];
        if (sgn(u) < 0 || u > 1) fail(ErrorKind::InvalidArg, "thresholds must lie in [0,1]");
        if (k > 0 && u < thresholds.u[k - 1]) fail(ErrorKind::InvalidArg, "thresholds must be increasing");
        if (k < start_stage && sgn(u) != 0) {
            fail(ErrorKind::InvalidArg, "thresholds before the start stage must be zero");
        }
    }
}

Rational clamp_unit(const Rational& value) {
    if (sgn(value) < 0) return Rational(0);
    if (value > 1) return Rational(1);
    return value;
}

// n exp(-2(n-1) x^2) clamped to 1, with x supplied exactly so that every
// caller rounds the same rational to the same double.
double dkw_expression(std::int64_t n, const Rational& x) {
    const long double xd = to_double(x);
    const long double nd = static_cast<long double>(n);
    const long double value = nd * std::exp(-2.0L * (nd - 1.0L) * xd * xd);
    return static_cast<double>(std::min<long double>(1.0L, value));
}

struct PrefixSums {
    std::vector<Rational> sums;  // sums[j] = l_1 + ... + l_j
    const Rational& total() const { return sums.back(); }
};

PrefixSums checked_prefix_sums(std::span<const Rational> sizes) {
    if (sizes.size() < 2) fail(ErrorKind::InvalidArg, "need at least two flows");
    PrefixSums out;
    out.sums.reserve(sizes.size() + 1);
    out.sums.emplace_back(0);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sgn(sizes[i]) <= 0) fail(ErrorKind::InvalidArg, "packet sizes must be > 0");
        if (i > 0 && sizes[i] > sizes[i - 1]) fail(ErrorKind::InvalidArg, "packet sizes must be sorted descending");
        out.sums.push_back(out.sums.back() + sizes[i]);
    }
    return out;
}

}  // namespace

OrderStatThresholds homogeneous_thresholds(std::int64_t n, const Rational& packet_size, const Rational& burst) {
    check_homogeneous_args(n, packet_size, burst);
    const Rational ratio = burst / packet_size;
    OrderStatThresholds out;
    out.u.reserve(static_cast<std::size_t>(n - 1));
    for (std::int64_t k = 1; k < n; ++k) {
        Rational top = Rational(k + 1) - ratio;
        if (sgn(top) < 0) top = 0;
        out.u.emplace_back(top / n);
    }
    return out;
}

OrderStatThresholds same_period_thresholds(std::span<const Rational> sizes, const Rational& burst) {
    if (sgn(burst) < 0) fail(ErrorKind::InvalidArg, "burst must be >= 0");
    const auto prefix = checked_prefix_sums(sizes);
    OrderStatThresholds out;
    out.u.reserve(sizes.size() - 1);
    for (std::size_t k = 1; k < sizes.size(); ++k) {
        Rational top = prefix.sums[k + 1] - burst;
        if (sgn(top) < 0) top = 0;
        out.u.emplace_back(top / prefix.total());
    }
    return out;
}

Rational order_statistic_survival(const OrderStatThresholds& thresholds, std::size_t start_stage,
                                  const StageObserver& observer) {
    check_start_stage(thresholds, start_stage);
    const std::size_t order = thresholds.order();
    if (start_stage >= order) return Rational(1);

    BigInt scale = 1;
    for (const auto& u : thresholds.u) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), u.get_den_mpz_t());
    std::vector<BigInt> lower(order);
    for (std::size_t k = 0; k < order; ++k) {
        lower[k] = thresholds.u[k].get_num() * (scale / thresholds.u[k].get_den());
    }

    // Rational view of stage m for the observer: q_j = t_j / scale^(m-j).
    auto report = [&](std::size_t m, const std::vector<BigInt>& t) {
        if (!observer) return;
        PolynomialCoeffs view;
        view.q.resize(m + 1);
        BigInt power = 1;
        for (std::size_t j = m + 1; j-- > 0;) {
            view.q[j] = ratio(t[j], power);
            power *= scale;
        }
        observer(m, view);
    };

    std::vector<BigInt> t(start_stage + 1, BigInt(0));
    t[start_stage] = 1;
    report(start_stage, t);

    std::vector<BigInt> next;
    BigInt term;
    for (std::size_t m = start_stage + 1; m <= order; ++m) {
        const BigInt& a = lower[m - 1];
        next.assign(m + 1, BigInt(0));
        for (std::size_t i = 1; i <= m; ++i) {
            term = t[i - 1] * static_cast<unsigned long>(m);
            mpz_divexact_ui(next[i].get_mpz_t(), term.get_mpz_t(), static_cast<unsigned long>(i));
        }
        if (a != 0) {
            // Horner: sum_{i=1..m} next_i a^i
            BigInt acc = 0;
            for (std::size_t i = m; i >= 1; --i) {
                acc += next[i];
                acc *= a;
            }
            next[0] = -acc;
        }
        std::swap(t, next);
        report(m, t);
    }

    // p = T(scale) / scale^order
    BigInt value = 0;
    for (std::size_t j = order + 1; j-- > 0;) {
        value *= scale;
        value += t[j];
    }
    BigInt denominator;
    mpz_pow_ui(denominator.get_mpz_t(), scale.get_mpz_t(), static_cast<unsigned long>(order));
    return ratio(value, denominator);
}

Rational order_statistic_survival_rational(const OrderStatThresholds& thresholds, std::size_t start_stage,
                                           const StageObserver& observer) {
    check_start_stage(thresholds, start_stage);
    const std::size_t order = thresholds.order();
    if (start_stage >= order) return Rational(1);

    PolynomialCoeffs poly;
    poly.q.assign(start_stage + 1, Rational(0));
    poly.q[start_stage] = 1;
    if (observer) observer(start_stage, poly);

    PolynomialCoeffs next;
    for (std::size_t m = start_stage + 1; m <= order; ++m) {
        const Rational& lower = thresholds.u[m - 1];
        next.q.assign(m + 1, Rational(0));
        // m * int_{lower}^{y} sum_j q_j x^j dx
        for (std::size_t i = 1; i <= m; ++i) {
            next.q[i] = poly.q[i - 1] * static_cast<unsigned long>(m) / static_cast<unsigned long>(i);
        }
        if (sgn(lower) != 0) {
            Rational power = lower;
            Rational constant = 0;
            for (std::size_t i = 1; i <= m; ++i) {
                constant += next.q[i] * power;
                power *= lower;
            }
            next.q[0] = -constant;
        }
        std::swap(poly, next);
        if (observer) observer(m, poly);
    }

    Rational at_one = 0;
    for (const auto& c : poly.q) at_one += c;
    return at_one;
}

double dkw_tail_bound(std::int64_t n, const Rational& packet_size, const Rational& burst) {
    check_homogeneous_args(n, packet_size, burst);
    if (n == 1) return to_double(single_flow_tail(packet_size, burst));
    if (burst >= Rational(n) * packet_size) return 0.0;
    const BigInt packets = floor_of(burst / packet_size);
    const Rational x = ratio(packets, BigInt(n - 1)) - ratio(1, BigInt(n));
    return dkw_expression(n, x);
}

bool dkw_bound_is_trivial(std::int64_t n, const Rational& packet_size, const Rational& burst) {
    check_homogeneous_args(n, packet_size, burst);
    if (n == 1) return false;
    const double packets = floor_of(burst / packet_size).get_d();
    const double nd = static_cast<double>(n);
    return packets < 1.0 - 1.0 / nd + std::sqrt((nd - 1.0) * std::log(2.0) / 2.0);
}

Rational quasi_det_burst(std::int64_t n, const Rational& packet_size, double eps) {
    check_homogeneous_args(n, packet_size, Rational(0));
    check_eps(eps);
    if (n == 1) return packet_size;
    const double nd = static_cast<double>(n);
    const double packets = std::ceil(1.0 - 1.0 / nd + std::sqrt((nd - 1.0) * (std::log(nd) - std::log(eps)) / 2.0));
    Rational burst = packet_size * Rational(packets);
    // Guard against the ceiling landing one packet short through rounding.
    while (dkw_tail_bound(n, packet_size, burst) > eps) burst += packet_size;
    return burst;
}

Rational exact_tail_bound(std::int64_t n, const Rational& packet_size, const Rational& burst) {
    check_homogeneous_args(n, packet_size, burst);
    if (n == 1) return single_flow_tail(packet_size, burst);
    if (burst >= Rational(n) * packet_size) return Rational(0);
    const BigInt packets = floor_of(burst / packet_size);
    const std::size_t start = packets >= 1 ? static_cast<std::size_t>(to_int64(packets) - 1) : 0;
    const Rational p = order_statistic_survival(homogeneous_thresholds(n, packet_size, burst), start);
    return clamp_unit(Rational(n) * (1 - p));
}

Rational exact_quasi_det_burst(std::int64_t n, const Rational& packet_size, double eps) {
    check_homogeneous_args(n, packet_size, Rational(0));
    check_eps(eps);
    const Rational target(eps);
    // exact_tail_bound is decreasing in b and vanishes at b = n l.
    std::int64_t lo = 0;
    std::int64_t hi = n;
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (exact_tail_bound(n, packet_size, packet_size * mid) <= target) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return packet_size * lo;
}

Rational same_period_eta(std::span<const Rational> sizes, const Rational& burst) {
    if (sgn(burst) < 0) fail(ErrorKind::InvalidArg, "burst must be >= 0");
    const auto prefix = checked_prefix_sums(sizes);
    const std::size_t n = sizes.size();
    bool found = false;
    Rational best;
    for (std::size_t k = 1; k < n; ++k) {
        if (!(prefix.sums[k + 1] > burst)) continue;
        const Rational candidate = ratio(BigInt(static_cast<long>(k)), BigInt(static_cast<long>(n - 1))) -
                                   prefix.sums[k + 1] / prefix.total();
        if (!found || candidate < best) {
            best = candidate;
            found = true;
        }
    }
    if (!found) fail(ErrorKind::EmptyIndexSet, "no k with l_1+...+l_{k+1} > b; b is at or above l^tot");
    return best;
}

double same_period_dkw(std::span<const Rational> sizes, const Rational& burst) {
    if (sgn(burst) < 0) fail(ErrorKind::InvalidArg, "burst must be >= 0");
    const auto prefix = checked_prefix_sums(sizes);
    if (burst >= prefix.total()) return 0.0;
    const Rational x = same_period_eta(sizes, burst) + burst / prefix.total();
    // The DKW inequality says nothing for a negative deviation.
    if (sgn(x) < 0) return 1.0;
    return dkw_expression(static_cast<std::int64_t>(sizes.size()), x);
}

Rational same_period_burst(std::span<const Rational> sizes, double eps) {
    check_eps(eps);
    const auto prefix = checked_prefix_sums(sizes);
    for (std::size_t j = 1; j < sizes.size(); ++j) {
        const Rational& candidate = prefix.sums[j];
        const Rational x = same_period_eta(sizes, candidate) + candidate / prefix.total();
        if (sgn(x) > 0 && same_period_dkw(sizes, candidate) <= eps) return candidate;
    }
    return prefix.total();
}

Rational same_period_exact(std::span<const Rational> sizes, const Rational& burst) {
    if (sgn(burst) < 0) fail(ErrorKind::InvalidArg, "burst must be >= 0");
    const auto prefix = checked_prefix_sums(sizes);
    if (burst >= prefix.total()) return Rational(0);
    // Largest k >= 0 with l_1 + ... + l_{k+1} <= b (0 when none qualifies).
    std::size_t start = 0;
    for (std::size_t k = 0; k + 1 < prefix.sums.size(); ++k) {
        if (prefix.sums[k + 1] <= burst) start = k;
    }
    const Rational p = order_statistic_survival(same_period_thresholds(sizes, burst), start);
    return clamp_unit(Rational(static_cast<long>(sizes.size())) * (1 - p));
}

}  // namespace qdburst
