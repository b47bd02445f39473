#include "qdburst/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <utility>

#include "qdburst/errors.hpp"
#include "qdburst/random.hpp"

namespace qdburst {

namespace {

struct Arrival {
    double time;
    double bits;
};

}  // namespace

PhaseSample sample_phases(const Scenario& scenario, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PhaseSample out;
    out.phases.reserve(static_cast<std::size_t>(scenario.flow_count()));
    for (const auto& g : scenario.groups()) {
        const double period = to_double(g.period);
        for (std::int64_t f = 0; f < g.count; ++f) {
            double phase = uniform01(rng) * period;
            if (phase >= period) phase = std::nextafter(period, 0.0);
            out.phases.push_back(phase);
        }
    }
    return out;
}

PhaseSample sample_trial_phases(const Scenario& scenario, std::uint64_t seed, std::uint64_t trial) {
    return sample_phases(scenario, mix_seed(seed, trial));
}

BurstinessEvaluator::BurstinessEvaluator(const Scenario& scenario, std::size_t max_events) {
    std::vector<Rational> periods;
    for (const auto& g : scenario.groups()) periods.push_back(g.period);
    hyperperiod_ = rational_lcm(periods);

    BigInt per_hyperperiod = 0;
    for (const auto& g : scenario.groups()) per_hyperperiod += BigInt(g.count) * Rational(hyperperiod_ / g.period).get_num();
    if (per_hyperperiod > BigInt(static_cast<unsigned long>(max_events))) {
        fail(ErrorKind::HyperperiodOverflow, "hyperperiod " + format_rational(hyperperiod_) + " holds " +
                                                 per_hyperperiod.get_str() + " arrivals, cap is " +
                                                 std::to_string(max_events));
    }
    events_per_hyperperiod_ = static_cast<std::size_t>(per_hyperperiod.get_ui());

    for (const auto& g : scenario.groups()) {
        const std::int64_t arrivals = 2 * to_int64(Rational(hyperperiod_ / g.period).get_num());
        for (std::int64_t f = 0; f < g.count; ++f) {
            flows_.push_back({to_double(g.period), to_double(g.packet_size), arrivals});
        }
    }
    rate_ = to_double(scenario.total_rate());
    total_burst_ = to_double(scenario.total_burst());
}

double BurstinessEvaluator::operator()(const PhaseSample& sample) const {
    if (sample.phases.size() != flows_.size()) fail(ErrorKind::InvalidArg, "phase count does not match flow count");
    std::vector<Arrival> arrivals;
    arrivals.reserve(2 * events_per_hyperperiod_);
    for (std::size_t f = 0; f < flows_.size(); ++f) {
        const auto& flow = flows_[f];
        const double phase = sample.phases[f];
        if (!(phase >= 0.0 && phase < flow.period)) fail(ErrorKind::InvalidArg, "phase outside [0, period)");
        for (std::int64_t k = 0; k < flow.arrivals; ++k) {
            arrivals.push_back({phase + static_cast<double>(k) * flow.period, flow.bits});
        }
    }
    std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) { return a.time < b.time; });

    double content = 0.0;
    double best = 0.0;
    double last = arrivals.front().time;
    for (const auto& a : arrivals) {
        content = std::max(0.0, content - rate_ * (a.time - last)) + a.bits;
        last = a.time;
        best = std::max(best, content);
    }
    // l^tot bounds B deterministically; drop rounding overshoot.
    return std::min(best, total_burst_);
}

double exact_burstiness(const Scenario& scenario, const PhaseSample& sample, std::size_t max_events) {
    return BurstinessEvaluator(scenario, max_events)(sample);
}

double ks_band_halfwidth(std::uint64_t trials, double alpha) {
    if (trials < 1) fail(ErrorKind::InvalidArg, "need at least one trial");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArg, "alpha must lie in (0,1)");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(trials)));
}

double EmpiricalTail::standard_error(std::size_t k) const {
    const double p = tail.at(k);
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::vector<double> sample_burstiness(const Scenario& scenario, std::uint64_t trials, std::uint64_t seed,
                                      const MonteCarloOptions& options) {
    const BurstinessEvaluator evaluate(scenario, options.max_events);
    std::vector<double> bursts(static_cast<std::size_t>(trials));
    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t t = begin; t < end; ++t) {
            bursts[static_cast<std::size_t>(t)] = evaluate(sample_trial_phases(scenario, seed, t));
        }
    };
    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1 || trials < 2 * threads) {
        work(0, trials);
        return bursts;
    }
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (trials + threads - 1) / threads;
        for (unsigned i = 0; i < threads; ++i) {
            const std::uint64_t begin = std::min<std::uint64_t>(trials, i * chunk);
            const std::uint64_t end = std::min<std::uint64_t>(trials, begin + chunk);
            pool.emplace_back(work, begin, end);
        }
    }
    return bursts;
}

EmpiricalTail tail_from_samples(std::span<const double> bursts, const Scenario& scenario,
                                std::span<const double> grid, double alpha, std::uint64_t seed) {
    if (bursts.empty()) fail(ErrorKind::InvalidArg, "no samples");
    if (!std::is_sorted(grid.begin(), grid.end())) fail(ErrorKind::InvalidArg, "grid must be ascending");
    std::vector<double> sorted(bursts.begin(), bursts.end());
    std::sort(sorted.begin(), sorted.end());
    const double slack = 1e-9 * to_double(scenario.total_burst());

    EmpiricalTail out;
    out.grid.assign(grid.begin(), grid.end());
    out.alpha = alpha;
    out.trials = sorted.size();
    out.seed = seed;
    out.band_halfwidth = ks_band_halfwidth(out.trials, alpha);
    out.tail.reserve(grid.size());
    for (const double b : grid) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), b + slack);
        out.tail.push_back(static_cast<double>(above) / static_cast<double>(sorted.size()));
    }
    return out;
}

EmpiricalTail monte_carlo_tail(const Scenario& scenario, std::uint64_t trials, std::uint64_t seed,
                               std::span<const double> grid, const MonteCarloOptions& options) {
    if (trials < 1) fail(ErrorKind::InvalidArg, "need at least one trial");
    const auto bursts = sample_burstiness(scenario, trials, seed, options);
    return tail_from_samples(bursts, scenario, grid, options.alpha, seed);
}

}  // namespace qdburst
