#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qdburst/scenario.hpp"

namespace qdburst {

inline constexpr std::size_t kDefaultMaxEvents = 100000;

// One phase per flow, flows listed group by group; phase_f in [0, period_f).
struct PhaseSample {
    std::vector<double> phases;
};

PhaseSample sample_phases(const Scenario& scenario, std::uint64_t seed);

// Phases of trial `trial` in a Monte Carlo run seeded with `seed`. Each trial
// owns a derived RNG stream, so results do not depend on scheduling.
PhaseSample sample_trial_phases(const Scenario& scenario, std::uint64_t seed, std::uint64_t trial);

// Computes B = sup_t sup_{s<=t} (A[s,t) - r^tot (t - s)) for fixed phases.
//
// The aggregate arrival process repeats every hyperperiod HP (lcm of the
// periods) and carries exactly r^tot * HP bits per HP, so windows longer than
// HP never exceed shorter ones. Running the token-bucket content recursion
// W <- max(0, W - r^tot dt) + bits over the arrivals in [0, 2 HP) therefore
// visits every window [T_i, T_j] with T_i in [0, HP) and T_j - T_i < HP.
class BurstinessEvaluator {
public:
    // Throws HyperperiodOverflow when one hyperperiod holds more than
    // max_events arrivals.
    explicit BurstinessEvaluator(const Scenario& scenario, std::size_t max_events = kDefaultMaxEvents);

    double operator()(const PhaseSample& sample) const;

    const Rational& hyperperiod() const { return hyperperiod_; }
    std::size_t events_per_hyperperiod() const { return events_per_hyperperiod_; }

private:
    struct Flow {
        double period;
        double bits;
        std::int64_t arrivals;  // in [0, 2 HP)
    };

    std::vector<Flow> flows_;
    Rational hyperperiod_;
    std::size_t events_per_hyperperiod_ = 0;
    double rate_ = 0.0;
    double total_burst_ = 0.0;
};

double exact_burstiness(const Scenario& scenario, const PhaseSample& sample,
                        std::size_t max_events = kDefaultMaxEvents);

// sqrt(ln(2/alpha) / (2 N)).
double ks_band_halfwidth(std::uint64_t trials, double alpha);

struct MonteCarloOptions {
    double alpha = 0.01;
    std::size_t max_events = kDefaultMaxEvents;
    unsigned threads = 1;
};

// Tail estimates P(B > b) on a grid of burst values (bits).
struct EmpiricalTail {
    std::vector<double> grid;
    std::vector<double> tail;
    double band_halfwidth = 0.0;
    double alpha = 0.01;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    // Binomial standard error of tail[k].
    double standard_error(std::size_t k) const;
};

// B for trials 0..trials-1.
std::vector<double> sample_burstiness(const Scenario& scenario, std::uint64_t trials, std::uint64_t seed,
                                      const MonteCarloOptions& options = {});

// Counts B > b with a relative slack of 1e-9 l^tot so that floating-point
// noise on ties (B exactly at a grid value) is not read as a violation.
EmpiricalTail tail_from_samples(std::span<const double> bursts, const Scenario& scenario,
                                std::span<const double> grid, double alpha, std::uint64_t seed);

EmpiricalTail monte_carlo_tail(const Scenario& scenario, std::uint64_t trials, std::uint64_t seed,
                               std::span<const double> grid, const MonteCarloOptions& options = {});

}  // namespace qdburst
