#pragma once

#include "fsmkit/model.hpp"
#include "fsmkit/sim.hpp"
#include "fsmkit/timer.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fsmkit {

/// SplitMix64. Fixed algorithm so a seed reproduces the same arrivals on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// One draw per call, even for p of 0 or 1.
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

/// Side-road arrivals on the north and south approaches, both feeding sensor c.
struct TrafficModel {
    double arrival_prob = 0.0; // per tick, per approach
    std::uint64_t seed = 0;
    std::size_t horizon = 1000;
    std::size_t service_rate = 1; // departures per side-green tick

    /// Throws ConfigError when a field is out of range.
    void check() const;
};

struct Metrics {
    double mean_side_wait = 0.0; // ticks, over served vehicles
    std::uint64_t max_side_wait = 0;
    double main_green_share = 0.0;
    std::uint64_t side_vehicles_served = 0;
    std::uint64_t cycles_completed = 0;
    // Bookkeeping for the conservation law.
    std::uint64_t arrivals = 0;
    std::uint64_t queue_at_horizon = 0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

/// Queue activity for one tick, aligned with the trace records.
struct EnvTick {
    std::uint32_t arrivals = 0;
    std::uint64_t queue_at_sensor = 0; // queue length when c was read
    std::uint32_t departures = 0;

    friend bool operator==(const EnvTick&, const EnvTick&) = default;
};

struct EnvRun {
    Metrics metrics;
    Trace trace;
    std::vector<EnvTick> ticks;
};

/// Each tick: draw north then south arrivals and enqueue them; c = queue
/// nonempty; if the current state shows sg, serve up to service_rate vehicles
/// in arrival order; then advance the closed loop one tick.
/// The spec must be closed-loop compatible and expose mg and sg outputs.
EnvRun run_env(const FsmSpec& spec, const TimerConfig& cfg, const TrafficModel& model);
EnvRun run_env(const CompiledFsm& fsm, const TimerConfig& cfg, const TrafficModel& model);

/// Replica i uses seed seeds[i]. Results come back in seed order whatever the
/// thread count, so serial and parallel sweeps are identical.
std::vector<Metrics> run_sweep(const FsmSpec& spec, const TimerConfig& cfg, const TrafficModel& base,
                               std::span<const std::uint64_t> seeds, unsigned threads = 1);

/// Field-wise means, accumulated in input order.
struct MetricsMean {
    double mean_side_wait = 0.0;
    double max_side_wait = 0.0;
    double main_green_share = 0.0;
    double side_vehicles_served = 0.0;
    double cycles_completed = 0.0;
};

MetricsMean aggregate(std::span<const Metrics> runs);

/// key=value, one per line:
///   mean_side_wait, max_side_wait, main_green_share, side_vehicles_served, cycles_completed
std::string format_metrics_block(const Metrics& m);

/// Same fields, same order, space separated on one line. Reals use 3 decimals.
std::string format_metrics_record(const Metrics& m);
std::string format_metrics_record(const MetricsMean& m);

} // namespace fsmkit
