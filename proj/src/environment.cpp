#include "fsmkit/environment.hpp"

#include "fsmkit/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <thread>

namespace fsmkit {

void TrafficModel::check() const {
    if (!(arrival_prob >= 0.0 && arrival_prob <= 1.0))
        throw ConfigError("arrival probability must be within [0, 1]");
    if (horizon < 1)
        throw ConfigError("horizon must be at least 1");
    if (service_rate < 1)
        throw ConfigError("service rate must be at least 1");
}

EnvRun run_env(const CompiledFsm& fsm, const TimerConfig& cfg, const TrafficModel& model) {
    model.check();
    ClosedLoop loop(fsm, cfg);
    const auto sg = fsm.moore_index("sg");
    const auto mg = fsm.moore_index("mg");
    if (!sg || !mg)
        throw ConfigError("traffic environment needs moore outputs 'mg' and 'sg'");

    SplitMix64 rng(model.seed);
    std::deque<std::size_t> queue; // arrival ticks, oldest first
    Metrics m;
    std::uint64_t wait_sum = 0;
    std::uint64_t main_green_ticks = 0;
    std::vector<EnvTick> activity;
    activity.reserve(model.horizon);

    for (std::size_t t = 0; t < model.horizon; ++t) {
        const bool north = rng.bernoulli(model.arrival_prob);
        const bool south = rng.bernoulli(model.arrival_prob);
        if (north)
            queue.push_back(t);
        if (south)
            queue.push_back(t);
        m.arrivals += std::uint64_t{north} + std::uint64_t{south};

        EnvTick tick{static_cast<std::uint32_t>(north) + static_cast<std::uint32_t>(south), queue.size(), 0};
        const bool c = !queue.empty();
        const std::uint32_t lights = fsm.moore_mask(loop.state());
        if ((lights >> *mg) & 1u)
            ++main_green_ticks;
        if ((lights >> *sg) & 1u) {
            for (std::size_t k = 0; k < model.service_rate && !queue.empty(); ++k) {
                const std::uint64_t wait = t - queue.front();
                queue.pop_front();
                wait_sum += wait;
                m.max_side_wait = std::max(m.max_side_wait, wait);
                ++m.side_vehicles_served;
                ++tick.departures;
            }
        }
        activity.push_back(tick);

        const std::uint32_t before = loop.state();
        loop.tick({c, false});
        if (loop.state() == fsm.initial() && before != fsm.initial())
            ++m.cycles_completed;
    }

    m.queue_at_horizon = queue.size();
    m.main_green_share = static_cast<double>(main_green_ticks) / static_cast<double>(model.horizon);
    if (m.side_vehicles_served > 0)
        m.mean_side_wait = static_cast<double>(wait_sum) / static_cast<double>(m.side_vehicles_served);
    return {m, std::move(loop).take_trace(), std::move(activity)};
}

EnvRun run_env(const FsmSpec& spec, const TimerConfig& cfg, const TrafficModel& model) {
    const auto report = validate(spec);
    if (!report.ok())
        throw ConfigError("spec '" + spec.name + "' has validation findings: " +
                          format_finding(spec, report.findings.front()));
    const CompiledFsm fsm(spec);
    return run_env(fsm, cfg, model);
}

std::vector<Metrics> run_sweep(const FsmSpec& spec, const TimerConfig& cfg, const TrafficModel& base,
                               std::span<const std::uint64_t> seeds, unsigned threads) {
    base.check();
    const auto report = validate(spec);
    if (!report.ok())
        throw ConfigError("spec '" + spec.name + "' has validation findings: " +
                          format_finding(spec, report.findings.front()));
    const CompiledFsm fsm(spec);
    std::vector<Metrics> results(seeds.size());
    auto replica = [&](std::size_t i) {
        TrafficModel model = base;
        model.seed = seeds[i];
        results[i] = run_env(fsm, cfg, model).metrics;
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < seeds.size(); ++i)
            replica(i);
        return results;
    }
    // Each worker owns a disjoint stride of result slots.
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < seeds.size(); i += threads)
                        replica(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

MetricsMean aggregate(std::span<const Metrics> runs) {
    MetricsMean mean;
    if (runs.empty())
        return mean;
    for (const auto& m : runs) {
        mean.mean_side_wait += m.mean_side_wait;
        mean.max_side_wait += static_cast<double>(m.max_side_wait);
        mean.main_green_share += m.main_green_share;
        mean.side_vehicles_served += static_cast<double>(m.side_vehicles_served);
        mean.cycles_completed += static_cast<double>(m.cycles_completed);
    }
    const double n = static_cast<double>(runs.size());
    mean.mean_side_wait /= n;
    mean.max_side_wait /= n;
    mean.main_green_share /= n;
    mean.side_vehicles_served /= n;
    mean.cycles_completed /= n;
    return mean;
}

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

std::string format_metrics_block(const Metrics& m) {
    return "mean_side_wait=" + fixed3(m.mean_side_wait) + '\n' +
           "max_side_wait=" + std::to_string(m.max_side_wait) + '\n' +
           "main_green_share=" + fixed3(m.main_green_share) + '\n' +
           "side_vehicles_served=" + std::to_string(m.side_vehicles_served) + '\n' +
           "cycles_completed=" + std::to_string(m.cycles_completed) + '\n';
}

std::string format_metrics_record(const Metrics& m) {
    return "mean_side_wait=" + fixed3(m.mean_side_wait) + " max_side_wait=" + std::to_string(m.max_side_wait) +
           " main_green_share=" + fixed3(m.main_green_share) +
           " side_vehicles_served=" + std::to_string(m.side_vehicles_served) +
           " cycles_completed=" + std::to_string(m.cycles_completed);
}

std::string format_metrics_record(const MetricsMean& m) {
    return "mean_side_wait=" + fixed3(m.mean_side_wait) + " max_side_wait=" + fixed3(m.max_side_wait) +
           " main_green_share=" + fixed3(m.main_green_share) +
           " side_vehicles_served=" + fixed3(m.side_vehicles_served) +
           " cycles_completed=" + fixed3(m.cycles_completed);
}

} // namespace fsmkit
