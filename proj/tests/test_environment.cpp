#include "fsmkit/environment.hpp"
#include "fsmkit/errors.hpp"
#include "fsmkit/itlc.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace fsmkit;

TEST_SUITE("environment") {

TEST_CASE("splitmix64 reference values") {
    // Published SplitMix64 outputs for seed 0.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafULL);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ULL);
    CHECK(rng.next() == 0x06c45d188009454fULL);
}

TEST_CASE("bernoulli endpoints") {
    SplitMix64 rng(9);
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("no side traffic: main road always green") {
    const auto run = run_env(itlc::bundled_spec(), {4, 16}, {0.0, 1, 2000, 1});
    CHECK(run.metrics.main_green_share == 1.0);
    CHECK(run.metrics.side_vehicles_served == 0);
    CHECK(run.metrics.cycles_completed == 0);
    CHECK(run.metrics.max_side_wait == 0);
}

TEST_CASE("same seed, same run") {
    const TrafficModel model{0.2, 42, 3000, 1};
    const auto a = run_env(itlc::bundled_spec(), {4, 16}, model);
    const auto b = run_env(itlc::bundled_spec(), {4, 16}, model);
    CHECK(a.metrics == b.metrics);
    CHECK(a.trace == b.trace);
    CHECK(a.ticks == b.ticks);
    const auto other = run_env(itlc::bundled_spec(), {4, 16}, {0.2, 43, 3000, 1});
    CHECK_FALSE(other.ticks == a.ticks);
}

TEST_CASE("queue laws hold across loads") {
    for (double p : {0.0, 0.05, 0.2, 0.5, 1.0}) {
        for (std::size_t service : {1u, 3u}) {
            const auto run = run_env(itlc::bundled_spec(), {4, 16}, {p, 7, 2500, service});
            const auto& m = run.metrics;
            CHECK(m.arrivals == m.side_vehicles_served + m.queue_at_horizon);
            CHECK(m.main_green_share >= 0.0);
            CHECK(m.main_green_share <= 1.0);
            CHECK(static_cast<double>(m.max_side_wait) >= m.mean_side_wait);
            REQUIRE(run.ticks.size() == run.trace.records.size());
            std::uint64_t departed = 0;
            for (std::size_t t = 0; t < run.ticks.size(); ++t) {
                const auto& r = run.trace.records[t];
                // sensor honesty
                CHECK(run.trace.input(r, "c") == (run.ticks[t].queue_at_sensor > 0));
                // no service on red
                if (!run.trace.output(r, "sg"))
                    CHECK(run.ticks[t].departures == 0);
                CHECK(run.ticks[t].departures <= service);
                departed += run.ticks[t].departures;
            }
            CHECK(departed == m.side_vehicles_served);
        }
    }
}

TEST_CASE("full side demand never raises the main-road share") {
    const auto idle = run_env(itlc::bundled_spec(), {4, 16}, {0.0, 3, 5000, 1}).metrics;
    const auto busy = run_env(itlc::bundled_spec(), {4, 16}, {1.0, 3, 5000, 1}).metrics;
    CHECK(busy.main_green_share <= idle.main_green_share);
    CHECK(busy.cycles_completed >= 1);
}

TEST_CASE("lone-vehicle wait bound from brute force") {
    // (short+1) in S3, (long+1) in S0, (short+1) in S1.
    CHECK(testing::worst_lone_vehicle_wait(4, 16) == 27);
    for (unsigned s = 1; s <= 5; ++s)
        for (unsigned l = s + 1; l <= 12; ++l)
            CHECK(testing::worst_lone_vehicle_wait(s, l) == l + 2 * s + 3);
}

TEST_CASE("saturated demand meets the brute-force bound when green clears the queue") {
    // 2 arrivals/tick over a 44-tick cycle is 88 vehicles; 17 green ticks at 6 serve 102.
    const auto bound = testing::worst_lone_vehicle_wait(4, 16);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto m = run_env(itlc::bundled_spec(), {4, 16}, {1.0, seed, 10000, 6}).metrics;
        CHECK(m.max_side_wait <= bound);
        CHECK(m.cycles_completed >= 1);
    }
}

TEST_CASE("saturated demand overloads a one-vehicle-per-tick green") {
    const auto shorter = run_env(itlc::bundled_spec(), {4, 16}, {1.0, 0, 2000, 1}).metrics;
    const auto longer = run_env(itlc::bundled_spec(), {4, 16}, {1.0, 0, 4000, 1}).metrics;
    CHECK(longer.max_side_wait > shorter.max_side_wait);
    CHECK(longer.queue_at_horizon > shorter.queue_at_horizon);
}

TEST_CASE("parallel and serial sweeps agree") {
    std::vector<std::uint64_t> seeds(9);
    std::iota(seeds.begin(), seeds.end(), 100);
    const TrafficModel model{0.15, 0, 2000, 1};
    const auto serial = run_sweep(itlc::bundled_spec(), {4, 16}, model, seeds, 1);
    const auto parallel = run_sweep(itlc::bundled_spec(), {4, 16}, model, seeds, 4);
    CHECK(serial == parallel);
    for (std::size_t i = 0; i < seeds.size(); ++i)
        CHECK(serial[i] == run_env(itlc::bundled_spec(), {4, 16}, {0.15, seeds[i], 2000, 1}).metrics);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(run_env(itlc::bundled_spec(), {4, 16}, {1.5, 0, 10, 1}), ConfigError);
    CHECK_THROWS_AS(run_env(itlc::bundled_spec(), {4, 16}, {0.5, 0, 0, 1}), ConfigError);
    CHECK_THROWS_AS(run_env(itlc::bundled_spec(), {4, 16}, {0.5, 0, 10, 0}), ConfigError);
}

TEST_CASE("metrics text forms") {
    Metrics m;
    m.mean_side_wait = 12.3456;
    m.max_side_wait = 27;
    m.main_green_share = 0.5;
    m.side_vehicles_served = 10;
    m.cycles_completed = 3;
    CHECK(format_metrics_block(m) == "mean_side_wait=12.346\nmax_side_wait=27\nmain_green_share=0.500\n"
                                     "side_vehicles_served=10\ncycles_completed=3\n");
    CHECK(format_metrics_record(m) == "mean_side_wait=12.346 max_side_wait=27 main_green_share=0.500 "
                                      "side_vehicles_served=10 cycles_completed=3");
    const Metrics runs[2] = {m, Metrics{}};
    CHECK(format_metrics_record(aggregate(runs)) == "mean_side_wait=6.173 max_side_wait=13.500 "
                                                    "main_green_share=0.250 side_vehicles_served=5.000 "
                                                    "cycles_completed=1.500");
}

} // TEST_SUITE
