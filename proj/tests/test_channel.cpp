#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <map>
#include <random>
#include <vector>

#include "scsim/channel.hpp"
#include "test_util.hpp"

using namespace scsim;

namespace {

LargeScaleParams make_lsp(int clusters, int subpaths, double ds_s = 50e-9) {
    LargeScaleParams lsp;
    lsp.n_time_clusters = clusters;
    lsp.n_spatial_lobes = 2;
    lsp.n_subpaths_per_cluster.assign(static_cast<std::size_t>(clusters), subpaths);
    lsp.rms_delay_spread_s = ds_s;
    return lsp;
}

UpdateTick tick_at(int64_t index, double x, double y, double time_s, Vec2 heading = {1, 0}) {
    UpdateTick t;
    t.index = index;
    t.time_s = time_s;
    t.position = {x, y, 1.5};
    t.heading = heading;
    return t;
}

double realized_spread(const ChannelState& state) {
    double pt = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (const TimeCluster& c : state.clusters) {
        for (const Subpath& s : c.subpaths) {
            pt += s.power;
            m1 += s.power * s.delay_s;
            m2 += s.power * s.delay_s * s.delay_s;
        }
    }
    return std::sqrt(m2 / pt - (m1 / pt) * (m1 / pt));
}

}  // namespace

TEST_CASE("init_channel degenerate single tap sits at the LOS delay") {
    ScenarioConfig cfg;
    std::mt19937_64 rng(5);
    const Position tx{0, 0, 4};
    const Position rx{30, 0, 4};  // equal heights: separation is exactly 30 m
    const auto state = init_channel(make_lsp(1, 1), LosState::los, tx, rx, cfg, rng);
    REQUIRE(state.clusters.size() == 1);
    REQUIRE(state.clusters[0].subpaths.size() == 1);
    CHECK(state.clusters[0].subpaths[0].delay_s * 1e9 ==
          doctest::Approx(100.07).epsilon(1e-4));
    CHECK(state.clusters[0].subpaths[0].is_los);
}

TEST_CASE("init_channel realizes the requested delay spread") {
    ScenarioConfig cfg;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto state = init_channel(make_lsp(4, 6, 50e-9), LosState::nlos, {0, 0, 4},
                                        {40, 10, 1.5}, cfg, rng);
        const double spread = realized_spread(state);
        CHECK(spread > 45e-9);
        CHECK(spread < 55e-9);
    }
}

TEST_CASE("init_channel draws subpath angles within range and sorted clusters") {
    ScenarioConfig cfg;
    std::mt19937_64 rng(29);
    const auto state =
        init_channel(make_lsp(5, 8), LosState::nlos, {0, 0, 4}, {50, 0, 1.5}, cfg, rng);
    double prev = -1.0;
    for (const TimeCluster& c : state.clusters) {
        CHECK(c.base_delay_s > prev);
        prev = c.base_delay_s;
        CHECK(c.ramp == 1.0);
        for (const Subpath& s : c.subpaths) {
            CHECK(s.aoa_az_deg >= 0.0);
            CHECK(s.aoa_az_deg < 360.0);
            CHECK(s.aod_az_deg >= 0.0);
            CHECK(s.aod_az_deg < 360.0);
            CHECK(s.aoa_el_deg >= -90.0);
            CHECK(s.aoa_el_deg <= 90.0);
            CHECK(s.phase_rad >= 0.0);
            CHECK(s.phase_rad < 2.0 * M_PI);
            CHECK(s.power > 0.0);
            CHECK(s.delay_s > 0.0);
        }
    }
}

TEST_CASE("birth_death_probability closed form") {
    CHECK(birth_death_probability(0.0, 0.8) == 0.0);
    CHECK(birth_death_probability(1.0, std::log(2.0)) == doctest::Approx(0.5));
    CHECK(birth_death_probability(1.0, 0.8) == doctest::Approx(0.5507).epsilon(2e-4));
    CHECK_THROWS_AS((void)birth_death_probability(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)birth_death_probability(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("lambda zero freezes the cluster set") {
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 0.0;
    std::mt19937_64 rng(3);
    auto state = init_channel(make_lsp(3, 4), LosState::nlos, {0, 0, 4}, {40, 0, 1.5}, cfg, rng);
    const auto target = make_lsp(6, 4);
    for (int k = 1; k <= 100; ++k) {
        advance_ramps(state, cfg);
        const auto ev = apply_birth_death(state, target, static_cast<double>(k), cfg, rng);
        CHECK(ev.kind == BirthDeathEvent::Kind::none);
    }
    CHECK(state.clusters.size() == 3);
}

TEST_CASE("replacement keeps the count and swaps out the weakest cluster") {
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 1e9;  // event fires every tick
    std::mt19937_64 rng(9);
    auto state = init_channel(make_lsp(3, 4), LosState::nlos, {0, 0, 4}, {40, 0, 1.5}, cfg, rng);

    uint64_t weakest_id = 0;
    double weakest_power = 1e300;
    for (const TimeCluster& c : state.clusters) {
        if (c.power() < weakest_power) {
            weakest_power = c.power();
            weakest_id = c.id;
        }
    }
    const int active_before = state.active_cluster_count();
    const auto ev = apply_birth_death(state, make_lsp(3, 4), 1.0, cfg, rng);
    CHECK(ev.kind == BirthDeathEvent::Kind::replacement);
    CHECK(ev.killed_id == weakest_id);
    CHECK(ev.born_id != weakest_id);
    CHECK(state.active_cluster_count() == active_before);
    for (const TimeCluster& c : state.clusters) {
        if (c.id == weakest_id) {
            CHECK(c.dying);
        }
        if (c.id == ev.born_id) {
            CHECK(c.ramp == 0.0);
        }
    }
}

TEST_CASE("a target increase is reached through exactly one birth") {
    // Cell transition analog: three clusters entering a four-cluster grid.
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 2.0;
    std::mt19937_64 rng(21);
    auto state = init_channel(make_lsp(3, 3), LosState::nlos, {0, 0, 4}, {40, 0, 1.5}, cfg, rng);
    const auto target = make_lsp(4, 3);
    int births = 0;
    for (int k = 1; k <= 200 && state.active_cluster_count() < 4; ++k) {
        advance_ramps(state, cfg);
        const auto ev = apply_birth_death(state, target, 0.5 * k, cfg, rng);
        if (ev.kind == BirthDeathEvent::Kind::birth) {
            ++births;
        }
        CHECK(ev.kind != BirthDeathEvent::Kind::death);
    }
    CHECK(state.active_cluster_count() == 4);
    CHECK(births == 1);
}

TEST_CASE("evolve_small_scale shifts delay and phase with radial motion") {
    ScenarioConfig cfg;
    ChannelState state;
    state.los = LosState::nlos;
    TimeCluster c;
    c.id = 0;
    Subpath sp;
    sp.delay_s = 500e-9;
    sp.power = 1.0;
    sp.aoa_az_deg = 0.0;  // arriving from +x; motion along +x is straight at it
    sp.phase_rad = 1.0;
    c.subpaths.push_back(sp);
    c.base_delay_s = sp.delay_s;
    state.clusters.push_back(c);

    SUBCASE("motion toward the arrival direction advances delay by d/c") {
        auto prev = tick_at(0, 0, 0, 0.0);
        auto next = tick_at(1, 1.0, 0, 1.0);  // 1 m/s for 1 s
        evolve_small_scale(state, next, prev, {1000, 0, 4}, cfg);
        const double moved_ns = (500e-9 - state.clusters[0].subpaths[0].delay_s) * 1e9;
        CHECK(moved_ns == doctest::Approx(3.336).epsilon(1e-3));
    }
    SUBCASE("perpendicular motion leaves the delay unchanged to first order") {
        state.clusters[0].subpaths[0].aoa_az_deg = 90.0;
        auto prev = tick_at(0, 0, 0, 0.0);
        auto next = tick_at(1, 1.0, 0, 1.0);
        evolve_small_scale(state, next, prev, {1000, 0, 4}, cfg);
        CHECK(state.clusters[0].subpaths[0].delay_s == doctest::Approx(500e-9).epsilon(1e-12));
    }
    SUBCASE("one wavelength of radial motion advances the phase by 2 pi") {
        const double wavelength = kSpeedOfLight / cfg.carrier_frequency_hz;
        CHECK(wavelength * 1e3 == doctest::Approx(4.0788).epsilon(1e-4));
        auto prev = tick_at(0, 0, 0, 0.0);
        auto next = tick_at(1, wavelength, 0, 1.0);
        evolve_small_scale(state, next, prev, {1000, 0, 4}, cfg);
        CHECK(state.clusters[0].subpaths[0].phase_rad == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("non-consecutive ticks are rejected") {
        auto prev = tick_at(0, 0, 0, 0.0);
        auto next = tick_at(2, 1.0, 0, 2.0);
        CHECK_THROWS_AS(evolve_small_scale(state, next, prev, {1000, 0, 4}, cfg),
                        std::invalid_argument);
    }
}

TEST_CASE("stationary user with lambda zero repeats the CIR") {
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 0.0;
    std::mt19937_64 rng(33);
    const Position tx{0, 0, 4};
    auto prev = tick_at(0, 40, 0, 0.0);
    auto state = init_channel(make_lsp(3, 5), LosState::nlos, tx, prev.position, cfg, rng);
    state.last_update_time_s = 0.0;

    TickInputs in;
    in.los = LosState::nlos;
    in.shadow_fading_db = 2.0;
    in.lsp = make_lsp(3, 5);

    const double pl = path_loss_db(cfg.carrier_frequency_hz,
                                   tr_separation(tx, prev.position), in.los, 2.0, cfg);
    const Cir first = synthesize_cir(state, prev, pl);
    Cir last = first;
    for (int k = 1; k <= 10; ++k) {
        auto next = tick_at(k, 40, 0, static_cast<double>(k));
        last = step(state, next, prev, tx, in, cfg, rng).cir;
        prev = next;
    }
    REQUIRE(first.taps.size() == last.taps.size());
    for (std::size_t k = 0; k < first.taps.size(); ++k) {
        CHECK(std::abs(first.taps[k].amplitude) ==
              doctest::Approx(std::abs(last.taps[k].amplitude)).epsilon(1e-12));
        CHECK(first.taps[k].delay_s == doctest::Approx(last.taps[k].delay_s).epsilon(1e-12));
        CHECK(first.taps[k].aoa_az_deg ==
              doctest::Approx(last.taps[k].aoa_az_deg).epsilon(1e-12));
    }
}

TEST_CASE("CIR power tracks the path loss exactly") {
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 0.5;
    std::mt19937_64 rng(55);
    const Position tx{0, 0, 4};
    auto prev = tick_at(0, 60, 0, 0.0);
    auto state = init_channel(make_lsp(4, 6), LosState::nlos, tx, prev.position, cfg, rng);
    TickInputs in;
    in.los = LosState::nlos;
    in.shadow_fading_db = -3.0;
    in.lsp = make_lsp(4, 6);
    for (int k = 1; k <= 50; ++k) {
        auto next = tick_at(k, 60.0 - 0.5 * k, 0, 0.5 * k);
        const StepResult sr = step(state, next, prev, tx, in, cfg, rng);
        const double total_db = 10.0 * std::log10(sr.cir.total_power());
        CHECK(std::abs(total_db + sr.path_loss_db) < 1e-9);
        prev = next;
    }
}

TEST_CASE("cluster ids live on contiguous tick ranges") {
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 2.0;
    std::mt19937_64 rng(77);
    const Position tx{0, 0, 4};
    auto prev = tick_at(0, 70, 0, 0.0);
    auto state = init_channel(make_lsp(3, 4), LosState::nlos, tx, prev.position, cfg, rng);
    TickInputs in;
    in.los = LosState::nlos;
    in.lsp = make_lsp(4, 4);

    std::map<uint64_t, std::pair<int, int>> lifetimes;  // id -> [first, last]
    for (const TimeCluster& c : state.clusters) {
        lifetimes[c.id] = {0, 0};
    }
    for (int k = 1; k <= 120; ++k) {
        auto next = tick_at(k, 70.0 - 0.25 * k, 0, 0.5 * k);
        (void)step(state, next, prev, tx, in, cfg, rng);
        for (const TimeCluster& c : state.clusters) {
            auto [it, inserted] = lifetimes.try_emplace(c.id, k, k);
            if (!inserted) {
                // Contiguous: the cluster must have been present last tick too.
                CHECK(it->second.second >= k - 1);
                it->second.second = k;
            }
        }
        prev = next;
    }
}

TEST_CASE("forced targets drive a monotone cluster-count staircase") {
    // A 75 m straight drive sampled every 5 m through cells whose target
    // counts follow the measured paired pattern 3,3,4,4,6,6.
    ScenarioConfig cfg;
    cfg.lambda_c_per_s = 1.5;
    std::mt19937_64 rng(101);
    const Position tx{0, 0, 4};
    const std::vector<int> targets{3, 3, 4, 4, 6, 6};

    auto prev = tick_at(0, 80, 0, 0.0);
    auto state =
        init_channel(make_lsp(targets[0], 4), LosState::nlos, tx, prev.position, cfg, rng);
    std::vector<int> counts{state.active_cluster_count()};
    for (int k = 1; k <= 15; ++k) {  // 15 steps of 5 m = 75 m
        auto next = tick_at(k, 80 - 5.0 * k, 0, 1.0 * k);
        TickInputs in;
        in.los = LosState::nlos;
        in.lsp = make_lsp(targets[static_cast<std::size_t>(std::min(k / 3, 5))], 4);
        (void)step(state, next, prev, tx, in, cfg, rng);
        counts.push_back(state.active_cluster_count());
        prev = next;
    }
    for (std::size_t k = 1; k < counts.size(); ++k) {
        CHECK(counts[k] >= counts[k - 1]);
        CHECK(counts[k] - counts[k - 1] <= 1);
    }
    CHECK(counts.back() == 6);
}
