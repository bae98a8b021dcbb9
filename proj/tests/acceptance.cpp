// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scsim/channel.hpp"
#include "scsim/pdp.hpp"
#include "scsim/run.hpp"
#include "test_util.hpp"

using namespace scsim;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!ok) {
        ++g_failures;
    }
}

LargeScaleParams flat_lsp(int clusters, int subpaths, double ds_s = 50e-9) {
    LargeScaleParams lsp;
    lsp.n_time_clusters = clusters;
    lsp.n_spatial_lobes = 2;
    lsp.n_subpaths_per_cluster.assign(static_cast<std::size_t>(clusters), subpaths);
    lsp.rms_delay_spread_s = ds_s;
    return lsp;
}

RunConfig straight_drive(double from_x, double to_x, double speed) {
    RunConfig cfg;
    cfg.trajectory.waypoints = {{from_x, 0.0, 1.5}, {to_x, 0.0, 1.5}};
    cfg.trajectory.speed_mps = speed;
    cfg.tx = {0.0, 0.0, 4.0};
    return cfg;
}

void force_nlos(RunConfig& cfg) {
    cfg.scenario.los_prob_d1_m = 1e-12;
    cfg.scenario.los_prob_d2_m = 1e-12;
}

// 1. Pooled birth/death event frequency against 1 - exp(-lambda*dt).
void criterion_eq1_event_frequency() {
    std::ostringstream detail;
    bool ok = true;
    for (double lambda_dt : {0.1, 0.5, 1.0}) {
        ScenarioConfig cfg;
        cfg.lambda_c_per_s = lambda_dt;  // 1 s ticks
        std::mt19937_64 rng(2026);
        auto state = init_channel(flat_lsp(4, 4), LosState::nlos, {0, 0, 4}, {40, 0, 1.5},
                                  cfg, rng);
        const auto target = flat_lsp(4, 4);
        const int n = 100000;
        int events = 0;
        for (int k = 1; k <= n; ++k) {
            advance_ramps(state, cfg);
            const auto ev =
                apply_birth_death(state, target, static_cast<double>(k), cfg, rng);
            events += ev.kind != BirthDeathEvent::Kind::none ? 1 : 0;
        }
        const double expected = 1.0 - std::exp(-lambda_dt);
        const double rate = static_cast<double>(events) / n;
        detail << "lambda*dt=" << lambda_dt << " rate=" << rate << " vs " << expected << "; ";
        ok = ok && std::abs(rate - expected) <= 0.01;
    }
    report("1 birth/death event frequency follows 1-exp(-lambda*dt) within 0.01", ok,
           detail.str());
}

// 2. Along-path exponential filter autocorrelation.
void criterion_exponential_filter() {
    const double d_corr = 5.0;
    std::vector<Position> path;
    path.reserve(100000);
    for (int k = 0; k < 100000; ++k) {
        path.push_back({static_cast<double>(k), 0.0, 0.0});
    }
    const auto values = sample_ou_path(path, {d_corr, 424242, 1});
    const double lag1 = testutil::autocorr(values, 5);    // one correlation distance
    const double lag3 = testutil::autocorr(values, 15);   // three correlation distances
    std::ostringstream detail;
    detail << "rho(d_corr)=" << lag1 << " vs 0.368+-0.02, rho(3 d_corr)=" << lag3
           << " vs 0.050+-0.02";
    report("2 exponential spatial filter autocorrelation",
           std::abs(lag1 - 0.368) <= 0.02 && std::abs(lag3 - 0.050) <= 0.02, detail.str());
}

// 3. FSPL anchor at the 73.5 GHz carrier.
void criterion_fspl_anchor() {
    ScenarioConfig cfg;
    const double pl = path_loss_db(73.5e9, 1.0, LosState::los, 0.0, cfg);
    std::ostringstream detail;
    detail << "PL(73.5 GHz, 1 m) = " << pl << " dB vs 69.77 +- 0.01";
    report("3 FSPL close-in anchor", std::abs(pl - 69.77) <= 0.01, detail.str());
}

// 4. Grid consistency within a cell, independence across distant cells.
void criterion_grid_consistency() {
    ScenarioConfig cfg;
    const double cd = cfg.correlation_distance_cluster_count_m;
    const Position origin{};
    bool same_cell_ok = true;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        const FieldTable fields{seed};
        const GridIndex a = grid_of({1.0, 2.0, 1.5}, cd, origin);
        const GridIndex b = grid_of({6.9, 7.4, 1.5}, cd, origin);
        same_cell_ok = same_cell_ok && a == b &&
                       lsp_for_grid(a, LosState::nlos, cfg, fields).n_time_clusters ==
                           lsp_for_grid(b, LosState::nlos, cfg, fields).n_time_clusters;
    }
    std::vector<double> here;
    std::vector<double> far;
    for (uint64_t seed = 0; seed < 10000; ++seed) {
        const FieldTable fields{seed};
        here.push_back(static_cast<double>(
            lsp_for_grid({0, 0}, LosState::nlos, cfg, fields).n_time_clusters));
        far.push_back(static_cast<double>(
            lsp_for_grid({10, 0}, LosState::nlos, cfg, fields).n_time_clusters));
    }
    const double rho = testutil::pearson(here, far);
    std::ostringstream detail;
    detail << "same-cell identical=" << (same_cell_ok ? "yes" : "no")
           << ", cross-cell |rho|=" << std::abs(rho) << " vs < 0.05";
    report("4 grid cluster-count consistency vs independence",
           same_cell_ok && std::abs(rho) < 0.05, detail.str());
}

// 5. Path-loss increment variance beats independent redrawing by 4x.
void criterion_continuity_gain() {
    RunConfig cfg = straight_drive(10.0, 10010.0, 5.0);
    force_nlos(cfg);
    cfg.scenario.lambda_c_per_s = 0.0;  // channel events are irrelevant to PL
    const DriveResult result = run_drive(cfg, 0);
    std::vector<double> increments;
    for (std::size_t k = 1; k < result.log.ticks.size(); ++k) {
        increments.push_back(result.log.ticks[k].path_loss_db -
                             result.log.ticks[k - 1].path_loss_db);
    }
    const double var = testutil::variance(increments);
    const double sigma = cfg.scenario.sf_sigma_nlos_db;
    const double bound = 0.25 * 2.0 * sigma * sigma;
    std::ostringstream detail;
    detail << "var(1 m PL increments)=" << var << " dB^2 vs bound " << bound
           << " (independent redraw 2*sigma^2=" << 2 * sigma * sigma << ")";
    report("5 spatial-consistency gain over drop-based generation", var < bound, detail.str());
}

// 6. Median constant-count run length across Monte Carlo drives.
void criterion_table2_run_lengths() {
    RunConfig cfg = straight_drive(80.0, 5.0, 5.0);
    force_nlos(cfg);
    std::vector<double> run_lengths;
    for (int rep = 0; rep < 1000; ++rep) {
        const DriveResult result = run_drive(cfg, rep);
        std::vector<int> sampled;
        for (std::size_t k = 0; k < result.log.ticks.size(); k += 5) {  // every 5 m
            sampled.push_back(result.log.ticks[k].cluster_count);
        }
        int run = 1;
        for (std::size_t k = 1; k < sampled.size(); ++k) {
            if (sampled[k] == sampled[k - 1]) {
                ++run;
            } else {
                run_lengths.push_back(run);
                run = 1;
            }
        }
        run_lengths.push_back(run);
    }
    const double median = testutil::median(run_lengths);
    std::ostringstream detail;
    detail << "median run length = " << median << " samples (5 m spacing) vs >= 2";
    report("6 paired cluster-count pattern along 75 m drives", median >= 2.0, detail.str());
}

// 7. One-at-a-time evolution and weakest-cluster removal.
void criterion_one_at_a_time() {
    bool delta_ok = true;
    RunConfig cfg = straight_drive(80.0, 5.0, 5.0);
    force_nlos(cfg);
    cfg.scenario.lambda_c_per_s = 1.0;  // exercise events hard
    for (int rep = 0; rep < 1000 && delta_ok; ++rep) {
        const DriveResult result = run_drive(cfg, rep);
        for (std::size_t k = 1; k < result.log.ticks.size(); ++k) {
            const int delta = result.log.ticks[k].cluster_count -
                              result.log.ticks[k - 1].cluster_count;
            delta_ok = delta_ok && std::abs(delta) <= 1;
        }
    }

    // Direct argmin identity on the state the event decision sees.
    bool argmin_ok = true;
    int removals = 0;
    ScenarioConfig sc;
    sc.lambda_c_per_s = 0.7;
    std::mt19937_64 rng(99);
    auto state = init_channel(flat_lsp(4, 4), LosState::nlos, {0, 0, 4}, {40, 0, 1.5}, sc, rng);
    std::mt19937_64 target_rng(5);
    for (int k = 1; k <= 20000; ++k) {
        advance_ramps(state, sc);
        uint64_t weakest_id = 0;
        double weakest_power = 1e300;
        for (const TimeCluster& c : state.clusters) {
            if (!c.dying && c.power() < weakest_power) {
                weakest_power = c.power();
                weakest_id = c.id;
            }
        }
        const int target = 1 + static_cast<int>(target_rng() % 6);
        const auto ev = apply_birth_death(state, flat_lsp(target, 4),
                                          static_cast<double>(k), sc, rng);
        if (ev.kind == BirthDeathEvent::Kind::death ||
            ev.kind == BirthDeathEvent::Kind::replacement) {
            ++removals;
            argmin_ok = argmin_ok && ev.killed_id == weakest_id;
        }
    }
    std::ostringstream detail;
    detail << "per-tick |delta count| <= 1 over 1000 drives: " << (delta_ok ? "yes" : "no")
           << "; weakest-cluster identity on " << removals
           << " removals: " << (argmin_ok ? "yes" : "no");
    report("7 one-at-a-time evolution with weakest-cluster removal", delta_ok && argmin_ok,
           detail.str());
}

// 8. Incremental drift against closed-form fixed-scatterer geometry.
void criterion_geometric_drift() {
    ScenarioConfig cfg;
    const double range = 30.0;
    const double az0 = 45.0;
    ChannelState state;
    state.los = LosState::nlos;
    TimeCluster cluster;
    Subpath sp;
    sp.delay_s = range / kSpeedOfLight;
    sp.power = 1.0;
    sp.aoa_az_deg = az0;
    cluster.subpaths.push_back(sp);
    cluster.base_delay_s = sp.delay_s;
    state.clusters.push_back(cluster);

    const double sx = range * std::cos(az0 * M_PI / 180.0);
    const double sy = range * std::sin(az0 * M_PI / 180.0);
    const Position tx{500.0, 0.0, 1.5};

    double max_delay_err = 0.0;
    double max_aoa_err = 0.0;
    UpdateTick prev;
    prev.index = 0;
    prev.position = {0.0, 0.0, 1.5};
    for (int k = 1; k <= 10; ++k) {
        UpdateTick next;
        next.index = k;
        next.time_s = static_cast<double>(k);
        next.position = {static_cast<double>(k), 0.0, 1.5};
        evolve_small_scale(state, next, prev, tx, cfg);

        const double dx = sx - next.position.x;
        const double dy = sy - next.position.y;
        const double exact_delay = std::sqrt(dx * dx + dy * dy) / kSpeedOfLight;
        const double exact_aoa = std::atan2(dy, dx) * 180.0 / M_PI;
        const Subpath& s = state.clusters[0].subpaths[0];
        max_delay_err = std::max(max_delay_err,
                                 std::abs(s.delay_s - exact_delay) / exact_delay);
        double aoa_err = std::abs(s.aoa_az_deg - (exact_aoa < 0 ? exact_aoa + 360 : exact_aoa));
        aoa_err = std::min(aoa_err, 360.0 - aoa_err);
        max_aoa_err = std::max(max_aoa_err, aoa_err);
        prev = next;
    }
    std::ostringstream detail;
    detail << "max delay error " << max_delay_err * 100.0 << "% vs 1%, max AOA error "
           << max_aoa_err << " deg vs 1 deg";
    report("8 geometric drift oracle over a 10 m drive",
           max_delay_err < 0.01 && max_aoa_err < 1.0, detail.str());
}

// 9. Analysis round trip recovers ground-truth cluster counts.
void criterion_analysis_round_trip() {
    RunConfig cfg = straight_drive(60.0, 50.0, 5.0);
    force_nlos(cfg);
    cfg.scenario.cluster_min_gap_s = 200e-9;   // well-separated clusters
    cfg.scenario.cluster_decay_time_s = 1e-5;  // keep every cluster above the 20 dB floor
    cfg.scenario.intra_cluster_delay_mean_s = 1e-9;
    int eligible = 0;
    int recovered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const DriveResult result = run_drive(cfg, rep);
        for (std::size_t k = 0; k < result.log.ticks.size(); ++k) {
            const TickRecord& rec = result.log.ticks[k];
            bool ramping = false;
            for (const ClusterRecord& c : rec.clusters) {
                ramping = ramping || c.dying || c.ramp < 1.0;
            }
            if (ramping) {
                continue;  // birth/death transition window
            }
            ++eligible;
            const Pdp pdp = cir_to_pdp(result.cirs[k], 2e-9);
            const int counted = count_time_clusters(denoise(pdp, 20.0), 25e-9);
            recovered += counted == rec.cluster_count ? 1 : 0;
        }
    }
    const double frac = static_cast<double>(recovered) / std::max(1, eligible);
    std::ostringstream detail;
    detail << "recovered " << recovered << "/" << eligible << " = " << frac * 100.0
           << "% vs >= 95%";
    report("9 PDP analysis round trip on well-separated clusters", frac >= 0.95, detail.str());
}

// 10. Correlation-distance estimator round trips.
void criterion_estimator_round_trip() {
    std::vector<Position> path;
    path.reserve(10000);
    for (int k = 0; k < 10000; ++k) {
        path.push_back({static_cast<double>(k), 0.0, 0.0});
    }
    const auto ou = sample_ou_path(path, {7.5, 31337, 2});
    const double est_ou = estimate_correlation_distance({1.0, ou});

    std::mt19937_64 rng(12);
    const int values[] = {3, 4, 6};
    RouteSeries paired{5.0, {}};
    for (int block = 0; block < 5000; ++block) {
        const int v = values[rng() % 3];
        paired.values.push_back(v);
        paired.values.push_back(v);
    }
    const double est_paired = estimate_correlation_distance(paired);
    std::ostringstream detail;
    detail << "OU d_corr=7.5 m estimate " << est_ou << " vs 7.5 +- 1.0; paired pattern "
           << est_paired << " vs [5, 10]";
    report("10 correlation-distance estimator round trip",
           std::abs(est_ou - 7.5) <= 1.0 && est_paired >= 5.0 && est_paired <= 10.0,
           detail.str());
}

// 11. Single NLOS->LOS transition with frozen draws on an approach route.
void criterion_single_transition() {
    RunConfig base = straight_drive(81.5, 29.6, 5.0);
    base.scenario.los_prob_correlation_distance_m = 1e12;  // perfectly correlated draws

    bool at_most_one = true;
    bool direction_ok = true;
    int flip_rep = -1;
    std::size_t flip_tick = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const DriveResult result = run_drive(base, rep);
        int flips = 0;
        for (std::size_t k = 1; k < result.log.ticks.size(); ++k) {
            if (result.log.ticks[k].los != result.log.ticks[k - 1].los) {
                ++flips;
                direction_ok = direction_ok &&
                               result.log.ticks[k - 1].los == LosState::nlos &&
                               result.log.ticks[k].los == LosState::los;
                if (flip_rep < 0) {
                    flip_rep = rep;
                    flip_tick = k;
                }
            }
        }
        at_most_one = at_most_one && flips <= 1;
    }

    bool flip_behavior_ok = flip_rep >= 0;
    std::ostringstream detail;
    detail << "flips <= 1 over 50 drives: " << (at_most_one ? "yes" : "no")
           << ", all NLOS->LOS: " << (direction_ok ? "yes" : "no");
    if (flip_rep >= 0) {
        const DriveResult result = run_drive(base, flip_rep);
        const TickRecord& before = result.log.ticks[flip_tick - 1];
        const TickRecord& at = result.log.ticks[flip_tick];
        const double rx_power_before = -before.path_loss_db;
        const double rx_power_at = -at.path_loss_db;
        flip_behavior_ok = rx_power_at > rx_power_before &&
                           at.cluster_count >= before.cluster_count;
        detail << "; at flip (rep " << flip_rep << ", tick " << flip_tick
               << ") rx power " << rx_power_before << " -> " << rx_power_at
               << " dBm, clusters " << before.cluster_count << " -> " << at.cluster_count;
    } else {
        detail << "; no flip observed in 50 drives";
    }
    report("11 single NLOS->LOS transition with power and cluster gain",
           at_most_one && direction_ok && flip_behavior_ok, detail.str());
}

}  // namespace

int main() {
    criterion_eq1_event_frequency();
    criterion_exponential_filter();
    criterion_fspl_anchor();
    criterion_grid_consistency();
    criterion_continuity_gain();
    criterion_table2_run_lengths();
    criterion_one_at_a_time();
    criterion_geometric_drift();
    criterion_analysis_round_trip();
    criterion_estimator_round_trip();
    criterion_single_transition();

    std::cout << (g_failures == 0 ? "all criteria passed\n"
                                  : std::to_string(g_failures) + " criteria failed\n");
    return g_failures == 0 ? 0 : 1;
}
