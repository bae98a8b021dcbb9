#include "scsim/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace scsim {

namespace {

constexpr uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

nlohmann::json range_to_json(const IntRange& r) { return {r.lo, r.hi}; }

IntRange range_from_json(const nlohmann::json& j) {
    return {j.at(0).get<int>(), j.at(1).get<int>()};
}

nlohmann::json position_to_json(const Position& p) { return {p.x, p.y, p.z}; }

Position position_from_json(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

const char* event_kind_name(BirthDeathEvent::Kind kind) {
    switch (kind) {
        case BirthDeathEvent::Kind::birth: return "birth";
        case BirthDeathEvent::Kind::death: return "death";
        case BirthDeathEvent::Kind::replacement: return "replacement";
        case BirthDeathEvent::Kind::forced_los_birth: return "forced_los_birth";
        case BirthDeathEvent::Kind::none: break;
    }
    return "none";
}

// Power-weighted rms delay spread straight off the taps.
double cir_rms_delay_spread(const Cir& cir) {
    double pt = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (const CirTap& t : cir.taps) {
        const double p = std::norm(t.amplitude);
        pt += p;
        m1 += p * t.delay_s;
        m2 += p * t.delay_s * t.delay_s;
    }
    if (pt <= 0.0) {
        return 0.0;
    }
    return std::sqrt(std::max(0.0, m2 / pt - (m1 / pt) * (m1 / pt)));
}

void accumulate(std::vector<double>& mean, std::vector<double>& m2_accum,
                std::vector<int64_t>& count, std::size_t tick, double value) {
    // Welford, per tick slot.
    ++count[tick];
    const double delta = value - mean[tick];
    mean[tick] += delta / static_cast<double>(count[tick]);
    m2_accum[tick] += delta * (value - mean[tick]);
}

}  // namespace

std::vector<std::string> validate_config(const RunConfig& cfg) {
    std::vector<std::string> errors;
    const ScenarioConfig& sc = cfg.scenario;

    if (sc.carrier_frequency_hz < 0.8e9 || sc.carrier_frequency_hz > 100e9) {
        errors.push_back("scenario.carrier_frequency_hz outside the supported 0.8-100 GHz range");
    }
    const struct {
        const char* name;
        double value;
    } positive[] = {
        {"scenario.correlation_distance_los_m", sc.correlation_distance_los_m},
        {"scenario.correlation_distance_nlos_m", sc.correlation_distance_nlos_m},
        {"scenario.correlation_distance_cluster_count_m", sc.correlation_distance_cluster_count_m},
        {"scenario.los_prob_correlation_distance_m", sc.los_prob_correlation_distance_m},
        {"scenario.sf_sigma_los_db", sc.sf_sigma_los_db},
        {"scenario.sf_sigma_nlos_db", sc.sf_sigma_nlos_db},
        {"scenario.los_prob_d1_m", sc.los_prob_d1_m},
        {"scenario.los_prob_d2_m", sc.los_prob_d2_m},
        {"scenario.rms_ds_median_los_s", sc.rms_ds_median_los_s},
        {"scenario.rms_ds_median_nlos_s", sc.rms_ds_median_nlos_s},
        {"scenario.intra_cluster_delay_mean_s", sc.intra_cluster_delay_mean_s},
        {"update_distance_m", cfg.update_distance_m},
        {"analysis.bin_width_s", cfg.analysis.bin_width_s},
        {"analysis.denoise_threshold_db", cfg.analysis.denoise_threshold_db},
    };
    for (const auto& check : positive) {
        if (!(check.value > 0.0)) {
            errors.push_back(std::string(check.name) + " must be positive");
        }
    }
    if (sc.lambda_c_per_s < 0.0) {
        errors.push_back("scenario.lambda_c_per_s must be non-negative");
    }
    if (sc.ramp_ticks < 1) {
        errors.push_back("scenario.ramp_ticks must be at least 1");
    }
    if (sc.max_time_clusters < 1) {
        errors.push_back("scenario.max_time_clusters must be at least 1");
    }
    const struct {
        const char* name;
        IntRange range;
    } ranges[] = {
        {"scenario.time_cluster_range_los", sc.time_cluster_range_los},
        {"scenario.time_cluster_range_nlos", sc.time_cluster_range_nlos},
        {"scenario.spatial_lobe_range", sc.spatial_lobe_range},
        {"scenario.subpath_range", sc.subpath_range},
    };
    for (const auto& check : ranges) {
        if (check.range.lo < 1 || check.range.hi < check.range.lo) {
            errors.push_back(std::string(check.name) + " must satisfy 1 <= lo <= hi");
        }
    }

    // The update distance must stay well below every correlation distance;
    // small-scale updates sample within a grid, they do not span grids.
    const double min_corr =
        std::min({sc.correlation_distance_los_m, sc.correlation_distance_nlos_m,
                  sc.correlation_distance_cluster_count_m, sc.los_prob_correlation_distance_m});
    if (cfg.update_distance_m > min_corr) {
        std::ostringstream msg;
        msg << "update_distance_m (" << cfg.update_distance_m
            << ") exceeds the smallest correlation distance (" << min_corr
            << "); updates must sample within a consistency grid";
        errors.push_back(msg.str());
    }

    if (cfg.trajectory.waypoints.size() < 2) {
        errors.push_back("trajectory needs at least two waypoints");
    } else {
        try {
            (void)build_update_schedule(cfg.trajectory, cfg.update_distance_m);
        } catch (const std::exception& e) {
            errors.push_back(std::string("trajectory: ") + e.what());
        }
    }
    if (cfg.tx.z < 0.0) {
        errors.push_back("tx height must be non-negative");
    }
    if (cfg.replicates < 1) {
        errors.push_back("replicates must be at least 1");
    }
    if (cfg.analysis.min_void_s < 0.0) {
        errors.push_back("analysis.min_void_s must be non-negative");
    }
    return errors;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    const ScenarioConfig& sc = cfg.scenario;
    nlohmann::json scenario = {
        {"carrier_frequency_hz", sc.carrier_frequency_hz},
        {"scenario", sc.scenario},
        {"correlation_distance_los_m", sc.correlation_distance_los_m},
        {"correlation_distance_nlos_m", sc.correlation_distance_nlos_m},
        {"correlation_distance_cluster_count_m", sc.correlation_distance_cluster_count_m},
        {"los_prob_correlation_distance_m", sc.los_prob_correlation_distance_m},
        {"ple_los", sc.ple_los},
        {"ple_nlos", sc.ple_nlos},
        {"sf_sigma_los_db", sc.sf_sigma_los_db},
        {"sf_sigma_nlos_db", sc.sf_sigma_nlos_db},
        {"los_prob_d1_m", sc.los_prob_d1_m},
        {"los_prob_d2_m", sc.los_prob_d2_m},
        {"lambda_c_per_s", sc.lambda_c_per_s},
        {"ramp_ticks", sc.ramp_ticks},
        {"max_time_clusters", sc.max_time_clusters},
        {"time_cluster_range_los", range_to_json(sc.time_cluster_range_los)},
        {"time_cluster_range_nlos", range_to_json(sc.time_cluster_range_nlos)},
        {"spatial_lobe_range", range_to_json(sc.spatial_lobe_range)},
        {"subpath_range", range_to_json(sc.subpath_range)},
        {"rms_ds_median_los_s", sc.rms_ds_median_los_s},
        {"rms_ds_median_nlos_s", sc.rms_ds_median_nlos_s},
        {"rms_ds_sigma_ln", sc.rms_ds_sigma_ln},
        {"subpath_angle_std_deg", sc.subpath_angle_std_deg},
        {"elevation_angle_std_deg", sc.elevation_angle_std_deg},
        {"intra_cluster_delay_mean_s", sc.intra_cluster_delay_mean_s},
        {"cluster_decay_time_s", sc.cluster_decay_time_s},
        {"cluster_min_gap_s", sc.cluster_min_gap_s},
    };
    nlohmann::json waypoints = nlohmann::json::array();
    for (const Position& p : cfg.trajectory.waypoints) {
        waypoints.push_back(position_to_json(p));
    }
    return {
        {"scenario", scenario},
        {"trajectory", {{"waypoints", waypoints}, {"speed_mps", cfg.trajectory.speed_mps}}},
        {"tx", position_to_json(cfg.tx)},
        {"update_distance_m", cfg.update_distance_m},
        {"seed", cfg.seed},
        {"replicates", cfg.replicates},
        {"output_dir", cfg.output_dir},
        {"emit",
         {{"drive_log", cfg.emit.drive_log},
          {"pdps", cfg.emit.pdps},
          {"analysis_report", cfg.emit.analysis_report}}},
        {"analysis",
         {{"bin_width_s", cfg.analysis.bin_width_s},
          {"denoise_threshold_db", cfg.analysis.denoise_threshold_db},
          {"min_void_s", cfg.analysis.min_void_s},
          {"align_first_arrival", cfg.analysis.align_first_arrival}}},
        {"mc_identical_seeds", cfg.mc_identical_seeds},
    };
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    nlohmann::json merged = config_to_json(cfg);  // defaults
    merged.merge_patch(j);

    const nlohmann::json& sc = merged.at("scenario");
    ScenarioConfig& s = cfg.scenario;
    s.carrier_frequency_hz = sc.at("carrier_frequency_hz").get<double>();
    s.scenario = sc.at("scenario").get<std::string>();
    s.correlation_distance_los_m = sc.at("correlation_distance_los_m").get<double>();
    s.correlation_distance_nlos_m = sc.at("correlation_distance_nlos_m").get<double>();
    s.correlation_distance_cluster_count_m =
        sc.at("correlation_distance_cluster_count_m").get<double>();
    s.los_prob_correlation_distance_m = sc.at("los_prob_correlation_distance_m").get<double>();
    s.ple_los = sc.at("ple_los").get<double>();
    s.ple_nlos = sc.at("ple_nlos").get<double>();
    s.sf_sigma_los_db = sc.at("sf_sigma_los_db").get<double>();
    s.sf_sigma_nlos_db = sc.at("sf_sigma_nlos_db").get<double>();
    s.los_prob_d1_m = sc.at("los_prob_d1_m").get<double>();
    s.los_prob_d2_m = sc.at("los_prob_d2_m").get<double>();
    s.lambda_c_per_s = sc.at("lambda_c_per_s").get<double>();
    s.ramp_ticks = sc.at("ramp_ticks").get<int>();
    s.max_time_clusters = sc.at("max_time_clusters").get<int>();
    s.time_cluster_range_los = range_from_json(sc.at("time_cluster_range_los"));
    s.time_cluster_range_nlos = range_from_json(sc.at("time_cluster_range_nlos"));
    s.spatial_lobe_range = range_from_json(sc.at("spatial_lobe_range"));
    s.subpath_range = range_from_json(sc.at("subpath_range"));
    s.rms_ds_median_los_s = sc.at("rms_ds_median_los_s").get<double>();
    s.rms_ds_median_nlos_s = sc.at("rms_ds_median_nlos_s").get<double>();
    s.rms_ds_sigma_ln = sc.at("rms_ds_sigma_ln").get<double>();
    s.subpath_angle_std_deg = sc.at("subpath_angle_std_deg").get<double>();
    s.elevation_angle_std_deg = sc.at("elevation_angle_std_deg").get<double>();
    s.intra_cluster_delay_mean_s = sc.at("intra_cluster_delay_mean_s").get<double>();
    s.cluster_decay_time_s = sc.at("cluster_decay_time_s").get<double>();
    s.cluster_min_gap_s = sc.at("cluster_min_gap_s").get<double>();

    cfg.trajectory.waypoints.clear();
    for (const auto& wp : merged.at("trajectory").at("waypoints")) {
        cfg.trajectory.waypoints.push_back(position_from_json(wp));
    }
    cfg.trajectory.speed_mps = merged.at("trajectory").at("speed_mps").get<double>();
    cfg.tx = position_from_json(merged.at("tx"));
    cfg.update_distance_m = merged.at("update_distance_m").get<double>();
    cfg.seed = merged.at("seed").get<uint64_t>();
    cfg.replicates = merged.at("replicates").get<int>();
    cfg.output_dir = merged.at("output_dir").get<std::string>();
    cfg.emit.drive_log = merged.at("emit").at("drive_log").get<bool>();
    cfg.emit.pdps = merged.at("emit").at("pdps").get<bool>();
    cfg.emit.analysis_report = merged.at("emit").at("analysis_report").get<bool>();
    cfg.analysis.bin_width_s = merged.at("analysis").at("bin_width_s").get<double>();
    cfg.analysis.denoise_threshold_db =
        merged.at("analysis").at("denoise_threshold_db").get<double>();
    cfg.analysis.min_void_s = merged.at("analysis").at("min_void_s").get<double>();
    cfg.analysis.align_first_arrival =
        merged.at("analysis").at("align_first_arrival").get<bool>();
    cfg.mc_identical_seeds = merged.at("mc_identical_seeds").get<bool>();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return config_from_json(j);
}

uint64_t replicate_seed(uint64_t master_seed, int replicate) {
    return mix64(master_seed ^ mix64(static_cast<uint64_t>(replicate) + 1));
}

DriveResult run_drive(const RunConfig& cfg, int replicate) {
    const ScenarioConfig& sc = cfg.scenario;
    const uint64_t seed =
        cfg.mc_identical_seeds ? cfg.seed : replicate_seed(cfg.seed, replicate);
    const FieldTable fields{seed};
    std::mt19937_64 rng(mix64(seed ^ 0x5c5cULL));

    const std::vector<UpdateTick> ticks =
        build_update_schedule(cfg.trajectory, cfg.update_distance_m);
    const std::vector<LosState> los_seq = los_state_along(ticks, cfg.tx, sc, fields);
    const std::vector<double> sf_los = shadow_fading_along(ticks, LosState::los, sc, fields);
    const std::vector<double> sf_nlos = shadow_fading_along(ticks, LosState::nlos, sc, fields);

    DriveResult result;
    result.log.config_echo = config_to_json(cfg);
    result.log.replicate = replicate;
    result.log.ticks.reserve(ticks.size());
    result.cirs.reserve(ticks.size());

    ChannelState state;
    const Position origin{};
    for (std::size_t k = 0; k < ticks.size(); ++k) {
        const UpdateTick& tick = ticks[k];
        TickInputs in;
        in.los = los_seq[k];
        in.shadow_fading_db = in.los == LosState::los ? sf_los[k] : sf_nlos[k];
        in.cell = grid_of(tick.position, sc.correlation_distance_cluster_count_m, origin);
        in.lsp = lsp_for_grid(in.cell, in.los, sc, fields);

        Cir cir;
        BirthDeathEvent event;
        double pl = 0.0;
        if (k == 0) {
            state = init_channel(in.lsp, in.los, cfg.tx, tick.position, sc, rng);
            state.current_cell = in.cell;
            state.last_update_time_s = tick.time_s;
            const double d = tr_separation(cfg.tx, tick.position);
            pl = path_loss_db(sc.carrier_frequency_hz, d, in.los, in.shadow_fading_db, sc);
            cir = synthesize_cir(state, tick, pl);
        } else {
            StepResult sr = step(state, tick, ticks[k - 1], cfg.tx, in, sc, rng);
            cir = std::move(sr.cir);
            event = sr.event;
            pl = sr.path_loss_db;
        }

        TickRecord rec;
        rec.tick = tick.index;
        rec.time_s = tick.time_s;
        rec.position = tick.position;
        rec.cell = in.cell;
        rec.los = in.los;
        rec.distance_m = tr_separation(cfg.tx, tick.position);
        rec.path_loss_db = pl;
        rec.shadow_fading_db = in.shadow_fading_db;
        rec.cluster_count = state.active_cluster_count();
        rec.clusters.reserve(state.clusters.size());
        for (const TimeCluster& c : state.clusters) {
            rec.clusters.push_back({c.id, c.base_delay_s, c.raw_power(), c.ramp, c.dying});
        }
        rec.rms_delay_spread_s = cir_rms_delay_spread(cir);
        rec.event = event;
        result.log.ticks.push_back(std::move(rec));
        result.cirs.push_back(std::move(cir));
    }
    return result;
}

std::string drive_log_to_ndjson(const DriveLog& log) {
    std::ostringstream out;
    nlohmann::json header = {{"config", log.config_echo}, {"replicate", log.replicate}};
    out << header.dump() << "\n";
    for (const TickRecord& rec : log.ticks) {
        nlohmann::json clusters = nlohmann::json::array();
        for (const ClusterRecord& c : rec.clusters) {
            clusters.push_back({{"id", c.id},
                                {"delay_ns", c.delay_s * 1e9},
                                {"power", c.power},
                                {"ramp", c.ramp},
                                {"dying", c.dying}});
        }
        nlohmann::json j = {
            {"tick", rec.tick},
            {"time_s", rec.time_s},
            {"position", position_to_json(rec.position)},
            {"cell", {rec.cell.i, rec.cell.j}},
            {"los", to_string(rec.los)},
            {"distance_m", rec.distance_m},
            {"path_loss_db", rec.path_loss_db},
            {"shadow_fading_db", rec.shadow_fading_db},
            {"cluster_count", rec.cluster_count},
            {"clusters", clusters},
            {"rms_delay_spread_ns", rec.rms_delay_spread_s * 1e9},
        };
        if (rec.event.kind != BirthDeathEvent::Kind::none) {
            nlohmann::json ev = {{"kind", event_kind_name(rec.event.kind)}};
            if (rec.event.kind != BirthDeathEvent::Kind::death) {
                ev["born_id"] = rec.event.born_id;
            }
            if (rec.event.kind == BirthDeathEvent::Kind::death ||
                rec.event.kind == BirthDeathEvent::Kind::replacement) {
                ev["killed_id"] = rec.event.killed_id;
            }
            j["event"] = ev;
        }
        out << j.dump() << "\n";
    }
    return out.str();
}

void write_drive_artifacts(const DriveResult& result, const RunConfig& cfg) {
    namespace fs = std::filesystem;
    const fs::path dir = cfg.output_dir.empty() ? fs::path(".") : fs::path(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                 ec.message());
    }
    const int rep = result.log.replicate;
    const std::string config_echo = result.log.config_echo.dump();

    if (cfg.emit.drive_log) {
        const fs::path path = dir / ("drive_r" + std::to_string(rep) + ".ndjson");
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write drive log: " + path.string());
        }
        out << drive_log_to_ndjson(result.log);
    }

    std::vector<Pdp> pdps;
    if (cfg.emit.pdps || cfg.emit.analysis_report) {
        pdps.reserve(result.cirs.size());
        for (const Cir& cir : result.cirs) {
            Pdp pdp = cir_to_pdp(cir, cfg.analysis.bin_width_s);
            if (cfg.analysis.align_first_arrival) {
                pdp.first_bin_delay_s = 0.0;
            }
            pdps.push_back(std::move(pdp));
        }
    }

    if (cfg.emit.pdps) {
        for (std::size_t k = 0; k < pdps.size(); ++k) {
            char name[64];
            std::snprintf(name, sizeof(name), "pdp_r%d_t%05zu.csv", rep, k);
            write_pdp_csv_file((dir / name).string(), pdps[k], std::nullopt, config_echo);
        }
    }

    if (cfg.emit.analysis_report) {
        std::vector<std::string> labels;
        labels.reserve(result.log.ticks.size());
        for (const TickRecord& rec : result.log.ticks) {
            labels.push_back("tick " + std::to_string(rec.tick));
        }
        const RouteAnalysis analysis =
            analyze_route(pdps, labels, cfg.update_distance_m,
                          cfg.analysis.denoise_threshold_db, cfg.analysis.min_void_s);
        const fs::path path = dir / ("analysis_r" + std::to_string(rep) + ".txt");
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write analysis report: " + path.string());
        }
        write_analysis_report(out, analysis, config_echo);
    }
}

McSummary run_monte_carlo(const RunConfig& cfg) {
    if (cfg.replicates < 1) {
        throw std::invalid_argument("Monte Carlo run needs at least one replicate");
    }
    std::vector<DriveLog> logs(static_cast<std::size_t>(cfg.replicates));

    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(),
                                                   static_cast<unsigned>(cfg.replicates)));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int r = next.fetch_add(1); r < cfg.replicates; r = next.fetch_add(1)) {
                try {
                    logs[static_cast<std::size_t>(r)] = run_drive(cfg, r).log;
                } catch (...) {
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failed.load()) {
        throw std::runtime_error("a Monte Carlo replicate failed");
    }

    const std::size_t n_ticks = logs.front().ticks.size();
    McSummary s;
    s.replicates = cfg.replicates;
    s.distance_m.resize(n_ticks, 0.0);
    s.path_loss_mean_db.assign(n_ticks, 0.0);
    s.path_loss_std_db.assign(n_ticks, 0.0);
    s.cluster_count_mean.assign(n_ticks, 0.0);
    s.cluster_count_std.assign(n_ticks, 0.0);
    s.rms_delay_spread_mean_s.assign(n_ticks, 0.0);
    s.rms_delay_spread_std_s.assign(n_ticks, 0.0);
    s.los_fraction.assign(n_ticks, 0.0);

    std::vector<double> pl_m2(n_ticks, 0.0);
    std::vector<double> cc_m2(n_ticks, 0.0);
    std::vector<double> ds_m2(n_ticks, 0.0);
    std::vector<int64_t> counts(n_ticks, 0);
    std::vector<int64_t> cc_counts(n_ticks, 0);
    std::vector<int64_t> ds_counts(n_ticks, 0);

    for (const DriveLog& log : logs) {
        for (std::size_t k = 0; k < n_ticks; ++k) {
            const TickRecord& rec = log.ticks[k];
            s.distance_m[k] = rec.distance_m;
            accumulate(s.path_loss_mean_db, pl_m2, counts, k, rec.path_loss_db);
            accumulate(s.cluster_count_mean, cc_m2, cc_counts, k,
                       static_cast<double>(rec.cluster_count));
            accumulate(s.rms_delay_spread_mean_s, ds_m2, ds_counts, k, rec.rms_delay_spread_s);
            s.los_fraction[k] += rec.los == LosState::los ? 1.0 : 0.0;
            if (k > 0) {
                ++s.total_tick_events;
                const auto kind = rec.event.kind;
                if (kind == BirthDeathEvent::Kind::birth ||
                    kind == BirthDeathEvent::Kind::death ||
                    kind == BirthDeathEvent::Kind::replacement) {
                    ++s.birth_death_events;
                }
            }
        }
    }
    for (std::size_t k = 0; k < n_ticks; ++k) {
        const double n = static_cast<double>(counts[k]);
        s.path_loss_std_db[k] = counts[k] > 1 ? std::sqrt(pl_m2[k] / (n - 1.0)) : 0.0;
        s.cluster_count_std[k] = counts[k] > 1 ? std::sqrt(cc_m2[k] / (n - 1.0)) : 0.0;
        s.rms_delay_spread_std_s[k] = counts[k] > 1 ? std::sqrt(ds_m2[k] / (n - 1.0)) : 0.0;
        s.los_fraction[k] /= static_cast<double>(cfg.replicates);
    }
    s.event_rate = s.total_tick_events > 0
                       ? static_cast<double>(s.birth_death_events) /
                             static_cast<double>(s.total_tick_events)
                       : 0.0;
    return s;
}

nlohmann::json mc_summary_to_json(const McSummary& summary, const RunConfig& cfg) {
    return {
        {"config", config_to_json(cfg)},
        {"replicates", summary.replicates},
        {"total_tick_events", summary.total_tick_events},
        {"birth_death_events", summary.birth_death_events},
        {"event_rate", summary.event_rate},
        {"distance_m", summary.distance_m},
        {"path_loss_mean_db", summary.path_loss_mean_db},
        {"path_loss_std_db", summary.path_loss_std_db},
        {"cluster_count_mean", summary.cluster_count_mean},
        {"cluster_count_std", summary.cluster_count_std},
        {"rms_delay_spread_mean_s", summary.rms_delay_spread_mean_s},
        {"rms_delay_spread_std_s", summary.rms_delay_spread_std_s},
        {"los_fraction", summary.los_fraction},
    };
}

}  // namespace scsim
