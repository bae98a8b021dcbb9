#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "scsim/channel.hpp"
#include "scsim/geometry.hpp"
#include "scsim/large_scale.hpp"
#include "scsim/pdp.hpp"

namespace scsim {

struct EmitFlags {
    bool drive_log = true;
    bool pdps = false;
    bool analysis_report = false;
};

/// Parameters of the measurement-style analysis applied to simulator output.
struct AnalysisConfig {
    double bin_width_s = 2e-9;
    double denoise_threshold_db = 20.0;
    double min_void_s = 25e-9;
    bool align_first_arrival = false;  // subtract the first-arrival delay in emitted PDPs
};

/// Full run description; the resolved form (defaults included) is echoed into
/// every output artifact.
struct RunConfig {
    ScenarioConfig scenario;
    Trajectory trajectory;
    Position tx{0.0, 0.0, 4.0};
    double update_distance_m = 1.0;
    uint64_t seed = 1;
    int replicates = 1;
    std::string output_dir;
    EmitFlags emit;
    AnalysisConfig analysis;
    bool mc_identical_seeds = false;  // debug: disable per-replicate reseeding
};

/// Collects every violated range/ordering constraint; empty means valid.
std::vector<std::string> validate_config(const RunConfig& cfg);

nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

/// Deterministic per-replicate seed derivation from the master seed.
uint64_t replicate_seed(uint64_t master_seed, int replicate);

struct ClusterRecord {
    uint64_t id = 0;
    double delay_s = 0.0;
    double power = 0.0;  // raw subpath power sum, before the ramp weight
    double ramp = 1.0;
    bool dying = false;
};

struct TickRecord {
    int64_t tick = 0;
    double time_s = 0.0;
    Position position;
    GridIndex cell;
    LosState los = LosState::nlos;
    double distance_m = 0.0;
    double path_loss_db = 0.0;
    double shadow_fading_db = 0.0;
    int cluster_count = 0;  // non-dying clusters
    std::vector<ClusterRecord> clusters;
    double rms_delay_spread_s = 0.0;
    BirthDeathEvent event;
};

struct DriveLog {
    nlohmann::json config_echo;
    int replicate = 0;
    std::vector<TickRecord> ticks;
};

struct DriveResult {
    DriveLog log;
    std::vector<Cir> cirs;  // one per tick, in tick order
};

/// Runs one drive deterministically from (config, replicate seed).
DriveResult run_drive(const RunConfig& cfg, int replicate = 0);

/// One tick per line (NDJSON); first line is the resolved config.
std::string drive_log_to_ndjson(const DriveLog& log);

/// Writes the requested artifacts (drive log, per-tick PDP CSVs, analysis
/// report) for one replicate into cfg.output_dir.
void write_drive_artifacts(const DriveResult& result, const RunConfig& cfg);

struct McSummary {
    int replicates = 0;
    int64_t total_tick_events = 0;  // tick transitions pooled over replicates
    int64_t birth_death_events = 0;
    double event_rate = 0.0;  // birth_death_events / total_tick_events
    std::vector<double> distance_m;  // per tick
    std::vector<double> path_loss_mean_db;
    std::vector<double> path_loss_std_db;
    std::vector<double> cluster_count_mean;
    std::vector<double> cluster_count_std;
    std::vector<double> rms_delay_spread_mean_s;
    std::vector<double> rms_delay_spread_std_s;
    std::vector<double> los_fraction;
};

/// Runs cfg.replicates drives on a worker pool and aggregates per-tick
/// ensemble statistics plus the pooled birth/death event rate.
McSummary run_monte_carlo(const RunConfig& cfg);

nlohmann::json mc_summary_to_json(const McSummary& summary, const RunConfig& cfg);

}  // namespace scsim
