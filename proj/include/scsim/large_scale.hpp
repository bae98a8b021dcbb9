#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scsim/geometry.hpp"
#include "scsim/spatial_field.hpp"

namespace scsim {

enum class LosState { los, nlos };

inline const char* to_string(LosState s) { return s == LosState::los ? "LOS" : "NLOS"; }

/// Closed discrete range [lo, hi] for count parameters.
struct IntRange {
    int lo = 1;
    int hi = 1;
};

/// Scenario parameters for the UMi street-canyon drive simulation.
/// Count distributions and PLE/SF/LOS-probability constants are configuration
/// defaults, overridable from the config file; correlation distances default
/// to 12 m (LOS) / 15 m (NLOS) with 7.5 m for the cluster-count grid.
struct ScenarioConfig {
    double carrier_frequency_hz = 73.5e9;
    std::string scenario = "UMi-street-canyon";

    double correlation_distance_los_m = 12.0;
    double correlation_distance_nlos_m = 15.0;
    double correlation_distance_cluster_count_m = 7.5;
    double los_prob_correlation_distance_m = 15.0;

    double ple_los = 2.0;
    double ple_nlos = 3.2;
    double sf_sigma_los_db = 4.0;
    double sf_sigma_nlos_db = 8.0;

    double los_prob_d1_m = 22.0;
    double los_prob_d2_m = 100.0;

    double lambda_c_per_s = 0.2;  // mean cluster birth/death rate
    int ramp_ticks = 3;           // updates a cluster takes to ramp in or out

    int max_time_clusters = 6;
    IntRange time_cluster_range_los{1, 3};
    IntRange time_cluster_range_nlos{1, 6};
    IntRange spatial_lobe_range{1, 5};
    IntRange subpath_range{1, 10};

    double rms_ds_median_los_s = 20e-9;
    double rms_ds_median_nlos_s = 50e-9;
    double rms_ds_sigma_ln = 0.3;  // lognormal shape of the per-cell delay spread

    double subpath_angle_std_deg = 10.0;    // azimuth offset around the lobe center
    double elevation_angle_std_deg = 5.0;   // fixed default elevation spread
    double intra_cluster_delay_mean_s = 2e-9;
    double cluster_decay_time_s = 0.0;  // power decay constant; 0 = 2x target delay spread
    double cluster_min_gap_s = 0.0;     // enforced inter-cluster void; 0 = off
};

/// One independent spatial field per large-scale quantity; LOS and NLOS
/// parameter sets come from distinct fields so a state flip re-draws them
/// spatially consistently.
enum class FieldId : uint32_t {
    shadow_fading_los = 1,
    shadow_fading_nlos,
    los_draw,
    time_cluster_count_los,
    time_cluster_count_nlos,
    spatial_lobe_count_los,
    spatial_lobe_count_nlos,
    subpath_count_los,
    subpath_count_nlos,
    delay_spread_los,
    delay_spread_nlos,
};

/// Handle bundling the run seed with the field-id allocation.
struct FieldTable {
    uint64_t global_seed = 0;

    CorrelatedFieldSpec spec(FieldId id, double correlation_distance_m) const {
        return {correlation_distance_m, global_seed, static_cast<uint32_t>(id)};
    }
};

/// Per-grid large-scale parameter bundle; constant within one cell.
struct LargeScaleParams {
    int n_time_clusters = 1;
    int n_spatial_lobes = 1;
    std::vector<int> n_subpaths_per_cluster;  // length n_time_clusters
    double rms_delay_spread_s = 0.0;
    double shadow_fading_db = 0.0;
};

/// Distance-squared LOS probability:
/// (min(d1/d,1)*(1-exp(-d/d2)) + exp(-d/d2))^2, non-increasing in d.
double los_probability(double distance_m, const ScenarioConfig& cfg);

/// Spatially correlated LOS/NLOS sequence along the route: a correlated
/// uniform draw per tick (OU path through the normal CDF) thresholded
/// against los_probability at the tick's TX distance.
std::vector<LosState> los_state_along(const std::vector<UpdateTick>& ticks,
                                      const Position& tx, const ScenarioConfig& cfg,
                                      const FieldTable& fields);

/// Deterministic per-cell LSP bundle for the given visibility state.
LargeScaleParams lsp_for_grid(const GridIndex& cell, LosState los,
                              const ScenarioConfig& cfg, const FieldTable& fields);

/// Free-space path loss at the 1 m close-in reference distance.
double free_space_path_loss_1m_db(double frequency_hz);

/// Close-in path loss: FSPL(f,1m) + 10*n*log10(d) + sf.
/// Throws for d below the 1 m reference distance.
double path_loss_db(double frequency_hz, double distance_m, LosState los,
                    double shadow_fading_db, const ScenarioConfig& cfg);

/// Spatially consistent shadow fading (dB) per tick for a fixed state:
/// sf_sigma * along-path unit Gaussian with the state's correlation distance.
std::vector<double> shadow_fading_along(const std::vector<UpdateTick>& ticks,
                                        LosState state, const ScenarioConfig& cfg,
                                        const FieldTable& fields);

}  // namespace scsim
