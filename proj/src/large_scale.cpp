#include "scsim/large_scale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scsim {

namespace {

// Inverse CDF of DiscreteUniform{lo..hi}.
int discrete_uniform(double u, const IntRange& range) {
    const int span = range.hi - range.lo + 1;
    const int k = range.lo + static_cast<int>(std::floor(u * span));
    return std::min(k, range.hi);
}

// Distinct sub-cells of counter space for the per-cluster subpath counts.
GridIndex salted(const GridIndex& cell, int salt) {
    // Cells lie within +-2^31 of the origin in practice, so packing the salt
    // into the high bits keeps distinct (cell, salt) pairs distinct.
    return {cell.i, cell.j + (static_cast<int64_t>(salt + 1) << 40)};
}

}  // namespace

double los_probability(double distance_m, const ScenarioConfig& cfg) {
    if (!(distance_m > 0.0)) {
        throw std::invalid_argument("LOS probability needs a positive distance");
    }
    const double d1 = cfg.los_prob_d1_m;
    const double d2 = cfg.los_prob_d2_m;
    const double e = std::exp(-distance_m / d2);
    const double inner = std::min(d1 / distance_m, 1.0) * (1.0 - e) + e;
    return inner * inner;
}

std::vector<LosState> los_state_along(const std::vector<UpdateTick>& ticks,
                                      const Position& tx, const ScenarioConfig& cfg,
                                      const FieldTable& fields) {
    if (ticks.empty()) {
        throw std::invalid_argument("los_state_along needs a non-empty tick list");
    }
    std::vector<Position> path;
    path.reserve(ticks.size());
    for (const UpdateTick& t : ticks) {
        path.push_back(t.position);
    }
    const auto spec = fields.spec(FieldId::los_draw, cfg.los_prob_correlation_distance_m);
    const std::vector<double> draws = sample_ou_path(path, spec);

    std::vector<LosState> states;
    states.reserve(ticks.size());
    for (std::size_t k = 0; k < ticks.size(); ++k) {
        const double d = tr_separation(tx, ticks[k].position);
        const double u = normal_cdf(draws[k]);
        states.push_back(u < los_probability(d, cfg) ? LosState::los : LosState::nlos);
    }
    return states;
}

LargeScaleParams lsp_for_grid(const GridIndex& cell, LosState los,
                              const ScenarioConfig& cfg, const FieldTable& fields) {
    const bool is_los = los == LosState::los;
    const double grid_d = cfg.correlation_distance_cluster_count_m;

    const auto tc_spec = fields.spec(
        is_los ? FieldId::time_cluster_count_los : FieldId::time_cluster_count_nlos, grid_d);
    const auto lobe_spec = fields.spec(
        is_los ? FieldId::spatial_lobe_count_los : FieldId::spatial_lobe_count_nlos, grid_d);
    const auto sp_spec = fields.spec(
        is_los ? FieldId::subpath_count_los : FieldId::subpath_count_nlos, grid_d);
    const auto ds_spec = fields.spec(
        is_los ? FieldId::delay_spread_los : FieldId::delay_spread_nlos, grid_d);
    const auto sf_spec = fields.spec(
        is_los ? FieldId::shadow_fading_los : FieldId::shadow_fading_nlos, grid_d);

    LargeScaleParams lsp;
    const IntRange tc_range = is_los ? cfg.time_cluster_range_los : cfg.time_cluster_range_nlos;
    lsp.n_time_clusters =
        std::min(discrete_uniform(cell_sample(cell, tc_spec).uniform, tc_range),
                 cfg.max_time_clusters);
    lsp.n_spatial_lobes = discrete_uniform(cell_sample(cell, lobe_spec).uniform,
                                           cfg.spatial_lobe_range);
    lsp.n_subpaths_per_cluster.reserve(lsp.n_time_clusters);
    for (int c = 0; c < lsp.n_time_clusters; ++c) {
        lsp.n_subpaths_per_cluster.push_back(
            discrete_uniform(cell_sample(salted(cell, c), sp_spec).uniform, cfg.subpath_range));
    }

    const double ds_median = is_los ? cfg.rms_ds_median_los_s : cfg.rms_ds_median_nlos_s;
    lsp.rms_delay_spread_s =
        ds_median * std::exp(cfg.rms_ds_sigma_ln * cell_sample(cell, ds_spec).gaussian);

    const double sf_sigma = is_los ? cfg.sf_sigma_los_db : cfg.sf_sigma_nlos_db;
    lsp.shadow_fading_db = sf_sigma * cell_sample(cell, sf_spec).gaussian;
    return lsp;
}

double free_space_path_loss_1m_db(double frequency_hz) {
    if (!(frequency_hz > 0.0)) {
        throw std::invalid_argument("carrier frequency must be positive");
    }
    return 20.0 * std::log10(4.0 * M_PI * frequency_hz / kSpeedOfLight);
}

double path_loss_db(double frequency_hz, double distance_m, LosState los,
                    double shadow_fading_db, const ScenarioConfig& cfg) {
    if (!(distance_m >= 1.0)) {
        throw std::invalid_argument("distance below the 1 m close-in reference");
    }
    const double n = los == LosState::los ? cfg.ple_los : cfg.ple_nlos;
    return free_space_path_loss_1m_db(frequency_hz) + 10.0 * n * std::log10(distance_m) +
           shadow_fading_db;
}

std::vector<double> shadow_fading_along(const std::vector<UpdateTick>& ticks,
                                        LosState state, const ScenarioConfig& cfg,
                                        const FieldTable& fields) {
    if (ticks.empty()) {
        throw std::invalid_argument("shadow_fading_along needs a non-empty tick list");
    }
    std::vector<Position> path;
    path.reserve(ticks.size());
    for (const UpdateTick& t : ticks) {
        path.push_back(t.position);
    }
    const bool is_los = state == LosState::los;
    const auto spec = fields.spec(
        is_los ? FieldId::shadow_fading_los : FieldId::shadow_fading_nlos,
        is_los ? cfg.correlation_distance_los_m : cfg.correlation_distance_nlos_m);
    const double sigma = is_los ? cfg.sf_sigma_los_db : cfg.sf_sigma_nlos_db;

    std::vector<double> sf = sample_ou_path(path, spec);
    for (double& v : sf) {
        v *= sigma;
    }
    return sf;
}

}  // namespace scsim
