#include "scsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kDegPerRad = 57.29577951308232;

double wrap_deg(double a) {
    a = std::fmod(a, 360.0);
    return a < 0.0 ? a + 360.0 : a;
}

double wrap_phase(double p) {
    p = std::fmod(p, kTwoPi);
    return p < 0.0 ? p + kTwoPi : p;
}

double clamp_el(double el) { return std::clamp(el, -90.0, 90.0); }

// Power decay constant over excess delay.
double decay_time(const LargeScaleParams& lsp, const ScenarioConfig& cfg) {
    if (cfg.cluster_decay_time_s > 0.0) {
        return cfg.cluster_decay_time_s;
    }
    return std::max(2.0 * lsp.rms_delay_spread_s, 1e-12);
}

double first_arrival(const ChannelState& state) {
    double t = std::numeric_limits<double>::infinity();
    for (const TimeCluster& c : state.clusters) {
        for (const Subpath& s : c.subpaths) {
            t = std::min(t, s.delay_s);
        }
    }
    return t;
}

double cluster_end(const TimeCluster& c) {
    double t = c.base_delay_s;
    for (const Subpath& s : c.subpaths) {
        t = std::max(t, s.delay_s);
    }
    return t;
}

// Azimuth/elevation of the direction from `from` toward `to`.
void bearing(const Position& from, const Position& to, double& az_deg, double& el_deg) {
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    const double dz = to.z - from.z;
    const double h = std::sqrt(dx * dx + dy * dy);
    az_deg = wrap_deg(std::atan2(dy, dx) * kDegPerRad);
    el_deg = clamp_el(std::atan2(dz, h) * kDegPerRad);
}

// Makes sure the channel carries one lobe center set per the grid's lobe
// count; lobes persist between events so consecutive clusters share them.
void refresh_lobes(ChannelState& state, int n_lobes, std::mt19937_64& rng) {
    if (static_cast<int>(state.aoa_lobes_deg.size()) == n_lobes) {
        return;
    }
    std::uniform_real_distribution<double> uni(0.0, 360.0);
    state.aoa_lobes_deg.resize(static_cast<std::size_t>(n_lobes));
    state.aod_lobes_deg.resize(static_cast<std::size_t>(n_lobes));
    for (int l = 0; l < n_lobes; ++l) {
        state.aoa_lobes_deg[static_cast<std::size_t>(l)] = uni(rng);
        state.aod_lobes_deg[static_cast<std::size_t>(l)] = uni(rng);
    }
}

// Draws the subpaths of one cluster. A cluster is a group of rays off one
// scatterer, so all of its subpaths sit in a single spatial lobe.
TimeCluster make_cluster(const ChannelState& state, uint64_t id, double base_delay_s,
                         double excess_s, int n_subpaths, double gamma_s, int64_t birth_tick,
                         double ramp, const ScenarioConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::exponential_distribution<double> intra(1.0 / std::max(cfg.intra_cluster_delay_mean_s, 1e-15));
    std::normal_distribution<double> az_off(0.0, cfg.subpath_angle_std_deg);
    std::normal_distribution<double> el_off(0.0, cfg.elevation_angle_std_deg);

    const std::size_t n_lobes = state.aoa_lobes_deg.size();
    const auto lobe = std::min(static_cast<std::size_t>(uni(rng) * n_lobes), n_lobes - 1);
    const double aoa_lobe = state.aoa_lobes_deg[lobe];
    const double aod_lobe = state.aod_lobes_deg[lobe];

    TimeCluster cluster;
    cluster.id = id;
    cluster.base_delay_s = base_delay_s + excess_s;
    cluster.birth_tick = birth_tick;
    cluster.ramp = ramp;
    cluster.subpaths.reserve(static_cast<std::size_t>(n_subpaths));
    for (int s = 0; s < n_subpaths; ++s) {
        const double offset = s == 0 ? 0.0 : intra(rng);
        Subpath sp;
        sp.delay_s = cluster.base_delay_s + offset;
        sp.power = std::exp(-(excess_s + offset) / gamma_s);
        sp.aoa_az_deg = wrap_deg(aoa_lobe + az_off(rng));
        sp.aoa_el_deg = clamp_el(el_off(rng));
        sp.aod_az_deg = wrap_deg(aod_lobe + az_off(rng));
        sp.aod_el_deg = clamp_el(el_off(rng));
        sp.phase_rad = kTwoPi * uni(rng);
        cluster.subpaths.push_back(sp);
    }
    return cluster;
}

// Excess delay for a newly born cluster; respects the configured minimum
// inter-cluster void against the live delays when that knob is on.
double draw_birth_excess(const ChannelState& state, const LargeScaleParams& lsp,
                         const ScenarioConfig& cfg, std::mt19937_64& rng) {
    std::exponential_distribution<double> exc(1.0 / std::max(2.0 * lsp.rms_delay_spread_s, 1e-15));
    if (cfg.cluster_min_gap_s <= 0.0) {
        return exc(rng);
    }
    const double base = first_arrival(state);
    const double gap = cfg.cluster_min_gap_s;
    for (int attempt = 0; attempt < 100; ++attempt) {
        const double e = exc(rng);
        bool clear = true;
        for (const TimeCluster& c : state.clusters) {
            if (base + e < cluster_end(c) + gap && base + e > c.base_delay_s - gap) {
                clear = false;
                break;
            }
        }
        if (clear) {
            return e;
        }
    }
    double latest = 0.0;
    for (const TimeCluster& c : state.clusters) {
        latest = std::max(latest, cluster_end(c));
    }
    return latest - base + gap;
}

int subpath_count_for(const LargeScaleParams& lsp, uint64_t cluster_id) {
    const std::size_t n = lsp.n_subpaths_per_cluster.size();
    return n == 0 ? 1 : lsp.n_subpaths_per_cluster[cluster_id % n];
}

TimeCluster spawn_cluster(ChannelState& state, const LargeScaleParams& lsp,
                          const ScenarioConfig& cfg, std::mt19937_64& rng) {
    refresh_lobes(state, lsp.n_spatial_lobes, rng);
    const double base = first_arrival(state);
    const double excess = draw_birth_excess(state, lsp, cfg, rng);
    TimeCluster cluster = make_cluster(state, state.next_cluster_id, base, excess,
                                       subpath_count_for(lsp, state.next_cluster_id),
                                       decay_time(lsp, cfg), state.tick_index, 0.0, cfg, rng);
    ++state.next_cluster_id;
    return cluster;
}

// Index of the weakest non-dying cluster by ramp-weighted power.
std::size_t weakest_active(const ChannelState& state) {
    std::size_t best = state.clusters.size();
    double best_power = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < state.clusters.size(); ++k) {
        const TimeCluster& c = state.clusters[k];
        if (c.dying) {
            continue;
        }
        if (c.power() < best_power) {
            best_power = c.power();
            best = k;
        }
    }
    return best;
}

void set_los_geometry(Subpath& sp, const Position& tx, const Position& rx) {
    sp.delay_s = tr_separation(tx, rx) / kSpeedOfLight;
    bearing(rx, tx, sp.aoa_az_deg, sp.aoa_el_deg);
    bearing(tx, rx, sp.aod_az_deg, sp.aod_el_deg);
}

}  // namespace

double TimeCluster::raw_power() const {
    double p = 0.0;
    for (const Subpath& s : subpaths) {
        p += s.power;
    }
    return p;
}

double TimeCluster::power() const { return ramp * raw_power(); }

int ChannelState::active_cluster_count() const {
    int n = 0;
    for (const TimeCluster& c : clusters) {
        n += c.dying ? 0 : 1;
    }
    return n;
}

double Cir::total_power() const {
    double p = 0.0;
    for (const CirTap& t : taps) {
        p += std::norm(t.amplitude);
    }
    return p;
}

double birth_death_probability(double delta_t_s, double lambda_c_per_s) {
    if (delta_t_s < 0.0 || lambda_c_per_s < 0.0) {
        throw std::invalid_argument("birth/death probability needs non-negative inputs");
    }
    return 1.0 - std::exp(-lambda_c_per_s * delta_t_s);
}

ChannelState init_channel(const LargeScaleParams& lsp, LosState los, const Position& tx,
                          const Position& rx, const ScenarioConfig& cfg,
                          std::mt19937_64& rng) {
    if (lsp.n_time_clusters < 1 || lsp.n_spatial_lobes < 1 ||
        lsp.n_subpaths_per_cluster.size() != static_cast<std::size_t>(lsp.n_time_clusters)) {
        throw std::invalid_argument("invalid large-scale parameter bundle");
    }
    for (int m : lsp.n_subpaths_per_cluster) {
        if (m < 1) {
            throw std::invalid_argument("clusters need at least one subpath");
        }
    }

    ChannelState state;
    state.los = los;
    refresh_lobes(state, lsp.n_spatial_lobes, rng);
    const double base = tr_separation(tx, rx) / kSpeedOfLight;
    const double gamma = decay_time(lsp, cfg);
    std::exponential_distribution<double> exc(1.0 / std::max(2.0 * lsp.rms_delay_spread_s, 1e-15));

    for (int c = 0; c < lsp.n_time_clusters; ++c) {
        const double excess = c == 0 ? 0.0 : exc(rng);
        state.clusters.push_back(make_cluster(state, state.next_cluster_id, base, excess,
                                              lsp.n_subpaths_per_cluster[c], gamma, 0, 1.0,
                                              cfg, rng));
        ++state.next_cluster_id;
    }
    std::sort(state.clusters.begin(), state.clusters.end(),
              [](const TimeCluster& a, const TimeCluster& b) {
                  return a.base_delay_s < b.base_delay_s;
              });

    // Rescale the cluster excess delays so the realized power-weighted rms
    // delay spread hits the LSP target. With tap delay = base + s*e + o
    // (e cluster excess, o intra offset) the variance is quadratic in the
    // scale s, so the match is exact whenever at least two clusters exist.
    double pt = 0.0;
    double mo = 0.0, me = 0.0, moo = 0.0, moe = 0.0, mee = 0.0;
    for (const TimeCluster& c : state.clusters) {
        const double e = c.base_delay_s - base;
        for (const Subpath& s : c.subpaths) {
            const double o = s.delay_s - c.base_delay_s;
            pt += s.power;
            mo += s.power * o;
            me += s.power * e;
            moo += s.power * o * o;
            moe += s.power * o * e;
            mee += s.power * e * e;
        }
    }
    mo /= pt; me /= pt; moo /= pt; moe /= pt; mee /= pt;
    const double alpha = mee - me * me;       // inter-cluster variance at s = 1
    const double beta = moe - mo * me;
    const double intra_var = moo - mo * mo;
    const double target_sq = lsp.rms_delay_spread_s * lsp.rms_delay_spread_s;
    if (alpha > 1e-30 && target_sq > intra_var) {
        const double scale = (-beta + std::sqrt(beta * beta + alpha * (target_sq - intra_var))) / alpha;
        for (TimeCluster& c : state.clusters) {
            const double shift = (scale - 1.0) * (c.base_delay_s - base);
            c.base_delay_s += shift;
            for (Subpath& s : c.subpaths) {
                s.delay_s += shift;
            }
        }
    }

    // Optional enforced inter-cluster voids (clusters are in delay order here).
    if (cfg.cluster_min_gap_s > 0.0) {
        for (std::size_t k = 1; k < state.clusters.size(); ++k) {
            const double required =
                cluster_end(state.clusters[k - 1]) + cfg.cluster_min_gap_s;
            const double shift = required - state.clusters[k].base_delay_s;
            if (shift > 0.0) {
                state.clusters[k].base_delay_s += shift;
                for (Subpath& s : state.clusters[k].subpaths) {
                    s.delay_s += shift;
                }
            }
        }
    }

    if (los == LosState::los) {
        Subpath& sp = state.clusters.front().subpaths.front();
        sp.is_los = true;
        set_los_geometry(sp, tx, rx);
    }
    return state;
}

void advance_ramps(ChannelState& state, const ScenarioConfig& cfg) {
    const double step = 1.0 / std::max(1, cfg.ramp_ticks);
    bool removed = false;
    for (std::size_t k = 0; k < state.clusters.size();) {
        TimeCluster& c = state.clusters[k];
        if (c.dying) {
            c.ramp = std::max(0.0, c.ramp - step);
            if (c.ramp <= 0.0 && !removed) {
                state.clusters.erase(state.clusters.begin() +
                                     static_cast<std::ptrdiff_t>(k));
                removed = true;  // cap removals at one per tick
                continue;
            }
        } else if (c.ramp < 1.0) {
            c.ramp = std::min(1.0, c.ramp + step);
        }
        ++k;
    }
}

BirthDeathEvent apply_birth_death(ChannelState& state, const LargeScaleParams& target_lsp,
                                  double t_s, const ScenarioConfig& cfg,
                                  std::mt19937_64& rng) {
    const double p = birth_death_probability(t_s - state.last_update_time_s, cfg.lambda_c_per_s);
    state.last_update_time_s = t_s;

    BirthDeathEvent event;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    if (uni(rng) >= p) {
        return event;
    }

    const int target = std::clamp(target_lsp.n_time_clusters, 1, cfg.max_time_clusters);
    const int active = state.active_cluster_count();

    if (active <= target - 1) {
        TimeCluster born = spawn_cluster(state, target_lsp, cfg, rng);
        event.kind = BirthDeathEvent::Kind::birth;
        event.born_id = born.id;
        state.clusters.push_back(std::move(born));
        return event;
    }

    const std::size_t victim = weakest_active(state);
    if (victim >= state.clusters.size()) {
        return event;  // nothing alive to act on
    }
    if (active == target) {
        state.clusters[victim].dying = true;
        event.killed_id = state.clusters[victim].id;
        TimeCluster born = spawn_cluster(state, target_lsp, cfg, rng);
        event.kind = BirthDeathEvent::Kind::replacement;
        event.born_id = born.id;
        state.clusters.push_back(std::move(born));
    } else {
        state.clusters[victim].dying = true;
        event.killed_id = state.clusters[victim].id;
        event.kind = BirthDeathEvent::Kind::death;
    }
    return event;
}

void evolve_small_scale(ChannelState& state, const UpdateTick& tick,
                        const UpdateTick& prev_tick, const Position& tx,
                        const ScenarioConfig& cfg) {
    if (tick.index != prev_tick.index + 1) {
        throw std::invalid_argument("evolve_small_scale needs consecutive ticks");
    }
    const double dx = tick.position.x - prev_tick.position.x;
    const double dy = tick.position.y - prev_tick.position.y;
    const double moved = std::sqrt(dx * dx + dy * dy);
    const double mx = moved > 0.0 ? dx / moved : 0.0;
    const double my = moved > 0.0 ? dy / moved : 0.0;
    const double f = cfg.carrier_frequency_hz;

    for (TimeCluster& cluster : state.clusters) {
        for (Subpath& sp : cluster.subpaths) {
            if (sp.is_los) {
                const double old_delay = sp.delay_s;
                set_los_geometry(sp, tx, tick.position);
                sp.phase_rad = wrap_phase(sp.phase_rad - kTwoPi * f * (sp.delay_s - old_delay));
                continue;
            }
            if (moved == 0.0) {
                continue;
            }
            const double az_rad = sp.aoa_az_deg / kDegPerRad;
            const double ux = std::cos(az_rad);
            const double uy = std::sin(az_rad);
            const double cos_theta = ux * mx + uy * my;
            const double radial = moved * cos_theta;  // advance toward the arrival direction

            // Last-hop scatterer implied by the current AOA and delay (planar).
            const double range = kSpeedOfLight * sp.delay_s;
            const double sx = prev_tick.position.x + range * ux;
            const double sy = prev_tick.position.y + range * uy;
            sp.aoa_az_deg =
                wrap_deg(std::atan2(sy - tick.position.y, sx - tick.position.x) * kDegPerRad);

            // Floor guards the degenerate tick that steps past the scatterer.
            sp.delay_s = std::max(sp.delay_s - radial / kSpeedOfLight, 1e-12);
            sp.phase_rad = wrap_phase(sp.phase_rad + kTwoPi * f * radial / kSpeedOfLight);
        }
        double b = std::numeric_limits<double>::infinity();
        for (const Subpath& sp : cluster.subpaths) {
            b = std::min(b, sp.delay_s);
        }
        cluster.base_delay_s = b;
    }
}

Cir synthesize_cir(const ChannelState& state, const UpdateTick& tick, double path_loss_db) {
    Cir cir;
    cir.time_s = tick.time_s;
    cir.rx = tick.position;

    double total = 0.0;
    for (const TimeCluster& c : state.clusters) {
        total += c.power();
    }
    const double gain = std::pow(10.0, -path_loss_db / 20.0);
    for (const TimeCluster& c : state.clusters) {
        for (const Subpath& sp : c.subpaths) {
            CirTap tap;
            const double w = total > 0.0 ? c.ramp * sp.power / total : 0.0;
            tap.amplitude = std::sqrt(w) * gain *
                            std::complex<double>(std::cos(sp.phase_rad), std::sin(sp.phase_rad));
            tap.delay_s = sp.delay_s;
            tap.aoa_az_deg = sp.aoa_az_deg;
            tap.aoa_el_deg = sp.aoa_el_deg;
            tap.aod_az_deg = sp.aod_az_deg;
            tap.aod_el_deg = sp.aod_el_deg;
            cir.taps.push_back(tap);
        }
    }
    return cir;
}

StepResult step(ChannelState& state, const UpdateTick& tick, const UpdateTick& prev_tick,
                const Position& tx, const TickInputs& in, const ScenarioConfig& cfg,
                std::mt19937_64& rng) {
    state.tick_index = tick.index;
    const bool flip_to_los = in.los == LosState::los && state.los == LosState::nlos;
    const bool flip_to_nlos = in.los == LosState::nlos && state.los == LosState::los;
    state.los = in.los;
    state.current_cell = in.cell;

    if (flip_to_nlos) {
        for (TimeCluster& c : state.clusters) {
            for (Subpath& sp : c.subpaths) {
                sp.is_los = false;
            }
        }
    }

    advance_ramps(state, cfg);

    BirthDeathEvent event;
    if (flip_to_los) {
        // The LOS cluster enters via a forced birth that stands in for this
        // tick's event draw: zero excess delay, so the decay law makes it the
        // strongest cluster once ramped in.
        refresh_lobes(state, in.lsp.n_spatial_lobes, rng);
        const double los_delay = tr_separation(tx, tick.position) / kSpeedOfLight;
        TimeCluster born = make_cluster(state, state.next_cluster_id, los_delay, 0.0,
                                        subpath_count_for(in.lsp, state.next_cluster_id),
                                        decay_time(in.lsp, cfg), tick.index, 0.0, cfg, rng);
        ++state.next_cluster_id;
        Subpath& sp = born.subpaths.front();
        sp.is_los = true;
        set_los_geometry(sp, tx, tick.position);
        event.kind = BirthDeathEvent::Kind::forced_los_birth;
        event.born_id = born.id;
        state.clusters.push_back(std::move(born));
        state.last_update_time_s = tick.time_s;
    } else {
        event = apply_birth_death(state, in.lsp, tick.time_s, cfg, rng);
    }

    evolve_small_scale(state, tick, prev_tick, tx, cfg);

    const double d = tr_separation(tx, tick.position);
    const double pl =
        path_loss_db(cfg.carrier_frequency_hz, d, in.los, in.shadow_fading_db, cfg);
    return {synthesize_cir(state, tick, pl), event, pl};
}

}  // namespace scsim
