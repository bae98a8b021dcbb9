#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "scsim/geometry.hpp"
#include "scsim/large_scale.hpp"

namespace scsim {

/// One multipath component. Angles in degrees; azimuths in [0,360),
/// elevations in [-90,90]; phase in [0,2pi). Power is linear and relative
/// (absolute scale enters at CIR synthesis through the path loss).
struct Subpath {
    double delay_s = 0.0;
    double power = 0.0;
    double aoa_az_deg = 0.0;
    double aoa_el_deg = 0.0;
    double aod_az_deg = 0.0;
    double aod_el_deg = 0.0;
    double phase_rad = 0.0;
    bool is_los = false;  // the geometric LOS ray, tracked exactly
};

/// A group of subpaths attributed to one scatterer. ramp in [0,1] weights the
/// cluster power during its birth/death transition; a dying cluster ramps
/// down and is removed when it reaches zero.
struct TimeCluster {
    uint64_t id = 0;
    double base_delay_s = 0.0;
    std::vector<Subpath> subpaths;
    int64_t birth_tick = 0;
    double ramp = 1.0;
    bool dying = false;

    double raw_power() const;  // sum of subpath powers
    double power() const;      // ramp * raw_power()
};

/// Live channel across update ticks.
struct ChannelState {
    std::vector<TimeCluster> clusters;
    LosState los = LosState::nlos;
    double last_update_time_s = 0.0;  // t0 of the birth/death probability
    GridIndex current_cell{};
    uint64_t next_cluster_id = 0;
    int64_t tick_index = 0;
    // Azimuth lobe centers of the current grid; clusters draw their subpath
    // angles around one of these. Re-drawn when the grid's lobe count changes.
    std::vector<double> aoa_lobes_deg;
    std::vector<double> aod_lobes_deg;

    int active_cluster_count() const;  // clusters not marked dying
};

struct CirTap {
    std::complex<double> amplitude;  // linear volts
    double delay_s = 0.0;
    double aoa_az_deg = 0.0;
    double aoa_el_deg = 0.0;
    double aod_az_deg = 0.0;
    double aod_el_deg = 0.0;
};

/// Channel impulse response at one tick. Total tap power equals
/// 10^(-path_loss/10) by construction.
struct Cir {
    std::vector<CirTap> taps;
    double time_s = 0.0;
    Position rx;

    double total_power() const;
};

/// Outcome of the per-tick birth/death draw.
struct BirthDeathEvent {
    enum class Kind { none, birth, death, replacement, forced_los_birth };
    Kind kind = Kind::none;
    uint64_t born_id = 0;    // valid for birth/replacement/forced_los_birth
    uint64_t killed_id = 0;  // valid for death/replacement (cluster marked dying)
};

/// 1 - exp(-lambda_c * delta_t), the probability that a cluster birth/death
/// event occurs within delta_t of the last update.
double birth_death_probability(double delta_t_s, double lambda_c_per_s);

/// Builds the initial cluster set from the grid LSPs: first cluster at the
/// LOS delay, excess delays i.i.d. exponential rescaled so the realized rms
/// delay spread matches the LSP target, powers exponentially decaying in
/// excess delay, subpath angles around uniformly placed spatial lobes.
ChannelState init_channel(const LargeScaleParams& lsp, LosState los, const Position& tx,
                          const Position& rx, const ScenarioConfig& cfg,
                          std::mt19937_64& rng);

/// Per-update ramp bookkeeping: birthing clusters ramp toward 1, dying
/// clusters ramp toward 0; at most one fully ramped-down cluster is removed
/// per call so the cluster list never shrinks by more than one per tick.
void advance_ramps(ChannelState& state, const ScenarioConfig& cfg);

/// One Eq.-style event draw for this tick (t0 advances to t either way).
/// On an event: replacement if the active count matches the target, birth if
/// below, death if above; death and replacement mark the weakest active
/// cluster (minimum ramp-weighted power) as dying.
BirthDeathEvent apply_birth_death(ChannelState& state, const LargeScaleParams& target_lsp,
                                  double t_s, const ScenarioConfig& cfg,
                                  std::mt19937_64& rng);

/// Moves the receiver one tick: per subpath, delay and phase advance with the
/// radial speed toward the arrival direction, the AOA azimuth drifts as if
/// the last-hop scatterer were fixed, AODs stay put (static TX); the LOS
/// subpath is recomputed exactly from geometry.
void evolve_small_scale(ChannelState& state, const UpdateTick& tick,
                        const UpdateTick& prev_tick, const Position& tx,
                        const ScenarioConfig& cfg);

/// Emits the CIR: amplitude_i = sqrt(ramp*p_i / sum(ramp*p)) * 10^(-PL/20) * e^(j*phase).
Cir synthesize_cir(const ChannelState& state, const UpdateTick& tick, double path_loss_db);

/// Inputs the drive pipeline prepares for one tick.
struct TickInputs {
    LosState los = LosState::nlos;
    double shadow_fading_db = 0.0;
    GridIndex cell{};
    LargeScaleParams lsp;  // target LSP of that cell under that state
};

struct StepResult {
    Cir cir;
    BirthDeathEvent event;
    double path_loss_db = 0.0;
};

/// One full update: LOS state handover (an NLOS->LOS flip injects the LOS
/// cluster as a forced birth and stands in for this tick's event draw), ramp
/// advancement, birth/death, small-scale evolution, CIR synthesis.
StepResult step(ChannelState& state, const UpdateTick& tick, const UpdateTick& prev_tick,
                const Position& tx, const TickInputs& in, const ScenarioConfig& cfg,
                std::mt19937_64& rng);

}  // namespace scsim
