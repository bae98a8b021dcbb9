#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scsim/channel.hpp"

namespace scsim {

/// Binned power versus propagation delay, linear power per bin.
struct Pdp {
    double bin_width_s = 2e-9;       // default 2 ns (1 / 500 Mcps chip rate)
    double first_bin_delay_s = 0.0;  // delay of the first bin edge
    std::vector<double> powers;
    double noise_floor = 0.0;

    double peak() const;
    double total_power() const;
    bool empty() const;
};

/// A PDP recorded at one azimuth pointing angle.
struct DirectionalPdp {
    double azimuth_deg = 0.0;  // in [0,360)
    Pdp pdp;
};

/// A large-scale quantity sampled along a route at fixed spacing.
struct RouteSeries {
    double spacing_m = 1.0;
    std::vector<double> values;
};

/// Bins |amplitude|^2 by delay; taps sharing a bin add incoherently.
Pdp cir_to_pdp(const Cir& cir, double bin_width_s);

/// Zeroes bins more than threshold_db below the peak (default use: 20 dB).
Pdp denoise(const Pdp& pdp, double threshold_db);

/// Per-bin linear power sum across pointing angles. Sweeps must share the
/// bin width and lie on one bin grid.
Pdp synthesize_omni(const std::vector<DirectionalPdp>& sweeps);

/// Number of maximal runs of occupied bins separated by empty gaps of at
/// least min_void_s (default use: 25 ns). Expects a denoised PDP.
int count_time_clusters(const Pdp& pdp, double min_void_s);

/// Power-weighted second central moment of delay (square root of).
double rms_delay_spread(const Pdp& pdp);

/// Mean-removed normalized autocorrelation versus lag distance; returns the
/// smallest lag where it falls below 1/e, linearly interpolated between lag
/// points. A constant series signals infinite correlation (+inf).
double estimate_correlation_distance(const RouteSeries& series);

/// Splits a CIR into ideal hpbw_deg azimuth sectors (360/hpbw directional
/// PDPs); the sectors partition azimuth, so their linear sum is the omni PDP.
std::vector<DirectionalPdp> sector_sweep_from_cir(const Cir& cir, double bin_width_s,
                                                  double hpbw_deg);

// --- CSV schema ---------------------------------------------------------
// Line 1: column names  azimuth_deg,bin_width_ns,first_bin_ns
// Line 2: their values for this sweep
// Then one row per occupied bin: delay_ns,power_dbm
// Omni files drop the azimuth column. Lines starting with '#' are ignored.

struct LoadedPdp {
    std::optional<double> azimuth_deg;  // absent for omnidirectional files
    Pdp pdp;
};

void write_pdp_csv(std::ostream& out, const Pdp& pdp, std::optional<double> azimuth_deg,
                   const std::string& header_comment = {});
LoadedPdp read_pdp_csv(std::istream& in);
LoadedPdp read_pdp_csv_file(const std::string& path);
void write_pdp_csv_file(const std::string& path, const Pdp& pdp,
                        std::optional<double> azimuth_deg,
                        const std::string& header_comment = {});

// --- Route-level analysis -------------------------------------------------

struct LocationAnalysis {
    std::string label;
    int cluster_count = 0;
    double rms_delay_spread_s = 0.0;
    double total_power = 0.0;  // linear
};

struct RouteAnalysis {
    double spacing_m = 0.0;
    std::vector<LocationAnalysis> locations;
    // +inf = constant series, NaN = not estimable (too few locations)
    double cluster_count_corr_dist_m = 0.0;
    double delay_spread_corr_dist_m = 0.0;
};

/// Runs denoise/count/spread per location PDP and, given at least ten
/// locations, the route-level correlation-distance estimates.
RouteAnalysis analyze_route(const std::vector<Pdp>& location_pdps,
                            const std::vector<std::string>& labels, double spacing_m,
                            double threshold_db, double min_void_s);

/// Structured key-value report, one block per location plus route totals.
void write_analysis_report(std::ostream& out, const RouteAnalysis& analysis,
                           const std::string& config_echo);

}  // namespace scsim
