#include "scsim/pdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace scsim {

namespace {

double db10(double linear) { return 10.0 * std::log10(linear); }

long long bin_of(double delay_s, double bin_width_s) {
    return static_cast<long long>(std::floor(delay_s / bin_width_s));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) {
        fields.push_back(f);
    }
    return fields;
}

}  // namespace

double Pdp::peak() const {
    double p = 0.0;
    for (double v : powers) {
        p = std::max(p, v);
    }
    return p;
}

double Pdp::total_power() const {
    double p = 0.0;
    for (double v : powers) {
        p += v;
    }
    return p;
}

bool Pdp::empty() const { return total_power() <= 0.0; }

Pdp cir_to_pdp(const Cir& cir, double bin_width_s) {
    if (cir.taps.empty()) {
        throw std::invalid_argument("cir_to_pdp needs a non-empty CIR");
    }
    if (!(bin_width_s > 0.0)) {
        throw std::invalid_argument("bin width must be positive");
    }
    long long lo = std::numeric_limits<long long>::max();
    long long hi = std::numeric_limits<long long>::min();
    for (const CirTap& t : cir.taps) {
        const long long b = bin_of(t.delay_s, bin_width_s);
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    Pdp pdp;
    pdp.bin_width_s = bin_width_s;
    pdp.first_bin_delay_s = static_cast<double>(lo) * bin_width_s;
    pdp.powers.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const CirTap& t : cir.taps) {
        pdp.powers[static_cast<std::size_t>(bin_of(t.delay_s, bin_width_s) - lo)] +=
            std::norm(t.amplitude);
    }
    return pdp;
}

Pdp denoise(const Pdp& pdp, double threshold_db) {
    if (!(threshold_db > 0.0)) {
        throw std::invalid_argument("denoise threshold must be positive");
    }
    Pdp out = pdp;
    const double peak = pdp.peak();
    if (peak <= 0.0) {
        return out;  // all-zero PDP passes through unchanged
    }
    const double floor = peak * std::pow(10.0, -threshold_db / 10.0);
    for (double& v : out.powers) {
        if (v < floor) {
            v = 0.0;
        }
    }
    return out;
}

Pdp synthesize_omni(const std::vector<DirectionalPdp>& sweeps) {
    if (sweeps.empty()) {
        throw std::invalid_argument("synthesize_omni needs at least one sweep");
    }
    const double bw = sweeps.front().pdp.bin_width_s;
    long long lo = std::numeric_limits<long long>::max();
    long long hi = std::numeric_limits<long long>::min();
    for (const DirectionalPdp& d : sweeps) {
        const Pdp& p = d.pdp;
        if (std::abs(p.bin_width_s - bw) > 1e-15) {
            throw std::invalid_argument("sweeps disagree on bin width");
        }
        const double offset_bins = p.first_bin_delay_s / bw;
        if (std::abs(offset_bins - std::round(offset_bins)) > 1e-6) {
            throw std::invalid_argument("sweep bin grids are not aligned");
        }
        const long long start = static_cast<long long>(std::llround(offset_bins));
        lo = std::min(lo, start);
        hi = std::max(hi, start + static_cast<long long>(p.powers.size()) - 1);
    }
    Pdp omni;
    omni.bin_width_s = bw;
    omni.first_bin_delay_s = static_cast<double>(lo) * bw;
    omni.powers.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const DirectionalPdp& d : sweeps) {
        const long long start =
            static_cast<long long>(std::llround(d.pdp.first_bin_delay_s / bw));
        for (std::size_t k = 0; k < d.pdp.powers.size(); ++k) {
            omni.powers[static_cast<std::size_t>(start - lo) + k] += d.pdp.powers[k];
        }
    }
    return omni;
}

int count_time_clusters(const Pdp& pdp, double min_void_s) {
    if (!(min_void_s >= 0.0)) {
        throw std::invalid_argument("minimum void must be non-negative");
    }
    const long long void_bins =
        std::max<long long>(1, static_cast<long long>(std::ceil(min_void_s / pdp.bin_width_s)));
    int clusters = 0;
    long long gap = std::numeric_limits<long long>::max() / 2;  // leading gap is infinite
    for (double v : pdp.powers) {
        if (v > 0.0) {
            if (gap >= void_bins) {
                ++clusters;
            }
            gap = 0;
        } else {
            ++gap;
        }
    }
    return clusters;
}

double rms_delay_spread(const Pdp& pdp) {
    if (pdp.powers.empty()) {
        throw std::invalid_argument("rms_delay_spread needs a non-empty PDP");
    }
    double pt = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < pdp.powers.size(); ++k) {
        const double tau =
            pdp.first_bin_delay_s + (static_cast<double>(k) + 0.5) * pdp.bin_width_s;
        pt += pdp.powers[k];
        m1 += pdp.powers[k] * tau;
        m2 += pdp.powers[k] * tau * tau;
    }
    if (pt <= 0.0) {
        throw std::domain_error("rms delay spread undefined for zero total power");
    }
    return std::sqrt(std::max(0.0, m2 / pt - (m1 / pt) * (m1 / pt)));
}

double estimate_correlation_distance(const RouteSeries& series) {
    const std::size_t n = series.values.size();
    if (n < 10) {
        throw std::invalid_argument("correlation-distance estimate needs >= 10 values");
    }
    if (!(series.spacing_m > 0.0)) {
        throw std::invalid_argument("series spacing must be positive");
    }
    double mean = 0.0;
    for (double v : series.values) {
        mean += v;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : series.values) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(n);
    if (var == 0.0) {
        return std::numeric_limits<double>::infinity();  // constant series
    }

    const double threshold = std::exp(-1.0);
    double prev_rho = 1.0;
    const std::size_t max_lag = n - 2;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double cov = 0.0;
        for (std::size_t k = 0; k + lag < n; ++k) {
            cov += (series.values[k] - mean) * (series.values[k + lag] - mean);
        }
        cov /= static_cast<double>(n - lag);
        const double rho = cov / var;
        if (rho < threshold) {
            const double frac = (prev_rho - threshold) / (prev_rho - rho);
            return (static_cast<double>(lag - 1) + frac) * series.spacing_m;
        }
        prev_rho = rho;
    }
    return std::numeric_limits<double>::infinity();  // never decorrelates in range
}

std::vector<DirectionalPdp> sector_sweep_from_cir(const Cir& cir, double bin_width_s,
                                                  double hpbw_deg) {
    if (!(hpbw_deg > 0.0) || std::abs(360.0 / hpbw_deg - std::round(360.0 / hpbw_deg)) > 1e-9) {
        throw std::invalid_argument("sector width must divide 360 degrees");
    }
    const int sectors = static_cast<int>(std::llround(360.0 / hpbw_deg));
    // Shared bin grid across sectors keeps them synthesizable.
    const Pdp frame = cir_to_pdp(cir, bin_width_s);

    std::vector<DirectionalPdp> sweeps(static_cast<std::size_t>(sectors));
    for (int s = 0; s < sectors; ++s) {
        sweeps[static_cast<std::size_t>(s)].azimuth_deg = (s + 0.5) * hpbw_deg;
        Pdp& p = sweeps[static_cast<std::size_t>(s)].pdp;
        p.bin_width_s = bin_width_s;
        p.first_bin_delay_s = frame.first_bin_delay_s;
        p.powers.assign(frame.powers.size(), 0.0);
    }
    for (const CirTap& t : cir.taps) {
        const double az = std::fmod(std::fmod(t.aoa_az_deg, 360.0) + 360.0, 360.0);
        const int s = std::min(static_cast<int>(az / hpbw_deg), sectors - 1);
        const auto bin = static_cast<std::size_t>(
            std::floor(t.delay_s / bin_width_s) -
            std::floor(frame.first_bin_delay_s / bin_width_s));
        sweeps[static_cast<std::size_t>(s)].pdp.powers[bin] += std::norm(t.amplitude);
    }
    return sweeps;
}

void write_pdp_csv(std::ostream& out, const Pdp& pdp, std::optional<double> azimuth_deg,
                   const std::string& header_comment) {
    if (!header_comment.empty()) {
        out << "# " << header_comment << "\n";
    }
    out.precision(12);
    if (azimuth_deg) {
        out << "azimuth_deg,bin_width_ns,first_bin_ns\n";
        out << *azimuth_deg << ',' << pdp.bin_width_s * 1e9 << ','
            << pdp.first_bin_delay_s * 1e9 << "\n";
    } else {
        out << "bin_width_ns,first_bin_ns\n";
        out << pdp.bin_width_s * 1e9 << ',' << pdp.first_bin_delay_s * 1e9 << "\n";
    }
    for (std::size_t k = 0; k < pdp.powers.size(); ++k) {
        if (pdp.powers[k] <= 0.0) {
            continue;  // empty bins are implicit
        }
        const double tau_ns =
            (pdp.first_bin_delay_s + static_cast<double>(k) * pdp.bin_width_s) * 1e9;
        out << tau_ns << ',' << db10(pdp.powers[k]) << "\n";
    }
}

LoadedPdp read_pdp_csv(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        header = split_csv(line);
        break;
    }
    const bool directional = !header.empty() && header.front() == "azimuth_deg";
    if (header.empty() ||
        (!directional && (header.size() != 2 || header[0] != "bin_width_ns")) ||
        (directional && header.size() != 3)) {
        throw std::runtime_error("unrecognized PDP CSV header");
    }
    if (!std::getline(in, line)) {
        throw std::runtime_error("PDP CSV missing metadata row");
    }
    const auto meta = split_csv(line);
    if (meta.size() != header.size()) {
        throw std::runtime_error("PDP CSV metadata row does not match header");
    }

    LoadedPdp loaded;
    std::size_t at = 0;
    if (directional) {
        loaded.azimuth_deg = std::stod(meta[at++]);
    }
    loaded.pdp.bin_width_s = std::stod(meta[at++]) * 1e-9;
    loaded.pdp.first_bin_delay_s = std::stod(meta[at]) * 1e-9;
    if (!(loaded.pdp.bin_width_s > 0.0)) {
        throw std::runtime_error("PDP CSV has non-positive bin width");
    }

    std::vector<std::pair<long long, double>> rows;
    long long hi_bin = 0;
    const long long lo_bin =
        static_cast<long long>(std::llround(loaded.pdp.first_bin_delay_s / loaded.pdp.bin_width_s));
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto fields = split_csv(line);
        if (fields.size() != 2) {
            throw std::runtime_error("PDP CSV bin row needs delay_ns,power_dbm");
        }
        const double tau_s = std::stod(fields[0]) * 1e-9;
        const double power = std::pow(10.0, std::stod(fields[1]) / 10.0);
        const long long bin =
            static_cast<long long>(std::llround(tau_s / loaded.pdp.bin_width_s));
        rows.emplace_back(bin - lo_bin, power);
        hi_bin = std::max(hi_bin, bin - lo_bin);
    }
    loaded.pdp.powers.assign(static_cast<std::size_t>(hi_bin + 1), 0.0);
    for (const auto& [bin, power] : rows) {
        if (bin < 0) {
            throw std::runtime_error("PDP CSV bin precedes first_bin_ns");
        }
        loaded.pdp.powers[static_cast<std::size_t>(bin)] += power;
    }
    return loaded;
}

LoadedPdp read_pdp_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open PDP CSV: " + path);
    }
    try {
        return read_pdp_csv(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_pdp_csv_file(const std::string& path, const Pdp& pdp,
                        std::optional<double> azimuth_deg, const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write PDP CSV: " + path);
    }
    write_pdp_csv(out, pdp, azimuth_deg, header_comment);
}

RouteAnalysis analyze_route(const std::vector<Pdp>& location_pdps,
                            const std::vector<std::string>& labels, double spacing_m,
                            double threshold_db, double min_void_s) {
    RouteAnalysis out;
    out.spacing_m = spacing_m;
    std::vector<double> counts;
    std::vector<double> spreads;
    for (std::size_t k = 0; k < location_pdps.size(); ++k) {
        const Pdp clean = denoise(location_pdps[k], threshold_db);
        LocationAnalysis loc;
        loc.label = k < labels.size() ? labels[k] : std::to_string(k);
        loc.cluster_count = count_time_clusters(clean, min_void_s);
        loc.rms_delay_spread_s = clean.empty() ? 0.0 : rms_delay_spread(clean);
        loc.total_power = clean.total_power();
        counts.push_back(static_cast<double>(loc.cluster_count));
        spreads.push_back(loc.rms_delay_spread_s);
        out.locations.push_back(std::move(loc));
    }
    if (location_pdps.size() >= 10 && spacing_m > 0.0) {
        out.cluster_count_corr_dist_m =
            estimate_correlation_distance({spacing_m, counts});
        out.delay_spread_corr_dist_m =
            estimate_correlation_distance({spacing_m, spreads});
    } else {
        out.cluster_count_corr_dist_m = std::numeric_limits<double>::quiet_NaN();
        out.delay_spread_corr_dist_m = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

void write_analysis_report(std::ostream& out, const RouteAnalysis& analysis,
                           const std::string& config_echo) {
    out.precision(10);
    out << "report: pdp-route-analysis\n";
    if (!config_echo.empty()) {
        out << "config: " << config_echo << "\n";
    }
    out << "locations: " << analysis.locations.size() << "\n";
    out << "spacing_m: " << analysis.spacing_m << "\n";
    for (std::size_t k = 0; k < analysis.locations.size(); ++k) {
        const LocationAnalysis& loc = analysis.locations[k];
        out << "location." << k << ".label: " << loc.label << "\n";
        out << "location." << k << ".cluster_count: " << loc.cluster_count << "\n";
        out << "location." << k << ".rms_delay_spread_ns: " << loc.rms_delay_spread_s * 1e9
            << "\n";
        out << "location." << k << ".total_power_dbm: "
            << (loc.total_power > 0.0 ? db10(loc.total_power)
                                      : -std::numeric_limits<double>::infinity())
            << "\n";
    }
    out << "route.cluster_count_correlation_distance_m: "
        << analysis.cluster_count_corr_dist_m << "\n";
    out << "route.delay_spread_correlation_distance_m: " << analysis.delay_spread_corr_dist_m
        << "\n";
}

}  // namespace scsim
