#include "scsim/spatial_field.hpp"

#include <cmath>
#include <stdexcept>

namespace scsim {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Domains keep the vertex lattice, the per-cell draws, and the along-path
// innovation stream from ever colliding in counter space.
constexpr uint64_t kVertexDomain = 0x56455254;  // "VERT"
constexpr uint64_t kCellDomain = 0x43454C4C;    // "CELL"
constexpr uint64_t kPathDomain = 0x50415448;    // "PATH"

// splitmix64 finalizer; full-avalanche 64-bit mixer.
constexpr uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

uint64_t counter_hash(const CorrelatedFieldSpec& spec, uint64_t domain,
                      int64_t a, int64_t b, uint64_t word) {
    uint64_t h = mix64(spec.global_seed);
    h = mix64(h ^ ((static_cast<uint64_t>(spec.field_id) << 32) | domain));
    h = mix64(h ^ static_cast<uint64_t>(a));
    h = mix64(h ^ static_cast<uint64_t>(b));
    h = mix64(h ^ word);
    return h;
}

// Top 53 bits -> [0,1).
double to_unit(uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Box-Muller on two hashed uniforms; u1 shifted into (0,1] so log stays finite.
double gaussian_from(const CorrelatedFieldSpec& spec, uint64_t domain, int64_t a, int64_t b) {
    const double u1 =
        static_cast<double>((counter_hash(spec, domain, a, b, 0) >> 11) + 1) * 0x1.0p-53;
    const double u2 = to_unit(counter_hash(spec, domain, a, b, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

void check_spec(const CorrelatedFieldSpec& spec) {
    if (!(spec.correlation_distance_m > 0.0)) {
        throw std::invalid_argument("field correlation distance must be positive");
    }
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double vertex_gaussian(const CorrelatedFieldSpec& spec, int64_t vx, int64_t vy) {
    return gaussian_from(spec, kVertexDomain, vx, vy);
}

std::array<double, 4> vertex_gaussians(const GridIndex& cell, const CorrelatedFieldSpec& spec) {
    return {vertex_gaussian(spec, cell.i, cell.j),
            vertex_gaussian(spec, cell.i + 1, cell.j),
            vertex_gaussian(spec, cell.i, cell.j + 1),
            vertex_gaussian(spec, cell.i + 1, cell.j + 1)};
}

FieldSample sample(const Position& position, const CorrelatedFieldSpec& spec) {
    check_spec(spec);
    const double gx = position.x / spec.correlation_distance_m;
    const double gy = position.y / spec.correlation_distance_m;
    const auto i = static_cast<int64_t>(std::floor(gx));
    const auto j = static_cast<int64_t>(std::floor(gy));
    const double fx = gx - static_cast<double>(i);
    const double fy = gy - static_cast<double>(j);

    const std::array<double, 4> g = vertex_gaussians({i, j}, spec);
    const std::array<double, 4> w = {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy),
                                     (1.0 - fx) * fy, fx * fy};

    double num = 0.0;
    double wsq = 0.0;
    for (int k = 0; k < 4; ++k) {
        num += w[k] * g[k];
        wsq += w[k] * w[k];
    }
    FieldSample out;
    out.gaussian = num / std::sqrt(wsq);  // unit marginal variance
    out.uniform = normal_cdf(out.gaussian);
    return out;
}

FieldSample cell_sample(const GridIndex& cell, const CorrelatedFieldSpec& spec) {
    FieldSample out;
    out.gaussian = gaussian_from(spec, kCellDomain, cell.i, cell.j);
    out.uniform = normal_cdf(out.gaussian);
    return out;
}

double exp_correlation(double distance_m, double correlation_distance_m) {
    if (!(distance_m >= 0.0)) {
        throw std::invalid_argument("lag distance must be non-negative");
    }
    if (!(correlation_distance_m > 0.0)) {
        throw std::invalid_argument("correlation distance must be positive");
    }
    return std::exp(-distance_m / correlation_distance_m);
}

std::vector<double> sample_ou_path(const std::vector<Position>& positions,
                                   const CorrelatedFieldSpec& spec) {
    check_spec(spec);
    if (positions.empty()) {
        throw std::invalid_argument("sample_ou_path needs a non-empty path");
    }
    std::vector<double> values;
    values.reserve(positions.size());
    double v = gaussian_from(spec, kPathDomain, 0, 0);
    values.push_back(v);
    for (std::size_t k = 1; k < positions.size(); ++k) {
        const double d = tr_separation(positions[k - 1], positions[k]);
        const double rho = exp_correlation(d, spec.correlation_distance_m);
        const double w = gaussian_from(spec, kPathDomain, static_cast<int64_t>(k), 0);
        v = rho * v + std::sqrt(1.0 - rho * rho) * w;
        values.push_back(v);
    }
    return values;
}

}  // namespace scsim
