#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "scsim/geometry.hpp"

namespace scsim {

/// Identifies one independent, deterministic spatial random field.
/// Distinct field_ids under the same seed yield statistically independent fields.
struct CorrelatedFieldSpec {
    double correlation_distance_m = 15.0;
    uint64_t global_seed = 0;
    uint32_t field_id = 0;
};

/// A spatially consistent draw: standard-normal marginal plus its CDF companion.
struct FieldSample {
    double gaussian = 0.0;  // standard normal
    double uniform = 0.5;   // normal_cdf(gaussian), in [0,1)
};

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard-normal value pinned to the lattice vertex (vx, vy). Vertex values
/// are a pure function of (seed, field_id, vertex), never stored: adjacent
/// cells see identical values on their shared vertices, and memory stays O(1)
/// no matter how large the world gets.
double vertex_gaussian(const CorrelatedFieldSpec& spec, int64_t vx, int64_t vy);

/// The four vertex Gaussians of a cell in (sw, se, nw, ne) order.
std::array<double, 4> vertex_gaussians(const GridIndex& cell, const CorrelatedFieldSpec& spec);

/// Bilinear interpolation of the enclosing cell's vertex Gaussians, weights
/// renormalized so the marginal stays exactly standard normal; the uniform
/// component is the normal CDF of the result. Continuous everywhere,
/// including across cell borders (shared vertices).
FieldSample sample(const Position& position, const CorrelatedFieldSpec& spec);

/// One independent draw per grid cell (piecewise-constant field), used for
/// per-cell large-scale parameters.
FieldSample cell_sample(const GridIndex& cell, const CorrelatedFieldSpec& spec);

/// exp(-d / d_corr); the spatial exponential correlation at lag d.
double exp_correlation(double distance_m, double correlation_distance_m);

/// Gaussian sequence with exact exponential autocorrelation along a path:
/// v0 ~ N(0,1), vk = rho*vk-1 + sqrt(1-rho^2)*wk with rho = exp(-dk/d_corr)
/// and wk an i.i.d. standard-normal stream derived from (seed, field_id, k).
/// This is the 1-D exponential filter used for along-route quantities.
std::vector<double> sample_ou_path(const std::vector<Position>& positions,
                                   const CorrelatedFieldSpec& spec);

}  // namespace scsim
