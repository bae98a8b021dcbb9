#pragma once

#include <cstdint>
#include <vector>

namespace scsim {

/// Free-space propagation speed in m/s.
inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Cartesian position in a fixed local frame; z is the antenna height above ground.
struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Piecewise-linear drive route traversed at constant speed.
/// Needs at least two waypoints; consecutive waypoints must be distinct.
struct Trajectory {
    std::vector<Position> waypoints;
    double speed_mps = 1.0;
};

/// One channel-update instant along the route.
/// Consecutive ticks are separated by the update distance along the polyline
/// (the final tick lands on the route end and may be closer).
struct UpdateTick {
    int64_t index = 0;
    double time_s = 0.0;
    Position position;
    Vec2 heading;  // unit direction of the segment currently being traversed
};

/// Cell coordinates of the square, axis-aligned spatial-consistency grid.
/// Cells are half-open: [i*d, (i+1)*d) x [j*d, (j+1)*d) with d the correlation distance.
struct GridIndex {
    int64_t i = 0;
    int64_t j = 0;
    friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// 3-D Euclidean TX-RX separation in meters.
double tr_separation(const Position& tx, const Position& rx);

/// Total arc length of the route polyline in meters.
double polyline_length(const Trajectory& trajectory);

/// Places update ticks at arc-length multiples of update_distance_m along the
/// route, including both endpoints. Throws std::invalid_argument on a
/// degenerate trajectory or non-positive update distance.
std::vector<UpdateTick> build_update_schedule(const Trajectory& trajectory,
                                              double update_distance_m);

/// Maps a position to its grid cell: floor((pos - origin) / correlation_distance)
/// componentwise in x and y. Height does not affect cell membership.
GridIndex grid_of(const Position& position, double correlation_distance_m,
                  const Position& origin);

}  // namespace scsim
