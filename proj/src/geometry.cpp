#include "scsim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace scsim {

namespace {

double segment_length(const Position& a, const Position& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double dz = b.z - a.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void check_trajectory(const Trajectory& trajectory) {
    if (trajectory.waypoints.size() < 2) {
        throw std::invalid_argument("trajectory needs at least two waypoints");
    }
    if (!(trajectory.speed_mps > 0.0)) {
        throw std::invalid_argument("trajectory speed must be positive");
    }
    for (const Position& p : trajectory.waypoints) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
            throw std::invalid_argument("trajectory waypoint is not finite");
        }
        if (p.z < 0.0) {
            throw std::invalid_argument("trajectory waypoint below ground (z < 0)");
        }
    }
    for (std::size_t k = 1; k < trajectory.waypoints.size(); ++k) {
        if (segment_length(trajectory.waypoints[k - 1], trajectory.waypoints[k]) == 0.0) {
            throw std::invalid_argument("consecutive trajectory waypoints coincide");
        }
    }
}

Position lerp(const Position& a, const Position& b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, a.z + (b.z - a.z) * t};
}

Vec2 segment_heading(const Position& a, const Position& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double n = std::sqrt(dx * dx + dy * dy);
    if (n == 0.0) {
        return {1.0, 0.0};  // vertical-only segment; heading is undefined, pick +x
    }
    return {dx / n, dy / n};
}

}  // namespace

double tr_separation(const Position& tx, const Position& rx) {
    return segment_length(tx, rx);
}

double polyline_length(const Trajectory& trajectory) {
    double total = 0.0;
    for (std::size_t k = 1; k < trajectory.waypoints.size(); ++k) {
        total += segment_length(trajectory.waypoints[k - 1], trajectory.waypoints[k]);
    }
    return total;
}

std::vector<UpdateTick> build_update_schedule(const Trajectory& trajectory,
                                              double update_distance_m) {
    check_trajectory(trajectory);
    if (!(update_distance_m > 0.0)) {
        throw std::invalid_argument("update distance must be positive");
    }

    const auto& wp = trajectory.waypoints;
    const double total = polyline_length(trajectory);

    std::vector<UpdateTick> ticks;
    ticks.reserve(static_cast<std::size_t>(total / update_distance_m) + 2);

    std::size_t seg = 0;             // segment being walked, wp[seg] -> wp[seg+1]
    double seg_start = 0.0;          // arc length at the start of that segment
    double seg_len = segment_length(wp[0], wp[1]);

    // Relative tolerance keeps an exact-multiple route end from emitting twice.
    const double eps = 1e-9 * std::max(1.0, total);

    int64_t index = 0;
    double s = 0.0;
    while (true) {
        while (s >= seg_start + seg_len - eps && seg + 2 < wp.size()) {
            seg_start += seg_len;
            ++seg;
            seg_len = segment_length(wp[seg], wp[seg + 1]);
        }
        const double t = std::min(1.0, std::max(0.0, (s - seg_start) / seg_len));
        UpdateTick tick;
        tick.index = index;
        tick.time_s = s / trajectory.speed_mps;
        tick.position = lerp(wp[seg], wp[seg + 1], t);
        tick.heading = segment_heading(wp[seg], wp[seg + 1]);
        ticks.push_back(tick);

        if (s >= total - eps) {
            break;
        }
        ++index;
        s = std::min(s + update_distance_m, total);
        if (s > total - eps) {
            s = total;  // final tick lands exactly on the route end
        }
    }
    return ticks;
}

GridIndex grid_of(const Position& position, double correlation_distance_m,
                  const Position& origin) {
    if (!(correlation_distance_m > 0.0)) {
        throw std::invalid_argument("correlation distance must be positive");
    }
    return {static_cast<int64_t>(std::floor((position.x - origin.x) / correlation_distance_m)),
            static_cast<int64_t>(std::floor((position.y - origin.y) / correlation_distance_m))};
}

}  // namespace scsim
