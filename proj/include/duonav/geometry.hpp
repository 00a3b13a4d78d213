#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "duonav/error.hpp"

namespace duonav {

inline constexpr double kPi = std::numbers::pi;

// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0.0)
        a += 2.0 * kPi;
    return a - kPi;
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // always kept in (-pi, pi]

    Vec2 position() const { return {x, y}; }
    Pose2D wrapped() const { return {x, y, wrap_angle(theta)}; }
};

// Heading represented as a point on the unit circle; continuous at pi/-pi.
inline std::pair<double, double> encode_heading(double theta) {
    return {std::sin(theta), std::cos(theta)};
}

// Normalizes (sin, cos) first, then recovers the angle. The zero vector has
// no heading.
inline double decode_heading(double sin_v, double cos_v) {
    double n = std::hypot(sin_v, cos_v);
    if (n < 1e-12)
        raise(ErrorCode::degenerate_input, "decode_heading: zero vector");
    return std::atan2(sin_v / n, cos_v / n);
}

// World point expressed in the agent frame: +x ahead, +y to the left.
inline Vec2 to_agent_frame(const Vec2& world_point, const Pose2D& agent) {
    double dx = world_point.x - agent.x;
    double dy = world_point.y - agent.y;
    double c = std::cos(agent.theta);
    double s = std::sin(agent.theta);
    return {c * dx + s * dy, -s * dx + c * dy};
}

inline Vec2 from_agent_frame(const Vec2& local_point, const Pose2D& agent) {
    double c = std::cos(agent.theta);
    double s = std::sin(agent.theta);
    return {agent.x + c * local_point.x - s * local_point.y,
            agent.y + s * local_point.x + c * local_point.y};
}

// Bearing of `target` as seen from `from`, relative to the +x axis (world
// frame angle).
inline double bearing(const Vec2& from, const Vec2& target) {
    return std::atan2(target.y - from.y, target.x - from.x);
}

}  // namespace duonav
