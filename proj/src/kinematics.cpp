#include <cmath>

#include "duonav/error.hpp"
#include "duonav/world.hpp"

namespace duonav {

// Disc-vs-grid collision: true if any wall cell overlaps the agent disc.
bool disc_collides(const World& world, const Vec2& center, double radius) {
    const double res = world.resolution;
    int x0 = static_cast<int>(std::floor((center.x - radius) / res));
    int x1 = static_cast<int>(std::floor((center.x + radius) / res));
    int y0 = static_cast<int>(std::floor((center.y - radius) / res));
    int y1 = static_cast<int>(std::floor((center.y + radius) / res));
    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            if (!world.occ.in_bounds(cx, cy) || world.occ.at(cx, cy) != kCellFree) {
                // Closest point on the cell rect to the disc center.
                double px = std::clamp(center.x, cx * res, (cx + 1) * res);
                double py = std::clamp(center.y, cy * res, (cy + 1) * res);
                double dx = center.x - px;
                double dy = center.y - py;
                if (dx * dx + dy * dy < radius * radius) return true;
            }
        }
    }
    return false;
}

namespace {

Pose2D unicycle_at(const Pose2D& p, double v, double omega, double t) {
    if (std::abs(omega) < 1e-9) {
        return {p.x + v * t * std::cos(p.theta), p.y + v * t * std::sin(p.theta),
                p.theta};
    }
    double th = p.theta + omega * t;
    return {p.x + v / omega * (std::sin(th) - std::sin(p.theta)),
            p.y - v / omega * (std::cos(th) - std::cos(p.theta)), th};
}

}  // namespace

StepResult step_agent(const World& world, const Pose2D& pose, const Command& cmd,
                      double dt, double agent_radius) {
    if (dt <= 0)
        raise(ErrorCode::invalid_argument, "step_agent: dt must be positive");

    // Sample the exact arc finely and stop at the last collision-free sample.
    const double arc_len = std::abs(cmd.v) * dt;
    int steps = std::max(4, static_cast<int>(std::ceil(arc_len / (world.resolution * 0.25))));

    StepResult out{pose, false};
    for (int i = 1; i <= steps; ++i) {
        double t = dt * i / steps;
        Pose2D cand = unicycle_at(pose, cmd.v, cmd.omega, t);
        if (disc_collides(world, cand.position(), agent_radius)) {
            out.collided = true;
            break;
        }
        out.pose = cand;
    }
    out.pose = out.pose.wrapped();
    return out;
}

}  // namespace duonav
