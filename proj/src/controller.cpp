#include "duonav/controller.hpp"

#include <algorithm>
#include <cmath>

#include "duonav/error.hpp"

namespace duonav {

void ControlLimits::validate() const {
    if (v_max <= 0 || a_max <= 0 || omega_max <= 0 || dt <= 0)
        raise(ErrorCode::invalid_argument, "control limits must be positive");
}

std::vector<double> candidate_speeds(double v, const ControlLimits& limits) {
    limits.validate();
    if (v < 0 || v > limits.v_max)
        raise(ErrorCode::invalid_argument, "current speed outside [0, v_max]");
    double dv = limits.a_max * limits.dt;
    std::vector<double> cands = {std::clamp(v + dv, 0.0, limits.v_max), v,
                                 std::clamp(v - dv, 0.0, limits.v_max)};
    std::sort(cands.begin(), cands.end(), std::greater<>());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

Command select_command(double v, const Waypoint& wp, const ControlLimits& limits,
                       const ControlGains& gains) {
    limits.validate();
    double dist = std::sqrt(wp.x * wp.x + wp.y * wp.y);
    if (wp.completed() && dist < gains.arrive_radius) return {0.0, 0.0};

    double bearing = std::atan2(wp.y, wp.x);
    double omega = std::clamp(gains.k_theta * bearing, -limits.omega_max, limits.omega_max);

    double best_v = 0.0;
    double best_cost = 0.0;
    bool first = true;
    for (double cand : candidate_speeds(v, limits)) {
        // One dt of unicycle motion from the agent origin.
        double px, py;
        if (std::abs(omega) < 1e-9) {
            px = cand * limits.dt;
            py = 0.0;
        } else {
            px = cand / omega * std::sin(omega * limits.dt);
            py = cand / omega * (1.0 - std::cos(omega * limits.dt));
        }
        double after = std::hypot(wp.x - px, wp.y - py);
        double cost = gains.w_dist * after + gains.w_speed * std::abs(cand - v) -
                      gains.w_velocity * cand;
        // strict < keeps the faster candidate on ties (descending order)
        if (first || cost < best_cost) {
            first = false;
            best_cost = cost;
            best_v = cand;
        }
    }
    return {best_v, omega};
}

}  // namespace duonav
