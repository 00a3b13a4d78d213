#pragma once

#include <vector>

#include "duonav/waypoint.hpp"
#include "duonav/world.hpp"

namespace duonav {

struct ControlLimits {
    double v_max = 1.0;      // m/s
    double a_max = 1.0;      // m/s^2
    double omega_max = 1.5;  // rad/s
    // With the default cost weights the accelerating candidate only beats
    // the keep-speed one when w_d * dt > w_s - w_v, so dt must exceed 0.4 s
    // for the controller to ever speed up from rest.
    double dt = 0.5;         // s

    void validate() const;
};

struct ControlGains {
    double k_theta = 2.0;
    double w_dist = 1.0;
    double w_speed = 0.5;     // |v' - v| penalty
    double w_velocity = 0.1;  // high-speed reward
    double arrive_radius = 0.5;
};

// {v - a*dt, v, v + a*dt} clamped to [0, v_max], deduplicated, descending.
std::vector<double> candidate_speeds(double v, const ControlLimits& limits);

// Picks (v', omega) toward a waypoint given in the agent frame. Pure.
Command select_command(double v, const Waypoint& wp, const ControlLimits& limits,
                       const ControlGains& gains);

}  // namespace duonav
