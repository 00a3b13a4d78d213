#pragma once

#include <vector>

#include "duonav/runner.hpp"

namespace duonav {

// Aggregates over a set of episode results. Always satisfies
// 0 <= SPL <= SR <= OS <= 1.
struct Metrics {
    double sr = 0.0;    // success rate
    double os = 0.0;    // oracle success: ever within the success radius
    double spl = 0.0;   // success weighted by path length
    double ne = 0.0;    // mean final distance to goal, meters
    double maoe = 0.0;  // mean absolute orientation error, radians
    int episodes = 0;
};

// Per-episode mean absolute wrapped error between the first predicted
// waypoint's heading and the expert path heading; 0 for tickless episodes.
double episode_maoe(const EpisodeResult& r);

Metrics compute_metrics(const std::vector<EpisodeResult>& results, double success_radius);

}  // namespace duonav
