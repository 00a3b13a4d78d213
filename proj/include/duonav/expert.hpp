#pragma once

#include <optional>
#include <vector>

#include "duonav/context.hpp"
#include "duonav/denoiser.hpp"
#include "duonav/waypoint.hpp"
#include "duonav/world.hpp"

namespace duonav {

struct ExpertParams {
    double stride = 0.5;           // meters between emitted steps and labels
    int horizon = 5;
    double frontier_eps = 0.2;     // chance of a non-nearest frontier pick
    int max_frontier_legs = 6;
    double approach_switch = 2.5;  // path meters left when the coord token kicks in
    double agent_radius = 0.15;
    SensorSpec sensor;
};

struct ExpertStep {
    Observation obs;
    WaypointSequence waypoints;  // agent frame of obs.pose
    std::vector<ChunkAction> chunk;
    std::vector<int> instruction;
    std::optional<CoordGoal> coord;
};

// Line-of-sight shortcutting of a grid path; output is a polyline of world
// points the agent disc can traverse.
std::vector<Vec2> smooth_path(const World& world, const std::vector<CellIdx>& cells,
                              double agent_radius);
std::vector<Vec2> smooth_path_points(const World& world, const std::vector<Vec2>& pts,
                                     double agent_radius);

// Walks the smoothed shortest path toward the episode goal, emitting one
// step per stride with waypoint and action-chunk labels.
std::vector<ExpertStep> expert_trajectory(const World& world, const Episode& ep,
                                          const ExpertParams& params);

// Exploration supervision: epsilon-greedy frontier walking over an online
// map, labeled with the same subtask tokens the deliberative layer emits.
std::vector<ExpertStep> frontier_trajectory(const World& world, const Pose2D& start,
                                            const ExpertParams& params, uint64_t seed);

}  // namespace duonav
