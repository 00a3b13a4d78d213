#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "duonav/controller.hpp"
#include "duonav/planner.hpp"
#include "duonav/policy.hpp"

namespace duonav {

struct RunToggles {
    bool use_flow_head = true;  // false -> discrete chunk head drives the agent
    bool use_slow = true;       // slow planner on object / instruct episodes
    bool log_cot = true;
};

struct RunParams {
    SensorSpec sensor;
    ControlLimits limits;
    ControlGains gains;
    SlowConfig slow;
    RemoteConfig remote;
    RunToggles toggles;
    int context_frames = 20;
    int slow_period = 50;         // forced re-deliberation every K ticks
    double stall_dist = 0.1;      // meters of progress...
    int stall_window = 20;        // ...over this many ticks, else stalled
    double subgoal_radius = 0.6;  // subgoal arrival -> re-deliberate
    size_t memory_capacity = 512;
    double agent_radius = 0.15;
    bool use_cache = true;
    uint64_t rng_seed = 7;

    void validate() const;
};

struct TickRecord {
    int tick = 0;
    Pose2D pose;                 // before stepping
    Command cmd;
    WaypointSequence waypoints;  // agent frame at `pose`; empty in chunk mode
    ChunkAction chunk = ChunkAction::Stop;
    bool slow_ran = false;
    bool collided = false;
};

struct SlowEvent {
    int tick = 0;
    Pose2D pose;
    std::vector<Frontier> frontiers;  // as seen by the planner
    Deliberation decision;
};

struct EpisodeResult {
    bool success = false;
    std::string outcome;  // success | timeout | exhausted | error:<code>
    double path_length = 0.0;
    double shortest_len = 0.0;
    double final_goal_distance = 0.0;
    double min_goal_distance = std::numeric_limits<double>::infinity();
    int ticks = 0;
    // Per tick, world frame: heading of the first predicted waypoint vs. the
    // expert path heading (geodesic descent toward the goal).
    std::vector<double> pred_headings;
    std::vector<double> expert_headings;
    std::vector<TickRecord> trajectory;
    std::vector<SlowEvent> slow_events;
};

// Geodesic distance to the episode goal over the inflated free grid
// (multi-source for object goals). Infinity where unreachable.
struct DistanceField {
    Grid2D<double> dist;
    double resolution = 0.1;

    bool valid(const CellIdx& c) const {
        return dist.in_bounds(c) && std::isfinite(dist.at(c));
    }
    double at(const Vec2& p) const;
    // World-frame direction of steepest descent at p, smoothed by walking a
    // few cells downhill. Empty at sources and unreachable cells.
    std::optional<double> descent(const Vec2& p) const;
};

DistanceField goal_distance_field(const World& world, const Episode& ep,
                                  double inflate = 0.15);

EpisodeResult run_episode(const World& world, const Episode& ep, Policy& policy,
                          const RunParams& params);

struct LatencyReport {
    double mean_ms = 0.0;
    double p95_ms = 0.0;
    int ticks = 0;
};

// Wall time of the full fast tick (sense -> map -> context -> sample ->
// control), measured after warm-up on a scripted loop without the slow
// system.
LatencyReport fast_tick_latency(const World& world, const Episode& ep, Policy& policy,
                                const RunParams& params, int ticks = 500,
                                bool use_cache = true);

}  // namespace duonav
