#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "duonav/geometry.hpp"
#include "duonav/grid.hpp"
#include "duonav/vocab.hpp"

namespace duonav {

inline constexpr uint8_t kCellFree = 0;
inline constexpr uint8_t kCellWall = 1;

struct WorldSpec {
    double size_m = 12.0;
    int room_count = 5;
    double object_density = 0.05;  // objects per m^2 of floor
    double resolution = 0.1;       // meters per cell
};

struct Room {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // interior cell rect, [x0,x1) x [y0,y1)
    RoomLabel label = RoomLabel::hallway;

    bool contains(const CellIdx& c) const {
        return c.x >= x0 && c.x < x1 && c.y >= y0 && c.y < y1;
    }
    double area_m2(double res) const {
        return (x1 - x0) * (y1 - y0) * res * res;
    }
};

struct WorldObject {
    Vec2 pos;
    Category category = Category::bed;
    int room_id = -1;
    double radius = 0.25;
};

struct World {
    Grid2D<uint8_t> occ;  // kCellFree / kCellWall
    double resolution = 0.1;
    std::vector<Room> rooms;
    std::vector<WorldObject> objects;
    uint64_t seed = 0;
    double size_m = 0.0;

    CellIdx cell_of(const Vec2& p) const {
        return {static_cast<int>(std::floor(p.x / resolution)),
                static_cast<int>(std::floor(p.y / resolution))};
    }
    Vec2 center_of(const CellIdx& c) const {
        return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
    }
    bool occupied(const CellIdx& c) const {
        return !occ.in_bounds(c) || occ.at(c) != kCellFree;
    }
    bool occupied(const Vec2& p) const { return occupied(cell_of(p)); }
    int room_at(const Vec2& p) const {
        CellIdx c = cell_of(p);
        for (size_t i = 0; i < rooms.size(); ++i)
            if (rooms[i].contains(c)) return static_cast<int>(i);
        return -1;
    }
};

struct SensorSpec {
    int rays = 32;
    double fov = 2.0 * kPi / 3.0;  // radians
    double max_range = 5.0;        // meters
    int patch = 9;                 // egocentric occupancy crop, patch x patch
    double patch_res = 0.2;        // meters per patch cell

    // Angular offset of ray i relative to the agent heading.
    double ray_offset(int i) const {
        if (rays == 1) return 0.0;
        return fov * (static_cast<double>(i) / (rays - 1) - 0.5);
    }
    int feature_dim() const { return 2 * rays + kCategoryCount + patch * patch; }
};

struct Observation {
    std::vector<float> depth;       // R readings, (0, max_range]
    std::vector<uint8_t> hit;       // 1 if the ray ended on a wall
    std::vector<int16_t> sem_cat;   // category id per ray, -1 if none
    std::vector<float> sem_depth;   // range of the semantic hit along the ray
    std::vector<float> patch;       // patch*patch egocentric occupancy, {0,1}
    Pose2D pose;                    // capture pose
    int64_t step_index = 0;

    // Pose-independent feature vector consumed by the context encoder:
    // depth (scaled by 1/max_range), per-ray semantic presence, category
    // histogram, flattened patch.
    std::vector<double> features(const SensorSpec& sensor) const;
};

struct Command {
    double v = 0.0;      // m/s
    double omega = 0.0;  // rad/s
};

struct StepResult {
    Pose2D pose;
    bool collided = false;
};

enum class TaskKind { PointGoal, ObjectGoal, InstructGoal };

struct Episode {
    TaskKind kind = TaskKind::PointGoal;
    Pose2D start;
    std::optional<Pose2D> goal_point;      // PointGoal / InstructGoal target
    int goal_category = -1;                // ObjectGoal / InstructGoal
    std::vector<int> instruction;
    double success_radius = 1.0;
    int max_steps = 400;
    double shortest_len = 0.0;
    uint64_t seed = 0;
};

struct EpisodeParams {
    double success_radius = 1.0;
    int max_steps = 400;
    double min_path = 2.0;
    double max_path = 9.0;
};

struct PathResult {
    std::vector<CellIdx> cells;
    double length_m = 0.0;
};

// --- generation ---
World generate_world(uint64_t seed, const WorldSpec& spec);
Episode generate_episode(const World& world, TaskKind kind, uint64_t seed,
                         const EpisodeParams& params);

// Retries unsatisfiable draws with derived attempt seeds; still
// deterministic in (world, kind, seed).
Episode generate_episode_retry(const World& world, TaskKind kind, uint64_t seed,
                               const EpisodeParams& params);

// Distance from `p` to the episode goal (nearest instance for object goals).
double goal_distance(const World& world, const Episode& ep, const Vec2& p);

// --- sensing ---
Observation render_observation(const World& world, const Pose2D& pose,
                               const SensorSpec& sensor, int64_t step_index = 0);

// Single ray; exact first wall crossing via grid traversal.
double cast_ray(const World& world, const Vec2& origin, double angle,
                double max_range, bool* hit);

// --- kinematics ---
StepResult step_agent(const World& world, const Pose2D& pose, const Command& cmd,
                      double dt, double agent_radius = 0.15);
bool disc_collides(const World& world, const Vec2& center, double radius);

// --- planning ---
// 8-connected A* with sqrt(2) diagonal cost; diagonals must not cut corners.
// `traversable` is true where motion is allowed.
PathResult shortest_path_on_grid(const Grid2D<uint8_t>& traversable, CellIdx start,
                                 CellIdx goal, double resolution);
PathResult shortest_path(const World& world, const Vec2& start, const Vec2& goal);

// Occupied cells dilated by `radius` meters (disc); for clearance-aware
// planning.
Grid2D<uint8_t> traversable_grid(const World& world, double inflate_radius);

}  // namespace duonav
