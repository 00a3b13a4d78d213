#include <algorithm>
#include <cmath>

#include "duonav/error.hpp"
#include "duonav/rng.hpp"
#include "duonav/world.hpp"

namespace duonav {

namespace {

// Free position with clearance, or throws after bounded attempts.
Vec2 sample_free_position(const World& world, const Grid2D<uint8_t>& trav, Rng& rng) {
    for (int attempt = 0; attempt < 500; ++attempt) {
        Vec2 p{rng.uniform(0.5, world.size_m - 0.5), rng.uniform(0.5, world.size_m - 0.5)};
        CellIdx c = world.cell_of(p);
        if (trav.in_bounds(c) && trav.at(c)) return p;
    }
    raise(ErrorCode::runtime, "generate_episode: could not sample a free position");
}

double path_len_or_neg(const World& world, const Grid2D<uint8_t>& trav,
                       const Vec2& a, const Vec2& b) {
    try {
        return shortest_path_on_grid(trav, world.cell_of(a), world.cell_of(b),
                                     world.resolution)
            .length_m;
    } catch (const Error&) {
        return -1.0;
    }
}

}  // namespace

double goal_distance(const World& world, const Episode& ep, const Vec2& p) {
    if (ep.kind == TaskKind::PointGoal || ep.kind == TaskKind::InstructGoal)
        return distance(p, ep.goal_point->position());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& obj : world.objects)
        if (static_cast<int>(obj.category) == ep.goal_category)
            best = std::min(best, distance(p, obj.pos));
    return best;
}

Episode generate_episode(const World& world, TaskKind kind, uint64_t seed,
                         const EpisodeParams& params) {
    Rng rng(splitmix64(seed ^ 0xe91d0d3ULL));
    Grid2D<uint8_t> trav = traversable_grid(world, 0.2);

    Episode ep;
    ep.kind = kind;
    ep.seed = seed;
    ep.success_radius = params.success_radius;
    ep.max_steps = params.max_steps;

    for (int attempt = 0; attempt < 200; ++attempt) {
        Vec2 start = sample_free_position(world, trav, rng);
        double theta = rng.uniform(-kPi, kPi);

        if (kind == TaskKind::PointGoal) {
            Vec2 goal = sample_free_position(world, trav, rng);
            double len = path_len_or_neg(world, trav, start, goal);
            if (len < params.min_path || len > params.max_path) continue;
            ep.start = Pose2D{start.x, start.y, theta}.wrapped();
            ep.goal_point = Pose2D{goal.x, goal.y, rng.uniform(-kPi, kPi)}.wrapped();
            ep.instruction = instruction_point_goal();
            ep.shortest_len = len;
            return ep;
        }

        if (world.objects.empty())
            raise(ErrorCode::unsatisfiable, "generate_episode: world has no objects");
        const WorldObject& target = world.objects[rng.uniform_int(
            0, static_cast<int>(world.objects.size()) - 1)];

        if (kind == TaskKind::ObjectGoal) {
            // Distance to the nearest instance of the category defines the
            // episode length.
            double best = -1.0;
            for (const auto& obj : world.objects) {
                if (obj.category != target.category) continue;
                double len = path_len_or_neg(world, trav, start, obj.pos);
                if (len >= 0 && (best < 0 || len < best)) best = len;
            }
            if (best < params.min_path || best > params.max_path) continue;
            ep.start = Pose2D{start.x, start.y, theta}.wrapped();
            ep.goal_category = static_cast<int>(target.category);
            ep.instruction = instruction_object_goal(target.category);
            ep.shortest_len = best;
            return ep;
        }

        // InstructGoal: a specific instance, described via its room.
        double len = path_len_or_neg(world, trav, start, target.pos);
        if (len < params.min_path || len > params.max_path) continue;
        ep.start = Pose2D{start.x, start.y, theta}.wrapped();
        ep.goal_category = static_cast<int>(target.category);
        double goal_theta = bearing(start, target.pos);
        ep.goal_point = Pose2D{target.pos.x, target.pos.y, goal_theta}.wrapped();
        ep.instruction = instruction_instruct_goal(
            world.rooms[target.room_id].label, target.category);
        ep.shortest_len = len;
        return ep;
    }
    raise(ErrorCode::unsatisfiable, "generate_episode: no feasible episode found");
}

Episode generate_episode_retry(const World& world, TaskKind kind, uint64_t seed,
                               const EpisodeParams& params) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        try {
            return generate_episode(world, kind, derive_seed(seed, attempt), params);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::unsatisfiable && e.code() != ErrorCode::no_path)
                throw;
        }
    }
    raise(ErrorCode::unsatisfiable,
          "generate_episode_retry: no feasible episode in 64 attempts");
}

}  // namespace duonav
