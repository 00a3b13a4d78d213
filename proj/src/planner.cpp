#include "duonav/planner.hpp"

#include <cmath>
#include <limits>

#include "duonav/error.hpp"
#include "duonav/world.hpp"

namespace duonav {

namespace {

std::vector<Category> sightings_near(const MemoryBank& bank, const SensorSpec& sensor,
                                     const Vec2& center, double radius) {
    std::vector<Category> out;
    for (const Observation* e : bank.entries()) {
        for (int r = 0; r < sensor.rays; ++r) {
            if (e->sem_cat[r] < 0) continue;
            double ang = e->pose.theta + sensor.ray_offset(r);
            Vec2 p = e->pose.position() +
                     Vec2{std::cos(ang), std::sin(ang)} * e->sem_depth[r];
            if ((p - center).norm() <= radius)
                out.push_back(static_cast<Category>(e->sem_cat[r]));
        }
    }
    return out;
}

std::vector<Category> visible_categories(const Observation& obs) {
    std::vector<Category> out;
    for (int16_t c : obs.sem_cat)
        if (c >= 0) out.push_back(static_cast<Category>(c));
    return out;
}

Vec2 nearest_member_cell(const OccupancyMap& map, const Frontier& f) {
    Vec2 best = f.centroid;
    double best_d = std::numeric_limits<double>::max();
    for (const auto& c : f.cells) {
        Vec2 p = map.center_of(c);
        double d = (p - f.centroid).norm();
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

// Mean position of Unknown cells within rho of the centroid; used to aim
// the subgoal heading into unexplored space.
bool unknown_mass_center(const OccupancyMap& map, const Frontier& f, double rho,
                         Vec2* out) {
    int r_cells = static_cast<int>(std::ceil(rho / map.resolution));
    CellIdx c0 = map.cell_of(f.centroid);
    double sx = 0, sy = 0;
    int n = 0;
    for (int dy = -r_cells; dy <= r_cells; ++dy) {
        for (int dx = -r_cells; dx <= r_cells; ++dx) {
            CellIdx c{c0.x + dx, c0.y + dy};
            if (!map.hit_n.in_bounds(c)) continue;
            Vec2 p = map.center_of(c);
            if ((p - f.centroid).norm() > rho) continue;
            if (map.state(c) != CellState::Unknown) continue;
            sx += p.x;
            sy += p.y;
            ++n;
        }
    }
    if (n == 0) return false;
    *out = {sx / n, sy / n};
    return true;
}

}  // namespace

int unknown_area_beyond(const OccupancyMap& map, const Frontier& frontier, double rho) {
    int r_cells = static_cast<int>(std::ceil(rho / map.resolution));
    CellIdx c0 = map.cell_of(frontier.centroid);
    int count = 0;
    for (int dy = -r_cells; dy <= r_cells; ++dy) {
        for (int dx = -r_cells; dx <= r_cells; ++dx) {
            CellIdx c{c0.x + dx, c0.y + dy};
            if (!map.hit_n.in_bounds(c)) continue;
            if ((map.center_of(c) - frontier.centroid).norm() > rho) continue;
            if (map.state(c) == CellState::Unknown) ++count;
        }
    }
    return count;
}

int infer_room(const std::vector<Category>& seen) {
    if (seen.empty()) return -1;
    double best = 0.0;
    int best_room = -1;
    for (int r = 0; r < kRoomCount; ++r) {
        double sum = 0.0;
        for (Category c : seen) sum += room_affinity(c, static_cast<RoomLabel>(r));
        if (sum > best) {
            best = sum;
            best_room = r;
        }
    }
    return best_room;
}

Deliberation deliberate(const SlowGoal& goal, const MemoryBank& bank,
                        const OccupancyMap& map, const std::vector<Frontier>& frontiers,
                        const Pose2D& agent_pose, const SensorSpec& sensor,
                        const SlowConfig& cfg) {
    Deliberation out;

    if (goal.category >= 0) {
        if (auto hit = bank.locate_goal(goal.category, sensor)) {
            out.kind = DecisionKind::GoToTarget;
            out.target = hit->pose;
            out.subtask_tokens = subtask_approach(static_cast<Category>(goal.category));
            out.subtask = Vocab::detokenize(out.subtask_tokens);
            out.cot.push_back({-1, 0, 0, 0, 0,
                               "memory-hit: goal seen at step " +
                                   std::to_string(hit->step_index)});
            return out;
        }
    }
    out.cot.push_back({-1, 0, 0, 0, 0, "memory-miss: goal not in memory"});

    if (frontiers.empty()) {
        out.kind = DecisionKind::Terminate;
        out.reason = "exhausted";
        out.subtask_tokens = subtask_stop();
        out.subtask = Vocab::detokenize(out.subtask_tokens);
        return out;
    }

    Grid2D<uint8_t> trav(map.width(), map.height(), 0);
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            trav.at(x, y) = map.state(x, y) == CellState::Free ? 1 : 0;
    CellIdx agent_cell = map.cell_of(agent_pose.position());
    if (trav.in_bounds(agent_cell)) trav.at(agent_cell) = 1;

    int best_idx = -1;
    double best_score = 0.0;
    std::vector<int> rooms(frontiers.size(), -1);
    std::vector<Vec2> targets(frontiers.size());
    for (size_t i = 0; i < frontiers.size(); ++i) {
        const Frontier& f = frontiers[i];
        int room = infer_room(sightings_near(bank, sensor, f.centroid, cfg.sem_radius));
        if (room < 0 && !bank.empty())
            room = infer_room(
                visible_categories(bank.frontier_proxy(f, cfg.proxy_lambda)));
        rooms[i] = room;

        double prior;
        if (goal.room >= 0)
            prior = room == goal.room ? 1.0 : 0.25;
        else if (room >= 0 && goal.category >= 0)
            prior = room_affinity(static_cast<Category>(goal.category),
                                  static_cast<RoomLabel>(room));
        else
            prior = 0.5;

        int unknown = unknown_area_beyond(map, f, cfg.rho);
        targets[i] = nearest_member_cell(map, f);

        bool reachable = true;
        double cost = 0.0;
        try {
            cost = shortest_path_on_grid(trav, agent_cell, map.cell_of(targets[i]),
                                         map.resolution)
                       .length_m;
        } catch (const Error&) {
            reachable = false;
        }

        CotRecord rec;
        rec.candidate_id = f.id;
        rec.prior = prior;
        rec.unknown = unknown;
        rec.cost = reachable ? cost : -1.0;
        if (!reachable) {
            rec.total = -std::numeric_limits<double>::infinity();
            rec.verdict = "unreachable";
        } else {
            rec.total = cfg.alpha * prior + cfg.beta * unknown / 100.0 - cfg.gamma * cost;
            rec.verdict = "rejected";
            if (best_idx < 0 || rec.total > best_score) {
                best_idx = static_cast<int>(i);
                best_score = rec.total;  // first-in-id-order wins ties
            }
        }
        out.cot.push_back(rec);
    }

    if (best_idx < 0) {
        out.kind = DecisionKind::Terminate;
        out.reason = "exhausted";
        out.subtask_tokens = subtask_stop();
        out.subtask = Vocab::detokenize(out.subtask_tokens);
        return out;
    }

    const Frontier& chosen = frontiers[best_idx];
    for (auto& rec : out.cot)
        if (rec.candidate_id == chosen.id) rec.verdict = "selected";

    Vec2 pos = targets[best_idx];
    Vec2 mass;
    double heading = unknown_mass_center(map, chosen, cfg.rho, &mass)
                         ? bearing(pos, mass)
                         : bearing(agent_pose.position(), pos);
    out.kind = DecisionKind::ExploreFrontier;
    out.frontier_id = chosen.id;
    out.target = {pos.x, pos.y, heading};
    out.subtask_tokens = subtask_explore(rooms[best_idx]);
    out.subtask = Vocab::detokenize(out.subtask_tokens);
    return out;
}

}  // namespace duonav
