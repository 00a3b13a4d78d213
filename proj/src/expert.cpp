#include "duonav/expert.hpp"

#include <algorithm>
#include <cmath>

#include "duonav/error.hpp"
#include "duonav/mapping.hpp"
#include "duonav/rng.hpp"

namespace duonav {

namespace {

bool segment_clear(const World& world, const Vec2& a, const Vec2& b, double radius) {
    double len = (b - a).norm();
    int n = std::max(1, static_cast<int>(std::ceil(len / (world.resolution * 0.5))));
    for (int i = 0; i <= n; ++i) {
        double t = static_cast<double>(i) / n;
        Vec2 p{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
        if (disc_collides(world, p, radius)) return false;
    }
    return true;
}

struct Polyline {
    std::vector<Vec2> pts;
    std::vector<double> cum;

    double length() const { return cum.empty() ? 0.0 : cum.back(); }

    void build(const std::vector<Vec2>& raw) {
        pts.clear();
        cum.clear();
        for (const auto& p : raw) {
            if (!pts.empty() && (p - pts.back()).norm() < 1e-9) continue;
            pts.push_back(p);
        }
        if (pts.empty()) return;
        cum.push_back(0.0);
        for (size_t i = 1; i < pts.size(); ++i)
            cum.push_back(cum.back() + (pts[i] - pts[i - 1]).norm());
    }

    Vec2 at(double s) const {
        if (pts.size() == 1) return pts[0];
        s = std::clamp(s, 0.0, length());
        size_t i = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
        if (i >= pts.size()) i = pts.size() - 1;
        if (i == 0) return pts[0];
        double seg = cum[i] - cum[i - 1];
        double t = seg > 0 ? (s - cum[i - 1]) / seg : 0.0;
        return {pts[i - 1].x + (pts[i].x - pts[i - 1].x) * t,
                pts[i - 1].y + (pts[i].y - pts[i - 1].y) * t};
    }

    double tangent(double s) const {
        if (pts.size() < 2) return 0.0;
        s = std::clamp(s, 0.0, length());
        size_t i = std::upper_bound(cum.begin(), cum.end(), s) - cum.begin();
        if (i >= pts.size()) i = pts.size() - 1;
        if (i == 0) i = 1;
        Vec2 d = pts[i] - pts[i - 1];
        return std::atan2(d.y, d.x);
    }
};

Polyline leg_polyline(const World& world, const PathResult& path, const Vec2& start,
                      const Vec2& goal, double agent_radius) {
    std::vector<Vec2> raw;
    raw.push_back(start);
    for (const auto& c : path.cells) raw.push_back(world.center_of(c));
    raw.push_back(goal);
    auto smoothed = smooth_path_points(world, raw, agent_radius);
    Polyline poly;
    poly.build(smoothed);
    return poly;
}

ChunkAction discretize(const Vec2& prev_pos, double prev_theta, const Vec2& p,
                       double stride) {
    Vec2 d = p - prev_pos;
    if (d.norm() < 0.25 * stride) return ChunkAction::Stop;
    double beta = wrap_angle(std::atan2(d.y, d.x) - prev_theta);
    if (std::abs(beta) <= 0.35) return ChunkAction::Forward;
    return beta > 0 ? ChunkAction::Left : ChunkAction::Right;
}

Vec2 episode_goal_point(const World& world, const Episode& ep) {
    if (ep.goal_point) return {ep.goal_point->x, ep.goal_point->y};
    if (ep.goal_category < 0)
        raise(ErrorCode::invalid_argument, "episode lacks both goal point and category");
    double best = -1.0;
    Vec2 best_pos{};
    for (const auto& obj : world.objects) {
        if (static_cast<int>(obj.category) != ep.goal_category) continue;
        double len = shortest_path(world, ep.start.position(), obj.pos).length_m;
        if (best < 0 || len < best) {
            best = len;
            best_pos = obj.pos;
        }
    }
    if (best < 0) raise(ErrorCode::unsatisfiable, "goal category absent from world");
    return best_pos;
}

}  // namespace

std::vector<Vec2> smooth_path_points(const World& world, const std::vector<Vec2>& pts,
                                     double agent_radius) {
    if (pts.size() < 3) return pts;
    std::vector<Vec2> out;
    out.push_back(pts[0]);
    size_t i = 0;
    while (i + 1 < pts.size()) {
        size_t j = pts.size() - 1;
        while (j > i + 1 && !segment_clear(world, pts[i], pts[j], agent_radius)) --j;
        out.push_back(pts[j]);
        i = j;
    }
    return out;
}

std::vector<Vec2> smooth_path(const World& world, const std::vector<CellIdx>& cells,
                              double agent_radius) {
    std::vector<Vec2> pts;
    pts.reserve(cells.size());
    for (const auto& c : cells) pts.push_back(world.center_of(c));
    return smooth_path_points(world, pts, agent_radius);
}

std::vector<ExpertStep> expert_trajectory(const World& world, const Episode& ep,
                                          const ExpertParams& params) {
    const Vec2 goal = episode_goal_point(world, ep);
    const Vec2 start = ep.start.position();
    const int H = params.horizon;

    auto annotate = [&](ExpertStep& st, double remaining, const Pose2D& pose) {
        if (ep.kind == TaskKind::PointGoal) {
            st.instruction = ep.instruction;
            st.coord = coord_goal_from(pose, goal);
        } else if (remaining > params.approach_switch) {
            st.instruction = ep.instruction;
            st.coord = std::nullopt;
        } else {
            st.instruction = subtask_approach(static_cast<Category>(ep.goal_category));
            st.coord = coord_goal_from(pose, goal);
        }
    };

    std::vector<ExpertStep> out;
    if ((goal - start).norm() <= ep.success_radius) {
        ExpertStep st;
        st.obs = render_observation(world, ep.start, params.sensor, 0);
        st.waypoints = WaypointSequence(H);
        for (int h = 0; h < H; ++h) st.waypoints[h] = {0.0, 0.0, 0.0, 1.0, 1.0};
        st.chunk.assign(H, ChunkAction::Stop);
        annotate(st, 0.0, ep.start);
        out.push_back(std::move(st));
        return out;
    }

    PathResult path = shortest_path(world, start, goal);
    Polyline poly = leg_polyline(world, path, start, goal, params.agent_radius);
    double L = poly.length();
    int K = static_cast<int>(std::ceil(L / params.stride - 1e-9));

    for (int k = 0; k <= K; ++k) {
        double s = std::min(k * params.stride, L);
        Vec2 p = poly.at(s);
        Pose2D pose{p.x, p.y, poly.tangent(s)};
        ExpertStep st;
        st.obs = render_observation(world, pose, params.sensor, k);
        st.waypoints = WaypointSequence(H);
        st.chunk.resize(H);
        Vec2 prev_pos = p;
        double prev_theta = pose.theta;
        for (int h = 1; h <= H; ++h) {
            double sh = std::min(s + h * params.stride, L);
            Vec2 ph = poly.at(sh);
            double th = poly.tangent(sh);
            bool done = (goal - ph).norm() <= ep.success_radius;
            Vec2 rel = to_agent_frame(ph, pose);
            double dth = wrap_angle(th - pose.theta);
            st.waypoints[h - 1] = {rel.x, rel.y, std::sin(dth), std::cos(dth),
                                   done ? 1.0 : 0.0};
            st.chunk[h - 1] = discretize(prev_pos, prev_theta, ph, params.stride);
            prev_pos = ph;
            prev_theta = th;
        }
        annotate(st, L - s, pose);
        out.push_back(std::move(st));
    }
    return out;
}

std::vector<ExpertStep> frontier_trajectory(const World& world, const Pose2D& start,
                                            const ExpertParams& params, uint64_t seed) {
    Rng rng(seed);
    OccupancyMap map(world.occ.w, world.occ.h, world.resolution);
    Grid2D<uint8_t> trav = traversable_grid(world, 0.2);
    const int H = params.horizon;

    std::vector<ExpertStep> out;
    Pose2D pose = start;
    int step_index = 0;
    {
        Observation obs0 = render_observation(world, pose, params.sensor, step_index);
        integrate(map, obs0, params.sensor);
    }

    for (int leg = 0; leg < params.max_frontier_legs; ++leg) {
        auto cells = extract_frontiers(map);
        auto frontiers = cluster_frontiers(map, cells, 3, pose);
        if (frontiers.empty()) break;

        struct Cand {
            Vec2 target;
            PathResult path;
        };
        std::vector<Cand> cands;
        for (const auto& f : frontiers) {
            Vec2 target = f.centroid;
            double best = -1.0;
            for (const auto& c : f.cells) {
                Vec2 p = map.center_of(c);
                double d = (p - f.centroid).norm();
                if (best < 0 || d < best) {
                    best = d;
                    target = p;
                }
            }
            try {
                PathResult p = shortest_path_on_grid(trav, world.cell_of(pose.position()),
                                                     world.cell_of(target), world.resolution);
                cands.push_back({target, std::move(p)});
            } catch (const Error&) {
                continue;  // unreachable frontier under inflation
            }
        }
        if (cands.empty()) break;
        std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            return a.path.length_m < b.path.length_m;
        });
        size_t pick = 0;
        if (cands.size() > 1 && rng.chance(params.frontier_eps))
            pick = static_cast<size_t>(rng.uniform_int(1, static_cast<int>(cands.size()) - 1));
        const Cand& chosen = cands[pick];

        int room_id = world.room_at(chosen.target);
        std::vector<int> subtask = subtask_explore(
            room_id >= 0 ? static_cast<int>(world.rooms[room_id].label) : -1);

        Polyline poly =
            leg_polyline(world, chosen.path, pose.position(), chosen.target, params.agent_radius);
        double L = poly.length();
        int K = static_cast<int>(std::ceil(L / params.stride - 1e-9));
        for (int k = 0; k <= K; ++k) {
            double s = std::min(k * params.stride, L);
            Vec2 p = poly.at(s);
            Pose2D pk{p.x, p.y, poly.tangent(s)};
            ExpertStep st;
            st.obs = render_observation(world, pk, params.sensor, step_index++);
            integrate(map, st.obs, params.sensor);
            st.waypoints = WaypointSequence(H);
            st.chunk.resize(H);
            Vec2 prev_pos = p;
            double prev_theta = pk.theta;
            for (int h = 1; h <= H; ++h) {
                double sh = std::min(s + h * params.stride, L);
                Vec2 ph = poly.at(sh);
                double th = poly.tangent(sh);
                Vec2 rel = to_agent_frame(ph, pk);
                double dth = wrap_angle(th - pk.theta);
                st.waypoints[h - 1] = {rel.x, rel.y, std::sin(dth), std::cos(dth), 0.0};
                st.chunk[h - 1] = discretize(prev_pos, prev_theta, ph, params.stride);
                prev_pos = ph;
                prev_theta = th;
            }
            st.instruction = subtask;
            st.coord = coord_goal_from(pk, chosen.target);
            out.push_back(std::move(st));
        }
        pose = {chosen.target.x, chosen.target.y, poly.tangent(L)};
    }
    return out;
}

}  // namespace duonav
