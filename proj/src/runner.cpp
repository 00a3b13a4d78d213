#include "duonav/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "duonav/error.hpp"
#include "duonav/rng.hpp"

namespace duonav {

void RunParams::validate() const {
    limits.validate();
    if (context_frames < 1)
        raise(ErrorCode::invalid_argument, "RunParams: context_frames must be >= 1");
    if (slow_period < 1 || stall_window < 1)
        raise(ErrorCode::invalid_argument, "RunParams: slow_period and stall_window must be >= 1");
    if (stall_dist <= 0.0 || subgoal_radius <= 0.0 || agent_radius <= 0.0)
        raise(ErrorCode::invalid_argument, "RunParams: distances must be positive");
    if (memory_capacity == 0)
        raise(ErrorCode::invalid_argument, "RunParams: memory_capacity must be positive");
}

double DistanceField::at(const Vec2& p) const {
    CellIdx c{static_cast<int>(std::floor(p.x / resolution)),
              static_cast<int>(std::floor(p.y / resolution))};
    if (!dist.in_bounds(c)) return std::numeric_limits<double>::infinity();
    return dist.at(c);
}

std::optional<double> DistanceField::descent(const Vec2& p) const {
    CellIdx c{static_cast<int>(std::floor(p.x / resolution)),
              static_cast<int>(std::floor(p.y / resolution))};
    if (!valid(c) || dist.at(c) == 0.0) return std::nullopt;
    // Follow the locally steepest downhill neighbor for a few cells so the
    // reported direction is not quantized to 45 degrees.
    int steps = std::max(3, static_cast<int>(std::lround(0.5 / resolution)));
    CellIdx cur = c;
    for (int s = 0; s < steps; ++s) {
        CellIdx best = cur;
        double best_d = dist.at(cur);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                CellIdx nb{cur.x + dx, cur.y + dy};
                if (valid(nb) && dist.at(nb) < best_d) {
                    best_d = dist.at(nb);
                    best = nb;
                }
            }
        if (best.x == cur.x && best.y == cur.y) break;
        cur = best;
        if (dist.at(cur) == 0.0) break;
    }
    Vec2 end{(cur.x + 0.5) * resolution, (cur.y + 0.5) * resolution};
    if (distance(end, p) < 1e-9) return std::nullopt;
    return std::atan2(end.y - p.y, end.x - p.x);
}

DistanceField goal_distance_field(const World& world, const Episode& ep, double inflate) {
    Grid2D<uint8_t> trav = traversable_grid(world, inflate);
    std::vector<CellIdx> sources;
    if (ep.kind == TaskKind::ObjectGoal) {
        for (const auto& obj : world.objects)
            if (static_cast<int>(obj.category) == ep.goal_category)
                sources.push_back(world.cell_of(obj.pos));
    } else if (ep.goal_point) {
        sources.push_back(world.cell_of(ep.goal_point->position()));
    }
    if (sources.empty())
        raise(ErrorCode::invalid_argument, "goal_distance_field: episode has no goal");

    DistanceField field;
    field.resolution = world.resolution;
    field.dist = Grid2D<double>(trav.w, trav.h, std::numeric_limits<double>::infinity());

    using Item = std::pair<double, int>;  // (dist, index)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto idx = [&](const CellIdx& c) { return c.y * trav.w + c.x; };
    for (const CellIdx& s : sources) {
        if (!trav.in_bounds(s)) continue;
        trav.at(s) = 1;  // the goal cell itself is always reachable
        if (field.dist.at(s) > 0.0) {
            field.dist.at(s) = 0.0;
            heap.push({0.0, idx(s)});
        }
    }
    const double res = world.resolution;
    const double diag = res * std::sqrt(2.0);
    while (!heap.empty()) {
        auto [d, i] = heap.top();
        heap.pop();
        CellIdx c{i % trav.w, i / trav.w};
        if (d > field.dist.at(c)) continue;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                CellIdx nb{c.x + dx, c.y + dy};
                if (!trav.in_bounds(nb) || !trav.at(nb)) continue;
                if (dx != 0 && dy != 0 &&
                    (!trav.at(c.x + dx, c.y) || !trav.at(c.x, c.y + dy)))
                    continue;  // no corner cutting
                double nd = d + ((dx != 0 && dy != 0) ? diag : res);
                if (nd < field.dist.at(nb)) {
                    field.dist.at(nb) = nd;
                    heap.push({nd, idx(nb)});
                }
            }
    }
    return field;
}

namespace {

struct FastOut {
    Command cmd;
    WaypointSequence wps;  // empty in chunk mode
    ChunkAction act = ChunkAction::Stop;
    double pred_heading = 0.0;  // world frame
    bool stop_signal = false;
};

double turn_speed(double v, const ControlLimits& lim) {
    double lo = std::max(0.0, v - lim.a_max * lim.dt);
    double hi = std::min(lim.v_max, v + lim.a_max * lim.dt);
    return std::clamp(0.3, lo, hi);
}

Command chunk_command(ChunkAction a, double v, const ControlLimits& lim) {
    double w = std::min(1.0, lim.omega_max);
    switch (a) {
        case ChunkAction::Forward:
            return {std::min(v + lim.a_max * lim.dt, lim.v_max), 0.0};
        case ChunkAction::Left:
            return {turn_speed(v, lim), w};
        case ChunkAction::Right:
            return {turn_speed(v, lim), -w};
        case ChunkAction::Stop:
        default:
            return {std::max(v - lim.a_max * lim.dt, 0.0), 0.0};
    }
}

// Everything one fast tick touches; the slow planner and episode accounting
// live in run_episode on top of this.
struct LoopState {
    const World& world;
    const Episode& ep;
    Policy& policy;
    const RunParams& p;

    MemoryBank bank;
    OccupancyMap map;
    Rng rng;
    Pose2D pose;
    double v = 0.0;
    double path_len = 0.0;
    std::vector<int> instruction;
    std::optional<Vec2> coord_target;

    LoopState(const World& w, const Episode& e, Policy& pol, const RunParams& rp)
        : world(w),
          ep(e),
          policy(pol),
          p(rp),
          bank(rp.memory_capacity),
          map(w.occ.w, w.occ.h, w.resolution),
          rng(derive_seed(rp.rng_seed, e.seed)),
          pose(e.start),
          instruction(e.instruction) {
        if (e.kind == TaskKind::PointGoal && e.goal_point)
            coord_target = e.goal_point->position();
        // Tick indices restart per episode, so cached frame embeddings from a
        // previous episode would alias them.
        policy.encoder.reset_cache();
    }

    void sense(int tick) {
        Observation obs = render_observation(world, pose, p.sensor, tick);
        bank.push(obs);
        integrate(map, obs, p.sensor);
    }

    FastOut act(bool use_cache) {
        ContextInput in;
        auto frames = bank.sample_fast_context(p.context_frames);
        in.frames.reserve(frames.size());
        for (const Observation* o : frames) {
            std::vector<double> f = o->features(p.sensor);
            FrameInput fi;
            fi.features.assign(f.begin(), f.end());
            fi.step_index = static_cast<int>(o->step_index);
            in.frames.push_back(std::move(fi));
        }
        in.instruction = instruction;
        if (coord_target) in.coord = coord_goal_from(pose, *coord_target);

        FastOut out;
        if (p.toggles.use_flow_head) {
            out.wps = policy.sample(in, rng, use_cache);
            const Waypoint& wp = out.wps[0];
            out.pred_heading = wrap_angle(pose.theta + wp.heading());
            out.cmd = select_command(v, wp, p.limits, p.gains);
            out.stop_signal =
                wp.completed() && std::hypot(wp.x, wp.y) < p.gains.arrive_radius;
        } else {
            auto chunk = policy.predict_chunk(in, use_cache);
            out.act = chunk.empty() ? ChunkAction::Stop : chunk[0];
            out.cmd = chunk_command(out.act, v, p.limits);
            double dturn = std::min(1.0, p.limits.omega_max) * p.limits.dt;
            switch (out.act) {
                case ChunkAction::Left: out.pred_heading = wrap_angle(pose.theta + dturn); break;
                case ChunkAction::Right: out.pred_heading = wrap_angle(pose.theta - dturn); break;
                default: out.pred_heading = pose.theta; break;
            }
            out.stop_signal = out.act == ChunkAction::Stop;
        }
        return out;
    }

    bool step(const Command& cmd) {
        StepResult sr = step_agent(world, pose, cmd, p.limits.dt, p.agent_radius);
        path_len += distance(sr.pose.position(), pose.position());
        pose = sr.pose;
        v = sr.collided ? 0.0 : cmd.v;
        return sr.collided;
    }
};

}  // namespace

EpisodeResult run_episode(const World& world, const Episode& ep, Policy& policy,
                          const RunParams& params) {
    params.validate();
    EpisodeResult res;
    res.shortest_len = ep.shortest_len;

    LoopState loop(world, ep, policy, params);
    DistanceField field = goal_distance_field(world, ep, params.agent_radius);

    const bool slow_active =
        params.toggles.use_slow && ep.kind != TaskKind::PointGoal;
    std::optional<Vec2> subgoal;
    int last_slow = -1;
    bool exhausted = false;

    auto fold_distance = [&]() {
        double d = goal_distance(world, ep, loop.pose.position());
        res.min_goal_distance = std::min(res.min_goal_distance, d);
        return d;
    };

    for (int tick = 0; tick < ep.max_steps; ++tick) {
        loop.sense(tick);

        bool slow_ran = false;
        if (slow_active) {
            bool want = tick == 0;
            if (!want && subgoal &&
                distance(loop.pose.position(), *subgoal) < params.subgoal_radius)
                want = true;
            if (!want && tick - last_slow >= params.stall_window &&
                tick >= params.stall_window &&
                distance(loop.pose.position(),
                         res.trajectory[tick - params.stall_window].pose.position()) <
                    params.stall_dist)
                want = true;
            if (!want && tick - last_slow >= params.slow_period) want = true;

            if (want) {
                auto cells = extract_frontiers(loop.map);
                auto frontiers = cluster_frontiers(loop.map, cells, 3, loop.pose);
                SlowGoal goal{ep.goal_category, find_room_token(ep.instruction)};
                Deliberation dl =
                    remote_deliberate(params.remote, goal, loop.bank, loop.map,
                                      frontiers, loop.pose, params.sensor, params.slow);
                last_slow = tick;
                slow_ran = true;
                SlowEvent ev{tick, loop.pose, frontiers, dl};
                if (!params.toggles.log_cot) ev.decision.cot.clear();
                res.slow_events.push_back(std::move(ev));
                if (dl.kind == DecisionKind::Terminate) {
                    exhausted = true;
                } else {
                    loop.instruction = dl.subtask_tokens;
                    loop.coord_target = Vec2{dl.target.x, dl.target.y};
                    subgoal = loop.coord_target;
                }
            }
        }
        if (exhausted) break;

        FastOut out;
        try {
            out = loop.act(params.use_cache);
        } catch (const Error& e) {
            res.outcome = std::string("error:") + error_code_name(e.code());
            break;
        }

        res.pred_headings.push_back(out.pred_heading);
        auto expert = field.descent(loop.pose.position());
        res.expert_headings.push_back(expert ? *expert : out.pred_heading);

        TickRecord rec;
        rec.tick = tick;
        rec.pose = loop.pose;
        rec.cmd = out.cmd;
        rec.waypoints = out.wps;
        rec.chunk = out.act;
        rec.slow_ran = slow_ran;

        double d = fold_distance();
        if (out.stop_signal && d <= ep.success_radius) {
            res.success = true;
            res.outcome = "success";
            res.trajectory.push_back(std::move(rec));
            break;
        }

        rec.collided = loop.step(out.cmd);
        res.trajectory.push_back(std::move(rec));
    }

    res.ticks = static_cast<int>(res.trajectory.size());
    res.path_length = loop.path_len;
    res.final_goal_distance = fold_distance();
    if (res.outcome.empty()) res.outcome = exhausted ? "exhausted" : "timeout";
    return res;
}

LatencyReport fast_tick_latency(const World& world, const Episode& ep, Policy& policy,
                                const RunParams& params, int ticks, bool use_cache) {
    if (ticks < 1)
        raise(ErrorCode::invalid_argument, "fast_tick_latency: ticks must be >= 1");
    LoopState loop(world, ep, policy, params);

    const int warmup = 10;
    std::vector<double> ms;
    ms.reserve(ticks);
    for (int tick = 0; tick < warmup + ticks; ++tick) {
        auto t0 = std::chrono::steady_clock::now();
        loop.sense(tick);
        FastOut out = loop.act(use_cache);
        auto t1 = std::chrono::steady_clock::now();
        if (tick >= warmup)
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        loop.step(out.cmd);
    }
    std::sort(ms.begin(), ms.end());
    LatencyReport rep;
    rep.ticks = ticks;
    for (double m : ms) rep.mean_ms += m;
    rep.mean_ms /= ms.size();
    size_t p95 = static_cast<size_t>(std::ceil(0.95 * ms.size())) - 1;
    rep.p95_ms = ms[std::min(p95, ms.size() - 1)];
    return rep;
}

}  // namespace duonav
