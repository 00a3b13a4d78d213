#include "duonav/svg.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

#include "duonav/error.hpp"
#include "duonav/serialize.hpp"

namespace duonav {

namespace {

using nlohmann::ordered_json;

const char* decision_kind_name(DecisionKind k) {
    switch (k) {
        case DecisionKind::GoToTarget: return "go_to_target";
        case DecisionKind::ExploreFrontier: return "explore_frontier";
        case DecisionKind::Terminate: return "terminate";
    }
    return "terminate";
}

ordered_json cot_json(const std::vector<CotRecord>& cot) {
    ordered_json arr = ordered_json::array();
    for (const CotRecord& r : cot)
        arr.push_back({{"id", r.candidate_id},
                       {"prior", r.prior},
                       {"unknown", r.unknown},
                       {"cost", r.cost},
                       {"total", r.total},
                       {"verdict", r.verdict}});
    return arr;
}

// Fixed-precision pixel coordinate so the output bytes never depend on
// floating-point printing modes.
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

[[noreturn]] void bad_log(int line, const std::string& msg) {
    raise(ErrorCode::parse, "replay log line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string episode_log_jsonl(const World& world, const Episode& ep,
                              const EpisodeResult& res) {
    std::string out;
    ordered_json header;
    header["type"] = "header";
    header["schema_version"] = 1;
    header["world"] = ordered_json::parse(world_to_json(world));
    header["episode"] = ordered_json::parse(episode_to_json(ep));
    out += header.dump();
    out += '\n';

    for (const TickRecord& t : res.trajectory) {
        ordered_json j;
        j["type"] = "tick";
        j["tick"] = t.tick;
        j["pose"] = {t.pose.x, t.pose.y, t.pose.theta};
        j["cmd"] = {t.cmd.v, t.cmd.omega};
        ordered_json wps = ordered_json::array();
        for (int i = 0; i < t.waypoints.horizon(); ++i) {
            const Waypoint& w = t.waypoints[i];
            wps.push_back({w.x, w.y, w.sin_theta, w.cos_theta, w.c});
        }
        j["waypoints"] = wps;
        j["chunk"] = chunk_action_name(t.chunk);
        j["slow"] = t.slow_ran;
        j["collided"] = t.collided;
        out += j.dump();
        out += '\n';
    }
    for (const SlowEvent& ev : res.slow_events) {
        ordered_json j;
        j["type"] = "slow";
        j["tick"] = ev.tick;
        j["pose"] = {ev.pose.x, ev.pose.y, ev.pose.theta};
        ordered_json fs = ordered_json::array();
        for (const Frontier& f : ev.frontiers) {
            ordered_json cells = ordered_json::array();
            for (const CellIdx& c : f.cells) cells.push_back({c.x, c.y});
            fs.push_back({{"id", f.id},
                          {"centroid", {f.centroid.x, f.centroid.y}},
                          {"size", f.size},
                          {"cells", cells}});
        }
        j["frontiers"] = fs;
        const Deliberation& d = ev.decision;
        j["decision"] = {{"kind", decision_kind_name(d.kind)},
                         {"target", {d.target.x, d.target.y, d.target.theta}},
                         {"frontier_id", d.frontier_id},
                         {"reason", d.reason},
                         {"subtask", d.subtask},
                         {"cot", cot_json(d.cot)}};
        out += j.dump();
        out += '\n';
    }
    ordered_json end;
    end["type"] = "end";
    end["outcome"] = res.outcome;
    end["success"] = res.success;
    end["path_length"] = res.path_length;
    end["shortest_len"] = res.shortest_len;
    end["final_goal_distance"] = res.final_goal_distance;
    end["min_goal_distance"] = res.min_goal_distance;
    end["ticks"] = res.ticks;
    out += end.dump();
    out += '\n';
    return out;
}

std::string replay_svg(const std::string& log_jsonl) {
    std::stringstream ss(log_jsonl);
    std::string line;
    int line_no = 0;

    bool have_header = false;
    World world;
    Episode ep;
    std::vector<Pose2D> poses;
    struct FrontierSet {
        int tick;
        std::vector<CellIdx> cells;
        Pose2D target;
        std::string kind;
    };
    std::vector<FrontierSet> frontier_sets;

    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) bad_log(line_no, "malformed JSON");
        try {
            std::string type = j.at("type").get<std::string>();
            if (type == "header") {
                world = world_from_json(j.at("world").dump());
                ep = episode_from_json(j.at("episode").dump());
                have_header = true;
            } else if (type == "tick") {
                auto p = j.at("pose");
                poses.push_back(
                    {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
            } else if (type == "slow") {
                FrontierSet fs;
                fs.tick = j.at("tick").get<int>();
                for (const auto& f : j.at("frontiers"))
                    for (const auto& c : f.at("cells"))
                        fs.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
                auto t = j.at("decision").at("target");
                fs.target = {t.at(0).get<double>(), t.at(1).get<double>(),
                             t.at(2).get<double>()};
                fs.kind = j.at("decision").at("kind").get<std::string>();
                frontier_sets.push_back(std::move(fs));
            } else if (type != "end") {
                bad_log(line_no, "unknown record type '" + type + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            bad_log(line_no, e.what());
        } catch (const Error& e) {
            bad_log(line_no, e.what());
        }
    }
    if (!have_header) raise(ErrorCode::parse, "replay log: missing header line");

    const double res = world.resolution;
    const double world_h = world.occ.h * res;
    const double scale = 60.0;  // px per meter
    auto X = [&](double x) { return px(x * scale); };
    auto Y = [&](double y) { return px((world_h - y) * scale); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           px(world.occ.w * res * scale) + "\" height=\"" + px(world_h * scale) +
           "\" viewBox=\"0 0 " + px(world.occ.w * res * scale) + " " +
           px(world_h * scale) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // walls, merged into horizontal runs
    svg += "<g class=\"walls\" fill=\"#222222\">\n";
    for (int y = 0; y < world.occ.h; ++y) {
        int x = 0;
        while (x < world.occ.w) {
            if (world.occ.at(x, y) == kCellFree) {
                ++x;
                continue;
            }
            int x0 = x;
            while (x < world.occ.w && world.occ.at(x, y) != kCellFree) ++x;
            svg += "<rect x=\"" + X(x0 * res) + "\" y=\"" + Y((y + 1) * res) +
                   "\" width=\"" + px((x - x0) * res * scale) + "\" height=\"" +
                   px(res * scale) + "\"/>\n";
        }
    }
    svg += "</g>\n";

    // frontier overlays, one group per slow decision
    for (const FrontierSet& fs : frontier_sets) {
        svg += "<g class=\"frontiers\" data-tick=\"" + std::to_string(fs.tick) +
               "\" fill=\"#ff9a3c\" fill-opacity=\"0.55\">\n";
        for (const CellIdx& c : fs.cells)
            svg += "<rect x=\"" + X(c.x * res) + "\" y=\"" + Y((c.y + 1) * res) +
                   "\" width=\"" + px(res * scale) + "\" height=\"" + px(res * scale) +
                   "\"/>\n";
        if (fs.kind != "terminate")
            svg += "<circle cx=\"" + X(fs.target.x) + "\" cy=\"" + Y(fs.target.y) +
                   "\" r=\"5.0\" fill=\"#d44\" fill-opacity=\"1\"/>\n";
        svg += "</g>\n";
    }

    // goal marker(s)
    svg += "<g class=\"goal\" fill=\"none\" stroke=\"#c22\" stroke-width=\"2\">\n";
    auto goal_marker = [&](const Vec2& g) {
        svg += "<circle cx=\"" + X(g.x) + "\" cy=\"" + Y(g.y) + "\" r=\"" +
               px(ep.success_radius * scale) + "\" stroke-dasharray=\"6 4\"/>\n";
        svg += "<circle cx=\"" + X(g.x) + "\" cy=\"" + Y(g.y) +
               "\" r=\"4.0\" fill=\"#c22\"/>\n";
    };
    if (ep.kind == TaskKind::ObjectGoal) {
        for (const WorldObject& o : world.objects)
            if (static_cast<int>(o.category) == ep.goal_category) goal_marker(o.pos);
    } else if (ep.goal_point) {
        goal_marker(ep.goal_point->position());
    }
    svg += "</g>\n";

    // trajectory
    bool moved = false;
    for (size_t i = 1; i < poses.size(); ++i)
        moved = moved || distance(poses[i].position(), poses[0].position()) > 1e-9;
    if (poses.size() >= 2 && moved) {
        svg += "<polyline class=\"trajectory\" fill=\"none\" stroke=\"#1565c0\" "
               "stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < poses.size(); ++i) {
            if (i) svg += ' ';
            svg += X(poses[i].x) + "," + Y(poses[i].y);
        }
        svg += "\"/>\n";
    } else if (!poses.empty()) {
        svg += "<circle class=\"trajectory\" cx=\"" + X(poses[0].x) + "\" cy=\"" +
               Y(poses[0].y) + "\" r=\"4.0\" fill=\"#1565c0\"/>\n";
    }
    if (!poses.empty())
        svg += "<circle class=\"start\" cx=\"" + X(poses[0].x) + "\" cy=\"" +
               Y(poses[0].y) + "\" r=\"5.0\" fill=\"none\" stroke=\"#2e7d32\" "
               "stroke-width=\"2\"/>\n";

    svg += "</svg>\n";
    return svg;
}

}  // namespace duonav
