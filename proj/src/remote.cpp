#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "duonav/planner.hpp"

namespace duonav {

namespace {

using nlohmann::json;

std::optional<std::vector<int>> tokenize_text(const std::string& text) {
    std::istringstream ss(text);
    std::vector<std::string> words;
    std::string w;
    while (ss >> w) words.push_back(w);
    try {
        return Vocab::tokenize(words);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::string deliberate_request_json(const SlowGoal& goal, const Pose2D& agent_pose,
                                    const std::vector<Frontier>& frontiers,
                                    const MemoryBank& bank, const SensorSpec& sensor,
                                    const SlowConfig& cfg) {
    json req;
    req["schema_version"] = 1;
    req["goal"]["category"] =
        goal.category >= 0 ? json(category_name(static_cast<Category>(goal.category)))
                           : json(nullptr);
    req["goal"]["room"] = goal.room >= 0
                              ? json(room_name(static_cast<RoomLabel>(goal.room)))
                              : json(nullptr);
    req["agent_pose"] = {agent_pose.x, agent_pose.y, agent_pose.theta};
    json fr = json::array();
    for (const auto& f : frontiers) {
        json jf;
        jf["id"] = f.id;
        jf["centroid"] = {f.centroid.x, f.centroid.y};
        jf["size"] = f.size;
        if (!bank.empty()) {
            const Observation& proxy = bank.frontier_proxy(f, cfg.proxy_lambda);
            json cats = json::array();
            for (int16_t c : proxy.sem_cat)
                if (c >= 0) cats.push_back(category_name(static_cast<Category>(c)));
            jf["proxy"] = {{"pose", {proxy.pose.x, proxy.pose.y, proxy.pose.theta}},
                           {"step_index", proxy.step_index},
                           {"categories", cats}};
        } else {
            jf["proxy"] = nullptr;
        }
        fr.push_back(jf);
    }
    req["frontiers"] = fr;
    json digest;
    digest["size"] = bank.size();
    if (!bank.empty()) {
        digest["oldest_step"] = bank.entry(0).step_index;
        digest["newest_step"] = bank.entry(bank.size() - 1).step_index;
    }
    req["memory_digest"] = digest;
    (void)sensor;
    return req.dump();
}

bool parse_deliberation_json(const std::string& body,
                             const std::vector<Frontier>& frontiers, Deliberation* out) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return false;
    if (!j.contains("schema_version") || j["schema_version"] != 1) return false;
    if (!j.contains("decision") || !j["decision"].is_object()) return false;
    const json& d = j["decision"];
    if (!d.contains("kind") || !d["kind"].is_string()) return false;

    Deliberation res;
    std::string kind = d["kind"];
    auto read_target = [&](Pose2D* p) {
        if (!d.contains("target") || !d["target"].is_array() || d["target"].size() != 3)
            return false;
        for (const auto& v : d["target"])
            if (!v.is_number()) return false;
        *p = {d["target"][0], d["target"][1], d["target"][2]};
        return true;
    };
    if (kind == "go_to_target") {
        res.kind = DecisionKind::GoToTarget;
        if (!read_target(&res.target)) return false;
    } else if (kind == "explore_frontier") {
        res.kind = DecisionKind::ExploreFrontier;
        if (!read_target(&res.target)) return false;
        if (!d.contains("frontier_id") || !d["frontier_id"].is_number_integer())
            return false;
        res.frontier_id = d["frontier_id"];
        bool known = false;
        for (const auto& f : frontiers) known = known || f.id == res.frontier_id;
        if (!known) return false;  // must reference an existing frontier
    } else if (kind == "terminate") {
        res.kind = DecisionKind::Terminate;
        res.reason = d.value("reason", "remote");
    } else {
        return false;
    }

    if (!j.contains("subtask") || !j["subtask"].is_string()) return false;
    res.subtask = j["subtask"];
    auto toks = tokenize_text(res.subtask);
    if (!toks) return false;  // subtask must stay inside the closed vocabulary
    res.subtask_tokens = *toks;

    if (j.contains("cot") && j["cot"].is_array()) {
        for (const auto& r : j["cot"]) {
            CotRecord rec;
            rec.candidate_id = r.value("candidate_id", -1);
            rec.prior = r.value("prior", 0.0);
            rec.unknown = r.value("unknown", 0.0);
            rec.cost = r.value("cost", 0.0);
            rec.total = r.value("total", 0.0);
            rec.verdict = r.value("verdict", "");
            res.cot.push_back(rec);
        }
    }
    *out = std::move(res);
    return true;
}

Deliberation remote_deliberate(const RemoteConfig& remote, const SlowGoal& goal,
                               const MemoryBank& bank, const OccupancyMap& map,
                               const std::vector<Frontier>& frontiers,
                               const Pose2D& agent_pose, const SensorSpec& sensor,
                               const SlowConfig& cfg) {
    auto fallback = [&](const std::string& why) {
        Deliberation local =
            deliberate(goal, bank, map, frontiers, agent_pose, sensor, cfg);
        local.cot.push_back({-1, 0, 0, 0, 0, why});
        return local;
    };
    if (remote.host.empty())
        return deliberate(goal, bank, map, frontiers, agent_pose, sensor, cfg);

    std::string body =
        deliberate_request_json(goal, agent_pose, frontiers, bank, sensor, cfg);
    httplib::Client cli(remote.host, remote.port);
    auto sec = static_cast<time_t>(remote.timeout_s);
    auto usec = static_cast<time_t>((remote.timeout_s - sec) * 1e6);
    cli.set_connection_timeout(sec, usec);
    cli.set_read_timeout(sec, usec);
    cli.set_write_timeout(sec, usec);

    auto res = cli.Post("/deliberate", body, "application/json");
    if (!res || res->status != 200) return fallback("fallback: remote-unreachable");
    Deliberation parsed;
    if (!parse_deliberation_json(res->body, frontiers, &parsed))
        return fallback("fallback: remote-invalid");
    return parsed;
}

}  // namespace duonav
