#include "duonav/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "duonav/error.hpp"
#include "duonav/vocab.hpp"

namespace duonav {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_line(int line, const std::string& msg) {
    raise(ErrorCode::parse, "config line " + std::to_string(line) + ": " + msg);
}

struct Value {
    std::string raw;
    int line = 0;

    double num() const {
        try {
            size_t used = 0;
            double v = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            bad_line(line, "expected a number, got '" + raw + "'");
        }
    }
    int integer() const {
        double v = num();
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) bad_line(line, "expected an integer");
        return i;
    }
    uint64_t u64() const {
        try {
            size_t used = 0;
            uint64_t v = std::stoull(raw, &used);
            if (used != raw.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            bad_line(line, "expected an unsigned integer");
        }
    }
    bool boolean() const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        bad_line(line, "expected true or false");
    }
    std::string str() const {
        if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"')
            bad_line(line, "expected a quoted string");
        return raw.substr(1, raw.size() - 2);
    }
    std::vector<std::string> str_array() const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']')
            bad_line(line, "expected an array");
        std::vector<std::string> out;
        std::string body = raw.substr(1, raw.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            if (item.size() < 2 || item.front() != '"' || item.back() != '"')
                bad_line(line, "array elements must be quoted strings");
            out.push_back(item.substr(1, item.size() - 2));
        }
        return out;
    }
};

void apply(RunConfig& cfg, const std::string& section, const std::string& key,
           const Value& v) {
    RunParams& r = cfg.run;
    if (section == "world") {
        if (key == "size_m") cfg.world.size_m = v.num();
        else if (key == "room_count") cfg.world.room_count = v.integer();
        else if (key == "object_density") cfg.world.object_density = v.num();
        else if (key == "resolution") cfg.world.resolution = v.num();
        else bad_line(v.line, "unknown key '" + key + "' in [world]");
    } else if (section == "sensor") {
        if (key == "rays") r.sensor.rays = v.integer();
        else if (key == "fov") r.sensor.fov = v.num();
        else if (key == "max_range") r.sensor.max_range = v.num();
        else if (key == "patch") r.sensor.patch = v.integer();
        else if (key == "patch_res") r.sensor.patch_res = v.num();
        else bad_line(v.line, "unknown key '" + key + "' in [sensor]");
    } else if (section == "policy") {
        PolicyConfig& p = cfg.policy;
        if (key == "model_dim") {
            p.encoder.model_dim = v.integer();
            p.denoiser.model_dim = v.integer();
        } else if (key == "heads") p.denoiser.heads = v.integer();
        else if (key == "blocks") p.denoiser.blocks = v.integer();
        else if (key == "horizon") {
            p.denoiser.horizon = v.integer();
            p.flow.horizon = v.integer();
        } else if (key == "time_dim") p.denoiser.time_dim = v.integer();
        else if (key == "ff_hidden") p.denoiser.ff_hidden = v.integer();
        else if (key == "frame_hidden") p.encoder.frame_hidden = v.integer();
        else if (key == "coord_hidden") p.encoder.coord_hidden = v.integer();
        else if (key == "euler_steps") p.flow.euler_steps = v.integer();
        else if (key == "additive_update") p.flow.additive_update = v.boolean();
        else if (key == "context_frames") r.context_frames = v.integer();
        else if (key == "use_cache") r.use_cache = v.boolean();
        else if (key == "memory_capacity") r.memory_capacity = v.integer();
        else bad_line(v.line, "unknown key '" + key + "' in [policy]");
    } else if (section == "slow") {
        if (key == "alpha") r.slow.alpha = v.num();
        else if (key == "beta") r.slow.beta = v.num();
        else if (key == "gamma") r.slow.gamma = v.num();
        else if (key == "rho") r.slow.rho = v.num();
        else if (key == "proxy_lambda") r.slow.proxy_lambda = v.num();
        else if (key == "sem_radius") r.slow.sem_radius = v.num();
        else if (key == "period") r.slow_period = v.integer();
        else if (key == "stall_dist") r.stall_dist = v.num();
        else if (key == "stall_window") r.stall_window = v.integer();
        else if (key == "subgoal_radius") r.subgoal_radius = v.num();
        else if (key == "remote_host") r.remote.host = v.str();
        else if (key == "remote_port") r.remote.port = v.integer();
        else if (key == "remote_timeout_s") r.remote.timeout_s = v.num();
        else bad_line(v.line, "unknown key '" + key + "' in [slow]");
    } else if (section == "controller") {
        if (key == "v_max") r.limits.v_max = v.num();
        else if (key == "a_max") r.limits.a_max = v.num();
        else if (key == "omega_max") r.limits.omega_max = v.num();
        else if (key == "dt") r.limits.dt = v.num();
        else if (key == "k_theta") r.gains.k_theta = v.num();
        else if (key == "w_dist") r.gains.w_dist = v.num();
        else if (key == "w_speed") r.gains.w_speed = v.num();
        else if (key == "w_velocity") r.gains.w_velocity = v.num();
        else if (key == "arrive_radius") r.gains.arrive_radius = v.num();
        else if (key == "agent_radius") r.agent_radius = v.num();
        else bad_line(v.line, "unknown key '" + key + "' in [controller]");
    } else if (section == "suite") {
        SuiteSpec& s = cfg.suite;
        if (key == "task") s.task = v.str();
        else if (key == "episodes") s.episodes = v.integer();
        else if (key == "worlds") s.worlds = v.integer();
        else if (key == "seed") s.seed = v.u64();
        else if (key == "cells") s.cells = v.str_array();
        else if (key == "workers") s.workers = v.integer();
        else if (key == "replay_logs") s.replay_logs = v.integer();
        else if (key == "success_radius") s.episode.success_radius = v.num();
        else if (key == "max_steps") s.episode.max_steps = v.integer();
        else if (key == "min_path") s.episode.min_path = v.num();
        else if (key == "max_path") s.episode.max_path = v.num();
        else bad_line(v.line, "unknown key '" + key + "' in [suite]");
    } else {
        bad_line(v.line, "key outside any section");
    }
}

}  // namespace

TaskKind SuiteSpec::kind() const {
    if (task == "point") return TaskKind::PointGoal;
    if (task == "object") return TaskKind::ObjectGoal;
    if (task == "instruct") return TaskKind::InstructGoal;
    raise(ErrorCode::invalid_argument, "SuiteSpec: unknown task '" + task + "'");
}

void SuiteSpec::validate() const {
    kind();
    if (episodes < 0 || worlds < 1)
        raise(ErrorCode::invalid_argument, "SuiteSpec: episodes must be >= 0, worlds >= 1");
    if (workers < 1)
        raise(ErrorCode::invalid_argument, "SuiteSpec: workers must be >= 1");
    if (replay_logs < 0)
        raise(ErrorCode::invalid_argument, "SuiteSpec: replay_logs must be >= 0");
    if (cells.empty())
        raise(ErrorCode::invalid_argument, "SuiteSpec: at least one cell");
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.policy.encoder.feature_dim = cfg.run.sensor.feature_dim();
    cfg.policy.encoder.vocab_size = Vocab::size();
    return cfg;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') bad_line(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"world", "sensor", "policy",
                                          "slow", "controller", "suite"};
            bool ok = false;
            for (const char* k : known) ok = ok || section == k;
            if (!ok) bad_line(line_no, "unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) bad_line(line_no, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        Value v{trim(line.substr(eq + 1)), line_no};
        if (key.empty() || v.raw.empty()) bad_line(line_no, "expected key = value");
        apply(cfg, section, key, v);
    }
    cfg.policy.encoder.feature_dim = cfg.run.sensor.feature_dim();
    cfg.policy.encoder.vocab_size = Vocab::size();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::io, "cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
    const RunParams& r = cfg.run;
    const PolicyConfig& p = cfg.policy;
    const SuiteSpec& s = cfg.suite;
    std::ostringstream o;
    o << "[world]\n"
      << "size_m = " << cfg.world.size_m << "\n"
      << "room_count = " << cfg.world.room_count << "\n"
      << "object_density = " << cfg.world.object_density << "\n"
      << "resolution = " << cfg.world.resolution << "\n\n";
    o << "[sensor]\n"
      << "rays = " << r.sensor.rays << "\n"
      << "fov = " << r.sensor.fov << "\n"
      << "max_range = " << r.sensor.max_range << "\n"
      << "patch = " << r.sensor.patch << "\n"
      << "patch_res = " << r.sensor.patch_res << "\n\n";
    o << "[policy]\n"
      << "model_dim = " << p.denoiser.model_dim << "\n"
      << "heads = " << p.denoiser.heads << "\n"
      << "blocks = " << p.denoiser.blocks << "\n"
      << "horizon = " << p.denoiser.horizon << "\n"
      << "time_dim = " << p.denoiser.time_dim << "\n"
      << "ff_hidden = " << p.denoiser.ff_hidden << "\n"
      << "frame_hidden = " << p.encoder.frame_hidden << "\n"
      << "coord_hidden = " << p.encoder.coord_hidden << "\n"
      << "euler_steps = " << p.flow.euler_steps << "\n"
      << "additive_update = " << (p.flow.additive_update ? "true" : "false") << "\n"
      << "context_frames = " << r.context_frames << "\n"
      << "use_cache = " << (r.use_cache ? "true" : "false") << "\n"
      << "memory_capacity = " << r.memory_capacity << "\n\n";
    o << "[slow]\n"
      << "alpha = " << r.slow.alpha << "\n"
      << "beta = " << r.slow.beta << "\n"
      << "gamma = " << r.slow.gamma << "\n"
      << "rho = " << r.slow.rho << "\n"
      << "proxy_lambda = " << r.slow.proxy_lambda << "\n"
      << "sem_radius = " << r.slow.sem_radius << "\n"
      << "period = " << r.slow_period << "\n"
      << "stall_dist = " << r.stall_dist << "\n"
      << "stall_window = " << r.stall_window << "\n"
      << "subgoal_radius = " << r.subgoal_radius << "\n"
      << "remote_host = \"" << r.remote.host << "\"\n"
      << "remote_port = " << r.remote.port << "\n"
      << "remote_timeout_s = " << r.remote.timeout_s << "\n\n";
    o << "[controller]\n"
      << "v_max = " << r.limits.v_max << "\n"
      << "a_max = " << r.limits.a_max << "\n"
      << "omega_max = " << r.limits.omega_max << "\n"
      << "dt = " << r.limits.dt << "\n"
      << "k_theta = " << r.gains.k_theta << "\n"
      << "w_dist = " << r.gains.w_dist << "\n"
      << "w_speed = " << r.gains.w_speed << "\n"
      << "w_velocity = " << r.gains.w_velocity << "\n"
      << "arrive_radius = " << r.gains.arrive_radius << "\n"
      << "agent_radius = " << r.agent_radius << "\n\n";
    o << "[suite]\n"
      << "task = \"" << s.task << "\"\n"
      << "episodes = " << s.episodes << "\n"
      << "worlds = " << s.worlds << "\n"
      << "seed = " << s.seed << "\n"
      << "cells = [";
    for (size_t i = 0; i < s.cells.size(); ++i)
        o << (i ? ", " : "") << '"' << s.cells[i] << '"';
    o << "]\n"
      << "workers = " << s.workers << "\n"
      << "replay_logs = " << s.replay_logs << "\n"
      << "success_radius = " << s.episode.success_radius << "\n"
      << "max_steps = " << s.episode.max_steps << "\n"
      << "min_path = " << s.episode.min_path << "\n"
      << "max_path = " << s.episode.max_path << "\n";
    return o.str();
}

}  // namespace duonav
