#include "duonav/serialize.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

#include "duonav/error.hpp"
#include "duonav/memory_bank.hpp"

namespace duonav {

namespace {

using nlohmann::ordered_json;

constexpr int kWorldSchema = 1;
constexpr int kEpisodeSchema = 1;

nlohmann::json parse_json(const std::string& text, const char* what) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        raise(ErrorCode::parse, std::string(what) + ": malformed JSON");
    return j;
}

int label_from_name(const std::string& name) {
    for (int r = 0; r < kRoomCount; ++r)
        if (name == room_name(static_cast<RoomLabel>(r))) return r;
    raise(ErrorCode::parse, "unknown room label '" + name + "'");
}

int category_from_name(const std::string& name) {
    for (int c = 0; c < kCategoryCount; ++c)
        if (name == category_name(static_cast<Category>(c))) return c;
    raise(ErrorCode::parse, "unknown category '" + name + "'");
}

ordered_json rle_encode(const Grid2D<uint8_t>& g) {
    ordered_json runs = ordered_json::array();
    size_t i = 0;
    while (i < g.cells.size()) {
        size_t j = i;
        while (j < g.cells.size() && g.cells[j] == g.cells[i]) ++j;
        runs.push_back({static_cast<int>(g.cells[i]), static_cast<uint64_t>(j - i)});
        i = j;
    }
    return runs;
}

Grid2D<uint8_t> rle_decode(const nlohmann::json& runs, int w, int h) {
    Grid2D<uint8_t> g(w, h, 0);
    size_t pos = 0;
    for (const auto& run : runs) {
        if (!run.is_array() || run.size() != 2)
            raise(ErrorCode::parse, "grid rle: each run is [value, count]");
        uint8_t value = static_cast<uint8_t>(run[0].get<int>());
        uint64_t count = run[1].get<uint64_t>();
        if (pos + count > g.cells.size())
            raise(ErrorCode::parse, "grid rle: runs exceed width*height");
        for (uint64_t k = 0; k < count; ++k) g.cells[pos++] = value;
    }
    if (pos != g.cells.size())
        raise(ErrorCode::parse, "grid rle: runs do not cover the grid");
    return g;
}

}  // namespace

std::string world_to_json(const World& w) {
    ordered_json j;
    j["schema_version"] = kWorldSchema;
    j["seed"] = w.seed;
    j["size_m"] = w.size_m;
    j["resolution"] = w.resolution;
    j["grid"] = {{"width", w.occ.w}, {"height", w.occ.h}, {"rle", rle_encode(w.occ)}};
    ordered_json rooms = ordered_json::array();
    for (const Room& r : w.rooms)
        rooms.push_back({{"x0", r.x0},
                         {"y0", r.y0},
                         {"x1", r.x1},
                         {"y1", r.y1},
                         {"label", room_name(r.label)}});
    j["rooms"] = rooms;
    ordered_json objects = ordered_json::array();
    for (const WorldObject& o : w.objects)
        objects.push_back({{"x", o.pos.x},
                           {"y", o.pos.y},
                           {"category", category_name(o.category)},
                           {"room_id", o.room_id},
                           {"radius", o.radius}});
    j["objects"] = objects;
    return j.dump(2);
}

World world_from_json(const std::string& text) {
    auto j = parse_json(text, "world");
    try {
        if (j.at("schema_version").get<int>() != kWorldSchema)
            raise(ErrorCode::parse, "world: unsupported schema_version");
        World w;
        w.seed = j.at("seed").get<uint64_t>();
        w.size_m = j.at("size_m").get<double>();
        w.resolution = j.at("resolution").get<double>();
        const auto& grid = j.at("grid");
        w.occ = rle_decode(grid.at("rle"), grid.at("width").get<int>(),
                           grid.at("height").get<int>());
        for (const auto& r : j.at("rooms")) {
            Room room;
            room.x0 = r.at("x0").get<int>();
            room.y0 = r.at("y0").get<int>();
            room.x1 = r.at("x1").get<int>();
            room.y1 = r.at("y1").get<int>();
            room.label = static_cast<RoomLabel>(label_from_name(r.at("label").get<std::string>()));
            w.rooms.push_back(room);
        }
        for (const auto& o : j.at("objects")) {
            WorldObject obj;
            obj.pos = {o.at("x").get<double>(), o.at("y").get<double>()};
            obj.category =
                static_cast<Category>(category_from_name(o.at("category").get<std::string>()));
            obj.room_id = o.at("room_id").get<int>();
            obj.radius = o.at("radius").get<double>();
            w.objects.push_back(obj);
        }
        return w;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::parse, std::string("world: ") + e.what());
    }
}

void save_world(const std::string& path, const World& w) {
    write_text_file(path, world_to_json(w) + "\n");
}

World load_world(const std::string& path) { return world_from_json(read_text_file(path)); }

std::string episode_to_json(const Episode& ep) {
    ordered_json j;
    j["schema_version"] = kEpisodeSchema;
    switch (ep.kind) {
        case TaskKind::PointGoal: j["kind"] = "point"; break;
        case TaskKind::ObjectGoal: j["kind"] = "object"; break;
        case TaskKind::InstructGoal: j["kind"] = "instruct"; break;
    }
    j["seed"] = ep.seed;
    j["start"] = {ep.start.x, ep.start.y, ep.start.theta};
    if (ep.goal_point)
        j["goal_point"] = {ep.goal_point->x, ep.goal_point->y, ep.goal_point->theta};
    else
        j["goal_point"] = nullptr;
    if (ep.goal_category >= 0)
        j["goal_category"] = category_name(static_cast<Category>(ep.goal_category));
    else
        j["goal_category"] = nullptr;
    j["instruction"] = ep.instruction;
    j["instruction_text"] = Vocab::detokenize(ep.instruction);
    j["success_radius"] = ep.success_radius;
    j["max_steps"] = ep.max_steps;
    j["shortest_len"] = ep.shortest_len;
    return j.dump(2);
}

Episode episode_from_json(const std::string& text) {
    auto j = parse_json(text, "episode");
    try {
        if (j.at("schema_version").get<int>() != kEpisodeSchema)
            raise(ErrorCode::parse, "episode: unsupported schema_version");
        Episode ep;
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "point") ep.kind = TaskKind::PointGoal;
        else if (kind == "object") ep.kind = TaskKind::ObjectGoal;
        else if (kind == "instruct") ep.kind = TaskKind::InstructGoal;
        else raise(ErrorCode::parse, "episode: unknown kind '" + kind + "'");
        ep.seed = j.at("seed").get<uint64_t>();
        auto st = j.at("start");
        ep.start = {st.at(0).get<double>(), st.at(1).get<double>(), st.at(2).get<double>()};
        if (!j.at("goal_point").is_null()) {
            auto gp = j.at("goal_point");
            ep.goal_point =
                Pose2D{gp.at(0).get<double>(), gp.at(1).get<double>(), gp.at(2).get<double>()};
        }
        if (!j.at("goal_category").is_null())
            ep.goal_category = category_from_name(j.at("goal_category").get<std::string>());
        ep.instruction = j.at("instruction").get<std::vector<int>>();
        ep.success_radius = j.at("success_radius").get<double>();
        ep.max_steps = j.at("max_steps").get<int>();
        ep.shortest_len = j.at("shortest_len").get<double>();
        return ep;
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorCode::parse, std::string("episode: ") + e.what());
    }
}

std::string world_ascii(const World& w) {
    std::string out;
    out.reserve(static_cast<size_t>(w.occ.h) * (w.occ.w + 1));
    for (int y = 0; y < w.occ.h; ++y) {
        for (int x = 0; x < w.occ.w; ++x)
            out += w.occ.at(x, y) == kCellFree ? '.' : '#';
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::io, "cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::io, "cannot open for writing: " + path);
    out << text;
    if (!out) raise(ErrorCode::io, "short write: " + path);
}

// --- memory bank dump/restore (JSON lines, one observation per line) ---

std::string MemoryBank::dump_jsonl() const {
    std::string out;
    for (const Observation* o : entries()) {
        ordered_json j;
        j["step"] = o->step_index;
        j["pose"] = {o->pose.x, o->pose.y, o->pose.theta};
        j["depth"] = o->depth;
        j["hit"] = o->hit;
        j["sem_cat"] = o->sem_cat;
        j["sem_depth"] = o->sem_depth;
        j["patch"] = o->patch;
        out += j.dump();
        out += '\n';
    }
    return out;
}

MemoryBank MemoryBank::restore_jsonl(const std::string& text, size_t capacity) {
    MemoryBank bank(capacity);
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            raise(ErrorCode::parse,
                  "memory dump line " + std::to_string(line_no) + ": malformed JSON");
        try {
            Observation o;
            o.step_index = j.at("step").get<int64_t>();
            auto p = j.at("pose");
            o.pose = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
            o.depth = j.at("depth").get<std::vector<float>>();
            o.hit = j.at("hit").get<std::vector<uint8_t>>();
            o.sem_cat = j.at("sem_cat").get<std::vector<int16_t>>();
            o.sem_depth = j.at("sem_depth").get<std::vector<float>>();
            o.patch = j.at("patch").get<std::vector<float>>();
            bank.push(o);
        } catch (const nlohmann::json::exception& e) {
            raise(ErrorCode::parse,
                  "memory dump line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return bank;
}

}  // namespace duonav
