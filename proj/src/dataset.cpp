#include "duonav/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "duonav/binio.hpp"
#include "duonav/rng.hpp"
#include "duonav/vocab.hpp"

namespace duonav {

namespace {
constexpr char kMagic[5] = "DNDS";
constexpr uint32_t kVersion = 1;
}  // namespace

const char* record_task_name(RecordTask t) {
    switch (t) {
        case RecordTask::Point: return "point";
        case RecordTask::Object: return "object";
        case RecordTask::Instruct: return "instruct";
        default: return "frontier";
    }
}

void Dataset::append_trajectory(uint32_t episode_id, RecordTask task,
                                const std::vector<ExpertStep>& steps,
                                const SensorSpec& sensor) {
    for (const auto& st : steps) {
        DataRecord r;
        r.episode_id = episode_id;
        r.step_index = static_cast<uint32_t>(st.obs.step_index);
        r.task = task;
        r.pose = st.obs.pose;
        r.instruction.assign(st.instruction.begin(), st.instruction.end());
        r.has_coord = st.coord.has_value();
        if (st.coord) r.coord = *st.coord;
        auto feats = st.obs.features(sensor);
        r.features.assign(feats.begin(), feats.end());
        r.waypoints = st.waypoints.flatten();
        r.chunk.reserve(st.chunk.size());
        for (auto a : st.chunk) r.chunk.push_back(static_cast<uint8_t>(a));
        if (feature_dim == 0) feature_dim = static_cast<uint32_t>(r.features.size());
        if (horizon == 0) horizon = static_cast<uint32_t>(st.waypoints.horizon());
        if (r.features.size() != feature_dim || r.chunk.size() != horizon ||
            r.waypoints.size() != horizon * kWaypointDims)
            raise(ErrorCode::invalid_argument, "inconsistent record shape");
        records.push_back(std::move(r));
    }
}

std::vector<const DataRecord*> Dataset::episode_records(uint32_t episode_id) const {
    std::vector<const DataRecord*> out;
    for (const auto& r : records)
        if (r.episode_id == episode_id) out.push_back(&r);
    return out;
}

void Dataset::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorCode::io, "cannot open dataset file for writing: " + path);
    os.write(kMagic, 4);
    binio::write_u32(os, kVersion);
    binio::write_u32(os, static_cast<uint32_t>(records.size()));
    binio::write_u32(os, feature_dim);
    binio::write_u32(os, horizon);
    auto index_pos_field = os.tellp();
    binio::write_u64(os, 0);  // patched below

    std::vector<uint64_t> offsets;
    offsets.reserve(records.size());
    for (const auto& r : records) {
        offsets.push_back(static_cast<uint64_t>(os.tellp()));
        binio::write_u32(os, r.episode_id);
        binio::write_u32(os, r.step_index);
        binio::write_pod(os, static_cast<uint8_t>(r.task));
        binio::write_pod(os, static_cast<uint8_t>(r.has_coord ? 1 : 0));
        binio::write_f64(os, r.pose.x);
        binio::write_f64(os, r.pose.y);
        binio::write_f64(os, r.pose.theta);
        for (double v : r.coord) binio::write_f64(os, v);
        binio::write_vec(os, r.instruction);
        binio::write_vec(os, r.features);
        binio::write_vec(os, r.waypoints);
        binio::write_vec(os, r.chunk);
    }
    uint64_t index_offset = static_cast<uint64_t>(os.tellp());
    for (uint64_t off : offsets) binio::write_u64(os, off);
    os.seekp(index_pos_field);
    binio::write_u64(os, index_offset);
    if (!os) raise(ErrorCode::io, "dataset write failed: " + path);
}

Dataset Dataset::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(ErrorCode::io, "cannot open dataset file: " + path);
    binio::expect_magic(is, kMagic, "dataset");
    uint32_t version = binio::read_u32(is);
    if (version != kVersion) raise(ErrorCode::parse, "unsupported dataset version");
    Dataset ds;
    uint32_t count = binio::read_u32(is);
    ds.feature_dim = binio::read_u32(is);
    ds.horizon = binio::read_u32(is);
    binio::read_u64(is);  // index offset; records are read sequentially
    ds.records.resize(count);
    for (auto& r : ds.records) {
        r.episode_id = binio::read_u32(is);
        r.step_index = binio::read_u32(is);
        r.task = static_cast<RecordTask>(binio::read_pod<uint8_t>(is));
        r.has_coord = binio::read_pod<uint8_t>(is) != 0;
        r.pose.x = binio::read_f64(is);
        r.pose.y = binio::read_f64(is);
        r.pose.theta = binio::read_f64(is);
        for (double& v : r.coord) v = binio::read_f64(is);
        r.instruction = binio::read_vec<int32_t>(is);
        r.features = binio::read_vec<float>(is);
        r.waypoints = binio::read_vec<double>(is);
        r.chunk = binio::read_vec<uint8_t>(is);
        if (r.features.size() != ds.feature_dim ||
            r.waypoints.size() != ds.horizon * kWaypointDims ||
            r.chunk.size() != ds.horizon)
            raise(ErrorCode::parse, "dataset record shape mismatch");
    }
    return ds;
}

void Dataset::export_jsonl(const std::string& path) const {
    std::ofstream os(path);
    if (!os) raise(ErrorCode::io, "cannot open jsonl file for writing: " + path);
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["episode"] = r.episode_id;
        j["step"] = r.step_index;
        j["task"] = record_task_name(r.task);
        j["pose"] = {r.pose.x, r.pose.y, r.pose.theta};
        j["tokens"] = r.instruction;
        j["text"] = Vocab::detokenize(
            std::vector<int>(r.instruction.begin(), r.instruction.end()));
        if (r.has_coord)
            j["coord"] = {r.coord[0], r.coord[1], r.coord[2], r.coord[3]};
        else
            j["coord"] = nullptr;
        j["features"] = r.features;
        nlohmann::json wp = nlohmann::json::array();
        for (uint32_t h = 0; h < horizon; ++h) {
            nlohmann::json row = nlohmann::json::array();
            for (int d = 0; d < kWaypointDims; ++d)
                row.push_back(r.waypoints[h * kWaypointDims + d]);
            wp.push_back(row);
        }
        j["waypoints"] = wp;
        nlohmann::json ch = nlohmann::json::array();
        for (uint8_t a : r.chunk)
            ch.push_back(chunk_action_name(static_cast<ChunkAction>(a)));
        j["chunk"] = ch;
        os << j.dump() << "\n";
    }
    if (!os) raise(ErrorCode::io, "jsonl write failed: " + path);
}

NormalizationBounds Dataset::compute_bounds() const {
    if (records.empty()) raise(ErrorCode::degenerate_input, "empty dataset has no bounds");
    NormalizationBounds b;
    for (int d = 0; d < kWaypointDims; ++d) {
        b.min[d] = 1e300;
        b.max[d] = -1e300;
    }
    for (const auto& r : records) {
        for (uint32_t h = 0; h < horizon; ++h) {
            for (int d = 0; d < kWaypointDims; ++d) {
                double v = r.waypoints[h * kWaypointDims + d];
                b.min[d] = std::min(b.min[d], v);
                b.max[d] = std::max(b.max[d], v);
            }
        }
    }
    for (int d = 0; d < kWaypointDims; ++d) {
        if (b.max[d] - b.min[d] < 1e-6) {
            double c = 0.5 * (b.max[d] + b.min[d]);
            b.min[d] = c - 0.5;
            b.max[d] = c + 0.5;
        }
    }
    b.min[4] = 0.0;  // completion flag range is fixed by construction
    b.max[4] = 1.0;
    b.validate();
    return b;
}

Dataset generate_dataset(const WorldSpec& wspec, const DataGenSpec& spec) {
    if (spec.worlds < 1)
        raise(ErrorCode::invalid_argument, "generate_dataset: worlds must be >= 1");
    if (spec.point < 0 || spec.object < 0 || spec.instruct < 0 || spec.frontier < 0)
        raise(ErrorCode::invalid_argument, "generate_dataset: negative episode count");

    std::vector<World> worlds;
    worlds.reserve(spec.worlds);
    for (int i = 0; i < spec.worlds; ++i)
        worlds.push_back(generate_world(derive_seed(spec.seed, 500 + i), wspec));

    Dataset data;
    uint32_t episode_id = 0;
    auto expert_block = [&](TaskKind kind, RecordTask task, int count, uint64_t base) {
        for (int k = 0; k < count; ++k) {
            const World& w = worlds[k % worlds.size()];
            Episode ep = generate_episode_retry(
                w, kind, derive_seed(spec.seed, base + k), spec.episode);
            data.append_trajectory(episode_id++, task,
                                   expert_trajectory(w, ep, spec.expert),
                                   spec.expert.sensor);
        }
    };
    expert_block(TaskKind::PointGoal, RecordTask::Point, spec.point, 1u << 20);
    expert_block(TaskKind::ObjectGoal, RecordTask::Object, spec.object, 2u << 20);
    expert_block(TaskKind::InstructGoal, RecordTask::Instruct, spec.instruct, 3u << 20);

    for (int k = 0; k < spec.frontier; ++k) {
        const World& w = worlds[k % worlds.size()];
        // Borrow a point episode's start pose for the exploration walk.
        Episode ep = generate_episode_retry(
            w, TaskKind::PointGoal, derive_seed(spec.seed, (4u << 20) + k), spec.episode);
        auto steps = frontier_trajectory(w, ep.start, spec.expert,
                                         derive_seed(spec.seed, (5u << 20) + k));
        if (!steps.empty())
            data.append_trajectory(episode_id++, RecordTask::Frontier, steps,
                                   spec.expert.sensor);
    }
    return data;
}

}  // namespace duonav
