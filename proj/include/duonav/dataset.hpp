#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "duonav/expert.hpp"
#include "duonav/waypoint.hpp"

namespace duonav {

// Record task tags; the first three mirror TaskKind, frontier marks
// exploration supervision.
enum class RecordTask : uint8_t { Point = 0, Object = 1, Instruct = 2, Frontier = 3 };
const char* record_task_name(RecordTask t);

struct DataRecord {
    uint32_t episode_id = 0;
    uint32_t step_index = 0;
    RecordTask task = RecordTask::Point;
    Pose2D pose;                    // capture pose, world frame
    std::vector<int32_t> instruction;
    bool has_coord = false;
    CoordGoal coord{};              // agent-frame goal; valid iff has_coord
    std::vector<float> features;
    std::vector<double> waypoints;  // horizon x 5, agent frame
    std::vector<uint8_t> chunk;     // horizon entries

    WaypointSequence waypoint_seq() const { return WaypointSequence::from_flat(waypoints); }
};

// One record per expert timestep, grouped by episode in file order. Binary
// container: fixed header, packed records, trailing offset index.
struct Dataset {
    uint32_t feature_dim = 0;
    uint32_t horizon = 0;
    std::vector<DataRecord> records;

    void append_trajectory(uint32_t episode_id, RecordTask task,
                           const std::vector<ExpertStep>& steps, const SensorSpec& sensor);

    // Records of one episode, in push order.
    std::vector<const DataRecord*> episode_records(uint32_t episode_id) const;

    void save(const std::string& path) const;
    static Dataset load(const std::string& path);
    void export_jsonl(const std::string& path) const;

    // Per-dimension min/max over all waypoint labels; the completion dim is
    // pinned to [0, 1].
    NormalizationBounds compute_bounds() const;
};

// Expert corpus over freshly generated worlds: one trajectory per episode,
// episodes spread round-robin over `worlds` layouts.
struct DataGenSpec {
    int point = 0;
    int object = 0;
    int instruct = 0;
    int frontier = 0;  // exploration trajectories
    int worlds = 20;
    uint64_t seed = 5;
    ExpertParams expert;
    EpisodeParams episode;
};

Dataset generate_dataset(const WorldSpec& wspec, const DataGenSpec& spec);

}  // namespace duonav
