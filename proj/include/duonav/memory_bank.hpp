#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "duonav/mapping.hpp"
#include "duonav/world.hpp"

namespace duonav {

// Indices kept when drawing k context slots out of n history entries: the
// ceil(k/2) most recent plus an even temporal stride over the older span.
// Shared by the memory bank and the trainer so training matches deployment.
std::vector<size_t> fast_context_indices(size_t n, int k);

// Where the goal category was last seen: ray endpoint in world coordinates,
// heading along the sighting ray.
struct GoalSighting {
    Pose2D pose;        // (x, y) = estimated object position, theta = ray angle
    int64_t step_index; // of the observation that produced it
};

// Bounded ring buffer of pose-stamped observations. Eviction is strictly
// FIFO; step indices must increase across pushes.
class MemoryBank {
public:
    explicit MemoryBank(size_t capacity = 512) : capacity_(capacity), slots_(capacity) {}

    void push(const Observation& obs);

    size_t size() const { return count_; }
    size_t capacity() const { return capacity_; }
    bool empty() const { return count_ == 0; }

    // i-th entry in chronological order, 0 = oldest retained.
    const Observation& entry(size_t i) const;

    // All retained entries, oldest first.
    std::vector<const Observation*> entries() const;

    // Short-horizon context for the fast system: with more than k entries,
    // keeps the ceil(k/2) most recent and fills the rest with an even
    // temporal subsample of the older span. Output is chronological.
    std::vector<const Observation*> sample_fast_context(int k) const;

    // Entry whose capture viewpoint best faces the frontier: minimizes
    // distance-to-centroid plus lambda times the absolute heading
    // misalignment. Ties go to the most recent entry.
    const Observation& frontier_proxy(const Frontier& frontier, double lambda = 1.0) const;

    // Most recent semantic sighting of the category, if any. Position is the
    // sighting ray's endpoint projected from the capture pose.
    std::optional<GoalSighting> locate_goal(int goal_category, const SensorSpec& sensor) const;

    // JSON-lines dump/restore for replay tests.
    std::string dump_jsonl() const;
    static MemoryBank restore_jsonl(const std::string& text, size_t capacity = 512);

private:
    size_t capacity_;
    std::vector<Observation> slots_;
    size_t next_slot_ = 0;
    size_t count_ = 0;
    int64_t last_step_ = -1;
};

}  // namespace duonav
