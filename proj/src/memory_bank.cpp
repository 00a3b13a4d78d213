#include "duonav/memory_bank.hpp"

#include <algorithm>
#include <cmath>

#include "duonav/error.hpp"

namespace duonav {

void MemoryBank::push(const Observation& obs) {
    if (obs.step_index <= last_step_)
        raise(ErrorCode::invalid_argument,
              "MemoryBank::push: step_index must be strictly increasing");
    last_step_ = obs.step_index;
    slots_[next_slot_] = obs;
    next_slot_ = (next_slot_ + 1) % capacity_;
    if (count_ < capacity_) ++count_;
}

const Observation& MemoryBank::entry(size_t i) const {
    // Oldest retained entry sits at next_slot_ once the ring has wrapped.
    size_t base = count_ < capacity_ ? 0 : next_slot_;
    return slots_[(base + i) % capacity_];
}

std::vector<const Observation*> MemoryBank::entries() const {
    std::vector<const Observation*> out;
    out.reserve(count_);
    for (size_t i = 0; i < count_; ++i) out.push_back(&entry(i));
    return out;
}

std::vector<size_t> fast_context_indices(size_t n, int k) {
    if (k < 1)
        raise(ErrorCode::invalid_argument, "fast_context_indices: k must be >= 1");
    std::vector<size_t> out;
    if (n <= static_cast<size_t>(k)) {
        out.resize(n);
        for (size_t i = 0; i < n; ++i) out[i] = i;
        return out;
    }
    int recent = (k + 1) / 2;
    int older = k - recent;
    size_t pool = n - static_cast<size_t>(recent);
    out.reserve(k);
    // Even stride over the older span: index floor(i * pool / older).
    for (int i = 0; i < older; ++i)
        out.push_back(static_cast<size_t>(i) * pool / older);
    for (size_t i = pool; i < n; ++i) out.push_back(i);
    return out;
}

std::vector<const Observation*> MemoryBank::sample_fast_context(int k) const {
    std::vector<const Observation*> all = entries();
    std::vector<const Observation*> out;
    auto idx = fast_context_indices(all.size(), k);
    out.reserve(idx.size());
    for (size_t i : idx) out.push_back(all[i]);
    return out;
}

const Observation& MemoryBank::frontier_proxy(const Frontier& frontier,
                                              double lambda) const {
    if (empty())
        raise(ErrorCode::invalid_argument, "frontier_proxy: bank is empty");
    const Observation* best = nullptr;
    double best_score = 0.0;
    for (size_t i = 0; i < count_; ++i) {
        const Observation& e = entry(i);
        double dist = distance(e.pose.position(), frontier.centroid);
        double align = std::abs(
            wrap_angle(bearing(e.pose.position(), frontier.centroid) - e.pose.theta));
        double score = dist + lambda * align;
        // <= keeps the most recent entry on ties (entries are chronological).
        if (!best || score <= best_score) {
            best = &e;
            best_score = score;
        }
    }
    return *best;
}

std::optional<GoalSighting> MemoryBank::locate_goal(int goal_category,
                                                    const SensorSpec& sensor) const {
    for (size_t i = count_; i-- > 0;) {
        const Observation& e = entry(i);
        int best_ray = -1;
        for (int r = 0; r < sensor.rays; ++r) {
            if (e.sem_cat[r] != goal_category) continue;
            if (best_ray < 0 || e.sem_depth[r] < e.sem_depth[best_ray]) best_ray = r;
        }
        if (best_ray < 0) continue;
        double angle = e.pose.theta + sensor.ray_offset(best_ray);
        Vec2 p = e.pose.position() +
                 Vec2{std::cos(angle), std::sin(angle)} * e.sem_depth[best_ray];
        return GoalSighting{Pose2D{p.x, p.y, wrap_angle(angle)}, e.step_index};
    }
    return std::nullopt;
}

}  // namespace duonav
