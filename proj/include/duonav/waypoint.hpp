#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "duonav/geometry.hpp"

namespace duonav {

inline constexpr int kWaypointDims = 5;  // x, y, sin(theta), cos(theta), c

struct Waypoint {
    double x = 0.0;          // agent frame, meters
    double y = 0.0;          // agent frame, meters
    double sin_theta = 0.0;
    double cos_theta = 1.0;
    double c = 0.0;          // completion flag; {0,1} in labels

    double dim(int d) const {
        switch (d) {
            case 0: return x;
            case 1: return y;
            case 2: return sin_theta;
            case 3: return cos_theta;
            default: return c;
        }
    }
    void set_dim(int d, double v) {
        switch (d) {
            case 0: x = v; break;
            case 1: y = v; break;
            case 2: sin_theta = v; break;
            case 3: cos_theta = v; break;
            default: c = v; break;
        }
    }

    double heading() const { return decode_heading(sin_theta, cos_theta); }
    bool completed() const { return c >= 0.5; }

    static Waypoint from_pose(const Vec2& p, double theta, bool done) {
        auto [s, c] = encode_heading(theta);
        return {p.x, p.y, s, c, done ? 1.0 : 0.0};
    }
};

struct WaypointSequence {
    std::vector<Waypoint> items;

    WaypointSequence() = default;
    explicit WaypointSequence(int horizon) : items(horizon) {}

    int horizon() const { return static_cast<int>(items.size()); }
    Waypoint& operator[](int i) { return items[i]; }
    const Waypoint& operator[](int i) const { return items[i]; }

    // Flat (H x 5) view used by the flow code.
    std::vector<double> flatten() const {
        std::vector<double> out(items.size() * kWaypointDims);
        for (size_t i = 0; i < items.size(); ++i)
            for (int d = 0; d < kWaypointDims; ++d)
                out[i * kWaypointDims + d] = items[i].dim(d);
        return out;
    }
    static WaypointSequence from_flat(const std::vector<double>& flat) {
        WaypointSequence seq(static_cast<int>(flat.size() / kWaypointDims));
        for (int i = 0; i < seq.horizon(); ++i)
            for (int d = 0; d < kWaypointDims; ++d)
                seq.items[i].set_dim(d, flat[i * kWaypointDims + d]);
        return seq;
    }
};

// Per-dimension min/max computed from the training corpus. Values are mapped
// affinely onto [-1, 1]; out-of-bounds inputs clamp and bump a counter so the
// trainer can report them.
struct NormalizationBounds {
    std::array<double, kWaypointDims> min{-1.0, -1.0, -1.0, -1.0, 0.0};
    std::array<double, kWaypointDims> max{1.0, 1.0, 1.0, 1.0, 1.0};

    void validate() const {
        for (int d = 0; d < kWaypointDims; ++d)
            if (!(min[d] < max[d]))
                raise(ErrorCode::invalid_argument,
                      "NormalizationBounds: min must be < max per dimension");
    }

    double to_unit(int d, double v, std::size_t* clamped) const {
        if (v < min[d]) {
            if (clamped) ++*clamped;
            v = min[d];
        } else if (v > max[d]) {
            if (clamped) ++*clamped;
            v = max[d];
        }
        return 2.0 * (v - min[d]) / (max[d] - min[d]) - 1.0;
    }
    double from_unit(int d, double u) const {
        return min[d] + (u + 1.0) * 0.5 * (max[d] - min[d]);
    }
};

WaypointSequence normalize(const WaypointSequence& seq, const NormalizationBounds& b,
                           std::size_t* clamped = nullptr);
WaypointSequence denormalize(const WaypointSequence& seq, const NormalizationBounds& b);

}  // namespace duonav
