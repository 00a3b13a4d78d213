#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "duonav/grid.hpp"
#include "duonav/world.hpp"

namespace duonav {

enum class CellState : uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

// Online occupancy built from range observations. Per-cell hit/free counters
// make the state a pure function of accumulated evidence, so integration is
// order-insensitive and re-integrating an observation never changes the
// state, only the counts. Ties between conflicting evidence read as
// Occupied.
struct OccupancyMap {
    Grid2D<uint16_t> hit_n;
    Grid2D<uint16_t> free_n;
    double resolution = 0.1;

    OccupancyMap() = default;
    OccupancyMap(int w, int h, double res)
        : hit_n(w, h, 0), free_n(w, h, 0), resolution(res) {}

    int width() const { return hit_n.w; }
    int height() const { return hit_n.h; }

    CellState state(int x, int y) const {
        uint16_t h = hit_n.at(x, y), f = free_n.at(x, y);
        if (h == 0 && f == 0) return CellState::Unknown;
        return h >= f ? CellState::Occupied : CellState::Free;
    }
    CellState state(const CellIdx& c) const { return state(c.x, c.y); }

    CellIdx cell_of(const Vec2& p) const {
        return {static_cast<int>(std::floor(p.x / resolution)),
                static_cast<int>(std::floor(p.y / resolution))};
    }
    Vec2 center_of(const CellIdx& c) const {
        return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution};
    }

    size_t unknown_count() const;

    // One line per row, chars U/F/O; row 0 first.
    std::string to_ascii() const;
    static OccupancyMap from_ascii(const std::string& text, double res);
};

struct Frontier {
    int id = 0;
    std::vector<CellIdx> cells;
    Vec2 centroid;
    int size = 0;
    double bearing_from_agent = 0.0;
};

// Marks cells crossed by each ray Free and the wall endpoint Occupied.
// Max-range rays contribute Free evidence along their whole length.
void integrate(OccupancyMap& map, const Observation& obs, const SensorSpec& sensor);

// Free cells 8-adjacent to at least one Unknown cell. Cells beyond the grid
// border do not count as Unknown.
std::vector<CellIdx> extract_frontiers(const OccupancyMap& map);

// Connected components (8-adjacency) of the frontier cells; components below
// min_cluster_size are dropped. Ids follow scanline order of each
// component's first cell.
std::vector<Frontier> cluster_frontiers(const OccupancyMap& map,
                                        const std::vector<CellIdx>& cells,
                                        int min_cluster_size,
                                        const Pose2D& agent_pose);

}  // namespace duonav
