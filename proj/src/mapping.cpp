#include "duonav/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "duonav/error.hpp"

namespace duonav {

namespace {

constexpr uint16_t kCounterCap = 60000;

void bump(uint16_t& c) {
    if (c < kCounterCap) ++c;
}

// Visits (cell, entry_t) along the ray, mirroring cast_ray's traversal
// order, until entry_t exceeds `length`.
template <typename Fn>
void walk_ray(const OccupancyMap& map, const Vec2& origin, double angle,
              double length, Fn&& visit) {
    const double res = map.resolution;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    CellIdx cell = map.cell_of(origin);
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
    auto border_t = [&](double pos, int cell_i, double dir, int step) {
        if (step == 0) return std::numeric_limits<double>::infinity();
        double edge = (step > 0 ? (cell_i + 1) : cell_i) * res;
        return (edge - pos) / dir;
    };
    double t_max_x = border_t(origin.x, cell.x, dx, step_x);
    double t_max_y = border_t(origin.y, cell.y, dy, step_y);
    const double t_delta_x = step_x ? res / std::abs(dx) : std::numeric_limits<double>::infinity();
    const double t_delta_y = step_y ? res / std::abs(dy) : std::numeric_limits<double>::infinity();

    double entry_t = 0.0;
    while (entry_t <= length) {
        if (map.hit_n.in_bounds(cell)) visit(cell, entry_t);
        if (t_max_x < t_max_y) {
            entry_t = t_max_x;
            t_max_x += t_delta_x;
            cell.x += step_x;
        } else {
            entry_t = t_max_y;
            t_max_y += t_delta_y;
            cell.y += step_y;
        }
    }
}

}  // namespace

size_t OccupancyMap::unknown_count() const {
    size_t n = 0;
    for (size_t i = 0; i < hit_n.cells.size(); ++i)
        if (hit_n.cells[i] == 0 && free_n.cells[i] == 0) ++n;
    return n;
}

void integrate(OccupancyMap& map, const Observation& obs, const SensorSpec& sensor) {
    // Depths come back as float32; tolerate that rounding when matching the
    // wall cell's entry distance.
    const double eps = 1e-4;
    for (int i = 0; i < sensor.rays; ++i) {
        double angle = obs.pose.theta + sensor.ray_offset(i);
        double d = obs.depth[i];
        bool wall = obs.hit[i] != 0;
        walk_ray(map, obs.pose.position(), angle, d + eps,
                 [&](const CellIdx& c, double entry_t) {
                     if (wall && entry_t >= d - eps)
                         bump(map.hit_n.at(c));
                     else if (entry_t < d - eps)
                         bump(map.free_n.at(c));
                 });
    }
}

std::vector<CellIdx> extract_frontiers(const OccupancyMap& map) {
    std::vector<CellIdx> out;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (map.state(x, y) != CellState::Free) continue;
            bool frontier = false;
            for (int dy = -1; dy <= 1 && !frontier; ++dy)
                for (int dx = -1; dx <= 1 && !frontier; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    int nx = x + dx, ny = y + dy;
                    if (map.hit_n.in_bounds(nx, ny) &&
                        map.state(nx, ny) == CellState::Unknown)
                        frontier = true;
                }
            if (frontier) out.push_back({x, y});
        }
    }
    return out;
}

std::vector<Frontier> cluster_frontiers(const OccupancyMap& map,
                                        const std::vector<CellIdx>& cells,
                                        int min_cluster_size,
                                        const Pose2D& agent_pose) {
    std::vector<CellIdx> sorted = cells;
    std::sort(sorted.begin(), sorted.end());

    Grid2D<uint8_t> member(map.width(), map.height(), 0);
    for (const auto& c : sorted) member.at(c) = 1;

    Grid2D<uint8_t> seen(map.width(), map.height(), 0);
    std::vector<Frontier> out;
    for (const auto& start : sorted) {
        if (seen.at(start)) continue;
        Frontier f;
        std::queue<CellIdx> q;
        q.push(start);
        seen.at(start) = 1;
        while (!q.empty()) {
            CellIdx c = q.front();
            q.pop();
            f.cells.push_back(c);
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    CellIdx nb{c.x + dx, c.y + dy};
                    if (member.in_bounds(nb) && member.at(nb) && !seen.at(nb)) {
                        seen.at(nb) = 1;
                        q.push(nb);
                    }
                }
        }
        if (static_cast<int>(f.cells.size()) < min_cluster_size) continue;
        std::sort(f.cells.begin(), f.cells.end());
        f.size = static_cast<int>(f.cells.size());
        Vec2 sum{0, 0};
        for (const auto& c : f.cells) sum = sum + map.center_of(c);
        f.centroid = sum * (1.0 / f.size);
        f.bearing_from_agent =
            wrap_angle(bearing(agent_pose.position(), f.centroid) - agent_pose.theta);
        f.id = static_cast<int>(out.size());
        out.push_back(std::move(f));
    }
    return out;
}

std::string OccupancyMap::to_ascii() const {
    std::string s;
    s.reserve(static_cast<size_t>(width() + 1) * height());
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) {
            switch (state(x, y)) {
                case CellState::Unknown: s += 'U'; break;
                case CellState::Free: s += 'F'; break;
                case CellState::Occupied: s += 'O'; break;
            }
        }
        s += '\n';
    }
    return s;
}

OccupancyMap OccupancyMap::from_ascii(const std::string& text, double res) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    if (rows.empty())
        raise(ErrorCode::parse, "OccupancyMap::from_ascii: empty input");
    OccupancyMap map(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()), res);
    for (int y = 0; y < map.height(); ++y) {
        if (rows[y].size() != static_cast<size_t>(map.width()))
            raise(ErrorCode::parse, "OccupancyMap::from_ascii: ragged rows");
        for (int x = 0; x < map.width(); ++x) {
            switch (rows[y][x]) {
                case 'U': break;
                case 'F': map.free_n.at(x, y) = 1; break;
                case 'O': map.hit_n.at(x, y) = 1; break;
                default:
                    raise(ErrorCode::parse, "OccupancyMap::from_ascii: bad char");
            }
        }
    }
    return map;
}

}  // namespace duonav
