#include <algorithm>
#include <cmath>
#include <queue>

#include "duonav/error.hpp"
#include "duonav/world.hpp"

namespace duonav {

namespace {

constexpr double kSqrt2 = 1.41421356237309515;

struct OpenNode {
    double f;
    double g;
    int idx;
    bool operator>(const OpenNode& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g > o.g;
        return idx > o.idx;  // deterministic tie-break
    }
};

double octile(const CellIdx& a, const CellIdx& b) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

}  // namespace

PathResult shortest_path_on_grid(const Grid2D<uint8_t>& traversable, CellIdx start,
                                 CellIdx goal, double resolution) {
    if (!traversable.in_bounds(start) || !traversable.in_bounds(goal) ||
        !traversable.at(start) || !traversable.at(goal))
        raise(ErrorCode::invalid_argument, "shortest_path: endpoints must be free");

    if (start == goal) return {};

    const int w = traversable.w;
    const int h = traversable.h;
    std::vector<double> g(static_cast<size_t>(w) * h,
                          std::numeric_limits<double>::infinity());
    std::vector<int> parent(static_cast<size_t>(w) * h, -1);
    auto id = [w](const CellIdx& c) { return c.y * w + c.x; };

    std::priority_queue<OpenNode, std::vector<OpenNode>, std::greater<OpenNode>> open;
    g[id(start)] = 0.0;
    open.push({octile(start, goal), 0.0, id(start)});

    const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double cost8[8] = {1, 1, 1, 1, kSqrt2, kSqrt2, kSqrt2, kSqrt2};

    while (!open.empty()) {
        OpenNode top = open.top();
        open.pop();
        if (top.g > g[top.idx]) continue;
        CellIdx cur{top.idx % w, top.idx / w};
        if (cur == goal) break;
        for (int k = 0; k < 8; ++k) {
            CellIdx nb{cur.x + dx8[k], cur.y + dy8[k]};
            if (!traversable.in_bounds(nb) || !traversable.at(nb)) continue;
            // Diagonals may not cut a corner past a blocked orthogonal cell.
            if (k >= 4) {
                if (!traversable.at(cur.x + dx8[k], cur.y) ||
                    !traversable.at(cur.x, cur.y + dy8[k]))
                    continue;
            }
            double ng = top.g + cost8[k];
            if (ng < g[id(nb)] - 1e-12) {
                g[id(nb)] = ng;
                parent[id(nb)] = top.idx;
                open.push({ng + octile(nb, goal), ng, id(nb)});
            }
        }
    }

    if (!std::isfinite(g[id(goal)]))
        raise(ErrorCode::no_path, "shortest_path: goal unreachable");

    PathResult out;
    out.length_m = g[id(goal)] * resolution;
    for (int at = id(goal); at != -1; at = parent[at])
        out.cells.push_back({at % w, at / w});
    std::reverse(out.cells.begin(), out.cells.end());
    return out;
}

Grid2D<uint8_t> traversable_grid(const World& world, double inflate_radius) {
    Grid2D<uint8_t> t(world.occ.w, world.occ.h, 1);
    int r = static_cast<int>(std::ceil(inflate_radius / world.resolution));
    for (int y = 0; y < world.occ.h; ++y) {
        for (int x = 0; x < world.occ.w; ++x) {
            if (world.occ.at(x, y) == kCellFree) continue;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    if (t.in_bounds(x + dx, y + dy)) t.at(x + dx, y + dy) = 0;
                }
            }
        }
    }
    return t;
}

PathResult shortest_path(const World& world, const Vec2& start, const Vec2& goal) {
    Grid2D<uint8_t> t(world.occ.w, world.occ.h, 0);
    for (size_t i = 0; i < world.occ.cells.size(); ++i)
        t.cells[i] = world.occ.cells[i] == kCellFree ? 1 : 0;
    return shortest_path_on_grid(t, world.cell_of(start), world.cell_of(goal),
                                 world.resolution);
}

}  // namespace duonav
