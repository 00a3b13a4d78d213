#include <algorithm>
#include <cmath>
#include <queue>

#include "duonav/error.hpp"
#include "duonav/rng.hpp"
#include "duonav/world.hpp"

namespace duonav {

namespace {

struct Region {
    int x0, y0, x1, y1;  // free-cell rect, [x0,x1) x [y0,y1)
    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    int area() const { return width() * height(); }
};

// A region can host a wall with a room of at least `min_side` on both sides.
bool splittable(const Region& r, int min_side) {
    return r.width() >= 2 * min_side + 1 || r.height() >= 2 * min_side + 1;
}

void carve_split(Grid2D<uint8_t>& occ, Rng& rng, const Region& r, int min_side,
                 int door_w, Region& a, Region& b) {
    bool vertical = r.width() >= r.height();
    if (vertical && r.width() < 2 * min_side + 1) vertical = false;
    if (!vertical && r.height() < 2 * min_side + 1) vertical = true;

    if (vertical) {
        int p = rng.uniform_int(r.x0 + min_side, r.x1 - 1 - min_side);
        for (int y = r.y0; y < r.y1; ++y) occ.at(p, y) = kCellWall;
        int dw = std::min(door_w, r.height() - 2);
        int dy = rng.uniform_int(r.y0 + 1, r.y1 - 1 - dw);
        for (int y = dy; y < dy + dw; ++y) occ.at(p, y) = kCellFree;
        a = {r.x0, r.y0, p, r.y1};
        b = {p + 1, r.y0, r.x1, r.y1};
    } else {
        int p = rng.uniform_int(r.y0 + min_side, r.y1 - 1 - min_side);
        for (int x = r.x0; x < r.x1; ++x) occ.at(x, p) = kCellWall;
        int dw = std::min(door_w, r.width() - 2);
        int dx = rng.uniform_int(r.x0 + 1, r.x1 - 1 - dw);
        for (int x = dx; x < dx + dw; ++x) occ.at(x, p) = kCellFree;
        a = {r.x0, r.y0, r.x1, p};
        b = {r.x0, p + 1, r.x1, r.y1};
    }
}

int count_reachable(const Grid2D<uint8_t>& occ, CellIdx from) {
    Grid2D<uint8_t> seen(occ.w, occ.h, 0);
    std::queue<CellIdx> q;
    q.push(from);
    seen.at(from) = 1;
    int n = 0;
    while (!q.empty()) {
        CellIdx c = q.front();
        q.pop();
        ++n;
        const int dx[4] = {1, -1, 0, 0};
        const int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            CellIdx nb{c.x + dx[k], c.y + dy[k]};
            if (occ.in_bounds(nb) && !seen.at(nb) && occ.at(nb) == kCellFree) {
                seen.at(nb) = 1;
                q.push(nb);
            }
        }
    }
    return n;
}

}  // namespace

World generate_world(uint64_t seed, const WorldSpec& spec) {
    if (spec.size_m <= 0 || spec.resolution <= 0 || spec.room_count < 1 ||
        spec.object_density < 0)
        raise(ErrorCode::invalid_argument, "generate_world: spec sizes must be positive");

    const int n = static_cast<int>(std::lround(spec.size_m / spec.resolution));
    const int min_side = std::max(8, static_cast<int>(std::lround(2.0 / spec.resolution)));
    const int door_w = std::max(3, static_cast<int>(std::lround(0.8 / spec.resolution)));

    if (n < min_side + 2)
        raise(ErrorCode::unsatisfiable, "generate_world: world too small");
    // Coarse feasibility bound: every room needs at least min_side^2 cells.
    if (static_cast<long>(spec.room_count) * min_side * min_side > static_cast<long>(n - 2) * (n - 2))
        raise(ErrorCode::unsatisfiable, "generate_world: too many rooms for size");

    World w;
    w.seed = seed;
    w.resolution = spec.resolution;
    w.size_m = n * spec.resolution;
    w.occ = Grid2D<uint8_t>(n, n, kCellFree);
    for (int i = 0; i < n; ++i) {
        w.occ.at(i, 0) = kCellWall;
        w.occ.at(i, n - 1) = kCellWall;
        w.occ.at(0, i) = kCellWall;
        w.occ.at(n - 1, i) = kCellWall;
    }

    Rng rng(splitmix64(seed));

    std::vector<Region> leaves{{1, 1, n - 1, n - 1}};
    while (static_cast<int>(leaves.size()) < spec.room_count) {
        // Split the largest splittable leaf.
        int best = -1;
        for (size_t i = 0; i < leaves.size(); ++i) {
            if (!splittable(leaves[i], min_side)) continue;
            if (best < 0 || leaves[i].area() > leaves[best].area())
                best = static_cast<int>(i);
        }
        if (best < 0)
            raise(ErrorCode::unsatisfiable,
                  "generate_world: cannot reach requested room count");
        Region a, b;
        carve_split(w.occ, rng, leaves[best], min_side, door_w, a, b);
        leaves[best] = a;
        leaves.push_back(b);
    }

    // Deterministic room order: scanline by (y0, x0).
    std::sort(leaves.begin(), leaves.end(), [](const Region& a, const Region& b) {
        return a.y0 != b.y0 ? a.y0 < b.y0 : a.x0 < b.x0;
    });

    // Label palette cycles through all room types before repeating.
    std::vector<int> palette;
    for (size_t i = 0; i < leaves.size(); ++i)
        palette.push_back(static_cast<int>(i % kRoomCount));
    std::shuffle(palette.begin(), palette.end(), rng.engine);
    for (size_t i = 0; i < leaves.size(); ++i) {
        Room room;
        room.x0 = leaves[i].x0;
        room.y0 = leaves[i].y0;
        room.x1 = leaves[i].x1;
        room.y1 = leaves[i].y1;
        room.label = static_cast<RoomLabel>(palette[i]);
        w.rooms.push_back(room);
    }

    // Objects: affinity- and area-weighted room choice, clearance-checked
    // position inside the room.
    const int want = static_cast<int>(std::lround(spec.object_density * w.size_m * w.size_m));
    const double obj_margin = 0.3;
    const double obj_sep = 0.5;
    for (int k = 0; k < want; ++k) {
        auto cat = static_cast<Category>(rng.uniform_int(0, kCategoryCount - 1));
        std::vector<double> weight(w.rooms.size());
        double total = 0;
        for (size_t r = 0; r < w.rooms.size(); ++r) {
            weight[r] = room_affinity(cat, w.rooms[r].label) *
                        w.rooms[r].area_m2(w.resolution);
            total += weight[r];
        }
        if (total <= 0) continue;
        double pick = rng.uniform(0, total);
        size_t room_id = 0;
        for (; room_id + 1 < weight.size(); ++room_id) {
            if (pick < weight[room_id]) break;
            pick -= weight[room_id];
        }
        const Room& room = w.rooms[room_id];
        bool placed = false;
        for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
            double lo_x = room.x0 * w.resolution + obj_margin;
            double hi_x = room.x1 * w.resolution - obj_margin;
            double lo_y = room.y0 * w.resolution + obj_margin;
            double hi_y = room.y1 * w.resolution - obj_margin;
            if (lo_x >= hi_x || lo_y >= hi_y) break;
            Vec2 pos{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
            if (w.occupied(pos)) continue;
            bool clear = true;
            for (const auto& other : w.objects)
                if (distance(pos, other.pos) < obj_sep) { clear = false; break; }
            if (!clear) continue;
            WorldObject obj;
            obj.pos = pos;
            obj.category = cat;
            obj.room_id = static_cast<int>(room_id);
            w.objects.push_back(obj);
            placed = true;
        }
    }

    // Structural sanity: free interior must be one connected component.
    CellIdx probe{(w.rooms[0].x0 + w.rooms[0].x1) / 2, (w.rooms[0].y0 + w.rooms[0].y1) / 2};
    int free_total = 0;
    for (uint8_t c : w.occ.cells)
        if (c == kCellFree) ++free_total;
    if (count_reachable(w.occ, probe) != free_total)
        raise(ErrorCode::runtime, "generate_world: free space is disconnected");

    return w;
}

}  // namespace duonav
