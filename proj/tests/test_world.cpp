#include <doctest.h>

#include <cmath>
#include <queue>

#include "duonav/rng.hpp"
#include "duonav/world.hpp"

using namespace duonav;

namespace {

// Hand-built empty room: free interior, one-cell wall border.
World boxed_world(int n, double res) {
    World w;
    w.resolution = res;
    w.size_m = n * res;
    w.seed = 0;
    w.occ = Grid2D<uint8_t>(n, n, kCellFree);
    for (int i = 0; i < n; ++i) {
        w.occ.at(i, 0) = kCellWall;
        w.occ.at(i, n - 1) = kCellWall;
        w.occ.at(0, i) = kCellWall;
        w.occ.at(n - 1, i) = kCellWall;
    }
    return w;
}

int flood_count(const Grid2D<uint8_t>& occ, CellIdx from, Grid2D<uint8_t>& seen) {
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

// Reference Dijkstra with the same movement rules as the planner: 8
// neighbors, sqrt(2) diagonals, diagonals may not pass a blocked orthogonal.
double dijkstra_len(const Grid2D<uint8_t>& trav, CellIdx start, CellIdx goal) {
    const int w = trav.w, h = trav.h;
    std::vector<double> dist(static_cast<size_t>(w) * h,
                             std::numeric_limits<double>::infinity());
    auto id = [w](const CellIdx& c) { return c.y * w + c.x; };
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[id(start)] = 0;
    pq.push({0, id(start)});
    const int dx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    while (!pq.empty()) {
        auto [d, i] = pq.top();
        pq.pop();
        if (d > dist[i]) continue;
        CellIdx c{i % w, i / w};
        for (int k = 0; k < 8; ++k) {
            CellIdx nb{c.x + dx8[k], c.y + dy8[k]};
            if (!trav.in_bounds(nb) || !trav.at(nb)) continue;
            if (k >= 4 && (!trav.at(c.x + dx8[k], c.y) || !trav.at(c.x, c.y + dy8[k])))
                continue;
            double nd = d + (k >= 4 ? std::sqrt(2.0) : 1.0);
            if (nd < dist[id(nb)]) {
                dist[id(nb)] = nd;
                pq.push({nd, id(nb)});
            }
        }
    }
    return dist[id(goal)];
}

}  // namespace

TEST_CASE("world generation is deterministic in the seed") {
    WorldSpec spec;
    spec.size_m = 10.0;
    spec.room_count = 4;
    World a = generate_world(7, spec);
    World b = generate_world(7, spec);
    CHECK(a.occ.cells == b.occ.cells);
    REQUIRE(a.rooms.size() == b.rooms.size());
    for (size_t i = 0; i < a.rooms.size(); ++i) {
        CHECK(a.rooms[i].x0 == b.rooms[i].x0);
        CHECK(a.rooms[i].y1 == b.rooms[i].y1);
        CHECK(a.rooms[i].label == b.rooms[i].label);
    }
    REQUIRE(a.objects.size() == b.objects.size());
    for (size_t i = 0; i < a.objects.size(); ++i) {
        CHECK(a.objects[i].pos.x == b.objects[i].pos.x);
        CHECK(a.objects[i].category == b.objects[i].category);
    }

    World c = generate_world(8, spec);
    CHECK(a.occ.cells != c.occ.cells);
}

TEST_CASE("generated worlds satisfy the structural contract") {
    WorldSpec spec;
    spec.size_m = 8.0;
    spec.room_count = 4;
    spec.object_density = 0.06;
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        World w = generate_world(seed, spec);
        const int n = w.occ.w;
        REQUIRE(n == w.occ.h);

        // Closed border.
        for (int i = 0; i < n; ++i) {
            REQUIRE(w.occ.at(i, 0) == kCellWall);
            REQUIRE(w.occ.at(i, n - 1) == kCellWall);
            REQUIRE(w.occ.at(0, i) == kCellWall);
            REQUIRE(w.occ.at(n - 1, i) == kCellWall);
        }

        // Requested room count; interiors disjoint and inside the border.
        REQUIRE(static_cast<int>(w.rooms.size()) == spec.room_count);
        for (size_t i = 0; i < w.rooms.size(); ++i) {
            const Room& r = w.rooms[i];
            REQUIRE(r.x0 >= 1);
            REQUIRE(r.y0 >= 1);
            REQUIRE(r.x1 <= n - 1);
            REQUIRE(r.y1 <= n - 1);
            REQUIRE(r.x0 < r.x1);
            REQUIRE(r.y0 < r.y1);
            for (size_t j = i + 1; j < w.rooms.size(); ++j) {
                const Room& o = w.rooms[j];
                bool overlap = r.x0 < o.x1 && o.x0 < r.x1 && r.y0 < o.y1 && o.y0 < r.y1;
                REQUIRE(!overlap);
            }
        }

        // Free space is one component.
        int free_total = 0;
        for (uint8_t c : w.occ.cells)
            if (c == kCellFree) ++free_total;
        Grid2D<uint8_t> seen(n, n, 0);
        CellIdx probe{(w.rooms[0].x0 + w.rooms[0].x1) / 2,
                      (w.rooms[0].y0 + w.rooms[0].y1) / 2};
        REQUIRE(flood_count(w.occ, probe, seen) == free_total);

        // Objects stand on free cells inside their room, hence mutually
        // reachable through the single free component.
        for (const auto& obj : w.objects) {
            REQUIRE(!w.occupied(obj.pos));
            REQUIRE(obj.room_id >= 0);
            REQUIRE(obj.room_id < static_cast<int>(w.rooms.size()));
            REQUIRE(w.rooms[obj.room_id].contains(w.cell_of(obj.pos)));
            REQUIRE(seen.at(w.cell_of(obj.pos)) == 1);
        }
    }
}

TEST_CASE("degenerate and unsatisfiable world specs") {
    WorldSpec one_room;
    one_room.size_m = 6.0;
    one_room.room_count = 1;
    one_room.object_density = 0.0;
    World w = generate_world(1, one_room);
    CHECK(w.rooms.size() == 1);
    CHECK(w.objects.empty());

    WorldSpec tiny;
    tiny.size_m = 2.0;
    CHECK_THROWS_AS(generate_world(1, tiny), Error);

    WorldSpec crowded;
    crowded.size_m = 12.0;
    crowded.room_count = 40;
    CHECK_THROWS_AS(generate_world(1, crowded), Error);

    WorldSpec invalid;
    invalid.size_m = -1.0;
    CHECK_THROWS_AS(generate_world(1, invalid), Error);
}

TEST_CASE("rays in open space read max range") {
    World w = boxed_world(80, 0.1);  // 8 m box
    SensorSpec sensor;
    sensor.rays = 16;
    sensor.max_range = 2.0;
    Observation obs = render_observation(w, {4.0, 4.0, 0.7}, sensor, 5);
    CHECK(obs.step_index == 5);
    for (int i = 0; i < sensor.rays; ++i) {
        CHECK(obs.depth[i] == doctest::Approx(2.0));
        CHECK(obs.hit[i] == 0);
        CHECK(obs.sem_cat[i] == -1);
    }
}

TEST_CASE("a frontal wall reads its exact entry distance") {
    World w = boxed_world(60, 0.1);
    for (int y = 0; y < 60; ++y) w.occ.at(30, y) = kCellWall;  // wall at x=3.0

    SensorSpec sensor;
    sensor.rays = 1;
    sensor.max_range = 5.0;
    Observation obs = render_observation(w, {2.0, 3.0, 0.0}, sensor);
    CHECK(obs.depth[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(obs.hit[0] == 1);

    CHECK_THROWS_AS(render_observation(w, {3.05, 3.0, 0.0}, sensor), Error);
    CHECK_THROWS_AS(cast_ray(w, {3.05, 3.0}, 0.0, 5.0, nullptr), Error);
}

TEST_CASE("grid traversal matches a dense marching oracle") {
    WorldSpec spec;
    spec.size_m = 8.0;
    spec.room_count = 3;
    Rng rng(19);
    int compared = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        World w = generate_world(seed, spec);
        const double step = w.resolution / 20.0;
        const double max_range = 5.0;
        for (int trial = 0; trial < 60; ++trial) {
            Vec2 origin{rng.uniform(0.3, 7.7), rng.uniform(0.3, 7.7)};
            if (w.occupied(origin)) continue;
            double ang = rng.chance(0.25)
                             ? (kPi / 2.0) * rng.uniform_int(0, 3)
                             : rng.uniform(-kPi, kPi);
            bool hit = false;
            double exact = cast_ray(w, origin, ang, max_range, &hit);

            Vec2 dir{std::cos(ang), std::sin(ang)};
            double march = -1.0;
            for (double t = step; t <= max_range; t += step) {
                if (w.occupied(origin + dir * t)) {
                    march = t;
                    break;
                }
            }
            if (march < 0) {
                // No crossing found: traversal must agree unless the first
                // wall sits within one march step of max_range.
                if (hit) CHECK(exact > max_range - 2 * step);
                else CHECK(exact == doctest::Approx(max_range));
            } else if (march < max_range - 2 * step) {
                REQUIRE(hit);
                CHECK(std::abs(exact - march) <= step + 1e-9);
            }
            ++compared;
        }
    }
    CHECK(compared > 400);
}

TEST_CASE("semantic returns project object centers onto the ray") {
    World w = boxed_world(80, 0.1);
    WorldObject obj;
    obj.pos = {4.0, 2.0};
    obj.category = Category::plant;
    obj.radius = 0.25;
    w.objects.push_back(obj);

    SensorSpec sensor;
    sensor.rays = 1;
    sensor.max_range = 5.0;

    Observation front = render_observation(w, {2.0, 2.0, 0.0}, sensor);
    CHECK(front.sem_cat[0] == static_cast<int>(Category::plant));
    CHECK(front.sem_depth[0] == doctest::Approx(2.0).epsilon(1e-9));

    // Perpendicular offset within the disc radius still returns at the
    // projected distance; past the radius, nothing.
    w.objects[0].pos = {4.0, 2.2};
    Observation grazed = render_observation(w, {2.0, 2.0, 0.0}, sensor);
    CHECK(grazed.sem_cat[0] == static_cast<int>(Category::plant));
    CHECK(grazed.sem_depth[0] == doctest::Approx(2.0).epsilon(1e-9));

    w.objects[0].pos = {4.0, 2.3};
    Observation missed = render_observation(w, {2.0, 2.0, 0.0}, sensor);
    CHECK(missed.sem_cat[0] == -1);

    // Behind the agent: no return.
    w.objects[0].pos = {1.0, 2.0};
    CHECK(render_observation(w, {2.0, 2.0, 0.0}, sensor).sem_cat[0] == -1);

    // Occluded by a wall: the ray ends before the projection distance.
    w.objects[0].pos = {4.0, 2.0};
    for (int y = 0; y < 80; ++y) w.occ.at(30, y) = kCellWall;
    Observation blocked = render_observation(w, {2.0, 2.0, 0.0}, sensor);
    CHECK(blocked.depth[0] == doctest::Approx(1.0));
    CHECK(blocked.sem_cat[0] == -1);
    for (int y = 0; y < 80; ++y) w.occ.at(30, y) = kCellFree;

    // Two objects on one ray: the nearer one wins.
    WorldObject near_obj;
    near_obj.pos = {3.0, 2.0};
    near_obj.category = Category::oven;
    w.objects.push_back(near_obj);
    Observation both = render_observation(w, {2.0, 2.0, 0.0}, sensor);
    CHECK(both.sem_cat[0] == static_cast<int>(Category::oven));
    CHECK(both.sem_depth[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("patch is an agent-frame crop with out-of-bounds as occupied") {
    World w = boxed_world(60, 0.1);
    SensorSpec sensor;
    sensor.rays = 1;
    sensor.patch = 3;
    sensor.patch_res = 0.2;

    // Facing +x near the east wall: the forward column samples the wall.
    Observation fx = render_observation(w, {5.7, 3.0, 0.0}, sensor);
    for (int py = 0; py < 3; ++py) {
        CHECK(fx.patch[py * 3 + 2] == 1.0f);
        CHECK(fx.patch[py * 3 + 0] == 0.0f);
        CHECK(fx.patch[py * 3 + 1] == 0.0f);
    }

    // Facing +y at the same spot: the wall is now to the agent's right,
    // which is the negative-y patch row.
    Observation fy = render_observation(w, {5.7, 3.0, kPi / 2}, sensor);
    for (int px = 0; px < 3; ++px) {
        CHECK(fy.patch[0 * 3 + px] == 1.0f);
        CHECK(fy.patch[1 * 3 + px] == 0.0f);
        CHECK(fy.patch[2 * 3 + px] == 0.0f);
    }

    // Open center: everything free.
    Observation open = render_observation(w, {3.0, 3.0, 0.4}, sensor);
    for (float v : open.patch) CHECK(v == 0.0f);
}

TEST_CASE("feature vector layout matches the sensor spec") {
    World w = boxed_world(80, 0.1);
    WorldObject obj;
    obj.pos = {4.5, 4.0};
    obj.category = Category::desk;
    w.objects.push_back(obj);

    SensorSpec sensor;
    sensor.rays = 8;
    sensor.max_range = 4.0;
    sensor.patch = 5;
    Observation obs = render_observation(w, {4.0, 4.0, 0.0}, sensor);
    std::vector<double> f = obs.features(sensor);
    REQUIRE(static_cast<int>(f.size()) == sensor.feature_dim());
    REQUIRE(sensor.feature_dim() == 2 * 8 + kCategoryCount + 25);

    for (int i = 0; i < 8; ++i) {
        CHECK(f[i] == doctest::Approx(obs.depth[i] / 4.0));
        CHECK(f[8 + i] == (obs.sem_cat[i] >= 0 ? 1.0 : 0.0));
    }
    double present = 0;
    for (int i = 0; i < 8; ++i) present += obs.sem_cat[i] >= 0 ? 1.0 : 0.0;
    double hist_sum = 0;
    for (int c = 0; c < kCategoryCount; ++c) hist_sum += f[16 + c];
    CHECK(hist_sum == doctest::Approx(present / 8.0));
    CHECK(present > 0);  // the desk sits half a meter ahead
}

TEST_CASE("agent stepping follows the unicycle arc and stops at walls") {
    World w = boxed_world(60, 0.1);

    StepResult idle = step_agent(w, {3.0, 3.0, 1.0}, {0.0, 0.0}, 0.5);
    CHECK(idle.pose.x == doctest::Approx(3.0));
    CHECK(idle.pose.theta == doctest::Approx(1.0));
    CHECK(!idle.collided);

    StepResult fwd = step_agent(w, {3.0, 3.0, 0.0}, {1.0, 0.0}, 0.2);
    CHECK(fwd.pose.x == doctest::Approx(3.2).epsilon(1e-12));
    CHECK(fwd.pose.y == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(!fwd.collided);

    StepResult spin = step_agent(w, {3.0, 3.0, 0.0}, {0.0, 1.0}, 0.5);
    CHECK(spin.pose.x == doctest::Approx(3.0));
    CHECK(spin.pose.theta == doctest::Approx(0.5));

    // Closed-form arc: v=1, omega=1 for dt=pi/2 from the origin pose.
    StepResult arc = step_agent(w, {3.0, 3.0, 0.0}, {1.0, 1.0}, kPi / 2);
    CHECK(arc.pose.x == doctest::Approx(3.0 + std::sin(kPi / 2)).epsilon(1e-9));
    CHECK(arc.pose.y == doctest::Approx(3.0 + 1.0 - std::cos(kPi / 2)).epsilon(1e-9));
    CHECK(arc.pose.theta == doctest::Approx(kPi / 2).epsilon(1e-9));

    // Driving into a wall: flagged, and the final pose is collision free.
    for (int y = 0; y < 60; ++y) w.occ.at(30, y) = kCellWall;
    StepResult blocked = step_agent(w, {2.7, 3.0, 0.0}, {1.0, 0.0}, 0.5, 0.15);
    CHECK(blocked.collided);
    CHECK(blocked.pose.x <= 2.85 + 1e-9);
    CHECK(blocked.pose.x > 2.7);
    CHECK(!disc_collides(w, blocked.pose.position(), 0.15));

    CHECK_THROWS_AS(step_agent(w, {2.0, 3.0, 0.0}, {1.0, 0.0}, 0.0), Error);
}

TEST_CASE("disc collision uses strict penetration") {
    // Unit-resolution grid so the touching case is exact in floating point.
    World w;
    w.resolution = 1.0;
    w.size_m = 8.0;
    w.occ = Grid2D<uint8_t>(8, 8, kCellFree);
    for (int y = 0; y < 8; ++y) w.occ.at(4, y) = kCellWall;  // wall at x in [4,5)
    CHECK(!disc_collides(w, {3.5, 2.5}, 0.5));  // touching exactly
    CHECK(disc_collides(w, {3.625, 2.5}, 0.5));
    CHECK(disc_collides(w, {4.5, 2.5}, 0.5));  // center inside the wall
}

TEST_CASE("grid shortest paths: anchors and error cases") {
    Grid2D<uint8_t> open5(5, 5, 1);
    PathResult same = shortest_path_on_grid(open5, {2, 2}, {2, 2}, 0.1);
    CHECK(same.cells.empty());
    CHECK(same.length_m == 0.0);

    PathResult diag = shortest_path_on_grid(open5, {0, 0}, {4, 4}, 0.1);
    CHECK(diag.length_m == doctest::Approx(4.0 * std::sqrt(2.0) * 0.1).epsilon(1e-12));
    CHECK(diag.cells.front() == CellIdx{0, 0});
    CHECK(diag.cells.back() == CellIdx{4, 4});

    PathResult straight = shortest_path_on_grid(open5, {0, 2}, {4, 2}, 0.5);
    CHECK(straight.length_m == doctest::Approx(2.0));

    // A diagonal may not slip between two blocked orthogonals.
    Grid2D<uint8_t> corner(3, 3, 1);
    corner.at(1, 0) = 0;
    corner.at(0, 1) = 0;
    CHECK_THROWS_AS(shortest_path_on_grid(corner, {0, 0}, {2, 2}, 1.0), Error);
    corner.at(0, 1) = 1;
    PathResult around = shortest_path_on_grid(corner, {0, 0}, {2, 2}, 1.0);
    // Detour around the blocked corner: two straight moves and one diagonal.
    CHECK(around.length_m == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

    Grid2D<uint8_t> walled(4, 1, 1);
    walled.at(2, 0) = 0;
    CHECK_THROWS_AS(shortest_path_on_grid(walled, {0, 0}, {3, 0}, 1.0), Error);
    CHECK_THROWS_AS(shortest_path_on_grid(walled, {2, 0}, {3, 0}, 1.0), Error);
    CHECK_THROWS_AS(shortest_path_on_grid(walled, {-1, 0}, {3, 0}, 1.0), Error);

    try {
        shortest_path_on_grid(walled, {0, 0}, {3, 0}, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::no_path);
    }
    try {
        shortest_path_on_grid(walled, {2, 0}, {3, 0}, 1.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
}

TEST_CASE("search lengths agree with reference dijkstra on random maps") {
    Rng rng(23);
    int reachable_cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Grid2D<uint8_t> trav(16, 16, 1);
        for (auto& c : trav.cells) c = rng.chance(0.3) ? 0 : 1;
        std::vector<CellIdx> free;
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                if (trav.at(x, y)) free.push_back({x, y});
        if (free.size() < 2) continue;
        CellIdx s = free[rng.uniform_int(0, static_cast<int>(free.size()) - 1)];
        CellIdx g = free[rng.uniform_int(0, static_cast<int>(free.size()) - 1)];

        double ref = dijkstra_len(trav, s, g);
        if (std::isinf(ref)) {
            CHECK_THROWS_AS(shortest_path_on_grid(trav, s, g, 1.0), Error);
            continue;
        }
        PathResult got = shortest_path_on_grid(trav, s, g, 1.0);
        CHECK(got.length_m == doctest::Approx(ref).epsilon(1e-9));
        ++reachable_cases;

        // The returned cells form a valid walk of the claimed length.
        if (!(s == g)) {
            REQUIRE(got.cells.size() >= 2);
            CHECK(got.cells.front() == s);
            CHECK(got.cells.back() == g);
            double walked = 0;
            for (size_t i = 1; i < got.cells.size(); ++i) {
                int dx = std::abs(got.cells[i].x - got.cells[i - 1].x);
                int dy = std::abs(got.cells[i].y - got.cells[i - 1].y);
                REQUIRE(dx <= 1);
                REQUIRE(dy <= 1);
                REQUIRE(dx + dy >= 1);
                REQUIRE(trav.at(got.cells[i]));
                walked += (dx + dy == 2) ? std::sqrt(2.0) : 1.0;
            }
            CHECK(walked == doctest::Approx(got.length_m).epsilon(1e-9));
        }
    }
    CHECK(reachable_cases > 30);
}

TEST_CASE("wall inflation blocks a euclidean disc of cells") {
    World w;
    w.resolution = 0.1;
    w.size_m = 1.1;
    w.occ = Grid2D<uint8_t>(11, 11, kCellFree);
    w.occ.at(5, 5) = kCellWall;
    Grid2D<uint8_t> trav = traversable_grid(w, 0.15);
    int blocked = 0;
    for (int y = 0; y < 11; ++y)
        for (int x = 0; x < 11; ++x)
            if (!trav.at(x, y)) {
                ++blocked;
                int dx = x - 5, dy = y - 5;
                CHECK(dx * dx + dy * dy <= 4);  // ceil(0.15/0.1) = 2 cells
            }
    CHECK(blocked == 13);
}

TEST_CASE("goal distance picks the nearest category instance") {
    World w = boxed_world(80, 0.1);
    WorldObject a, b;
    a.pos = {2.0, 2.0};
    a.category = Category::sofa;
    b.pos = {6.0, 6.0};
    b.category = Category::sofa;
    w.objects = {a, b};

    Episode point;
    point.kind = TaskKind::PointGoal;
    point.goal_point = Pose2D{4.0, 4.0, 0.0};
    CHECK(goal_distance(w, point, {1.0, 4.0}) == doctest::Approx(3.0));

    Episode obj;
    obj.kind = TaskKind::ObjectGoal;
    obj.goal_category = static_cast<int>(Category::sofa);
    CHECK(goal_distance(w, obj, {2.5, 2.0}) == doctest::Approx(0.5));
    CHECK(goal_distance(w, obj, {5.9, 6.0}) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("episodes respect path-length windows and carry valid fields") {
    WorldSpec spec;
    spec.size_m = 12.0;
    spec.room_count = 5;
    spec.object_density = 0.06;
    World w = generate_world(3, spec);
    EpisodeParams params;
    params.min_path = 2.0;
    params.max_path = 9.0;

    Grid2D<uint8_t> trav = traversable_grid(w, 0.2);
    for (TaskKind kind :
         {TaskKind::PointGoal, TaskKind::ObjectGoal, TaskKind::InstructGoal}) {
        for (uint64_t seed = 0; seed < 25; ++seed) {
            Episode ep = generate_episode_retry(w, kind, seed, params);
            Episode again = generate_episode_retry(w, kind, seed, params);
            CHECK(ep.start.x == again.start.x);
            CHECK(ep.shortest_len == again.shortest_len);
            CHECK(ep.instruction == again.instruction);

            CHECK(ep.kind == kind);
            CHECK(ep.shortest_len >= params.min_path);
            CHECK(ep.shortest_len <= params.max_path);
            CHECK(ep.success_radius == params.success_radius);
            CHECK(ep.max_steps == params.max_steps);
            CHECK(!w.occupied(ep.start.position()));
            CHECK(trav.at(w.cell_of(ep.start.position())) == 1);
            REQUIRE(!ep.instruction.empty());
            for (int tok : ep.instruction) {
                CHECK(tok >= 0);
                CHECK(tok < Vocab::size());
            }

            if (kind == TaskKind::PointGoal) {
                REQUIRE(ep.goal_point.has_value());
                CHECK(ep.goal_category == -1);
                CHECK(ep.instruction == instruction_point_goal());
                CHECK(!w.occupied(ep.goal_point->position()));
            } else if (kind == TaskKind::ObjectGoal) {
                CHECK(!ep.goal_point.has_value());
                REQUIRE(ep.goal_category >= 0);
                CHECK(ep.goal_category < kCategoryCount);
                CHECK(ep.instruction ==
                      instruction_object_goal(static_cast<Category>(ep.goal_category)));
            } else {
                REQUIRE(ep.goal_point.has_value());
                REQUIRE(ep.goal_category >= 0);
                CHECK(find_room_token(ep.instruction) >= 0);
                CHECK(find_category_token(ep.instruction) == ep.goal_category);
            }
        }
    }

    // Object goals cannot exist without objects.
    WorldSpec empty_spec;
    empty_spec.size_m = 8.0;
    empty_spec.room_count = 2;
    empty_spec.object_density = 0.0;
    World empty = generate_world(5, empty_spec);
    CHECK_THROWS_AS(generate_episode(empty, TaskKind::ObjectGoal, 1, params), Error);
}
