#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "duonav/mapping.hpp"
#include "duonav/rng.hpp"

using namespace duonav;

namespace {

World boxed_world(int n, double res) {
    World w;
    w.resolution = res;
    w.size_m = n * res;
    w.occ = Grid2D<uint8_t>(n, n, kCellFree);
    for (int i = 0; i < n; ++i) {
        w.occ.at(i, 0) = kCellWall;
        w.occ.at(i, n - 1) = kCellWall;
        w.occ.at(0, i) = kCellWall;
        w.occ.at(n - 1, i) = kCellWall;
    }
    return w;
}

// Random evidence map built by poking the counters directly.
OccupancyMap random_map(int n, Rng& rng, double p_unknown = 0.35,
                        double p_occ = 0.2) {
    OccupancyMap map(n, n, 0.1);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            double u = rng.uniform(0.0, 1.0);
            if (u < p_unknown) continue;
            if (u < p_unknown + p_occ) map.hit_n.at(x, y) = 1;
            else map.free_n.at(x, y) = 1;
        }
    }
    return map;
}

std::vector<CellIdx> brute_frontiers(const OccupancyMap& map) {
    std::vector<CellIdx> out;
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x) {
            if (map.state(x, y) != CellState::Free) continue;
            bool adj = false;
            for (int ny = y - 1; ny <= y + 1; ++ny)
                for (int nx = x - 1; nx <= x + 1; ++nx) {
                    if (nx == x && ny == y) continue;
                    if (nx < 0 || ny < 0 || nx >= map.width() || ny >= map.height())
                        continue;
                    if (map.state(nx, ny) == CellState::Unknown) adj = true;
                }
            if (adj) out.push_back({x, y});
        }
    return out;
}

// Component count over the frontier set, 8-adjacency.
int brute_component_count(const std::vector<CellIdx>& cells, int min_size) {
    std::set<std::pair<int, int>> pending;
    for (const auto& c : cells) pending.insert({c.x, c.y});
    int components = 0;
    while (!pending.empty()) {
        std::queue<std::pair<int, int>> q;
        q.push(*pending.begin());
        pending.erase(pending.begin());
        int size = 0;
        while (!q.empty()) {
            auto [x, y] = q.front();
            q.pop();
            ++size;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    auto it = pending.find({x + dx, y + dy});
                    if (it != pending.end()) {
                        q.push(*it);
                        pending.erase(it);
                    }
                }
        }
        if (size >= min_size) ++components;
    }
    return components;
}

}  // namespace

TEST_CASE("a fresh map is entirely unknown") {
    OccupancyMap map(24, 16, 0.1);
    CHECK(map.unknown_count() == 24 * 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 24; ++x)
            CHECK(map.state(x, y) == CellState::Unknown);
    CHECK(extract_frontiers(map).empty());
}

TEST_CASE("a single ray marks crossed cells free and the wall occupied") {
    World w = boxed_world(60, 0.1);
    for (int y = 0; y < 60; ++y) w.occ.at(30, y) = kCellWall;  // wall at x=3.0

    SensorSpec sensor;
    sensor.rays = 1;
    sensor.max_range = 5.0;
    Observation obs = render_observation(w, {1.05, 3.05, 0.0}, sensor);
    REQUIRE(obs.hit[0] == 1);
    REQUIRE(obs.depth[0] == doctest::Approx(3.0 - 1.05));

    OccupancyMap map(60, 60, 0.1);
    integrate(map, obs, sensor);

    // Cells (10..29, 30) crossed -> Free; (30, 30) endpoint -> Occupied.
    for (int x = 10; x < 30; ++x) CHECK(map.state(x, 30) == CellState::Free);
    CHECK(map.state(30, 30) == CellState::Occupied);
    CHECK(map.state(31, 30) == CellState::Unknown);  // behind the wall
    CHECK(map.state(9, 30) == CellState::Unknown);   // behind the agent
    CHECK(map.state(15, 31) == CellState::Unknown);  // off the ray
    CHECK(map.unknown_count() == 60 * 60 - 21);
}

TEST_CASE("max-range rays leave no occupied endpoint") {
    World w = boxed_world(80, 0.1);
    SensorSpec sensor;
    sensor.rays = 1;
    sensor.max_range = 2.0;
    Observation obs = render_observation(w, {4.05, 4.05, 0.0}, sensor);
    REQUIRE(obs.hit[0] == 0);

    OccupancyMap map(80, 80, 0.1);
    integrate(map, obs, sensor);
    size_t free_cells = 0;
    for (size_t i = 0; i < map.hit_n.cells.size(); ++i) {
        CHECK(map.hit_n.cells[i] == 0);
        if (map.free_n.cells[i] > 0) ++free_cells;
    }
    // From x=4.05 the ray reaches 6.05: origin cell 40 plus cells 41..60.
    CHECK(free_cells == 21);
}

TEST_CASE("re-integrating an observation changes counts but not states") {
    World w = boxed_world(60, 0.1);
    SensorSpec sensor;
    sensor.rays = 24;
    sensor.max_range = 4.0;
    Observation obs = render_observation(w, {3.0, 3.0, 0.7}, sensor);

    OccupancyMap once(60, 60, 0.1);
    integrate(once, obs, sensor);
    OccupancyMap thrice(60, 60, 0.1);
    integrate(thrice, obs, sensor);
    integrate(thrice, obs, sensor);
    integrate(thrice, obs, sensor);

    bool counts_grew = false;
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 60; ++x) {
            CHECK(once.state(x, y) == thrice.state(x, y));
            if (thrice.free_n.at(x, y) > once.free_n.at(x, y)) counts_grew = true;
        }
    CHECK(counts_grew);
}

TEST_CASE("integration order does not affect the final state") {
    World w = boxed_world(60, 0.1);
    SensorSpec sensor;
    sensor.rays = 16;
    sensor.max_range = 3.0;
    std::vector<Observation> obs;
    Rng rng(31);
    for (int i = 0; i < 12; ++i) {
        Vec2 p{rng.uniform(0.5, 5.5), rng.uniform(0.5, 5.5)};
        if (w.occupied(p)) continue;
        obs.push_back(render_observation(w, {p.x, p.y, rng.uniform(-kPi, kPi)}, sensor, i));
    }
    REQUIRE(obs.size() > 4);

    OccupancyMap fwd(60, 60, 0.1);
    for (const auto& o : obs) integrate(fwd, o, sensor);
    OccupancyMap rev(60, 60, 0.1);
    for (auto it = obs.rbegin(); it != obs.rend(); ++it) integrate(rev, *it, sensor);
    std::shuffle(obs.begin(), obs.end(), rng.engine);
    OccupancyMap shuf(60, 60, 0.1);
    for (const auto& o : obs) integrate(shuf, o, sensor);

    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 60; ++x) {
            CHECK(fwd.state(x, y) == rev.state(x, y));
            CHECK(fwd.state(x, y) == shuf.state(x, y));
        }
}

TEST_CASE("conflicting evidence ties read as occupied") {
    OccupancyMap map(4, 4, 0.1);
    map.hit_n.at(1, 1) = 3;
    map.free_n.at(1, 1) = 3;
    CHECK(map.state(1, 1) == CellState::Occupied);
    map.free_n.at(1, 1) = 4;
    CHECK(map.state(1, 1) == CellState::Free);
    map.hit_n.at(1, 1) = 5;
    CHECK(map.state(1, 1) == CellState::Occupied);
}

TEST_CASE("unknown count shrinks monotonically during exploration") {
    World w = boxed_world(60, 0.1);
    SensorSpec sensor;
    sensor.rays = 24;
    sensor.max_range = 3.0;
    OccupancyMap map(60, 60, 0.1);
    Rng rng(37);
    size_t prev = map.unknown_count();
    CHECK(prev == 3600);
    for (int i = 0; i < 20; ++i) {
        Vec2 p{rng.uniform(0.5, 5.5), rng.uniform(0.5, 5.5)};
        if (w.occupied(p)) continue;
        integrate(map, render_observation(w, {p.x, p.y, rng.uniform(-kPi, kPi)}, sensor),
                  sensor);
        size_t now = map.unknown_count();
        CHECK(now <= prev);
        prev = now;
    }
    CHECK(prev < 3600);
}

TEST_CASE("frontier extraction matches the brute-force definition") {
    Rng rng(41);
    size_t nonempty = 0;
    for (int trial = 0; trial < 200; ++trial) {
        OccupancyMap map = random_map(32, rng);
        std::vector<CellIdx> got = extract_frontiers(map);
        std::vector<CellIdx> want = brute_frontiers(map);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        REQUIRE(got == want);
        if (!got.empty()) ++nonempty;
    }
    CHECK(nonempty > 150);
}

TEST_CASE("fully explored or fully unknown maps have no frontiers") {
    OccupancyMap unknown(16, 16, 0.1);
    CHECK(extract_frontiers(unknown).empty());

    OccupancyMap explored(16, 16, 0.1);
    for (auto& c : explored.free_n.cells) c = 1;
    CHECK(extract_frontiers(explored).empty());

    // Free cells at the border do not count the outside as unknown.
    OccupancyMap border(4, 4, 0.1);
    for (auto& c : border.free_n.cells) c = 1;
    CHECK(extract_frontiers(border).empty());
}

TEST_CASE("frontier clustering groups components and orders ids by scanline") {
    OccupancyMap map(20, 20, 0.1);
    // Two free strips separated by unknown space; everything else free.
    for (auto& c : map.free_n.cells) c = 1;
    auto unknown_at = [&](int x, int y) {
        map.free_n.at(x, y) = 0;
        map.hit_n.at(x, y) = 0;
    };
    unknown_at(3, 3);
    unknown_at(15, 10);
    unknown_at(16, 10);

    std::vector<CellIdx> cells = extract_frontiers(map);
    std::vector<Frontier> fronts =
        cluster_frontiers(map, cells, 1, {1.0, 1.0, 0.0});
    REQUIRE(fronts.size() == 2);
    // Scanline order: the ring around (3,3) starts earlier.
    CHECK(fronts[0].id == 0);
    CHECK(fronts[1].id == 1);
    CHECK(fronts[0].cells.front() < fronts[1].cells.front());
    CHECK(fronts[0].size == 8);
    CHECK(fronts[1].size == 10);

    // Centroid of the ring around (3,3) is the unknown cell's center.
    CHECK(fronts[0].centroid.x == doctest::Approx(0.35));
    CHECK(fronts[0].centroid.y == doctest::Approx(0.35));
    CHECK(fronts[0].bearing_from_agent ==
          doctest::Approx(bearing({1.0, 1.0}, fronts[0].centroid)));

    // Size filter drops the smaller component.
    std::vector<Frontier> only_big = cluster_frontiers(map, cells, 9, {1.0, 1.0, 0.0});
    REQUIRE(only_big.size() == 1);
    CHECK(only_big[0].id == 0);
    CHECK(only_big[0].size == 10);
}

TEST_CASE("cluster counts match an independent component count") {
    Rng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        OccupancyMap map = random_map(24, rng, 0.5, 0.15);
        std::vector<CellIdx> cells = extract_frontiers(map);
        for (int min_size : {1, 3}) {
            auto fronts = cluster_frontiers(map, cells, min_size, {0.5, 0.5, 0.0});
            CHECK(static_cast<int>(fronts.size()) ==
                  brute_component_count(cells, min_size));
            size_t covered = 0;
            for (const auto& f : fronts) {
                CHECK(f.size == static_cast<int>(f.cells.size()));
                CHECK(f.size >= min_size);
                covered += f.cells.size();
            }
            if (min_size == 1) CHECK(covered == cells.size());
        }
    }
}

TEST_CASE("two isolated frontier cells form two clusters") {
    OccupancyMap map(16, 16, 0.1);
    for (auto& c : map.free_n.cells) c = 1;
    map.free_n.at(2, 2) = 0;
    map.free_n.at(12, 12) = 0;
    auto cells = extract_frontiers(map);
    auto fronts = cluster_frontiers(map, cells, 1, {0.0, 0.0, 0.0});
    CHECK(fronts.size() == 2);

    // A single frontier cell is a cluster of size one.
    OccupancyMap single(8, 8, 0.1);
    single.free_n.at(3, 3) = 1;
    auto sc = extract_frontiers(single);
    REQUIRE(sc.size() == 1);
    auto sf = cluster_frontiers(single, sc, 1, {0.0, 0.0, 0.0});
    REQUIRE(sf.size() == 1);
    CHECK(sf[0].size == 1);
    CHECK(sf[0].centroid.x == doctest::Approx(0.35));
}

TEST_CASE("ascii round trip preserves cell states") {
    Rng rng(47);
    OccupancyMap map = random_map(12, rng);
    std::string text = map.to_ascii();
    OccupancyMap back = OccupancyMap::from_ascii(text, map.resolution);
    REQUIRE(back.width() == map.width());
    REQUIRE(back.height() == map.height());
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x)
            CHECK(back.state(x, y) == map.state(x, y));
    CHECK(back.to_ascii() == text);

    CHECK_THROWS_AS(OccupancyMap::from_ascii("", 0.1), Error);
    CHECK_THROWS_AS(OccupancyMap::from_ascii("UF\nU", 0.1), Error);
    CHECK_THROWS_AS(OccupancyMap::from_ascii("UX\nUU", 0.1), Error);
}
