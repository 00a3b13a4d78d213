#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "duonav/dataset.hpp"
#include "duonav/error.hpp"
#include "duonav/expert.hpp"
#include "duonav/rng.hpp"
#include "duonav/vocab.hpp"
#include "duonav/world.hpp"

using namespace duonav;

namespace {

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

Episode point_episode(const Vec2& start, double theta, const Vec2& goal) {
    Episode ep;
    ep.kind = TaskKind::PointGoal;
    ep.start = {start.x, start.y, theta};
    ep.goal_point = Pose2D{goal.x, goal.y, 0.0};
    ep.instruction = instruction_point_goal();
    ep.success_radius = 1.0;
    return ep;
}

ExpertParams small_expert() {
    ExpertParams p;
    p.sensor.rays = 16;
    p.sensor.patch = 5;
    return p;
}

bool coords_equal(const CoordGoal& a, const CoordGoal& b, double tol) {
    for (int i = 0; i < 4; ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

bool steps_identical(const std::vector<ExpertStep>& a, const std::vector<ExpertStep>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].obs.step_index != b[i].obs.step_index) return false;
        if (a[i].obs.pose.x != b[i].obs.pose.x || a[i].obs.pose.y != b[i].obs.pose.y ||
            a[i].obs.pose.theta != b[i].obs.pose.theta)
            return false;
        if (a[i].waypoints.flatten() != b[i].waypoints.flatten()) return false;
        if (a[i].chunk != b[i].chunk) return false;
        if (a[i].instruction != b[i].instruction) return false;
        if (a[i].coord.has_value() != b[i].coord.has_value()) return false;
        if (a[i].coord && !coords_equal(*a[i].coord, *b[i].coord, 0.0)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("already satisfied episode emits a single stop step") {
    World w = boxed_world(80, 0.1);
    Episode ep = point_episode({4.0, 4.0}, 0.7, {4.5, 4.0});
    ExpertParams params = small_expert();

    auto steps = expert_trajectory(w, ep, params);
    REQUIRE(steps.size() == 1);
    const ExpertStep& st = steps[0];
    CHECK(st.obs.step_index == 0);
    CHECK(st.obs.pose.x == 4.0);
    CHECK(st.obs.pose.theta == 0.7);
    REQUIRE(st.waypoints.horizon() == params.horizon);
    for (int h = 0; h < params.horizon; ++h) {
        CHECK(st.waypoints[h].x == 0.0);
        CHECK(st.waypoints[h].y == 0.0);
        CHECK(st.waypoints[h].sin_theta == 0.0);
        CHECK(st.waypoints[h].cos_theta == 1.0);
        CHECK(st.waypoints[h].c == 1.0);
        CHECK(st.chunk[h] == ChunkAction::Stop);
    }
    CHECK(st.instruction == ep.instruction);
    REQUIRE(st.coord.has_value());
    CHECK(coords_equal(*st.coord, coord_goal_from(ep.start, {4.5, 4.0}), 1e-12));
}

TEST_CASE("straight corridor labels match the closed form") {
    // Open 8 m box; the smoothed path from (2,4) to (6,4) is the straight
    // segment, so every label has an exact closed form at stride 0.5.
    World w = boxed_world(80, 0.1);
    Episode ep = point_episode({2.0, 4.0}, 0.0, {6.0, 4.0});
    ExpertParams params = small_expert();

    auto steps = expert_trajectory(w, ep, params);
    const double L = 4.0;
    REQUIRE(steps.size() == 9);  // ceil(4 / 0.5) + 1
    for (int k = 0; k < 9; ++k) {
        const ExpertStep& st = steps[k];
        double s = std::min(k * 0.5, L);
        CHECK(st.obs.step_index == k);
        CHECK(st.obs.pose.x == doctest::Approx(2.0 + s).epsilon(0).scale(1e-12));
        CHECK(st.obs.pose.y == doctest::Approx(4.0).epsilon(0).scale(1e-12));
        CHECK(st.obs.pose.theta == 0.0);
        for (int h = 1; h <= params.horizon; ++h) {
            double sh = std::min(s + h * 0.5, L);
            const Waypoint& wp = st.waypoints[h - 1];
            CHECK(wp.x == doctest::Approx(sh - s).epsilon(0).scale(1e-12));
            CHECK(wp.y == doctest::Approx(0.0).epsilon(0).scale(1e-12));
            CHECK(wp.sin_theta == 0.0);
            CHECK(wp.cos_theta == 1.0);
            // Within the 1 m success radius once 3 m of the 4 m are covered.
            CHECK(wp.c == (sh >= 3.0 ? 1.0 : 0.0));
            double prev = std::min(s + (h - 1) * 0.5, L);
            CHECK(st.chunk[h - 1] ==
                  (sh - prev > 0.125 ? ChunkAction::Forward : ChunkAction::Stop));
        }
        CHECK(st.instruction == ep.instruction);
        REQUIRE(st.coord.has_value());
        CHECK(coords_equal(*st.coord,
                           coord_goal_from(st.obs.pose, {6.0, 4.0}), 1e-12));
    }
    // First step looks 4 m dead ahead, final step sits on the goal.
    CHECK((*steps[0].coord)[0] == doctest::Approx(4.0));
    CHECK((*steps[0].coord)[3] == doctest::Approx(1.0));
    CHECK(steps[8].obs.pose.x == doctest::Approx(6.0));
}

TEST_CASE("object episodes switch to approach labels near the goal") {
    World w = boxed_world(80, 0.1);
    Vec2 near_obj{6.5, 6.5};
    w.objects.push_back({near_obj, Category::toilet, -1, 0.25});
    w.objects.push_back({{1.5, 6.5}, Category::bed, -1, 0.25});
    // A second, path-farther toilet must lose to the near one.
    w.objects.push_back({{7.0, 1.0}, Category::toilet, -1, 0.25});

    Episode ep;
    ep.kind = TaskKind::ObjectGoal;
    ep.start = {1.5, 1.5, 0.0};
    ep.goal_category = static_cast<int>(Category::toilet);
    ep.instruction = instruction_object_goal(Category::toilet);
    ep.success_radius = 1.0;

    ExpertParams params = small_expert();
    auto steps = expert_trajectory(w, ep, params);
    REQUIRE(steps.size() >= 4);

    // Straight diagonal once smoothed, so remaining length is L - k*stride.
    double L = (near_obj - Vec2{1.5, 1.5}).norm();
    bool seen_coord = false;
    for (size_t k = 0; k < steps.size(); ++k) {
        double s = std::min(static_cast<double>(k) * 0.5, L);
        bool expect_coord = (L - s) <= params.approach_switch;
        const ExpertStep& st = steps[k];
        CHECK(st.coord.has_value() == expect_coord);
        if (expect_coord) {
            CHECK(st.instruction == subtask_approach(Category::toilet));
            CHECK(coords_equal(*st.coord, coord_goal_from(st.obs.pose, near_obj), 1e-9));
        } else {
            CHECK(st.instruction == ep.instruction);
        }
        // Once the coord token appears it never retreats.
        if (seen_coord) CHECK(st.coord.has_value());
        seen_coord = seen_coord || st.coord.has_value();
    }
    CHECK(!steps.front().coord.has_value());
    CHECK(steps.back().coord.has_value());
    CHECK(steps.back().obs.pose.x == doctest::Approx(near_obj.x));
    CHECK(steps.back().obs.pose.y == doctest::Approx(near_obj.y));

    // Without any toilet the episode cannot be labeled.
    World empty = boxed_world(80, 0.1);
    CHECK_THROWS_AS(expert_trajectory(empty, ep, params), Error);
    try {
        expert_trajectory(empty, ep, params);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::unsatisfiable);
    }
}

TEST_CASE("consecutive steps agree on shared label points") {
    // Step k's waypoint j and step k+1's waypoint j-1 refer to the same arc
    // position, so mapping both back to the world frame must coincide.
    WorldSpec wspec;
    wspec.size_m = 12.0;
    wspec.room_count = 5;
    wspec.object_density = 0.06;
    World w = generate_world(3, wspec);
    ExpertParams params = small_expert();
    EpisodeParams eparams;

    TaskKind kinds[3] = {TaskKind::PointGoal, TaskKind::ObjectGoal, TaskKind::InstructGoal};
    int multi_step = 0;
    for (uint64_t seed = 0; seed < 12; ++seed) {
        Episode ep = generate_episode_retry(w, kinds[seed % 3], seed, eparams);
        auto steps = expert_trajectory(w, ep, params);
        REQUIRE(!steps.empty());
        CHECK(steps[0].obs.pose.x == ep.start.x);
        CHECK(steps[0].obs.pose.y == ep.start.y);
        for (size_t k = 0; k < steps.size(); ++k) {
            CHECK(steps[k].obs.step_index == static_cast<int64_t>(k));
            CHECK(!w.occupied(steps[k].obs.pose.position()));
        }
        const auto& last = steps.back().waypoints;
        for (int h = 0; h < last.horizon(); ++h) CHECK(last[h].c == 1.0);
        if (steps.size() < 2) continue;
        ++multi_step;
        for (size_t k = 0; k + 1 < steps.size(); ++k) {
            const ExpertStep& a = steps[k];
            const ExpertStep& b = steps[k + 1];
            for (int j = 1; j < params.horizon; ++j) {
                const Waypoint& wa = a.waypoints[j];
                const Waypoint& wb = b.waypoints[j - 1];
                Vec2 pa = from_agent_frame({wa.x, wa.y}, a.obs.pose);
                Vec2 pb = from_agent_frame({wb.x, wb.y}, b.obs.pose);
                CHECK(std::abs(pa.x - pb.x) < 1e-9);
                CHECK(std::abs(pa.y - pb.y) < 1e-9);
                CHECK(wa.c == wb.c);
                double ta = wrap_angle(a.obs.pose.theta + wa.heading());
                double tb = wrap_angle(b.obs.pose.theta + wb.heading());
                CHECK(std::abs(wrap_angle(ta - tb)) < 1e-9);
                CHECK(!w.occupied(pa));
            }
        }
    }
    CHECK(multi_step >= 8);
}

TEST_CASE("frontier walk is deterministic and explore-labeled") {
    WorldSpec wspec;
    wspec.size_m = 12.0;
    wspec.room_count = 5;
    wspec.object_density = 0.06;
    World w = generate_world(3, wspec);
    ExpertParams params = small_expert();

    // The walk plans on a 0.2 m inflated grid, so start well clear of walls.
    Pose2D start{0.0, 0.0, 0.0};
    for (int y = 0; y < w.occ.h && start.x == 0.0; ++y)
        for (int x = 0; x < w.occ.w; ++x) {
            Vec2 c = w.center_of({x, y});
            if (!disc_collides(w, c, 0.35)) {
                start = {c.x, c.y, 0.0};
                break;
            }
        }
    REQUIRE(start.x != 0.0);

    auto a = frontier_trajectory(w, start, params, 11);
    auto b = frontier_trajectory(w, start, params, 11);
    REQUIRE(!a.empty());
    CHECK(steps_identical(a, b));
    CHECK(!steps_identical(a, frontier_trajectory(w, start, params, 12)));

    int explore_tok = Vocab::tokenize({"explore"})[0];
    for (size_t i = 0; i < a.size(); ++i) {
        const ExpertStep& st = a[i];
        CHECK(st.obs.step_index == static_cast<int64_t>(i));
        REQUIRE(!st.instruction.empty());
        CHECK(st.instruction[0] == explore_tok);
        CHECK(st.coord.has_value());
        for (int h = 0; h < st.waypoints.horizon(); ++h) CHECK(st.waypoints[h].c == 0.0);
        CHECK(!disc_collides(w, st.obs.pose.position(), 0.1));
    }

    // A single-leg walk is a prefix of the full walk: the rng draws for the
    // first leg happen before any stepping.
    ExpertParams one_leg = params;
    one_leg.max_frontier_legs = 1;
    auto first = frontier_trajectory(w, start, one_leg, 11);
    REQUIRE(!first.empty());
    REQUIRE(first.size() <= a.size());
    std::vector<ExpertStep> prefix(a.begin(), a.begin() + first.size());
    CHECK(steps_identical(first, prefix));
    CHECK(first.size() < a.size());
}

TEST_CASE("trajectory records keep pose and label layout") {
    World w = boxed_world(80, 0.1);
    Episode ep = point_episode({2.0, 4.0}, 0.0, {6.0, 4.0});
    ExpertParams params = small_expert();
    auto steps = expert_trajectory(w, ep, params);

    Dataset ds;
    ds.append_trajectory(7, RecordTask::Point, steps, params.sensor);
    REQUIRE(ds.records.size() == steps.size());
    CHECK(ds.feature_dim == static_cast<uint32_t>(params.sensor.feature_dim()));
    CHECK(ds.horizon == static_cast<uint32_t>(params.horizon));
    for (size_t i = 0; i < steps.size(); ++i) {
        const DataRecord& r = ds.records[i];
        CHECK(r.episode_id == 7);
        CHECK(r.step_index == static_cast<uint32_t>(i));
        CHECK(r.task == RecordTask::Point);
        CHECK(r.pose.x == steps[i].obs.pose.x);
        CHECK(r.pose.theta == steps[i].obs.pose.theta);
        auto feats = steps[i].obs.features(params.sensor);
        REQUIRE(r.features.size() == feats.size());
        for (size_t d = 0; d < feats.size(); ++d)
            CHECK(r.features[d] == static_cast<float>(feats[d]));
        CHECK(r.waypoints == steps[i].waypoints.flatten());
        REQUIRE(r.chunk.size() == static_cast<size_t>(params.horizon));
        for (int h = 0; h < params.horizon; ++h)
            CHECK(r.chunk[h] == static_cast<uint8_t>(steps[i].chunk[h]));
        CHECK(r.has_coord);
        CHECK(r.waypoint_seq().flatten() == r.waypoints);
    }

    auto mine = ds.episode_records(7);
    CHECK(mine.size() == steps.size());
    CHECK(mine.front() == &ds.records.front());
    CHECK(ds.episode_records(8).empty());

    // A trajectory with a different horizon no longer fits the container.
    ExpertParams short_params = params;
    short_params.horizon = 3;
    auto short_steps = expert_trajectory(w, ep, short_params);
    CHECK_THROWS_AS(ds.append_trajectory(8, RecordTask::Point, short_steps, params.sensor),
                    Error);
    try {
        ds.append_trajectory(8, RecordTask::Point, short_steps, params.sensor);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
}

TEST_CASE("dataset binary roundtrip preserves every field") {
    World w = boxed_world(80, 0.1);
    ExpertParams params = small_expert();
    Dataset ds;
    ds.append_trajectory(0, RecordTask::Point,
                         expert_trajectory(w, point_episode({2.0, 4.0}, 0.0, {6.0, 4.0}),
                                           params),
                         params.sensor);
    World wobj = boxed_world(80, 0.1);
    wobj.objects.push_back({{6.5, 6.5}, Category::sofa, -1, 0.25});
    Episode oep;
    oep.kind = TaskKind::ObjectGoal;
    oep.start = {1.5, 1.5, 0.0};
    oep.goal_category = static_cast<int>(Category::sofa);
    oep.instruction = instruction_object_goal(Category::sofa);
    ds.append_trajectory(1, RecordTask::Object, expert_trajectory(wobj, oep, params),
                         params.sensor);

    const std::string path_a = "test_ds_a.bin";
    const std::string path_b = "test_ds_b.bin";
    ds.save(path_a);
    Dataset back = Dataset::load(path_a);
    REQUIRE(back.records.size() == ds.records.size());
    CHECK(back.feature_dim == ds.feature_dim);
    CHECK(back.horizon == ds.horizon);
    for (size_t i = 0; i < ds.records.size(); ++i) {
        const DataRecord& x = ds.records[i];
        const DataRecord& y = back.records[i];
        CHECK(x.episode_id == y.episode_id);
        CHECK(x.step_index == y.step_index);
        CHECK(x.task == y.task);
        CHECK(x.pose.x == y.pose.x);
        CHECK(x.pose.y == y.pose.y);
        CHECK(x.pose.theta == y.pose.theta);
        CHECK(x.instruction == y.instruction);
        CHECK(x.has_coord == y.has_coord);
        CHECK(x.coord == y.coord);
        CHECK(x.features == y.features);
        CHECK(x.waypoints == y.waypoints);
        CHECK(x.chunk == y.chunk);
    }

    back.save(path_b);
    std::ifstream fa(path_a, std::ios::binary);
    std::ifstream fb(path_b, std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(!sa.str().empty());
    CHECK(sa.str().compare(0, 4, "DNDS") == 0);

    // Truncation and bad magic are parse failures, not silent misreads.
    std::string bytes = sa.str();
    {
        std::ofstream trunc("test_ds_trunc.bin", std::ios::binary);
        trunc.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    CHECK_THROWS_AS(Dataset::load("test_ds_trunc.bin"), Error);
    {
        std::ofstream magic("test_ds_magic.bin", std::ios::binary);
        magic << "NOPE" << bytes.substr(4);
    }
    CHECK_THROWS_AS(Dataset::load("test_ds_magic.bin"), Error);
    CHECK_THROWS_AS(Dataset::load("test_ds_missing.bin"), Error);
    try {
        Dataset::load("test_ds_missing.bin");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
    std::remove(path_a.c_str());
    std::remove(path_b.c_str());
    std::remove("test_ds_trunc.bin");
    std::remove("test_ds_magic.bin");
}

TEST_CASE("jsonl export mirrors the records") {
    World w = boxed_world(80, 0.1);
    w.objects.push_back({{6.5, 6.5}, Category::plant, -1, 0.25});
    Episode oep;
    oep.kind = TaskKind::ObjectGoal;
    oep.start = {1.5, 1.5, 0.0};
    oep.goal_category = static_cast<int>(Category::plant);
    oep.instruction = instruction_object_goal(Category::plant);
    ExpertParams params = small_expert();

    Dataset ds;
    ds.append_trajectory(3, RecordTask::Object, expert_trajectory(w, oep, params),
                         params.sensor);
    const std::string path = "test_ds.jsonl";
    ds.export_jsonl(path);

    std::ifstream is(path);
    REQUIRE(is.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) lines.push_back(line);
    REQUIRE(lines.size() == ds.records.size());

    const std::vector<std::string> expected_keys = {
        "episode", "step", "task", "pose", "tokens", "text",
        "coord",   "features", "waypoints", "chunk"};
    const std::set<std::string> action_names = {"FORWARD", "LEFT", "RIGHT", "STOP"};
    for (size_t i = 0; i < lines.size(); ++i) {
        auto j = nlohmann::ordered_json::parse(lines[i]);
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
        CHECK(keys == expected_keys);

        const DataRecord& r = ds.records[i];
        CHECK(j["episode"].get<uint32_t>() == r.episode_id);
        CHECK(j["step"].get<uint32_t>() == r.step_index);
        CHECK(j["task"].get<std::string>() == "object");
        CHECK(j["pose"].size() == 3);
        CHECK(j["pose"][0].get<double>() == r.pose.x);
        CHECK(j["tokens"].get<std::vector<int32_t>>() == r.instruction);
        CHECK(!j["text"].get<std::string>().empty());
        if (r.has_coord) {
            REQUIRE(j["coord"].is_array());
            for (int d = 0; d < 4; ++d) CHECK(j["coord"][d].get<double>() == r.coord[d]);
        } else {
            CHECK(j["coord"].is_null());
        }
        CHECK(j["features"].size() == ds.feature_dim);
        REQUIRE(j["waypoints"].size() == ds.horizon);
        for (uint32_t h = 0; h < ds.horizon; ++h) {
            REQUIRE(j["waypoints"][h].size() == 5);
            for (int d = 0; d < 5; ++d)
                CHECK(j["waypoints"][h][d].get<double>() == r.waypoints[h * 5 + d]);
        }
        REQUIRE(j["chunk"].size() == ds.horizon);
        for (uint32_t h = 0; h < ds.horizon; ++h)
            CHECK(action_names.count(j["chunk"][h].get<std::string>()) == 1);
    }
    // Far steps carry no coord, near steps do; both shapes must appear.
    CHECK(nlohmann::json::parse(lines.front())["coord"].is_null());
    CHECK(!nlohmann::json::parse(lines.back())["coord"].is_null());
    std::remove(path.c_str());
}

TEST_CASE("bounds span the labels and pin the completion dim") {
    Dataset ds;
    ds.horizon = 1;
    ds.feature_dim = 0;
    DataRecord r1;
    r1.waypoints = {-1.0, 2.0, 0.25, 0.5, 0.0};
    r1.chunk = {0};
    DataRecord r2;
    r2.waypoints = {3.0, 2.0, 0.25, -0.5, 0.0};
    r2.chunk = {0};
    ds.records = {r1, r2};

    NormalizationBounds b = ds.compute_bounds();
    CHECK(b.min[0] == -1.0);
    CHECK(b.max[0] == 3.0);
    // Degenerate dims widen by +/- 0.5 around the shared value.
    CHECK(b.min[1] == doctest::Approx(1.5));
    CHECK(b.max[1] == doctest::Approx(2.5));
    CHECK(b.min[2] == doctest::Approx(-0.25));
    CHECK(b.max[2] == doctest::Approx(0.75));
    CHECK(b.min[3] == -0.5);
    CHECK(b.max[3] == 0.5);
    // The completion flag range is fixed even though only 0 was observed.
    CHECK(b.min[4] == 0.0);
    CHECK(b.max[4] == 1.0);

    Dataset empty;
    CHECK_THROWS_AS(empty.compute_bounds(), Error);
    try {
        empty.compute_bounds();
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_input);
    }
}

TEST_CASE("generated corpus is deterministic and complete") {
    WorldSpec wspec;
    wspec.size_m = 8.0;
    wspec.room_count = 4;
    wspec.object_density = 0.06;

    DataGenSpec spec;
    spec.point = 2;
    spec.object = 2;
    spec.instruct = 1;
    spec.frontier = 2;
    spec.worlds = 2;
    spec.seed = 5;
    spec.expert = small_expert();

    Dataset a = generate_dataset(wspec, spec);
    Dataset b = generate_dataset(wspec, spec);
    REQUIRE(!a.records.empty());
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.feature_dim == static_cast<uint32_t>(spec.expert.sensor.feature_dim()));
    CHECK(a.horizon == static_cast<uint32_t>(spec.expert.horizon));
    for (size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].pose.x == b.records[i].pose.x);
        CHECK(a.records[i].waypoints == b.records[i].waypoints);
        CHECK(a.records[i].features == b.records[i].features);
        CHECK(a.records[i].instruction == b.records[i].instruction);
        CHECK(a.records[i].chunk == b.records[i].chunk);
    }

    // Episode ids are contiguous and task blocks arrive in declaration order.
    std::vector<RecordTask> episode_task;
    for (const auto& r : a.records) {
        uint32_t id = r.episode_id;
        if (id == episode_task.size()) {
            episode_task.push_back(r.task);
        } else {
            REQUIRE(id == episode_task.size() - 1);
            CHECK(r.task == episode_task.back());
        }
    }
    std::vector<RecordTask> want = {RecordTask::Point, RecordTask::Point,
                                    RecordTask::Object, RecordTask::Object,
                                    RecordTask::Instruct, RecordTask::Frontier,
                                    RecordTask::Frontier};
    CHECK(episode_task == want);

    // Step indices restart per episode; point records always carry a coord.
    uint32_t prev_id = 0xffffffffu;
    uint32_t next_step = 0;
    for (const auto& r : a.records) {
        if (r.episode_id != prev_id) {
            prev_id = r.episode_id;
            next_step = 0;
        }
        CHECK(r.step_index == next_step);
        ++next_step;
        if (r.task == RecordTask::Point || r.task == RecordTask::Frontier)
            CHECK(r.has_coord);
    }

    CHECK_THROWS_AS([&] {
        DataGenSpec bad = spec;
        bad.worlds = 0;
        generate_dataset(wspec, bad);
    }(), Error);
    CHECK_THROWS_AS([&] {
        DataGenSpec bad = spec;
        bad.point = -1;
        generate_dataset(wspec, bad);
    }(), Error);
}
