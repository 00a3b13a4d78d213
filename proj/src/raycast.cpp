#include <algorithm>
#include <cmath>

#include "duonav/error.hpp"
#include "duonav/world.hpp"

namespace duonav {

// Amanatides-Woo traversal. Returns the exact distance at which the ray
// enters the first wall cell, or max_range if none is reached.
double cast_ray(const World& world, const Vec2& origin, double angle,
                double max_range, bool* hit) {
    const double res = world.resolution;
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);

    CellIdx cell = world.cell_of(origin);
    if (world.occupied(cell))
        raise(ErrorCode::invalid_argument, "cast_ray: origin inside an occupied cell");

    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);

    // Distance along the ray to the next cell border on each axis.
    auto border_t = [&](double pos, int cell_i, double dir, int step) {
        if (step == 0) return std::numeric_limits<double>::infinity();
        double edge = (step > 0 ? (cell_i + 1) : cell_i) * res;
        return (edge - pos) / dir;
    };
    double t_max_x = border_t(origin.x, cell.x, dx, step_x);
    double t_max_y = border_t(origin.y, cell.y, dy, step_y);
    const double t_delta_x = step_x ? res / std::abs(dx) : std::numeric_limits<double>::infinity();
    const double t_delta_y = step_y ? res / std::abs(dy) : std::numeric_limits<double>::infinity();

    while (true) {
        double t;
        if (t_max_x < t_max_y) {
            t = t_max_x;
            t_max_x += t_delta_x;
            cell.x += step_x;
        } else {
            t = t_max_y;
            t_max_y += t_delta_y;
            cell.y += step_y;
        }
        if (t > max_range) break;
        if (world.occupied(cell)) {
            if (hit) *hit = true;
            return t;
        }
    }
    if (hit) *hit = false;
    return max_range;
}

std::vector<double> Observation::features(const SensorSpec& sensor) const {
    std::vector<double> f;
    f.reserve(sensor.feature_dim());
    for (int i = 0; i < sensor.rays; ++i)
        f.push_back(depth[i] / sensor.max_range);
    for (int i = 0; i < sensor.rays; ++i)
        f.push_back(sem_cat[i] >= 0 ? 1.0 : 0.0);
    std::array<double, kCategoryCount> hist{};
    for (int i = 0; i < sensor.rays; ++i)
        if (sem_cat[i] >= 0) hist[sem_cat[i]] += 1.0;
    for (double h : hist)
        f.push_back(h / sensor.rays);
    for (float p : patch)
        f.push_back(p);
    return f;
}

Observation render_observation(const World& world, const Pose2D& pose,
                               const SensorSpec& sensor, int64_t step_index) {
    if (world.occupied(pose.position()))
        raise(ErrorCode::invalid_argument, "render_observation: pose in occupied cell");

    Observation obs;
    obs.pose = pose.wrapped();
    obs.step_index = step_index;
    obs.depth.resize(sensor.rays);
    obs.hit.resize(sensor.rays);
    obs.sem_cat.assign(sensor.rays, -1);
    obs.sem_depth.assign(sensor.rays, 0.0f);

    for (int i = 0; i < sensor.rays; ++i) {
        double angle = pose.theta + sensor.ray_offset(i);
        bool hit = false;
        double d = cast_ray(world, pose.position(), angle, sensor.max_range, &hit);
        obs.depth[i] = static_cast<float>(d);
        obs.hit[i] = hit ? 1 : 0;

        // Objects do not block rays; a ray reports the nearest object whose
        // disc it crosses before the wall hit.
        Vec2 dir{std::cos(angle), std::sin(angle)};
        double best_t = -1.0;
        int best_cat = -1;
        for (const auto& obj : world.objects) {
            Vec2 rel = obj.pos - pose.position();
            double t = rel.dot(dir);
            if (t <= 0.0 || t > d) continue;
            Vec2 closest = pose.position() + dir * t;
            if (distance(closest, obj.pos) > obj.radius) continue;
            if (best_t < 0.0 || t < best_t) {
                best_t = t;
                best_cat = static_cast<int>(obj.category);
            }
        }
        if (best_cat >= 0) {
            obs.sem_cat[i] = static_cast<int16_t>(best_cat);
            obs.sem_depth[i] = static_cast<float>(best_t);
        }
    }

    // Egocentric occupancy crop, rotated into the agent frame. Out-of-bounds
    // samples read as occupied.
    obs.patch.resize(sensor.patch * sensor.patch);
    int half = sensor.patch / 2;
    for (int py = 0; py < sensor.patch; ++py) {
        for (int px = 0; px < sensor.patch; ++px) {
            Vec2 local{(px - half) * sensor.patch_res, (py - half) * sensor.patch_res};
            Vec2 p = from_agent_frame(local, pose);
            obs.patch[py * sensor.patch + px] = world.occupied(p) ? 1.0f : 0.0f;
        }
    }
    return obs;
}

}  // namespace duonav
