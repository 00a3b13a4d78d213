#include "duonav/metrics.hpp"

#include <cmath>

#include "duonav/error.hpp"

namespace duonav {

double episode_maoe(const EpisodeResult& r) {
    size_t n = std::min(r.pred_headings.size(), r.expert_headings.size());
    if (n == 0) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i)
        sum += std::fabs(wrap_angle(r.pred_headings[i] - r.expert_headings[i]));
    return sum / static_cast<double>(n);
}

Metrics compute_metrics(const std::vector<EpisodeResult>& results, double success_radius) {
    if (results.empty())
        raise(ErrorCode::invalid_argument, "compute_metrics: no episodes");
    Metrics m;
    m.episodes = static_cast<int>(results.size());
    int maoe_n = 0;
    for (const EpisodeResult& r : results) {
        m.sr += r.success ? 1.0 : 0.0;
        m.os += r.min_goal_distance <= success_radius ? 1.0 : 0.0;
        if (r.success) {
            double denom = std::max(r.path_length, r.shortest_len);
            m.spl += denom > 0.0 ? r.shortest_len / denom : 1.0;
        }
        m.ne += r.final_goal_distance;
        if (!r.pred_headings.empty()) {
            m.maoe += episode_maoe(r);
            ++maoe_n;
        }
    }
    double n = static_cast<double>(m.episodes);
    m.sr /= n;
    m.os /= n;
    m.spl /= n;
    m.ne /= n;
    if (maoe_n > 0) m.maoe /= maoe_n;
    return m;
}

}  // namespace duonav
