#pragma once

#include <string>

#include "duonav/runner.hpp"

namespace duonav {

// JSON-lines replay log: a header line embedding the world and episode, one
// line per tick, one line per slow decision, and an end line. The log alone
// is enough to re-render the run.
std::string episode_log_jsonl(const World& world, const Episode& ep,
                              const EpisodeResult& res);

// Renders a replay log to SVG: occupancy map, trajectory polyline (a single
// point marker when the agent never moved), one overlay group per slow
// decision's frontier set, and the goal marker. Byte-deterministic for a
// fixed log; malformed logs raise a parse error naming the line.
std::string replay_svg(const std::string& log_jsonl);

}  // namespace duonav
