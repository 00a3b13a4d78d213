#pragma once

#include <string>
#include <vector>

#include "duonav/config.hpp"
#include "duonav/metrics.hpp"

namespace duonav {

// Ablation cell names: "fast" (flow head only), "fast_slow" (flow head +
// slow planner), "chunk" (discrete head only), "chunk_slow" (discrete head
// + slow planner).
RunToggles cell_toggles(const std::string& name);

// Worlds and episodes for a suite, derived deterministically from the suite
// seed; the same jobs are replayed against every toggle cell (paired seeds).
struct SuiteJobs {
    std::vector<World> worlds;
    std::vector<int> world_of;  // per episode index
    std::vector<Episode> episodes;
};

SuiteJobs build_suite_jobs(const RunConfig& cfg);

struct CellResult {
    std::string name;
    Metrics metrics;
    std::vector<EpisodeResult> episodes;
};

struct SuiteReport {
    std::vector<CellResult> cells;
};

// Runs every (episode x cell). Episode failures are recorded per episode,
// never aborting the suite. workers > 1 clones the policy per worker.
SuiteReport run_suite(const RunConfig& cfg, const SuiteJobs& jobs, Policy& policy);

// One row per cell; numbers printed with %.17g so parsing the CSV recovers
// the aggregates exactly.
std::string report_csv(const SuiteReport& rep);

// Full per-episode detail; field order is fixed and no timestamps are
// included, so identical runs produce identical bytes.
std::string report_json(const RunConfig& cfg, const SuiteJobs& jobs,
                        const SuiteReport& rep);

// Writes report.csv, report.json, and replay logs for the first
// suite.replay_logs episodes of each cell under dir.
void write_suite_outputs(const std::string& dir, const RunConfig& cfg,
                         const SuiteJobs& jobs, const SuiteReport& rep);

}  // namespace duonav
