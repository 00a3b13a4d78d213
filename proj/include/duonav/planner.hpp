#pragma once

#include <string>
#include <vector>

#include "duonav/mapping.hpp"
#include "duonav/memory_bank.hpp"
#include "duonav/vocab.hpp"

namespace duonav {

struct SlowConfig {
    double alpha = 1.0;        // semantic prior weight
    double beta = 0.3;         // unknown-area weight, per 100 cells
    double gamma = 0.2;        // path-cost weight, per meter
    double rho = 2.0;          // meters; unknown-area radius around a centroid
    double proxy_lambda = 1.0; // m/rad in the frontier-proxy score
    double sem_radius = 2.0;   // meters; sighting-to-frontier room inference
};

// What the slow system is looking for. room < 0 means no named room.
struct SlowGoal {
    int category = -1;
    int room = -1;
};

enum class DecisionKind { GoToTarget, ExploreFrontier, Terminate };

struct CotRecord {
    int candidate_id = -1;  // frontier id; -1 for the memory-check record
    double prior = 0.0;
    double unknown = 0.0;   // cells
    double cost = 0.0;      // meters; negative when unreachable
    double total = 0.0;
    std::string verdict;
};

struct Deliberation {
    DecisionKind kind = DecisionKind::Terminate;
    Pose2D target;          // GoToTarget estimate or frontier subgoal
    int frontier_id = -1;
    std::string reason;     // Terminate reason
    std::vector<int> subtask_tokens;
    std::string subtask;
    std::vector<CotRecord> cot;
};

// Unknown cells within cfg.rho of the frontier centroid.
int unknown_area_beyond(const OccupancyMap& map, const Frontier& frontier, double rho);

// Majority room vote over category sightings; -1 when no evidence.
int infer_room(const std::vector<Category>& seen);

// Memory-first arbitration, then frontier scoring:
// score(f) = alpha*prior + beta*unknown/100 - gamma*path_meters.
Deliberation deliberate(const SlowGoal& goal, const MemoryBank& bank,
                        const OccupancyMap& map, const std::vector<Frontier>& frontiers,
                        const Pose2D& agent_pose, const SensorSpec& sensor,
                        const SlowConfig& cfg);

// Blocking HTTP POST /deliberate with total local fallback; never throws on
// transport or schema problems.
struct RemoteConfig {
    std::string host;  // empty = disabled
    int port = 0;
    double timeout_s = 2.0;
};

Deliberation remote_deliberate(const RemoteConfig& remote, const SlowGoal& goal,
                               const MemoryBank& bank, const OccupancyMap& map,
                               const std::vector<Frontier>& frontiers,
                               const Pose2D& agent_pose, const SensorSpec& sensor,
                               const SlowConfig& cfg);

// Request/response JSON used by the wire protocol (exposed for tests).
std::string deliberate_request_json(const SlowGoal& goal, const Pose2D& agent_pose,
                                    const std::vector<Frontier>& frontiers,
                                    const MemoryBank& bank, const SensorSpec& sensor,
                                    const SlowConfig& cfg);
bool parse_deliberation_json(const std::string& body,
                             const std::vector<Frontier>& frontiers, Deliberation* out);

}  // namespace duonav
