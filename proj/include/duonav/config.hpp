#pragma once

#include <string>
#include <vector>

#include "duonav/policy.hpp"
#include "duonav/runner.hpp"

namespace duonav {

struct SuiteSpec {
    std::string task = "point";  // point | object | instruct
    int episodes = 50;
    int worlds = 10;
    uint64_t seed = 100;
    std::vector<std::string> cells = {"fast"};
    int workers = 1;
    int replay_logs = 0;
    EpisodeParams episode;

    TaskKind kind() const;
    void validate() const;
};

// Everything the CLI reads from one config file. Sections: [world],
// [sensor], [policy], [slow], [controller], [suite].
struct RunConfig {
    WorldSpec world;
    RunParams run;
    PolicyConfig policy;
    SuiteSpec suite;
};

RunConfig default_config();

// Strict TOML subset: [section] headers, `key = value` pairs, values are
// strings, numbers, booleans, or arrays of strings; '#' comments. Unknown
// sections or keys are errors (with the line number).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Emits a file parse_config() accepts, with every supported key.
std::string dump_config(const RunConfig& cfg);

}  // namespace duonav
