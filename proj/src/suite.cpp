#include "duonav/suite.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "duonav/error.hpp"
#include "duonav/serialize.hpp"
#include "duonav/svg.hpp"

namespace duonav {

namespace {

using nlohmann::ordered_json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

EpisodeResult run_or_record(const World& world, const Episode& ep, Policy& policy,
                            const RunParams& params) {
    try {
        return run_episode(world, ep, policy, params);
    } catch (const std::exception&) {
        EpisodeResult r;
        r.outcome = "error:runtime";
        r.shortest_len = ep.shortest_len;
        double d = goal_distance(world, ep, ep.start.position());
        r.final_goal_distance = d;
        r.min_goal_distance = d;
        return r;
    }
}

}  // namespace

RunToggles cell_toggles(const std::string& name) {
    RunToggles t;
    if (name == "fast") {
        t.use_flow_head = true;
        t.use_slow = false;
    } else if (name == "fast_slow") {
        t.use_flow_head = true;
        t.use_slow = true;
    } else if (name == "chunk") {
        t.use_flow_head = false;
        t.use_slow = false;
    } else if (name == "chunk_slow") {
        t.use_flow_head = false;
        t.use_slow = true;
    } else {
        raise(ErrorCode::invalid_argument, "unknown toggle cell '" + name + "'");
    }
    return t;
}

SuiteJobs build_suite_jobs(const RunConfig& cfg) {
    cfg.suite.validate();
    SuiteJobs jobs;
    int nw = std::min(cfg.suite.worlds, std::max(cfg.suite.episodes, 1));
    jobs.worlds.reserve(nw);
    for (int i = 0; i < nw; ++i)
        jobs.worlds.push_back(generate_world(derive_seed(cfg.suite.seed, 1000 + i), cfg.world));
    TaskKind kind = cfg.suite.kind();
    for (int e = 0; e < cfg.suite.episodes; ++e) {
        int wi = e % nw;
        jobs.world_of.push_back(wi);
        jobs.episodes.push_back(
            generate_episode_retry(jobs.worlds[wi], kind,
                                   derive_seed(cfg.suite.seed, 2000000 + e),
                                   cfg.suite.episode));
    }
    return jobs;
}

SuiteReport run_suite(const RunConfig& cfg, const SuiteJobs& jobs, Policy& policy) {
    SuiteReport rep;
    const size_t n = jobs.episodes.size();
    for (const std::string& cell : cfg.suite.cells) {
        CellResult cr;
        cr.name = cell;
        cr.episodes.resize(n);
        rep.cells.push_back(std::move(cr));
    }

    struct Job {
        size_t cell;
        size_t epi;
    };
    std::vector<Job> queue;
    queue.reserve(rep.cells.size() * n);
    for (size_t c = 0; c < rep.cells.size(); ++c)
        for (size_t e = 0; e < n; ++e) queue.push_back({c, e});

    auto params_for = [&](size_t cell) {
        RunParams p = cfg.run;
        p.toggles = cell_toggles(cfg.suite.cells[cell]);
        p.rng_seed = cfg.suite.seed;
        return p;
    };
    auto run_one = [&](const Job& job, Policy& pol) {
        const Episode& ep = jobs.episodes[job.epi];
        const World& world = jobs.worlds[jobs.world_of[job.epi]];
        rep.cells[job.cell].episodes[job.epi] =
            run_or_record(world, ep, pol, params_for(job.cell));
    };

    int workers = std::min<int>(cfg.suite.workers, static_cast<int>(queue.size()));
    if (workers <= 1) {
        for (const Job& job : queue) run_one(job, policy);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w]() {
                auto local = clone_policy(policy);
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= queue.size()) break;
                    run_one(queue[i], *local);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    for (CellResult& cr : rep.cells)
        if (!cr.episodes.empty())
            cr.metrics = compute_metrics(cr.episodes, cfg.suite.episode.success_radius);
    return rep;
}

std::string report_csv(const SuiteReport& rep) {
    std::string out = "cell,episodes,sr,os,spl,ne,maoe\n";
    for (const CellResult& cr : rep.cells) {
        out += cr.name + "," + std::to_string(cr.metrics.episodes) + "," +
               g17(cr.metrics.sr) + "," + g17(cr.metrics.os) + "," +
               g17(cr.metrics.spl) + "," + g17(cr.metrics.ne) + "," +
               g17(cr.metrics.maoe) + "\n";
    }
    return out;
}

std::string report_json(const RunConfig& cfg, const SuiteJobs& jobs,
                        const SuiteReport& rep) {
    ordered_json j;
    j["schema_version"] = 1;
    j["suite"] = {{"task", cfg.suite.task},
                  {"episodes", cfg.suite.episodes},
                  {"worlds", static_cast<int>(jobs.worlds.size())},
                  {"seed", cfg.suite.seed},
                  {"cells", cfg.suite.cells},
                  {"success_radius", cfg.suite.episode.success_radius},
                  {"max_steps", cfg.suite.episode.max_steps}};
    ordered_json cells = ordered_json::array();
    for (const CellResult& cr : rep.cells) {
        ordered_json cell;
        cell["name"] = cr.name;
        cell["metrics"] = {{"episodes", cr.metrics.episodes}, {"sr", cr.metrics.sr},
                           {"os", cr.metrics.os},             {"spl", cr.metrics.spl},
                           {"ne", cr.metrics.ne},             {"maoe", cr.metrics.maoe}};
        ordered_json eps = ordered_json::array();
        for (size_t i = 0; i < cr.episodes.size(); ++i) {
            const EpisodeResult& r = cr.episodes[i];
            eps.push_back({{"index", static_cast<int>(i)},
                           {"world_seed", jobs.worlds[jobs.world_of[i]].seed},
                           {"episode_seed", jobs.episodes[i].seed},
                           {"outcome", r.outcome},
                           {"success", r.success},
                           {"path_length", r.path_length},
                           {"shortest_len", r.shortest_len},
                           {"final_goal_distance", r.final_goal_distance},
                           {"min_goal_distance", r.min_goal_distance},
                           {"ticks", r.ticks},
                           {"maoe", episode_maoe(r)},
                           {"slow_calls", static_cast<int>(r.slow_events.size())}});
        }
        cell["episodes"] = eps;
        cells.push_back(std::move(cell));
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

void write_suite_outputs(const std::string& dir, const RunConfig& cfg,
                         const SuiteJobs& jobs, const SuiteReport& rep) {
    std::filesystem::create_directories(dir);
    write_text_file(dir + "/report.csv", report_csv(rep));
    write_text_file(dir + "/report.json", report_json(cfg, jobs, rep));
    if (cfg.suite.replay_logs <= 0) return;
    std::filesystem::create_directories(dir + "/logs");
    for (const CellResult& cr : rep.cells) {
        size_t count = std::min<size_t>(cfg.suite.replay_logs, cr.episodes.size());
        for (size_t i = 0; i < count; ++i) {
            const World& world = jobs.worlds[jobs.world_of[i]];
            std::string log =
                episode_log_jsonl(world, jobs.episodes[i], cr.episodes[i]);
            write_text_file(dir + "/logs/" + cr.name + "_" + std::to_string(i) + ".jsonl",
                            log);
        }
    }
}

}  // namespace duonav
