#include "duonav/duonav_c.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "duonav/config.hpp"
#include "duonav/dataset.hpp"
#include "duonav/error.hpp"
#include "duonav/runner.hpp"
#include "duonav/serialize.hpp"
#include "duonav/suite.hpp"
#include "duonav/svg.hpp"
#include "duonav/train.hpp"

namespace {

thread_local std::string g_last_error;

int code_of(duonav::ErrorCode c) {
    using duonav::ErrorCode;
    switch (c) {
        case ErrorCode::invalid_argument:
        case ErrorCode::degenerate_input:
        case ErrorCode::parse:
            return 1;
        default:
            return 2;
    }
}

template <typename F>
int guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return 0;
    } catch (const duonav::Error& e) {
        g_last_error = e.what();
        return code_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return 2;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

duonav::RunConfig config_or_default(const char* path) {
    return path ? duonav::load_config(path) : duonav::default_config();
}

[[noreturn]] void usage(const std::string& msg) {
    duonav::raise(duonav::ErrorCode::invalid_argument, msg);
}

}  // namespace

struct dn_world {
    duonav::World w;
};

extern "C" {

const char* dn_last_error(void) { return g_last_error.c_str(); }

void dn_string_free(char* s) { std::free(s); }

dn_world* dn_world_generate(uint64_t seed, const char* config_path) {
    dn_world* out = nullptr;
    guarded([&] {
        auto cfg = config_or_default(config_path);
        out = new dn_world{duonav::generate_world(seed, cfg.world)};
    });
    return out;
}

dn_world* dn_world_from_json(const char* json_text) {
    dn_world* out = nullptr;
    guarded([&] {
        if (!json_text) usage("dn_world_from_json: null text");
        out = new dn_world{duonav::world_from_json(json_text)};
    });
    return out;
}

char* dn_world_to_json(const dn_world* w) {
    char* out = nullptr;
    guarded([&] {
        if (!w) usage("dn_world_to_json: null world");
        out = dup_string(duonav::world_to_json(w->w));
    });
    return out;
}

char* dn_world_ascii(const dn_world* w) {
    char* out = nullptr;
    guarded([&] {
        if (!w) usage("dn_world_ascii: null world");
        out = dup_string(duonav::world_ascii(w->w));
    });
    return out;
}

int dn_world_save(const dn_world* w, const char* path) {
    return guarded([&] {
        if (!w || !path) usage("dn_world_save: null argument");
        duonav::save_world(path, w->w);
    });
}

dn_world* dn_world_load(const char* path) {
    dn_world* out = nullptr;
    guarded([&] {
        if (!path) usage("dn_world_load: null path");
        out = new dn_world{duonav::load_world(path)};
    });
    return out;
}

void dn_world_free(dn_world* w) { delete w; }

int dn_gen_dataset(const char* config_path, uint64_t seed, int point_n, int object_n,
                   int instruct_n, int frontier_n, int worlds, const char* out_path,
                   const char* jsonl_path) {
    return guarded([&] {
        if (!out_path) usage("dn_gen_dataset: null out_path");
        auto cfg = config_or_default(config_path);
        duonav::DataGenSpec spec;
        spec.point = point_n;
        spec.object = object_n;
        spec.instruct = instruct_n;
        spec.frontier = frontier_n;
        spec.worlds = worlds > 0 ? worlds : 20;
        spec.seed = seed;
        spec.expert.sensor = cfg.run.sensor;
        spec.expert.agent_radius = cfg.run.agent_radius;
        spec.expert.horizon = cfg.policy.flow.horizon;
        spec.episode = cfg.suite.episode;
        duonav::Dataset data = duonav::generate_dataset(cfg.world, spec);
        data.save(out_path);
        if (jsonl_path) data.export_jsonl(jsonl_path);
    });
}

int dn_train(const char* dataset_path, const char* config_path, int stage, int steps,
             int batch, double lr, uint64_t seed, const char* ckpt_in,
             const char* ckpt_out, const char* loss_csv, double* final_loss_out) {
    return guarded([&] {
        if (!dataset_path || !ckpt_out) usage("dn_train: null path");
        auto cfg = config_or_default(config_path);
        duonav::Dataset data = duonav::Dataset::load(dataset_path);

        std::unique_ptr<duonav::Policy> policy;
        if (ckpt_in) {
            policy = duonav::load_checkpoint(ckpt_in);
        } else {
            policy = std::make_unique<duonav::Policy>(cfg.policy, seed);
        }

        duonav::TrainConfig tc;
        tc.stage = stage;
        if (steps > 0) tc.steps = steps;
        if (batch > 0) tc.batch = batch;
        tc.lr = lr > 0 ? lr : (stage == 1 ? 0.05 : 0.02);
        tc.context_frames = cfg.run.context_frames;
        tc.seed = seed;
        if (loss_csv) tc.loss_csv = loss_csv;
        duonav::TrainReport rep = duonav::train(*policy, data, tc);
        if (final_loss_out) *final_loss_out = rep.final_loss;
        duonav::save_checkpoint(ckpt_out, *policy);
        if (rep.diverged)
            duonav::raise(duonav::ErrorCode::divergence,
                          "training diverged; checkpoint holds the last stable weights");
    });
}

int dn_eval_suite(const char* config_path, const char* ckpt_path, const char* out_dir,
                  int workers_override) {
    return guarded([&] {
        if (!config_path || !ckpt_path || !out_dir) usage("dn_eval_suite: null path");
        auto cfg = duonav::load_config(config_path);
        if (workers_override > 0) cfg.suite.workers = workers_override;
        auto policy = duonav::load_checkpoint(ckpt_path);
        auto jobs = duonav::build_suite_jobs(cfg);
        auto rep = duonav::run_suite(cfg, jobs, *policy);
        duonav::write_suite_outputs(out_dir, cfg, jobs, rep);
    });
}

int dn_replay_svg(const char* log_path, const char* svg_path) {
    return guarded([&] {
        if (!log_path || !svg_path) usage("dn_replay_svg: null path");
        std::string log = duonav::read_text_file(log_path);
        duonav::write_text_file(svg_path, duonav::replay_svg(log));
    });
}

int dn_bench_latency(const char* config_path, const char* ckpt_path, int ticks,
                     int use_cache, double* mean_ms, double* p95_ms) {
    return guarded([&] {
        if (!ckpt_path) usage("dn_bench_latency: null checkpoint path");
        auto cfg = config_or_default(config_path);
        auto policy = duonav::load_checkpoint(ckpt_path);
        duonav::World world =
            duonav::generate_world(duonav::derive_seed(cfg.suite.seed, 1000), cfg.world);
        duonav::Episode ep = duonav::generate_episode_retry(
            world, duonav::TaskKind::PointGoal,
            duonav::derive_seed(cfg.suite.seed, 3000000), cfg.suite.episode);
        auto rep = duonav::fast_tick_latency(world, ep, *policy, cfg.run,
                                             ticks > 0 ? ticks : 500, use_cache != 0);
        if (mean_ms) *mean_ms = rep.mean_ms;
        if (p95_ms) *p95_ms = rep.p95_ms;
    });
}

}  // extern "C"
