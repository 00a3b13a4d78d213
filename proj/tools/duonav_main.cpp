#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "duonav/duonav_c.h"

namespace {

int report(int rc) {
    if (rc != 0) std::fprintf(stderr, "error: %s\n", dn_last_error());
    return rc;
}

bool write_file(const std::string& path, const char* text) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return false;
    bool ok = std::fputs(text, f) >= 0;
    ok = std::fclose(f) == 0 && ok;
    return ok;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"duonav: fast-slow navigation in a synthetic multi-room world"};
    app.require_subcommand(1);
    int rc = 0;

    auto* gw = app.add_subcommand("gen-world", "Generate a world and save it as JSON");
    uint64_t gw_seed = 1;
    std::string gw_cfg, gw_out, gw_ascii;
    gw->add_option("--seed", gw_seed, "World seed");
    gw->add_option("--config", gw_cfg, "Config file");
    gw->add_option("--out", gw_out, "Output JSON path")->required();
    gw->add_option("--ascii", gw_ascii, "Also write an ASCII rendering here");
    gw->callback([&] {
        dn_world* w = dn_world_generate(gw_seed, opt(gw_cfg));
        if (!w) {
            rc = report(1);
            return;
        }
        rc = report(dn_world_save(w, gw_out.c_str()));
        if (rc == 0 && !gw_ascii.empty()) {
            char* ascii = dn_world_ascii(w);
            if (!ascii || !write_file(gw_ascii, ascii)) {
                std::fprintf(stderr, "error: could not write %s\n", gw_ascii.c_str());
                rc = 2;
            }
            dn_string_free(ascii);
        }
        if (rc == 0) std::printf("wrote %s\n", gw_out.c_str());
        dn_world_free(w);
    });

    auto* gd = app.add_subcommand("gen-data", "Generate an expert demonstration dataset");
    uint64_t gd_seed = 5;
    int gd_point = 0, gd_object = 0, gd_instruct = 0, gd_frontier = 0, gd_worlds = 20;
    std::string gd_cfg, gd_out, gd_jsonl;
    gd->add_option("--seed", gd_seed, "Base seed");
    gd->add_option("--config", gd_cfg, "Config file");
    gd->add_option("--point", gd_point, "Point-goal episodes");
    gd->add_option("--object", gd_object, "Object-goal episodes");
    gd->add_option("--instruct", gd_instruct, "Instruction episodes");
    gd->add_option("--frontier", gd_frontier, "Exploration trajectories");
    gd->add_option("--worlds", gd_worlds, "Distinct world layouts");
    gd->add_option("--out", gd_out, "Output dataset path")->required();
    gd->add_option("--jsonl", gd_jsonl, "Also export JSON lines here");
    gd->callback([&] {
        rc = report(dn_gen_dataset(opt(gd_cfg), gd_seed, gd_point, gd_object, gd_instruct,
                                   gd_frontier, gd_worlds, gd_out.c_str(), opt(gd_jsonl)));
        if (rc == 0) std::printf("wrote %s\n", gd_out.c_str());
    });

    auto* tr = app.add_subcommand("train", "Train the policy on a dataset");
    uint64_t tr_seed = 1;
    int tr_stage = 1, tr_steps = 0, tr_batch = 0;
    double tr_lr = 0.0;
    std::string tr_data, tr_cfg, tr_init, tr_out, tr_csv;
    tr->add_option("--data", tr_data, "Dataset path")->required();
    tr->add_option("--config", tr_cfg, "Config file");
    tr->add_option("--stage", tr_stage, "1 = discrete head, 2 = flow matching")
        ->check(CLI::Range(1, 2));
    tr->add_option("--steps", tr_steps, "Optimizer steps (0 = default)");
    tr->add_option("--batch", tr_batch, "Batch size (0 = default)");
    tr->add_option("--lr", tr_lr, "Learning rate (0 = stage default)");
    tr->add_option("--seed", tr_seed, "Training seed");
    tr->add_option("--init", tr_init, "Starting checkpoint (stage 2 resumes stage 1)");
    tr->add_option("--out", tr_out, "Output checkpoint path")->required();
    tr->add_option("--loss-csv", tr_csv, "Write the per-step loss curve here");
    tr->callback([&] {
        double final_loss = 0.0;
        rc = report(dn_train(tr_data.c_str(), opt(tr_cfg), tr_stage, tr_steps, tr_batch,
                             tr_lr, tr_seed, opt(tr_init), tr_out.c_str(), opt(tr_csv),
                             &final_loss));
        if (rc == 0) std::printf("final loss %.6f, wrote %s\n", final_loss, tr_out.c_str());
    });

    auto* ev = app.add_subcommand("eval", "Run a benchmark suite and write reports");
    std::string ev_suite, ev_ckpt, ev_out;
    int ev_workers = 0;
    ev->add_option("--suite", ev_suite, "Suite config file")->required();
    ev->add_option("--ckpt", ev_ckpt, "Checkpoint path")->required();
    ev->add_option("--out", ev_out, "Output directory")->required();
    ev->add_option("--workers", ev_workers, "Parallel episode runners");
    ev->callback([&] {
        rc = report(dn_eval_suite(ev_suite.c_str(), ev_ckpt.c_str(), ev_out.c_str(),
                                  ev_workers));
        if (rc == 0) std::printf("reports written to %s\n", ev_out.c_str());
    });

    auto* rp = app.add_subcommand("replay", "Render an episode log to SVG");
    std::string rp_log, rp_svg;
    rp->add_option("--log", rp_log, "Episode log (JSON lines)")->required();
    rp->add_option("--svg", rp_svg, "Output SVG path")->required();
    rp->callback([&] {
        rc = report(dn_replay_svg(rp_log.c_str(), rp_svg.c_str()));
        if (rc == 0) std::printf("wrote %s\n", rp_svg.c_str());
    });

    auto* bl = app.add_subcommand("bench-latency", "Measure fast-tick wall time");
    std::string bl_ckpt, bl_cfg;
    int bl_ticks = 500;
    bl->add_option("--ckpt", bl_ckpt, "Checkpoint path")->required();
    bl->add_option("--config", bl_cfg, "Config file");
    bl->add_option("--ticks", bl_ticks, "Measured ticks");
    bl->callback([&] {
        double mean = 0.0, p95 = 0.0;
        rc = report(dn_bench_latency(opt(bl_cfg), bl_ckpt.c_str(), bl_ticks, 1, &mean, &p95));
        if (rc != 0) return;
        std::printf("cache on   mean %.3f ms  p95 %.3f ms\n", mean, p95);
        rc = report(dn_bench_latency(opt(bl_cfg), bl_ckpt.c_str(), bl_ticks, 0, &mean, &p95));
        if (rc != 0) return;
        std::printf("cache off  mean %.3f ms  p95 %.3f ms\n", mean, p95);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage
    }
    return rc;
}
