#ifndef DUONAV_C_H
#define DUONAV_C_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* C surface of the navigation library. Functions return 0 on success, 1 on
 * usage errors (bad arguments, malformed input files), 2 on runtime
 * failures; handle- and string-returning calls return NULL on failure.
 * dn_last_error() describes the most recent failure on the calling thread.
 * Strings returned by dn_* calls are heap-allocated; release them with
 * dn_string_free. */

const char* dn_last_error(void);
void dn_string_free(char* s);

typedef struct dn_world dn_world;

/* config_path may be NULL anywhere below; defaults are used then. */
dn_world* dn_world_generate(uint64_t seed, const char* config_path);
dn_world* dn_world_from_json(const char* json_text);
char* dn_world_to_json(const dn_world* w);
char* dn_world_ascii(const dn_world* w);
int dn_world_save(const dn_world* w, const char* path);
dn_world* dn_world_load(const char* path);
void dn_world_free(dn_world* w);

/* Expert demonstration corpus; jsonl_path (optional) additionally exports a
 * human-readable dump. */
int dn_gen_dataset(const char* config_path, uint64_t seed, int point_n, int object_n,
                   int instruct_n, int frontier_n, int worlds, const char* out_path,
                   const char* jsonl_path);

/* Trains stage 1 (discrete head) or stage 2 (flow matching). ckpt_in NULL
 * starts from fresh weights; steps/batch/lr <= 0 pick stage defaults.
 * final_loss_out may be NULL. */
int dn_train(const char* dataset_path, const char* config_path, int stage, int steps,
             int batch, double lr, uint64_t seed, const char* ckpt_in,
             const char* ckpt_out, const char* loss_csv, double* final_loss_out);

/* Runs the benchmark suite described by the config file and writes
 * report.csv / report.json (+ replay logs) under out_dir. workers_override
 * > 0 replaces the configured worker count. */
int dn_eval_suite(const char* config_path, const char* ckpt_path, const char* out_dir,
                  int workers_override);

/* Renders a JSON-lines episode log to an SVG file. */
int dn_replay_svg(const char* log_path, const char* svg_path);

/* Fast-tick wall time over `ticks` ticks after warm-up. */
int dn_bench_latency(const char* config_path, const char* ckpt_path, int ticks,
                     int use_cache, double* mean_ms, double* p95_ms);

#ifdef __cplusplus
}
#endif

#endif /* DUONAV_C_H */
