#pragma once

#include <memory>
#include <string>

#include "duonav/context.hpp"
#include "duonav/denoiser.hpp"

namespace duonav {

struct PolicyConfig {
    EncoderConfig encoder;
    DenoiserConfig denoiser;
    FlowConfig flow;

    void validate() const;
};

// The trained fast system: context encoder, flow denoiser, discrete chunk
// head, and the label normalization bounds they were trained under.
struct Policy {
    PolicyConfig cfg;
    ContextEncoder encoder;
    Denoiser denoiser;
    ChunkHead chunk;
    NormalizationBounds bounds;

    Policy(const PolicyConfig& c, uint64_t seed);
    Policy(const Policy&) = delete;
    Policy& operator=(const Policy&) = delete;

    // Combined registry over encoder, denoiser, and chunk head.
    nn::ParamRegistry all_params();

    WaypointSequence sample(const ContextInput& in, Rng& rng, bool use_cache = true);
    std::vector<ChunkAction> predict_chunk(const ContextInput& in, bool use_cache = true);
};

void save_checkpoint(const std::string& path, Policy& policy);
std::unique_ptr<Policy> load_checkpoint(const std::string& path);

// Fresh instance carrying the same config, weights, and bounds; needed
// because sampling mutates internal caches, so parallel episode runners
// cannot share one Policy.
std::unique_ptr<Policy> clone_policy(Policy& src);

}  // namespace duonav
