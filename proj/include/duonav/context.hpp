#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "duonav/geometry.hpp"
#include "duonav/nn.hpp"

namespace duonav {

struct EncoderConfig {
    int feature_dim = 0;
    int model_dim = 64;
    int frame_hidden = 128;
    int coord_hidden = 32;
    int vocab_size = 0;

    void validate() const;
};

struct FrameInput {
    std::vector<float> features;
    int step_index = 0;
};

// Goal position in the current agent frame: (x, y, sin, cos) where the
// angle is the bearing toward the target. Present for point goals and for
// subgoal positions handed down by the deliberative layer.
using CoordGoal = std::array<double, 4>;

CoordGoal coord_goal_from(const Pose2D& agent, const Vec2& target);

struct ContextInput {
    std::vector<FrameInput> frames;  // chronological order
    std::vector<int> instruction;    // token ids
    std::optional<CoordGoal> coord;
};

// Builds the context token matrix consumed by the policy: row 0 is the
// pooled instruction token, rows 1..n are frame tokens, and an optional
// final row encodes the goal coordinate. Frame tokens depend only on the
// captured features, so they are cached across ticks; slot positions are
// added after the cache, which keeps the cached value reusable while still
// making token order observable.
class ContextEncoder {
public:
    ContextEncoder(const EncoderConfig& cfg, uint64_t seed);

    // use_cache = true reuses frame embeddings keyed by (step_index,
    // params_version); bitwise identical to the uncached path. backward()
    // is only valid after an uncached encode.
    nn::Mat encode(const ContextInput& in, bool use_cache);
    void backward(const nn::Mat& dctx);

    nn::ParamRegistry& params() { return reg_; }
    const EncoderConfig& config() const { return cfg_; }

    void bump_version() { ++params_version_; }
    uint64_t params_version() const { return params_version_; }
    void reset_cache();

    uint64_t cache_hits() const { return cache_hits_; }
    uint64_t cache_misses() const { return cache_misses_; }
    uint64_t frame_mlp_rows() const { return frame_mlp_rows_; }

private:
    EncoderConfig cfg_;
    nn::ParamRegistry reg_;
    nn::Linear frame_fc1_, frame_fc2_;
    nn::Linear coord_fc1_, coord_fc2_;
    nn::Param embed_;  // (vocab_size, model_dim)

    uint64_t params_version_ = 0;
    struct CacheEntry {
        uint64_t version;
        std::vector<double> token;
    };
    std::unordered_map<int, CacheEntry> cache_;
    uint64_t cache_hits_ = 0;
    uint64_t cache_misses_ = 0;
    uint64_t frame_mlp_rows_ = 0;

    // backward caches
    std::vector<int> last_tokens_;
    nn::Mat frame_pre_;
    nn::Mat coord_pre_;
    int last_frames_ = 0;
    bool last_coord_ = false;
};

}  // namespace duonav
