#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "duonav/nn.hpp"
#include "duonav/rng.hpp"
#include "duonav/waypoint.hpp"

namespace duonav {

struct FlowConfig {
    int euler_steps = 5;
    int horizon = 5;
    // Flips the Euler update to w += (1/S)*pi. The self-consistent direction
    // for a residual trained toward (eps - w) is subtraction; the additive
    // form is kept behind this flag for comparison runs.
    bool additive_update = false;

    void validate() const;
};

struct DenoiserConfig {
    int model_dim = 64;
    int heads = 4;
    int blocks = 2;
    int horizon = 5;
    int time_dim = 16;
    int ff_hidden = 128;

    void validate() const;
};

// Transformer over the H noised waypoint tokens: self-attention between
// slots, cross-attention into the context tokens, post-norm residuals.
// Trained to output the residual (eps - w).
class Denoiser {
public:
    Denoiser(const DenoiserConfig& cfg, uint64_t seed);

    nn::Mat forward(const nn::Mat& noisy, double tau, const nn::Mat& ctx);
    // Accumulates parameter gradients; returns d(context).
    nn::Mat backward(const nn::Mat& dout);

    nn::ParamRegistry& params() { return reg_; }
    const DenoiserConfig& config() const { return cfg_; }

private:
    struct Block {
        nn::MultiHeadAttention self_attn, cross_attn;
        nn::LayerNorm ln1, ln2, ln3;
        nn::FeedForward ff;
    };

    DenoiserConfig cfg_;
    nn::ParamRegistry reg_;
    nn::Linear in_proj_, out_proj_;
    std::vector<Block> blocks_;
    int ctx_rows_ = 0;
};

// Denoising callable, injectable so sampling can be exercised against
// closed-form oracles.
using DenoiserFn = std::function<nn::Mat(const nn::Mat& noisy, double tau)>;

nn::Mat seq_to_mat(const WaypointSequence& seq);
WaypointSequence mat_to_seq(const nn::Mat& m);

// w_tau = tau*w + (1-tau)*eps, all in normalized unit space.
nn::Mat noise_sequence(const nn::Mat& w, const nn::Mat& eps, double tau);

// MSE against the residual target (eps - w); optionally emits d(pred).
double residual_loss(const nn::Mat& pred, const nn::Mat& w, const nn::Mat& eps,
                     nn::Mat* dpred);

// Euler integration from Gaussian noise in unit space.
nn::Mat sample_waypoints_unit(const DenoiserFn& fn, const FlowConfig& cfg, Rng& rng);
WaypointSequence sample_waypoints(const DenoiserFn& fn, const FlowConfig& cfg,
                                  const NormalizationBounds& bounds, Rng& rng);

enum class ChunkAction : int { Forward = 0, Left = 1, Right = 2, Stop = 3 };
inline constexpr int kChunkActions = 4;
const char* chunk_action_name(ChunkAction a);

// Discrete head over mean-pooled context tokens; the stage-one target and
// the "chunk-only" ablation baseline.
class ChunkHead {
public:
    ChunkHead(int model_dim, int horizon, uint64_t seed);

    nn::Mat logits(const nn::Mat& ctx);          // (H, 4)
    nn::Mat backward(const nn::Mat& dlogits);    // returns d(context)
    std::vector<ChunkAction> predict(const nn::Mat& ctx);

    nn::ParamRegistry& params() { return reg_; }
    int horizon() const { return horizon_; }

private:
    int dim_;
    int horizon_;
    nn::ParamRegistry reg_;
    nn::Linear fc_;
    int ctx_rows_ = 0;
};

// Mean cross-entropy over chunk positions; optionally emits d(logits).
double chunk_loss(const nn::Mat& logits, const std::vector<ChunkAction>& labels,
                  nn::Mat* dlogits);

}  // namespace duonav
