#pragma once

#include <string>
#include <vector>

#include "duonav/dataset.hpp"
#include "duonav/policy.hpp"

namespace duonav {

struct TrainConfig {
    int stage = 1;            // 1: discrete chunk head; 2: flow matching
    int steps = 2000;         // optimizer steps
    int batch = 16;
    double lr = 0.05;
    double momentum = 0.9;
    double clip = 5.0;
    double stage1_mix = 0.2;  // discrete fraction inside stage-2 batches
    int context_frames = 20;  // history slots per training context
    uint64_t seed = 1;
    std::string loss_csv;     // per-step loss curve, empty = skip

    void validate() const;
};

struct TrainReport {
    std::vector<double> losses;    // mean batch loss per step
    double final_loss = 0.0;
    double chunk_accuracy = -1.0;  // stage 1: post-hoc training accuracy
    size_t clamped = 0;            // label values clipped by the bounds
    bool diverged = false;         // aborted; params hold last finite state
};

// Trains the policy in place. Stage 2 computes NormalizationBounds from the
// dataset and stores them on the policy.
TrainReport train(Policy& policy, const Dataset& data, const TrainConfig& cfg);

}  // namespace duonav
