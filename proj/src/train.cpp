#include "duonav/train.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "duonav/error.hpp"
#include "duonav/memory_bank.hpp"

namespace duonav {

void TrainConfig::validate() const {
    if (stage != 1 && stage != 2)
        raise(ErrorCode::invalid_argument, "stage must be 1 or 2");
    if (steps < 1) raise(ErrorCode::invalid_argument, "steps must be >= 1");
    if (batch < 1) raise(ErrorCode::invalid_argument, "batch must be >= 1");
    if (lr <= 0.0) raise(ErrorCode::invalid_argument, "lr must be positive");
    if (stage1_mix < 0.0 || stage1_mix > 1.0)
        raise(ErrorCode::invalid_argument, "stage1_mix must lie in [0, 1]");
    if (context_frames < 1)
        raise(ErrorCode::invalid_argument, "context_frames must be >= 1");
}

TrainReport train(Policy& policy, const Dataset& data, const TrainConfig& cfg) {
    cfg.validate();
    if (data.records.empty()) raise(ErrorCode::invalid_argument, "dataset is empty");
    if (static_cast<int>(data.horizon) != policy.cfg.denoiser.horizon)
        raise(ErrorCode::invalid_argument, "dataset horizon mismatch");
    if (static_cast<int>(data.feature_dim) != policy.cfg.encoder.feature_dim)
        raise(ErrorCode::invalid_argument, "dataset feature_dim mismatch");

    // Record indices grouped per episode, plus each record's position inside
    // its episode, so a training context replays the deployment-time history
    // sampling over the episode prefix.
    std::unordered_map<uint32_t, std::vector<size_t>> episodes;
    std::vector<size_t> pos_in_episode(data.records.size());
    for (size_t i = 0; i < data.records.size(); ++i) {
        auto& v = episodes[data.records[i].episode_id];
        pos_in_episode[i] = v.size();
        v.push_back(i);
    }

    if (cfg.stage == 2) policy.bounds = data.compute_bounds();

    Rng rng(cfg.seed);
    nn::Sgd opt{cfg.lr, cfg.momentum, cfg.clip};
    auto reg = policy.all_params();

    TrainReport rep;
    std::vector<double> snapshot;
    auto take_snapshot = [&] {
        snapshot.clear();
        for (auto* p : reg.items)
            snapshot.insert(snapshot.end(), p->value.a.begin(), p->value.a.end());
    };
    auto restore_snapshot = [&] {
        size_t off = 0;
        for (auto* p : reg.items) {
            std::copy(snapshot.begin() + off, snapshot.begin() + off + p->value.size(),
                      p->value.a.begin());
            off += p->value.size();
        }
    };

    std::ofstream csv;
    if (!cfg.loss_csv.empty()) {
        csv.open(cfg.loss_csv);
        if (!csv) raise(ErrorCode::io, "cannot open loss csv: " + cfg.loss_csv);
        csv << "step,loss\n";
    }

    auto build_context = [&](size_t idx) {
        const auto& r = data.records[idx];
        const auto& ep = episodes[r.episode_id];
        auto keep = fast_context_indices(pos_in_episode[idx] + 1, cfg.context_frames);
        ContextInput in;
        in.frames.reserve(keep.size());
        for (size_t ki : keep) {
            const auto& rec = data.records[ep[ki]];
            in.frames.push_back({rec.features, static_cast<int>(rec.step_index)});
        }
        in.instruction.assign(r.instruction.begin(), r.instruction.end());
        if (r.has_coord) in.coord = r.coord;
        return in;
    };

    auto sample_step = [&](bool discrete) {
        size_t idx = static_cast<size_t>(
            rng.uniform_int(0, static_cast<int>(data.records.size()) - 1));
        const auto& r = data.records[idx];
        ContextInput in = build_context(idx);
        nn::Mat ctx = policy.encoder.encode(in, false);
        if (discrete) {
            std::vector<ChunkAction> labels;
            labels.reserve(r.chunk.size());
            for (uint8_t c : r.chunk) labels.push_back(static_cast<ChunkAction>(c));
            nn::Mat dlogits;
            double loss = chunk_loss(policy.chunk.logits(ctx), labels, &dlogits);
            policy.encoder.backward(policy.chunk.backward(dlogits));
            return loss;
        }
        WaypointSequence unit = normalize(r.waypoint_seq(), policy.bounds, &rep.clamped);
        nn::Mat w = seq_to_mat(unit);
        nn::Mat eps(w.rows, w.cols);
        for (auto& v : eps.a) v = rng.normal();
        double tau = rng.uniform(0.0, 1.0);
        nn::Mat pred = policy.denoiser.forward(noise_sequence(w, eps, tau), tau, ctx);
        nn::Mat dpred;
        double loss = residual_loss(pred, w, eps, &dpred);
        policy.encoder.backward(policy.denoiser.backward(dpred));
        return loss;
    };

    int discrete_n =
        cfg.stage == 1 ? cfg.batch
                       : static_cast<int>(std::lround(cfg.stage1_mix * cfg.batch));
    take_snapshot();
    for (int step = 0; step < cfg.steps; ++step) {
        double total = 0.0;
        bool bad = false;
        try {
            for (int b = 0; b < cfg.batch; ++b)
                total += sample_step(b >= cfg.batch - discrete_n);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::divergence) throw;
            bad = true;
        }
        double mean = total / cfg.batch;
        if (bad || !std::isfinite(mean)) {
            restore_snapshot();  // params revert to the last finite state
            rep.diverged = true;
            break;
        }
        opt.step(reg, cfg.batch);
        policy.encoder.bump_version();
        take_snapshot();
        rep.losses.push_back(mean);
        if (csv.is_open()) csv << step << "," << mean << "\n";
    }
    if (!rep.losses.empty()) rep.final_loss = rep.losses.back();

    if (cfg.stage == 1) {
        size_t n_eval = std::min<size_t>(data.records.size(), 2000);
        size_t correct = 0, total_pos = 0;
        for (size_t i = 0; i < n_eval; ++i) {
            auto pred = policy.predict_chunk(build_context(i), false);
            for (size_t h = 0; h < pred.size(); ++h) {
                if (static_cast<uint8_t>(pred[h]) == data.records[i].chunk[h]) ++correct;
                ++total_pos;
            }
        }
        rep.chunk_accuracy =
            total_pos ? static_cast<double>(correct) / total_pos : 0.0;
    }
    return rep;
}

}  // namespace duonav
