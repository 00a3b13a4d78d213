#include "duonav/denoiser.hpp"

#include <cmath>

#include "duonav/error.hpp"

namespace duonav {

using nn::Mat;

namespace {
constexpr double kTimeScale = 50.0;  // maps tau in [0,1] onto embedding positions
}

void FlowConfig::validate() const {
    if (euler_steps < 1) raise(ErrorCode::invalid_argument, "euler_steps must be >= 1");
    if (horizon < 1) raise(ErrorCode::invalid_argument, "horizon must be >= 1");
}

void DenoiserConfig::validate() const {
    if (model_dim <= 0 || heads <= 0 || blocks <= 0 || horizon <= 0 || time_dim <= 0 ||
        ff_hidden <= 0)
        raise(ErrorCode::invalid_argument, "DenoiserConfig fields must be positive");
    if (model_dim % heads != 0)
        raise(ErrorCode::invalid_argument, "model_dim must be divisible by heads");
}

Denoiser::Denoiser(const DenoiserConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(seed);
    in_proj_.init("den.in", kWaypointDims + cfg_.time_dim, cfg_.model_dim, rng, reg_);
    blocks_.resize(cfg_.blocks);
    for (int b = 0; b < cfg_.blocks; ++b) {
        auto& blk = blocks_[b];
        std::string p = "den.b" + std::to_string(b);
        blk.self_attn.init(p + ".self", cfg_.model_dim, cfg_.heads, rng, reg_);
        blk.ln1.init(p + ".ln1", cfg_.model_dim, reg_);
        blk.cross_attn.init(p + ".cross", cfg_.model_dim, cfg_.heads, rng, reg_);
        blk.ln2.init(p + ".ln2", cfg_.model_dim, reg_);
        blk.ff.init(p + ".ff", cfg_.model_dim, cfg_.ff_hidden, rng, reg_);
        blk.ln3.init(p + ".ln3", cfg_.model_dim, reg_);
    }
    out_proj_.init("den.out", cfg_.model_dim, kWaypointDims, rng, reg_);
}

Mat Denoiser::forward(const Mat& noisy, double tau, const Mat& ctx) {
    if (noisy.rows != cfg_.horizon || noisy.cols != kWaypointDims)
        raise(ErrorCode::invalid_argument, "noisy shape mismatch");
    if (ctx.cols != cfg_.model_dim)
        raise(ErrorCode::invalid_argument, "context width mismatch");
    ctx_rows_ = ctx.rows;

    std::vector<double> temb(cfg_.time_dim);
    nn::sinusoidal(tau * kTimeScale, cfg_.time_dim, temb.data());
    Mat in(cfg_.horizon, kWaypointDims + cfg_.time_dim);
    for (int i = 0; i < cfg_.horizon; ++i) {
        for (int d = 0; d < kWaypointDims; ++d) in(i, d) = noisy(i, d);
        for (int t = 0; t < cfg_.time_dim; ++t) in(i, kWaypointDims + t) = temb[t];
    }
    Mat x = in_proj_.forward(in);
    std::vector<double> pos(cfg_.model_dim);
    for (int i = 0; i < cfg_.horizon; ++i) {
        nn::sinusoidal(static_cast<double>(i), cfg_.model_dim, pos.data());
        for (int j = 0; j < cfg_.model_dim; ++j) x(i, j) += pos[j];
    }
    for (auto& blk : blocks_) {
        Mat a = blk.self_attn.forward(x, x);
        nn::add_inplace(a, x);
        x = blk.ln1.forward(a);
        Mat c = blk.cross_attn.forward(x, ctx);
        nn::add_inplace(c, x);
        x = blk.ln2.forward(c);
        Mat f = blk.ff.forward(x);
        nn::add_inplace(f, x);
        x = blk.ln3.forward(f);
    }
    return out_proj_.forward(x);
}

Mat Denoiser::backward(const Mat& dout) {
    Mat dx = out_proj_.backward(dout);
    Mat dctx(ctx_rows_, cfg_.model_dim);
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
        auto& blk = *it;
        Mat du3 = blk.ln3.backward(dx);
        Mat dx2 = blk.ff.backward(du3);
        nn::add_inplace(dx2, du3);
        Mat du2 = blk.ln2.backward(dx2);
        Mat dx1 = blk.cross_attn.backward(du2, dctx);
        nn::add_inplace(dx1, du2);
        Mat du1 = blk.ln1.backward(dx1);
        Mat dkv(du1.rows, du1.cols);
        Mat dq = blk.self_attn.backward(du1, dkv);
        nn::add_inplace(dq, dkv);
        nn::add_inplace(dq, du1);
        dx = std::move(dq);
    }
    in_proj_.backward(dx);  // gradient w.r.t. raw tokens is unused
    return dctx;
}

Mat seq_to_mat(const WaypointSequence& seq) {
    Mat m(seq.horizon(), kWaypointDims);
    for (int i = 0; i < seq.horizon(); ++i)
        for (int d = 0; d < kWaypointDims; ++d) m(i, d) = seq[i].dim(d);
    return m;
}

WaypointSequence mat_to_seq(const Mat& m) {
    if (m.cols != kWaypointDims)
        raise(ErrorCode::invalid_argument, "mat_to_seq expects 5 columns");
    WaypointSequence seq(m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int d = 0; d < kWaypointDims; ++d) seq[i].set_dim(d, m(i, d));
    return seq;
}

Mat noise_sequence(const Mat& w, const Mat& eps, double tau) {
    if (tau < 0.0 || tau > 1.0)
        raise(ErrorCode::invalid_argument, "tau must lie in [0, 1]");
    if (w.rows != eps.rows || w.cols != eps.cols)
        raise(ErrorCode::invalid_argument, "noise shape mismatch");
    Mat out(w.rows, w.cols);
    for (size_t i = 0; i < w.a.size(); ++i)
        out.a[i] = tau * w.a[i] + (1.0 - tau) * eps.a[i];
    return out;
}

double residual_loss(const Mat& pred, const Mat& w, const Mat& eps, Mat* dpred) {
    if (pred.rows != w.rows || pred.cols != w.cols || eps.rows != w.rows ||
        eps.cols != w.cols)
        raise(ErrorCode::invalid_argument, "residual_loss shape mismatch");
    double n = static_cast<double>(pred.a.size());
    double loss = 0.0;
    if (dpred) *dpred = Mat(pred.rows, pred.cols);
    for (size_t i = 0; i < pred.a.size(); ++i) {
        double r = pred.a[i] - (eps.a[i] - w.a[i]);
        loss += r * r;
        if (dpred) dpred->a[i] = 2.0 * r / n;
    }
    loss /= n;
    if (!std::isfinite(loss)) raise(ErrorCode::divergence, "flow loss is non-finite");
    return loss;
}

Mat sample_waypoints_unit(const DenoiserFn& fn, const FlowConfig& cfg, Rng& rng) {
    cfg.validate();
    Mat w(cfg.horizon, kWaypointDims);
    for (auto& v : w.a) v = rng.normal();
    double inv_s = 1.0 / cfg.euler_steps;
    for (int s = 0; s < cfg.euler_steps; ++s) {
        double tau = static_cast<double>(s) * inv_s;
        Mat pi = fn(w, tau);
        if (pi.rows != w.rows || pi.cols != w.cols)
            raise(ErrorCode::invalid_argument, "denoiser output shape mismatch");
        double dir = cfg.additive_update ? 1.0 : -1.0;
        for (size_t i = 0; i < w.a.size(); ++i) {
            w.a[i] += dir * inv_s * pi.a[i];
            if (!std::isfinite(w.a[i]))
                raise(ErrorCode::divergence, "sampling produced non-finite value");
        }
    }
    return w;
}

WaypointSequence sample_waypoints(const DenoiserFn& fn, const FlowConfig& cfg,
                                  const NormalizationBounds& bounds, Rng& rng) {
    bounds.validate();
    Mat w = sample_waypoints_unit(fn, cfg, rng);
    WaypointSequence out(cfg.horizon);
    for (int i = 0; i < cfg.horizon; ++i) {
        double v[kWaypointDims];
        for (int d = 0; d < kWaypointDims; ++d) v[d] = bounds.from_unit(d, w(i, d));
        double norm = std::sqrt(v[2] * v[2] + v[3] * v[3]);
        if (norm < 1e-12)
            raise(ErrorCode::degenerate_input, "sampled heading vector is degenerate");
        out[i] = {v[0], v[1], v[2] / norm, v[3] / norm, v[4] >= 0.5 ? 1.0 : 0.0};
    }
    return out;
}

const char* chunk_action_name(ChunkAction a) {
    switch (a) {
        case ChunkAction::Forward: return "FORWARD";
        case ChunkAction::Left: return "LEFT";
        case ChunkAction::Right: return "RIGHT";
        default: return "STOP";
    }
}

ChunkHead::ChunkHead(int model_dim, int horizon, uint64_t seed)
    : dim_(model_dim), horizon_(horizon) {
    if (model_dim <= 0 || horizon <= 0)
        raise(ErrorCode::invalid_argument, "ChunkHead dims must be positive");
    Rng rng(seed);
    fc_.init("chunk.fc", model_dim, horizon * kChunkActions, rng, reg_);
}

Mat ChunkHead::logits(const Mat& ctx) {
    if (ctx.cols != dim_ || ctx.rows == 0)
        raise(ErrorCode::invalid_argument, "ChunkHead context shape mismatch");
    ctx_rows_ = ctx.rows;
    Mat pooled(1, dim_);
    double inv = 1.0 / ctx.rows;
    for (int i = 0; i < ctx.rows; ++i)
        for (int j = 0; j < dim_; ++j) pooled(0, j) += ctx(i, j) * inv;
    Mat flat = fc_.forward(pooled);
    Mat out(horizon_, kChunkActions);
    for (int h = 0; h < horizon_; ++h)
        for (int a = 0; a < kChunkActions; ++a) out(h, a) = flat(0, h * kChunkActions + a);
    return out;
}

Mat ChunkHead::backward(const Mat& dlogits) {
    Mat dflat(1, horizon_ * kChunkActions);
    for (int h = 0; h < horizon_; ++h)
        for (int a = 0; a < kChunkActions; ++a)
            dflat(0, h * kChunkActions + a) = dlogits(h, a);
    Mat dpooled = fc_.backward(dflat);
    Mat dctx(ctx_rows_, dim_);
    double inv = 1.0 / ctx_rows_;
    for (int i = 0; i < ctx_rows_; ++i)
        for (int j = 0; j < dim_; ++j) dctx(i, j) = dpooled(0, j) * inv;
    return dctx;
}

std::vector<ChunkAction> ChunkHead::predict(const Mat& ctx) {
    Mat lg = logits(ctx);
    std::vector<ChunkAction> out(horizon_);
    for (int h = 0; h < horizon_; ++h) {
        int best = 0;
        for (int a = 1; a < kChunkActions; ++a)
            if (lg(h, a) > lg(h, best)) best = a;  // ties keep the lower index
        out[h] = static_cast<ChunkAction>(best);
    }
    return out;
}

double chunk_loss(const Mat& logits, const std::vector<ChunkAction>& labels,
                  Mat* dlogits) {
    if (static_cast<int>(labels.size()) != logits.rows)
        raise(ErrorCode::invalid_argument, "chunk label count mismatch");
    if (dlogits) *dlogits = Mat(logits.rows, logits.cols);
    double loss = 0.0;
    for (int h = 0; h < logits.rows; ++h) {
        double mx = logits(h, 0);
        for (int a = 1; a < logits.cols; ++a) mx = std::max(mx, logits(h, a));
        double z = 0.0;
        for (int a = 0; a < logits.cols; ++a) z += std::exp(logits(h, a) - mx);
        int y = static_cast<int>(labels[h]);
        loss += -(logits(h, y) - mx - std::log(z));
        if (dlogits) {
            for (int a = 0; a < logits.cols; ++a) {
                double p = std::exp(logits(h, a) - mx) / z;
                (*dlogits)(h, a) = (p - (a == y ? 1.0 : 0.0)) / logits.rows;
            }
        }
    }
    loss /= logits.rows;
    if (!std::isfinite(loss)) raise(ErrorCode::divergence, "chunk loss is non-finite");
    return loss;
}

}  // namespace duonav
