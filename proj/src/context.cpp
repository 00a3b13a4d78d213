#include "duonav/context.hpp"

#include "duonav/error.hpp"

namespace duonav {

using nn::Mat;

namespace {
constexpr double kCoordScale = 0.1;  // meters -> roughly unit inputs
}

void EncoderConfig::validate() const {
    if (feature_dim <= 0) raise(ErrorCode::invalid_argument, "feature_dim must be > 0");
    if (model_dim <= 0) raise(ErrorCode::invalid_argument, "model_dim must be > 0");
    if (frame_hidden <= 0 || coord_hidden <= 0)
        raise(ErrorCode::invalid_argument, "hidden sizes must be > 0");
    if (vocab_size <= 0) raise(ErrorCode::invalid_argument, "vocab_size must be > 0");
}

CoordGoal coord_goal_from(const Pose2D& agent, const Vec2& target) {
    Vec2 rel = to_agent_frame(target, agent);
    double ang = std::atan2(rel.y, rel.x);
    return {rel.x, rel.y, std::sin(ang), std::cos(ang)};
}

ContextEncoder::ContextEncoder(const EncoderConfig& cfg, uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(seed);
    frame_fc1_.init("enc.frame.fc1", cfg_.feature_dim, cfg_.frame_hidden, rng, reg_);
    frame_fc2_.init("enc.frame.fc2", cfg_.frame_hidden, cfg_.model_dim, rng, reg_);
    coord_fc1_.init("enc.coord.fc1", 4, cfg_.coord_hidden, rng, reg_);
    coord_fc2_.init("enc.coord.fc2", cfg_.coord_hidden, cfg_.model_dim, rng, reg_);
    embed_.setup("enc.embed", cfg_.vocab_size, cfg_.model_dim);
    Rng erng(derive_seed(seed, 1));
    embed_.init_xavier(erng);
    reg_.add(embed_);
}

void ContextEncoder::reset_cache() {
    cache_.clear();
    cache_hits_ = 0;
    cache_misses_ = 0;
    frame_mlp_rows_ = 0;
}

Mat ContextEncoder::encode(const ContextInput& in, bool use_cache) {
    int n = static_cast<int>(in.frames.size());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(in.frames[i].features.size()) != cfg_.feature_dim)
            raise(ErrorCode::invalid_argument, "frame feature length mismatch");
    }
    for (int id : in.instruction) {
        if (id < 0 || id >= cfg_.vocab_size)
            raise(ErrorCode::invalid_argument, "instruction token out of vocab");
    }

    Mat base(n, cfg_.model_dim);
    if (use_cache) {
        for (int i = 0; i < n; ++i) {
            const auto& f = in.frames[i];
            auto it = cache_.find(f.step_index);
            if (it != cache_.end() && it->second.version == params_version_) {
                ++cache_hits_;
                std::copy(it->second.token.begin(), it->second.token.end(), base.row(i));
            } else {
                ++cache_misses_;
                ++frame_mlp_rows_;
                Mat x(1, cfg_.feature_dim);
                for (int j = 0; j < cfg_.feature_dim; ++j)
                    x(0, j) = static_cast<double>(f.features[j]);
                Mat pre = frame_fc1_.forward(x);
                Mat y = frame_fc2_.forward(nn::gelu_forward(pre));
                std::copy(y.row(0), y.row(0) + cfg_.model_dim, base.row(i));
                cache_[f.step_index] = {params_version_,
                                        std::vector<double>(y.row(0), y.row(0) + cfg_.model_dim)};
            }
        }
        last_frames_ = 0;  // backward unsupported on this path
    } else {
        Mat x(n, cfg_.feature_dim);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < cfg_.feature_dim; ++j)
                x(i, j) = static_cast<double>(in.frames[i].features[j]);
        frame_mlp_rows_ += static_cast<uint64_t>(n);
        frame_pre_ = frame_fc1_.forward(x);
        base = frame_fc2_.forward(nn::gelu_forward(frame_pre_));
        last_frames_ = n;
    }

    last_coord_ = in.coord.has_value();
    Mat coord_tok;
    if (in.coord) {
        Mat c(1, 4);
        c(0, 0) = (*in.coord)[0] * kCoordScale;
        c(0, 1) = (*in.coord)[1] * kCoordScale;
        c(0, 2) = (*in.coord)[2];
        c(0, 3) = (*in.coord)[3];
        coord_pre_ = coord_fc1_.forward(c);
        coord_tok = coord_fc2_.forward(nn::gelu_forward(coord_pre_));
    }

    int rows = n + 1 + (in.coord ? 1 : 0);
    Mat ctx(rows, cfg_.model_dim);
    last_tokens_ = in.instruction;
    if (!in.instruction.empty()) {
        double inv = 1.0 / static_cast<double>(in.instruction.size());
        for (int id : in.instruction)
            for (int j = 0; j < cfg_.model_dim; ++j)
                ctx(0, j) += embed_.value(id, j) * inv;
    }
    std::vector<double> pos(cfg_.model_dim);
    nn::sinusoidal(0.0, cfg_.model_dim, pos.data());
    for (int j = 0; j < cfg_.model_dim; ++j) ctx(0, j) += pos[j];

    for (int i = 0; i < n; ++i) {
        nn::sinusoidal(static_cast<double>(i + 1), cfg_.model_dim, pos.data());
        for (int j = 0; j < cfg_.model_dim; ++j)
            ctx(i + 1, j) = base(i, j) + pos[j];
    }
    if (in.coord) {
        nn::sinusoidal(static_cast<double>(n + 1), cfg_.model_dim, pos.data());
        for (int j = 0; j < cfg_.model_dim; ++j)
            ctx(n + 1, j) = coord_tok(0, j) + pos[j];
    }
    return ctx;
}

void ContextEncoder::backward(const Mat& dctx) {
    int expect = last_frames_ + 1 + (last_coord_ ? 1 : 0);
    if (dctx.rows != expect || dctx.cols != cfg_.model_dim)
        raise(ErrorCode::invalid_argument, "backward shape mismatch (cached encode?)");
    if (!last_tokens_.empty()) {
        double inv = 1.0 / static_cast<double>(last_tokens_.size());
        for (int id : last_tokens_)
            for (int j = 0; j < cfg_.model_dim; ++j)
                embed_.grad(id, j) += dctx(0, j) * inv;
    }
    if (last_frames_ > 0) {
        Mat dtok(last_frames_, cfg_.model_dim);
        for (int i = 0; i < last_frames_; ++i)
            for (int j = 0; j < cfg_.model_dim; ++j) dtok(i, j) = dctx(i + 1, j);
        Mat df = frame_fc2_.backward(dtok);
        frame_fc1_.backward(nn::gelu_backward(frame_pre_, df));
    }
    if (last_coord_) {
        Mat dc(1, cfg_.model_dim);
        for (int j = 0; j < cfg_.model_dim; ++j)
            dc(0, j) = dctx(last_frames_ + 1, j);
        Mat dh = coord_fc2_.backward(dc);
        coord_fc1_.backward(nn::gelu_backward(coord_pre_, dh));
    }
}

}  // namespace duonav
