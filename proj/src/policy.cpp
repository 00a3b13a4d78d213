#include "duonav/policy.hpp"

#include "duonav/error.hpp"

namespace duonav {

void PolicyConfig::validate() const {
    encoder.validate();
    denoiser.validate();
    flow.validate();
    if (flow.horizon != denoiser.horizon)
        raise(ErrorCode::invalid_argument, "flow horizon must match denoiser horizon");
    if (encoder.model_dim != denoiser.model_dim)
        raise(ErrorCode::invalid_argument, "encoder and denoiser widths must match");
}

Policy::Policy(const PolicyConfig& c, uint64_t seed)
    : cfg(c),
      encoder(c.encoder, derive_seed(seed, 10)),
      denoiser(c.denoiser, derive_seed(seed, 11)),
      chunk(c.encoder.model_dim, c.denoiser.horizon, derive_seed(seed, 12)) {
    cfg.validate();
}

nn::ParamRegistry Policy::all_params() {
    nn::ParamRegistry reg;
    for (auto* p : encoder.params().items) reg.add(*p);
    for (auto* p : denoiser.params().items) reg.add(*p);
    for (auto* p : chunk.params().items) reg.add(*p);
    return reg;
}

WaypointSequence Policy::sample(const ContextInput& in, Rng& rng, bool use_cache) {
    nn::Mat ctx = encoder.encode(in, use_cache);
    DenoiserFn fn = [&](const nn::Mat& noisy, double tau) {
        return denoiser.forward(noisy, tau, ctx);
    };
    return sample_waypoints(fn, cfg.flow, bounds, rng);
}

std::vector<ChunkAction> Policy::predict_chunk(const ContextInput& in, bool use_cache) {
    nn::Mat ctx = encoder.encode(in, use_cache);
    return chunk.predict(ctx);
}

std::unique_ptr<Policy> clone_policy(Policy& src) {
    auto dst = std::make_unique<Policy>(src.cfg, 0);
    dst->bounds = src.bounds;
    auto from = src.all_params();
    auto to = dst->all_params();
    if (from.items.size() != to.items.size())
        raise(ErrorCode::runtime, "clone_policy: registry mismatch");
    for (size_t i = 0; i < from.items.size(); ++i)
        to.items[i]->value = from.items[i]->value;
    return dst;
}

}  // namespace duonav
