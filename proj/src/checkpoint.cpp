#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "duonav/binio.hpp"
#include "duonav/policy.hpp"
#include "duonav/vocab.hpp"

namespace duonav {

namespace {
constexpr char kMagic[5] = "DNCK";
constexpr uint32_t kVersion = 1;
}  // namespace

void save_checkpoint(const std::string& path, Policy& policy) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorCode::io, "cannot open checkpoint for writing: " + path);
    os.write(kMagic, 4);
    binio::write_u32(os, kVersion);

    const auto& pc = policy.cfg;
    binio::write_u32(os, static_cast<uint32_t>(pc.encoder.feature_dim));
    binio::write_u32(os, static_cast<uint32_t>(pc.encoder.model_dim));
    binio::write_u32(os, static_cast<uint32_t>(pc.encoder.frame_hidden));
    binio::write_u32(os, static_cast<uint32_t>(pc.encoder.coord_hidden));
    binio::write_u32(os, static_cast<uint32_t>(pc.encoder.vocab_size));
    binio::write_u32(os, static_cast<uint32_t>(pc.denoiser.heads));
    binio::write_u32(os, static_cast<uint32_t>(pc.denoiser.blocks));
    binio::write_u32(os, static_cast<uint32_t>(pc.denoiser.horizon));
    binio::write_u32(os, static_cast<uint32_t>(pc.denoiser.time_dim));
    binio::write_u32(os, static_cast<uint32_t>(pc.denoiser.ff_hidden));
    binio::write_u32(os, static_cast<uint32_t>(pc.flow.euler_steps));
    binio::write_u32(os, pc.flow.additive_update ? 1u : 0u);
    for (int d = 0; d < kWaypointDims; ++d) binio::write_f64(os, policy.bounds.min[d]);
    for (int d = 0; d < kWaypointDims; ++d) binio::write_f64(os, policy.bounds.max[d]);

    auto reg = policy.all_params();
    binio::write_u32(os, static_cast<uint32_t>(reg.items.size()));
    nlohmann::ordered_json tensors = nlohmann::json::array();
    for (auto* p : reg.items) {
        binio::write_u32(os, static_cast<uint32_t>(p->name.size()));
        os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        binio::write_u32(os, static_cast<uint32_t>(p->value.rows));
        binio::write_u32(os, static_cast<uint32_t>(p->value.cols));
        for (double v : p->value.a) binio::write_pod(os, static_cast<float>(v));
        tensors.push_back({{"name", p->name},
                           {"rows", p->value.rows},
                           {"cols", p->value.cols}});
    }
    if (!os) raise(ErrorCode::io, "checkpoint write failed: " + path);
    os.close();

    nlohmann::ordered_json manifest;
    manifest["format"] = "duonav-checkpoint";
    manifest["version"] = kVersion;
    manifest["config"] = {{"feature_dim", pc.encoder.feature_dim},
                          {"model_dim", pc.encoder.model_dim},
                          {"frame_hidden", pc.encoder.frame_hidden},
                          {"coord_hidden", pc.encoder.coord_hidden},
                          {"vocab_size", pc.encoder.vocab_size},
                          {"heads", pc.denoiser.heads},
                          {"blocks", pc.denoiser.blocks},
                          {"horizon", pc.denoiser.horizon},
                          {"time_dim", pc.denoiser.time_dim},
                          {"ff_hidden", pc.denoiser.ff_hidden},
                          {"euler_steps", pc.flow.euler_steps},
                          {"additive_update", pc.flow.additive_update}};
    manifest["bounds"] = {
        {"min", std::vector<double>(policy.bounds.min.begin(), policy.bounds.min.end())},
        {"max", std::vector<double>(policy.bounds.max.begin(), policy.bounds.max.end())}};
    std::vector<std::string> words;
    for (int i = 0; i < Vocab::size(); ++i) words.push_back(Vocab::word(i));
    manifest["vocab"] = words;
    manifest["tensors"] = tensors;
    std::ofstream ms(path + ".json");
    if (!ms) raise(ErrorCode::io, "cannot open manifest for writing: " + path + ".json");
    ms << manifest.dump(2) << "\n";
    if (!ms) raise(ErrorCode::io, "manifest write failed");
}

std::unique_ptr<Policy> load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(ErrorCode::io, "cannot open checkpoint: " + path);
    binio::expect_magic(is, kMagic, "checkpoint");
    uint32_t version = binio::read_u32(is);
    if (version != kVersion) raise(ErrorCode::parse, "unsupported checkpoint version");

    PolicyConfig pc;
    pc.encoder.feature_dim = static_cast<int>(binio::read_u32(is));
    pc.encoder.model_dim = static_cast<int>(binio::read_u32(is));
    pc.encoder.frame_hidden = static_cast<int>(binio::read_u32(is));
    pc.encoder.coord_hidden = static_cast<int>(binio::read_u32(is));
    pc.encoder.vocab_size = static_cast<int>(binio::read_u32(is));
    pc.denoiser.model_dim = pc.encoder.model_dim;
    pc.denoiser.heads = static_cast<int>(binio::read_u32(is));
    pc.denoiser.blocks = static_cast<int>(binio::read_u32(is));
    pc.denoiser.horizon = static_cast<int>(binio::read_u32(is));
    pc.denoiser.time_dim = static_cast<int>(binio::read_u32(is));
    pc.denoiser.ff_hidden = static_cast<int>(binio::read_u32(is));
    pc.flow.euler_steps = static_cast<int>(binio::read_u32(is));
    pc.flow.additive_update = binio::read_u32(is) != 0;
    pc.flow.horizon = pc.denoiser.horizon;

    auto policy = std::make_unique<Policy>(pc, 0);
    for (int d = 0; d < kWaypointDims; ++d) policy->bounds.min[d] = binio::read_f64(is);
    for (int d = 0; d < kWaypointDims; ++d) policy->bounds.max[d] = binio::read_f64(is);
    policy->bounds.validate();

    auto reg = policy->all_params();
    std::unordered_map<std::string, nn::Param*> by_name;
    for (auto* p : reg.items) by_name[p->name] = p;

    uint32_t count = binio::read_u32(is);
    if (count != reg.items.size())
        raise(ErrorCode::parse, "checkpoint tensor count mismatch");
    for (uint32_t t = 0; t < count; ++t) {
        uint32_t len = binio::read_u32(is);
        if (len > 256) raise(ErrorCode::parse, "tensor name too long");
        std::string name(len, '\0');
        is.read(name.data(), len);
        uint32_t rows = binio::read_u32(is);
        uint32_t cols = binio::read_u32(is);
        auto it = by_name.find(name);
        if (it == by_name.end())
            raise(ErrorCode::parse, "unknown tensor in checkpoint: " + name);
        nn::Param* p = it->second;
        if (p->value.rows != static_cast<int>(rows) ||
            p->value.cols != static_cast<int>(cols))
            raise(ErrorCode::parse, "tensor shape mismatch: " + name);
        for (auto& v : p->value.a) v = static_cast<double>(binio::read_pod<float>(is));
    }
    return policy;
}

}  // namespace duonav
