#pragma once

#include <cstdint>
#include <string>

#include "weld/mlp.hpp"
#include "weld/pca.hpp"

namespace weld {

// Shared container for persisted networks and PCA models:
// magic "WELDNET1", u32 little-endian JSON header length, UTF-8 JSON header,
// then raw little-endian float64 payload for all arrays in declaration order
// (per layer: weights row-major then bias; PCA: mean, components, eigenvalues).
struct CheckpointMeta {
    std::string kind;   // "mlp" or "pca"
    std::string role;   // encoder / decoder / propagator / transcoder / hdp / time-input
    int window = -1;    // window index, -1 when not window-scoped
    std::uint64_t seed = 0;
    std::string stage;  // training stage that produced the parameters
};

void save_mlp_checkpoint(const std::string& path, const MlpNet& net, const CheckpointMeta& meta);
MlpNet load_mlp_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

void save_pca_checkpoint(const std::string& path, const PcaModel& model,
                         const CheckpointMeta& meta);
PcaModel load_pca_checkpoint(const std::string& path, CheckpointMeta* meta = nullptr);

// Header-only read, e.g. to dispatch on kind.
CheckpointMeta read_checkpoint_meta(const std::string& path);

}  // namespace weld
