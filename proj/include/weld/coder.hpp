#pragma once

#include <string>

#include "weld/mlp.hpp"
#include "weld/pca.hpp"

namespace weld {

enum class CoderKind { neural, pca };

std::string coder_kind_name(CoderKind k);
CoderKind parse_coder_kind(const std::string& name);

// Encoder/decoder pair shared by the neural and PCA reductions. encode/decode
// here are frozen evaluations; training touches the nets directly.
struct CoderPair {
    CoderKind kind = CoderKind::neural;
    MlpNet encoder;  // D → d, neural only
    MlpNet decoder;  // d → D, neural only
    PcaModel pca;    // pca only

    std::size_t latent_dim() const {
        return kind == CoderKind::neural ? encoder.spec.output_dim : pca.latent_dim();
    }
    std::size_t ambient_dim() const {
        return kind == CoderKind::neural ? encoder.spec.input_dim : pca.ambient_dim();
    }

    Matrix encode(const Matrix& x) const {
        return kind == CoderKind::neural ? mlp_eval(encoder, x) : pca_encode(pca, x);
    }
    Matrix decode(const Matrix& z) const {
        return kind == CoderKind::neural ? mlp_eval(decoder, z) : pca_decode(pca, z);
    }
};

}  // namespace weld
