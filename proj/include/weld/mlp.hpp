#pragma once

#include <cstdint>
#include <vector>

#include "weld/matrix.hpp"

namespace weld {

// Architecture of a ReLU feedforward network. Activation is always ReLU on
// the hidden layers; the output layer is affine.
struct MlpSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden_widths;
    std::size_t output_dim = 0;

    std::size_t layer_count() const { return hidden_widths.size() + 1; }
    void validate() const;
    bool operator==(const MlpSpec&) const = default;
};

// Weights and biases, layer ℓ stored as d_{ℓ-1}×d_ℓ so a batch row maps by
// right-multiplication: z = x·W + b.
struct MlpNet {
    MlpSpec spec;
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    std::size_t param_count() const;
};

struct MlpGrads {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;

    void init_like(const MlpNet& net);
    void zero();
};

// Per-layer pre-activations plus inputs, sufficient for the backward pass.
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre;   // affine outputs, one per layer
    std::vector<Matrix> post;  // relu(pre), hidden layers only
};

// Weights uniform on (−√(1/fan_in), √(1/fan_in)), biases zero. Deterministic
// per (spec, seed).
MlpNet mlp_init(const MlpSpec& spec, std::uint64_t seed);

// The exact-identity ReLU network of width 2·dim: first layer stacks [x; −x],
// interior layers pass both halves through, last layer takes the difference.
// Reproduces inputs bit-exactly.
MlpNet identity_mlp(std::size_t dim, std::size_t hidden_layers = 1);

// batch is B×input_dim; returns B×output_dim and fills the cache.
Matrix mlp_forward(const MlpNet& net, const Matrix& batch, ForwardCache& cache);

// Forward without keeping a cache (evaluation of a frozen net).
Matrix mlp_eval(const MlpNet& net, const Matrix& batch);

// Reverse-mode through the affine/ReLU chain. Accumulates parameter
// gradients into `grads` (+=) so several loss paths can share one buffer;
// returns dL/d(input). ReLU subgradient at 0 is 0.
Matrix mlp_backward(const MlpNet& net, const ForwardCache& cache, const Matrix& grad_output,
                    MlpGrads& grads);

// Displacement form used by propagators and transcoders: out = z + inner(z).
struct ResidualNet {
    MlpNet inner;  // input_dim == output_dim
};

ResidualNet residual_init(std::size_t dim, const std::vector<std::size_t>& hidden,
                          std::uint64_t seed);
Matrix residual_forward(const ResidualNet& rnet, const Matrix& z, ForwardCache& cache);
Matrix residual_eval(const ResidualNet& rnet, const Matrix& z);
// grad_input = grad_out · (I + J_inner)
Matrix residual_backward(const ResidualNet& rnet, const ForwardCache& cache,
                         const Matrix& grad_output, MlpGrads& grads);

}  // namespace weld
