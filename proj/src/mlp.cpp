#include "weld/mlp.hpp"

#include <cmath>
#include <string>

#include "weld/rng.hpp"

namespace weld {

void MlpSpec::validate() const {
    if (input_dim == 0 || output_dim == 0)
        throw DataError("MlpSpec: zero input/output dimension");
    for (std::size_t w : hidden_widths)
        if (w == 0) throw DataError("MlpSpec: zero hidden width");
}

std::size_t MlpNet::param_count() const {
    std::size_t n = 0;
    for (const auto& w : weights) n += w.size();
    for (const auto& b : biases) n += b.size();
    return n;
}

void MlpGrads::init_like(const MlpNet& net) {
    weights.clear();
    biases.clear();
    for (const auto& w : net.weights) weights.emplace_back(w.rows(), w.cols());
    for (const auto& b : net.biases) biases.emplace_back(b.size(), 0.0);
}

void MlpGrads::zero() {
    for (auto& w : weights) w.fill(0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

MlpNet mlp_init(const MlpSpec& spec, std::uint64_t seed) {
    spec.validate();
    MlpNet net;
    net.spec = spec;
    Rng rng(seed);
    std::vector<std::size_t> dims;
    dims.push_back(spec.input_dim);
    for (std::size_t w : spec.hidden_widths) dims.push_back(w);
    dims.push_back(spec.output_dim);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        Matrix w(dims[l], dims[l + 1]);
        const double bound = std::sqrt(1.0 / static_cast<double>(dims[l]));
        for (std::size_t i = 0; i < w.size(); ++i)
            w.data()[i] = rng.uniform(-bound, bound);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(dims[l + 1], 0.0);
    }
    return net;
}

MlpNet identity_mlp(std::size_t dim, std::size_t hidden_layers) {
    if (dim == 0 || hidden_layers == 0) throw DataError("identity_mlp: zero size");
    MlpNet net;
    net.spec.input_dim = dim;
    net.spec.hidden_widths.assign(hidden_layers, 2 * dim);
    net.spec.output_dim = dim;
    Matrix first(dim, 2 * dim);
    for (std::size_t i = 0; i < dim; ++i) {
        first(i, i) = 1.0;
        first(i, dim + i) = -1.0;
    }
    net.weights.push_back(std::move(first));
    net.biases.emplace_back(2 * dim, 0.0);
    for (std::size_t l = 1; l < hidden_layers; ++l) {
        Matrix mid(2 * dim, 2 * dim);
        for (std::size_t i = 0; i < 2 * dim; ++i) mid(i, i) = 1.0;
        net.weights.push_back(std::move(mid));
        net.biases.emplace_back(2 * dim, 0.0);
    }
    Matrix last(2 * dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        last(i, i) = 1.0;
        last(dim + i, i) = -1.0;
    }
    net.weights.push_back(std::move(last));
    net.biases.emplace_back(dim, 0.0);
    return net;
}

Matrix mlp_forward(const MlpNet& net, const Matrix& batch, ForwardCache& cache) {
    if (batch.cols() != net.spec.input_dim)
        throw DataError("mlp_forward: batch has " + std::to_string(batch.cols()) +
                        " cols, expected " + std::to_string(net.spec.input_dim));
    const std::size_t layers = net.weights.size();
    cache.input = batch;
    cache.pre.assign(layers, Matrix());
    cache.post.assign(layers > 0 ? layers - 1 : 0, Matrix());
    const Matrix* cur = &cache.input;
    for (std::size_t l = 0; l < layers; ++l) {
        Matrix z(cur->rows(), net.weights[l].cols());
        kernels::matmul(*cur, net.weights[l], z);
        kernels::add_bias(z, net.biases[l], z);
        cache.pre[l] = std::move(z);
        if (l + 1 < layers) {
            Matrix a(cache.pre[l].rows(), cache.pre[l].cols());
            kernels::relu(cache.pre[l], a);
            cache.post[l] = std::move(a);
            cur = &cache.post[l];
        }
    }
    return cache.pre.back();
}

Matrix mlp_eval(const MlpNet& net, const Matrix& batch) {
    ForwardCache cache;
    return mlp_forward(net, batch, cache);
}

Matrix mlp_backward(const MlpNet& net, const ForwardCache& cache, const Matrix& grad_output,
                    MlpGrads& grads) {
    const std::size_t layers = net.weights.size();
    if (cache.pre.size() != layers)
        throw DataError("mlp_backward: cache does not match net");
    if (!grad_output.same_shape(cache.pre.back()))
        throw DataError("mlp_backward: grad_output shape mismatch");
    if (grads.weights.size() != layers) throw DataError("mlp_backward: grads not initialised");

    Matrix dz = grad_output;
    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& layer_in = (l == 0) ? cache.input : cache.post[l - 1];
        // dW_l += inᵀ·dz,  db_l += column sums of dz
        Matrix dw(net.weights[l].rows(), net.weights[l].cols());
        kernels::matmul_tn(layer_in, dz, dw);
        for (std::size_t i = 0; i < dw.size(); ++i) grads.weights[l].data()[i] += dw.data()[i];
        std::vector<double> db;
        kernels::col_sums(dz, db);
        for (std::size_t i = 0; i < db.size(); ++i) grads.biases[l][i] += db[i];
        // d(in) = dz·Wᵀ, gated by the relu mask of the previous layer
        Matrix din(dz.rows(), net.weights[l].rows());
        kernels::matmul_nt(dz, net.weights[l], din);
        if (l > 0) {
            Matrix gated(din.rows(), din.cols());
            kernels::relu_backward(din, cache.pre[l - 1], gated);
            dz = std::move(gated);
        } else {
            dz = std::move(din);
        }
    }
    return dz;
}

ResidualNet residual_init(std::size_t dim, const std::vector<std::size_t>& hidden,
                          std::uint64_t seed) {
    MlpSpec spec{dim, hidden, dim};
    return ResidualNet{mlp_init(spec, seed)};
}

Matrix residual_forward(const ResidualNet& rnet, const Matrix& z, ForwardCache& cache) {
    if (rnet.inner.spec.input_dim != rnet.inner.spec.output_dim)
        throw DataError("residual_forward: inner net is not square");
    Matrix out = mlp_forward(rnet.inner, z, cache);
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += z.data()[i];
    return out;
}

Matrix residual_eval(const ResidualNet& rnet, const Matrix& z) {
    ForwardCache cache;
    return residual_forward(rnet, z, cache);
}

Matrix residual_backward(const ResidualNet& rnet, const ForwardCache& cache,
                         const Matrix& grad_output, MlpGrads& grads) {
    Matrix din = mlp_backward(rnet.inner, cache, grad_output, grads);
    for (std::size_t i = 0; i < din.size(); ++i) din.data()[i] += grad_output.data()[i];
    return din;
}

}  // namespace weld
