#include "weld/optim.hpp"

#include <cmath>

#include "weld/error.hpp"

namespace weld {

std::vector<ParamRef> param_refs(MlpNet& net) {
    std::vector<ParamRef> refs;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        refs.push_back({net.weights[l].data(), net.weights[l].size()});
        refs.push_back({net.biases[l].data(), net.biases[l].size()});
    }
    return refs;
}

std::vector<ParamRef> param_refs(MlpGrads& grads) {
    std::vector<ParamRef> refs;
    for (std::size_t l = 0; l < grads.weights.size(); ++l) {
        refs.push_back({grads.weights[l].data(), grads.weights[l].size()});
        refs.push_back({grads.biases[l].data(), grads.biases[l].size()});
    }
    return refs;
}

void adamw_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
                AdamWState& state) {
    if (params.size() != grads.size()) throw DataError("adamw_step: param/grad count mismatch");
    std::size_t total = 0;
    for (const auto& p : params) total += p.size;
    if (state.m.empty()) {
        state.m.assign(total, 0.0);
        state.v.assign(total, 0.0);
    } else if (state.m.size() != total) {
        throw DataError("adamw_step: state size mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    std::size_t off = 0;
    for (std::size_t r = 0; r < params.size(); ++r) {
        if (params[r].size != grads[r].size) throw DataError("adamw_step: shape mismatch");
        double* p = params[r].data;
        const double* g = grads[r].data;
        double* m = state.m.data() + off;
        double* v = state.v.data() + off;
        const std::size_t n = params[r].size;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] -= state.lr * state.weight_decay * p[i];
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            p[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
        }
        off += n;
    }
}

double plateau_update(PlateauSchedule& sched, double lr, double epoch_loss) {
    if (std::isnan(epoch_loss)) throw NumericError("plateau_update: NaN epoch loss");
    if (epoch_loss < sched.best_loss) {
        sched.best_loss = epoch_loss;
        sched.epochs_since_improve = 0;
        return lr;
    }
    sched.epochs_since_improve += 1;
    if (sched.epochs_since_improve > sched.patience) {
        sched.epochs_since_improve = 0;
        lr = std::max(lr * sched.factor, sched.min_lr);
    }
    return lr;
}

std::pair<double, Matrix> mse_loss(const Matrix& pred, const Matrix& target) {
    if (!pred.same_shape(target)) throw DataError("mse_loss: shape mismatch");
    const std::size_t b = pred.rows();
    Matrix grad(pred.rows(), pred.cols());
    double sum = 0.0;
    const double scale = 2.0 / static_cast<double>(b);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data()[i] - target.data()[i];
        sum += d * d;
        grad.data()[i] = scale * d;
    }
    return {sum / static_cast<double>(b), std::move(grad)};
}

double mse_value(const Matrix& pred, const Matrix& target) {
    if (!pred.same_shape(target)) throw DataError("mse_value: shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred.data()[i] - target.data()[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred.rows());
}

}  // namespace weld
