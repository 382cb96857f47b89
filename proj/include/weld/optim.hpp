#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "weld/mlp.hpp"

namespace weld {

// Mutable view over the parameter arrays of a net, in declaration order
// (W1, b1, W2, b2, ...). The same order is used by checkpoints.
struct ParamRef {
    double* data;
    std::size_t size;
};

std::vector<ParamRef> param_refs(MlpNet& net);
std::vector<ParamRef> param_refs(MlpGrads& grads);

// AdamW with decoupled weight decay; moments stored flat in declaration
// order. Defaults follow the usual β=(0.9, 0.999), eps=1e-8, wd=0.01.
struct AdamWState {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
    std::size_t step = 0;
    std::vector<double> m;
    std::vector<double> v;
};

// One update over the given parameter/gradient views. Shapes must mirror
// each other; state is sized lazily on first call.
void adamw_step(const std::vector<ParamRef>& params, const std::vector<ParamRef>& grads,
                AdamWState& state);

// Reduce-on-plateau: lr ← max(lr·factor, min_lr) after `patience` consecutive
// epochs without strict improvement; any improvement resets the counter.
struct PlateauSchedule {
    double factor = 0.3;
    std::size_t patience = 15;
    double min_lr = 1e-6;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t epochs_since_improve = 0;
};

// Returns the (possibly reduced) learning rate. NaN loss is an error.
double plateau_update(PlateauSchedule& sched, double lr, double epoch_loss);

// Mean over rows of the squared Euclidean row norm, plus d(loss)/d(pred).
std::pair<double, Matrix> mse_loss(const Matrix& pred, const Matrix& target);

// Loss value only.
double mse_value(const Matrix& pred, const Matrix& target);

}  // namespace weld
