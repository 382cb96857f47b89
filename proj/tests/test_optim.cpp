#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "weld/optim.hpp"

using namespace weld;

namespace {

MlpNet scalar_net(double w) {
    MlpNet net;
    net.spec = MlpSpec{1, {}, 1};
    net.weights.emplace_back(1, 1);
    net.weights[0](0, 0) = w;
    net.biases.push_back({0.0});
    return net;
}

}  // namespace

TEST_CASE("adamw: zero gradients and zero decay is a fixed point") {
    MlpNet net = mlp_init(MlpSpec{3, {4}, 2}, 5);
    MlpNet before = net;
    MlpGrads grads;
    grads.init_like(net);
    AdamWState state;
    state.weight_decay = 0.0;
    auto p = param_refs(net);
    auto g = param_refs(grads);
    for (int i = 0; i < 10; ++i) adamw_step(p, g, state);
    for (std::size_t l = 0; l < net.weights.size(); ++l)
        for (std::size_t i = 0; i < net.weights[l].size(); ++i)
            CHECK(net.weights[l].data()[i] == before.weights[l].data()[i]);
}

TEST_CASE("adamw: decoupled decay scales weights by (1 - lr*wd)") {
    MlpNet net = scalar_net(1.0);
    MlpGrads grads;
    grads.init_like(net);
    AdamWState state;
    state.lr = 1e-4;
    state.weight_decay = 0.01;
    auto p = param_refs(net);
    auto g = param_refs(grads);
    adamw_step(p, g, state);
    CHECK(net.weights[0](0, 0) == doctest::Approx(1.0 - 1e-4 * 0.01).epsilon(1e-15));
}

TEST_CASE("adamw: closed-form first step") {
    MlpNet net = scalar_net(1.0);
    MlpGrads grads;
    grads.init_like(net);
    grads.weights[0](0, 0) = 1.0;
    AdamWState state;
    state.lr = 1e-3;
    auto p = param_refs(net);
    auto g = param_refs(grads);
    adamw_step(p, g, state);
    // m̂ = v̂ = 1 at step 1
    const double after_decay = 1.0 - 1e-3 * 0.01;
    const double expect = after_decay - 1e-3 * (1.0 / (1.0 + 1e-8));
    CHECK(net.weights[0](0, 0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(state.step == 1);
}

TEST_CASE("plateau: strictly decreasing losses keep the lr") {
    PlateauSchedule sched;
    double lr = 1e-4;
    for (int i = 0; i < 100; ++i) lr = plateau_update(sched, lr, 1.0 / (i + 1));
    CHECK(lr == 1e-4);
}

TEST_CASE("plateau: 16 stale epochs after a best trigger exactly one decay") {
    PlateauSchedule sched;
    double lr = 1e-4;
    lr = plateau_update(sched, lr, 0.5);  // best
    for (int i = 0; i < 15; ++i) {
        lr = plateau_update(sched, lr, 0.5);
        CHECK(lr == 1e-4);
    }
    lr = plateau_update(sched, lr, 0.5);  // 16th stale epoch
    CHECK(lr == doctest::Approx(3e-5));
}

TEST_CASE("plateau: repeated decays floor at the minimum lr") {
    PlateauSchedule sched;
    double lr = 1e-4;
    plateau_update(sched, lr, 1.0);
    for (int i = 0; i < 500; ++i) lr = plateau_update(sched, lr, 1.0);
    CHECK(lr == 1e-6);
    CHECK_THROWS_AS(plateau_update(sched, lr, std::nan("")), NumericError);
}

TEST_CASE("mse loss over batch rows") {
    Matrix a(1, 2), b(1, 2);
    a(0, 0) = 1.0;
    auto [zero_loss, zero_grad] = mse_loss(a, a);
    CHECK(zero_loss == 0.0);

    auto [loss, grad] = mse_loss(a, b);
    CHECK(loss == 1.0);
    CHECK(grad(0, 0) == 2.0);
    CHECK(grad(0, 1) == 0.0);

    Matrix two(2, 2), zeros(2, 2);
    two(0, 0) = 1.0;
    two(0, 1) = 1.0;
    auto [loss2, grad2] = mse_loss(two, zeros);
    CHECK(loss2 == doctest::Approx(1.0));  // (2 + 0) / 2

    CHECK_THROWS_AS(mse_loss(a, Matrix(2, 2)), DataError);
}
