#include "weld/baselines.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "weld/checkpoint.hpp"
#include "weld/error.hpp"
#include "weld/rng.hpp"

namespace weld {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kEpochTag = 0x45504f4348ULL;

struct PairPool {
    // (sample, time index) flattened; xk row and target row resolved lazily
    std::vector<std::pair<std::size_t, std::size_t>> entries;
};

double regression_epoch(MlpNet& net, AdamWState& opt, const TrajectoryDataset& ds,
                        const std::vector<std::pair<std::size_t, std::size_t>>& pool,
                        const std::vector<std::size_t>& order, std::size_t batch_size,
                        bool time_input) {
    const std::size_t dim = ds.space.n_points;
    MlpGrads grads;
    grads.init_like(net);
    double loss_sum = 0.0;
    double weight = 0.0;
    for (std::size_t lo = 0; lo < order.size(); lo += batch_size) {
        const std::size_t b = std::min(batch_size, order.size() - lo);
        Matrix xb(b, time_input ? dim + 1 : dim);
        Matrix yb(b, dim);
        for (std::size_t r = 0; r < b; ++r) {
            const auto [n, k] = pool[order[lo + r]];
            if (time_input) {
                const float* x0 = ds.state(n, 0);
                for (std::size_t c = 0; c < dim; ++c) xb(r, c) = x0[c];
                xb(r, dim) = ds.time.time(k);
                const float* target = ds.state(n, k);
                for (std::size_t c = 0; c < dim; ++c) yb(r, c) = target[c];
            } else {
                const float* xk = ds.state(n, k);
                const float* xk1 = ds.state(n, k + 1);
                for (std::size_t c = 0; c < dim; ++c) {
                    xb(r, c) = xk[c];
                    yb(r, c) = xk1[c];
                }
            }
        }
        ForwardCache cache;
        Matrix pred = mlp_forward(net, xb, cache);
        auto [loss, grad] = mse_loss(pred, yb);
        grads.zero();
        mlp_backward(net, cache, grad, grads);
        auto prefs = param_refs(net);
        auto grefs = param_refs(grads);
        adamw_step(prefs, grefs, opt);
        loss_sum += loss * static_cast<double>(b);
        weight += static_cast<double>(b);
    }
    return loss_sum / weight;
}

MlpNet train_regression(const TrajectoryDataset& ds, const BaselineConfig& cfg, bool time_input,
                        const char* stage, std::vector<EpochLoss>& trace) {
    ds.validate();
    const TrajectorySplit split = split_dataset(ds, cfg.test_fraction);
    if (split.train.empty()) throw DataError("baseline training: empty split");
    const std::size_t dim = ds.space.n_points;

    std::vector<std::pair<std::size_t, std::size_t>> pool;
    for (std::size_t n : split.train) {
        if (time_input) {
            for (std::size_t k = 0; k < ds.time.n_steps; ++k) pool.emplace_back(n, k);
        } else {
            for (std::size_t k = 0; k + 1 < ds.time.n_steps; ++k) pool.emplace_back(n, k);
        }
    }

    std::vector<std::size_t> hidden(cfg.depth, cfg.width);
    MlpSpec spec{time_input ? dim + 1 : dim, hidden, dim};
    MlpNet net = mlp_init(spec, derive_seed(cfg.seed, 7));

    AdamWState opt;
    opt.lr = cfg.lr;
    PlateauSchedule sched = cfg.schedule;
    double lr = cfg.lr;
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, kEpochTag, epoch));
        shuffle_rng.shuffle(order);
        opt.lr = lr;
        const double loss =
            regression_epoch(net, opt, ds, pool, order, cfg.batch_size, time_input);
        trace.push_back({stage, 0, epoch, 0.0, loss, loss, lr});
        lr = plateau_update(sched, lr, loss);
    }
    return net;
}

void save_baseline(const std::string& dir, const MlpNet& net, const char* kind_tag,
                   double time_scale, const std::vector<EpochLoss>& trace, std::uint64_t seed) {
    fs::create_directories(dir);
    CheckpointMeta meta;
    meta.role = kind_tag;
    meta.seed = seed;
    meta.stage = "final";
    save_mlp_checkpoint(dir + "/net.wnet", net, meta);
    json rows = json::array();
    for (const auto& t : trace)
        rows.push_back({{"stage", t.stage},
                        {"epoch", t.epoch},
                        {"loss", t.total},
                        {"lr", t.lr}});
    json manifest{{"format", "weld-baseline-1"},
                  {"kind", kind_tag},
                  {"time_scale", time_scale},
                  {"seed", seed},
                  {"loss_trace", rows}};
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw DataError("save baseline: cannot write manifest in " + dir);
    out << manifest.dump(2) << "\n";
}

json load_manifest(const std::string& dir, const char* expect_kind) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw DataError("load baseline: no manifest.json in " + dir);
    json manifest;
    in >> manifest;
    if (manifest.value("kind", "") != expect_kind)
        throw DataError("load baseline: expected kind " + std::string(expect_kind));
    return manifest;
}

}  // namespace

HdpModel train_hdp(const TrajectoryDataset& ds, const BaselineConfig& cfg,
                   std::vector<EpochLoss>& trace) {
    HdpModel model;
    model.net = train_regression(ds, cfg, false, "hdp", trace);
    model.delta_t = ds.time.dt();
    return model;
}

Matrix hdp_rollout(const HdpModel& m, const Matrix& x0, std::size_t k) {
    Matrix x = x0;
    for (std::size_t i = 0; i < k; ++i) x = mlp_eval(m.net, x);
    return x;
}

std::vector<double> hdp_rollout(const HdpModel& m, const std::vector<double>& x0, std::size_t k) {
    Matrix row(1, x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) row(0, i) = x0[i];
    Matrix out = hdp_rollout(m, row, k);
    return std::vector<double>(out.data(), out.data() + out.size());
}

TimeInputModel train_time_input(const TrajectoryDataset& ds, const BaselineConfig& cfg,
                                std::vector<EpochLoss>& trace) {
    TimeInputModel model;
    model.net = train_regression(ds, cfg, true, "time-input", trace);
    model.t_end = ds.time.t_end;
    return model;
}

Matrix time_input_predict(const TimeInputModel& m, const Matrix& x0, double t) {
    Matrix in(x0.rows(), x0.cols() + 1);
    for (std::size_t r = 0; r < x0.rows(); ++r) {
        for (std::size_t c = 0; c < x0.cols(); ++c) in(r, c) = x0(r, c);
        in(r, x0.cols()) = t;
    }
    return mlp_eval(m.net, in);
}

std::vector<double> time_input_predict(const TimeInputModel& m, const std::vector<double>& x0,
                                       double t) {
    Matrix row(1, x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) row(0, i) = x0[i];
    Matrix out = time_input_predict(m, row, t);
    return std::vector<double>(out.data(), out.data() + out.size());
}

void save_hdp_model(const std::string& dir, const HdpModel& model,
                    const std::vector<EpochLoss>& trace, std::uint64_t seed) {
    save_baseline(dir, model.net, "hdp", model.delta_t, trace, seed);
}

HdpModel load_hdp_model(const std::string& dir) {
    json manifest = load_manifest(dir, "hdp");
    HdpModel model;
    model.net = load_mlp_checkpoint(dir + "/net.wnet");
    model.delta_t = manifest.at("time_scale").get<double>();
    return model;
}

void save_time_input_model(const std::string& dir, const TimeInputModel& model,
                           const std::vector<EpochLoss>& trace, std::uint64_t seed) {
    save_baseline(dir, model.net, "time-input", model.t_end, trace, seed);
}

TimeInputModel load_time_input_model(const std::string& dir) {
    json manifest = load_manifest(dir, "time-input");
    TimeInputModel model;
    model.net = load_mlp_checkpoint(dir + "/net.wnet");
    model.t_end = manifest.at("time_scale").get<double>();
    return model;
}

}  // namespace weld
