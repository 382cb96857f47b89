#include "weld/weldnet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weld/rng.hpp"
#include "weld/threading.hpp"

namespace weld {

namespace {

constexpr std::uint64_t kWindowTag = 0x57494e444f57ULL;   // "WINDOW"
constexpr std::uint64_t kEpochTag = 0x45504f4348ULL;      // "EPOCH"
constexpr std::uint64_t kBoundaryTag = 0x424f554e44ULL;   // "BOUND"

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
}

// Gather dataset rows into a dense batch.
void gather_rows(const Matrix& src, const std::vector<std::size_t>& idx, std::size_t lo,
                 std::size_t count, Matrix& out) {
    for (std::size_t r = 0; r < count; ++r) {
        const double* s = src.row(idx[lo + r]);
        double* d = out.row(r);
        for (std::size_t c = 0; c < src.cols(); ++c) d[c] = s[c];
    }
}

// Append the time column to a latent batch: [z | t].
Matrix with_time_column(const Matrix& z, const std::vector<double>& t) {
    Matrix out(z.rows(), z.cols() + 1);
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const double* s = z.row(r);
        double* d = out.row(r);
        for (std::size_t c = 0; c < z.cols(); ++c) d[c] = s[c];
        d[z.cols()] = t[r];
    }
    return out;
}

Matrix drop_time_column(const Matrix& zt) {
    Matrix out(zt.rows(), zt.cols() - 1);
    for (std::size_t r = 0; r < zt.rows(); ++r)
        for (std::size_t c = 0; c + 1 < zt.cols(); ++c) out(r, c) = zt(r, c);
    return out;
}

Matrix pad_time_column_zero(const Matrix& g) {
    Matrix out(g.rows(), g.cols() + 1);
    for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) out(r, c) = g(r, c);
    return out;
}

struct EpochAverager {
    double sum = 0.0;
    double weight = 0.0;
    void add(double value, double w) {
        sum += value * w;
        weight += w;
    }
    double mean() const { return weight > 0.0 ? sum / weight : 0.0; }
};

// One displacement-propagator regression epoch over precomputed latent pairs.
// Returns the mean one-step loss. Shared by the PCA stage-2 path, the
// displacement finetune, and transcoder-style training.
double displacement_epoch(ResidualNet& prop, AdamWState& opt, const Matrix& latents,
                          const WindowData& data, std::size_t latent_dim,
                          const TrainConfig& cfg, Rng& shuffle_rng) {
    std::vector<std::size_t> pairs;
    pairs.reserve(data.n_traj * (data.t_count - 1));
    for (std::size_t n = 0; n < data.n_traj; ++n)
        for (std::size_t j = 0; j + 1 < data.t_count; ++j) pairs.push_back(data.row(n, j));
    shuffle_rng.shuffle(pairs);

    EpochAverager avg;
    MlpGrads grads;
    grads.init_like(prop.inner);
    for (std::size_t lo = 0; lo < pairs.size(); lo += cfg.batch_size) {
        const std::size_t b = std::min(cfg.batch_size, pairs.size() - lo);
        Matrix zk(b, latent_dim), zk1(b, latent_dim);
        std::vector<double> tk(b);
        for (std::size_t r = 0; r < b; ++r) {
            const std::size_t row = pairs[lo + r];
            for (std::size_t c = 0; c < latent_dim; ++c) {
                zk(r, c) = latents(row, c);
                zk1(r, c) = latents(row + 1, c);
            }
            const std::size_t j = row % data.t_count;
            tk[r] = data.time_of(j);
        }
        Matrix pin = with_time_column(zk, tk);
        ForwardCache cache;
        Matrix pout = residual_forward(prop, pin, cache);
        Matrix zpred = drop_time_column(pout);
        auto [loss, grad_z] = mse_loss(zpred, zk1);
        grads.zero();
        Matrix grad_out = pad_time_column_zero(grad_z);
        residual_backward(prop, cache, grad_out, grads);
        auto prefs = param_refs(prop.inner);
        auto grefs = param_refs(grads);
        adamw_step(prefs, grefs, opt);
        avg.add(loss, static_cast<double>(b));
    }
    return avg.mean();
}

}  // namespace

AblationVariant parse_variant(const std::string& name) {
    if (name == "i") return AblationVariant::joint_accumulate;
    if (name == "ii") return AblationVariant::joint_displacement;
    if (name == "iii") return AblationVariant::separate_accumulate;
    if (name == "iv") return AblationVariant::separate_displacement;
    throw UsageError("unknown ablation variant '" + name + "' (valid: i, ii, iii, iv)");
}

std::string variant_name(AblationVariant v) {
    switch (v) {
        case AblationVariant::joint_accumulate: return "i";
        case AblationVariant::joint_displacement: return "ii";
        case AblationVariant::separate_accumulate: return "iii";
        default: return "iv";
    }
}

void TrainConfig::validate() const {
    if (lambda < 0.0) throw DataError("TrainConfig: lambda must be >= 0");
    if (batch_size == 0) throw DataError("TrainConfig: batch_size must be positive");
    if (!(lr > 0.0)) throw DataError("TrainConfig: lr must be positive");
    if (coder_width == 0 || prop_width == 0 || coder_depth == 0 || prop_depth == 0)
        throw DataError("TrainConfig: zero architecture size");
    if (!(test_fraction >= 0.0 && test_fraction < 1.0))
        throw DataError("TrainConfig: test_fraction must be in [0, 1)");
}

LatentCode encode_with_time(const WindowModel& wm, const std::vector<double>& x, double t) {
    const double t_lo = wm.delta_t * static_cast<double>(wm.k_start);
    const double t_hi = wm.delta_t * static_cast<double>(wm.k_end);
    if (t < t_lo || t > t_hi)
        throw DataError("encode_with_time: t outside window " + std::to_string(wm.window_index));
    Matrix row(1, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) row(0, i) = x[i];
    Matrix z = wm.coder.encode(row);
    LatentCode code;
    code.z.assign(z.data(), z.data() + z.size());
    code.time_index = static_cast<std::size_t>(std::llround(t / wm.delta_t));
    code.t = t;
    return code;
}

LatentCode propagate(const WindowModel& wm, const LatentCode& code) {
    if (code.time_index + 1 > wm.k_end)
        throw DataError("propagate: step leaves window " + std::to_string(wm.window_index));
    Matrix pin(1, code.z.size() + 1);
    for (std::size_t i = 0; i < code.z.size(); ++i) pin(0, i) = code.z[i];
    pin(0, code.z.size()) = code.t;
    Matrix pout = residual_eval(wm.propagator, pin);
    LatentCode next;
    next.z.assign(pout.data(), pout.data() + code.z.size());
    next.time_index = code.time_index + 1;
    next.t = wm.delta_t * static_cast<double>(next.time_index);
    return next;
}

std::vector<double> decode(const WindowModel& wm, const LatentCode& code) {
    Matrix row(1, code.z.size());
    for (std::size_t i = 0; i < code.z.size(); ++i) row(0, i) = code.z[i];
    Matrix x = wm.coder.decode(row);
    return std::vector<double>(x.data(), x.data() + x.size());
}

WindowData extract_window(const TrajectoryDataset& ds, const std::vector<std::size_t>& traj,
                          std::size_t k_start, std::size_t k_end) {
    if (k_end <= k_start || k_end >= ds.time.n_steps)
        throw DataError("extract_window: bad window range");
    WindowData data;
    data.n_traj = traj.size();
    data.t_count = k_end - k_start + 1;
    data.k_start = k_start;
    data.delta_t = ds.time.dt();
    data.states = Matrix(data.n_traj * data.t_count, ds.space.n_points);
    for (std::size_t n = 0; n < traj.size(); ++n)
        for (std::size_t j = 0; j < data.t_count; ++j)
            ds.copy_state(traj[n], k_start + j, data.states, data.row(n, j));
    return data;
}

WindowModel train_joint(const WindowData& data, std::size_t latent_dim, const TrainConfig& cfg,
                        std::uint64_t window_seed, CoderKind kind,
                        std::vector<EpochLoss>& trace) {
    cfg.validate();
    const std::size_t ambient = data.states.cols();
    WindowModel wm;
    wm.k_start = data.k_start;
    wm.k_end = data.k_start + data.t_count - 1;
    wm.delta_t = data.delta_t;

    std::vector<std::size_t> hidden_p(cfg.prop_depth, cfg.prop_width);
    wm.propagator = residual_init(latent_dim + 1, hidden_p, derive_seed(window_seed, 3));

    if (kind == CoderKind::pca) {
        wm.coder.kind = CoderKind::pca;
        wm.coder.pca = pca_fit(data.states, latent_dim);
        // Stage 2 for the linear coder: only the propagator trains, on the
        // fixed PCA latents.
        Matrix latents = pca_encode(wm.coder.pca, data.states);
        AdamWState opt;
        opt.lr = cfg.lr;
        PlateauSchedule sched = cfg.schedule;
        double lr = cfg.lr;
        for (std::size_t epoch = 0; epoch < cfg.epochs_joint; ++epoch) {
            Rng shuffle_rng(derive_seed(window_seed, kEpochTag, epoch));
            opt.lr = lr;
            const double loss =
                displacement_epoch(wm.propagator, opt, latents, data, latent_dim, cfg, shuffle_rng);
            trace.push_back({"propagator", wm.window_index, epoch, 0.0, loss, loss, lr});
            lr = plateau_update(sched, lr, loss);
        }
        return wm;
    }

    wm.coder.kind = CoderKind::neural;
    std::vector<std::size_t> hidden_c(cfg.coder_depth, cfg.coder_width);
    wm.coder.encoder = mlp_init(MlpSpec{ambient, hidden_c, latent_dim}, derive_seed(window_seed, 1));
    wm.coder.decoder = mlp_init(MlpSpec{latent_dim, hidden_c, ambient}, derive_seed(window_seed, 2));

    AdamWState enc_opt, dec_opt, prop_opt;
    enc_opt.lr = dec_opt.lr = prop_opt.lr = cfg.lr;
    PlateauSchedule sched = cfg.schedule;
    double lr = cfg.lr;

    MlpGrads enc_grads, dec_grads, prop_grads;
    enc_grads.init_like(wm.coder.encoder);
    dec_grads.init_like(wm.coder.decoder);
    prop_grads.init_like(wm.propagator.inner);

    std::vector<std::size_t> ae_pool = iota_indices(data.n_traj * data.t_count);
    std::vector<std::size_t> pair_pool;
    pair_pool.reserve(data.n_traj * (data.t_count - 1));
    for (std::size_t n = 0; n < data.n_traj; ++n)
        for (std::size_t j = 0; j + 1 < data.t_count; ++j) pair_pool.push_back(data.row(n, j));

    const bool with_prop = cfg.lambda > 0.0;
    const char* stage = with_prop ? "joint" : "autoencoder";

    for (std::size_t epoch = 0; epoch < cfg.epochs_joint; ++epoch) {
        Rng shuffle_rng(derive_seed(window_seed, kEpochTag, epoch));
        shuffle_rng.shuffle(ae_pool);
        shuffle_rng.shuffle(pair_pool);
        enc_opt.lr = dec_opt.lr = prop_opt.lr = lr;

        EpochAverager ae_avg, prop_avg;
        std::size_t pair_cursor = 0;
        for (std::size_t lo = 0; lo < ae_pool.size(); lo += cfg.batch_size) {
            const std::size_t b = std::min(cfg.batch_size, ae_pool.size() - lo);
            enc_grads.zero();
            dec_grads.zero();

            // reconstruction term
            Matrix xb(b, ambient);
            gather_rows(data.states, ae_pool, lo, b, xb);
            ForwardCache enc_cache, dec_cache;
            Matrix zb = mlp_forward(wm.coder.encoder, xb, enc_cache);
            Matrix recon = mlp_forward(wm.coder.decoder, zb, dec_cache);
            auto [loss_ae, grad_recon] = mse_loss(recon, xb);
            Matrix grad_z = mlp_backward(wm.coder.decoder, dec_cache, grad_recon, dec_grads);
            mlp_backward(wm.coder.encoder, enc_cache, grad_z, enc_grads);
            ae_avg.add(loss_ae, static_cast<double>(b));

            // one-step latent prediction term; gradients reach the encoder
            // through both the propagated code and the target code
            if (with_prop) {
                prop_grads.zero();
                const std::size_t pb = cfg.batch_size;
                Matrix xk(pb, ambient), xk1(pb, ambient);
                std::vector<double> tk(pb);
                for (std::size_t r = 0; r < pb; ++r) {
                    const std::size_t row = pair_pool[(pair_cursor + r) % pair_pool.size()];
                    const double* s0 = data.states.row(row);
                    const double* s1 = data.states.row(row + 1);
                    for (std::size_t c = 0; c < ambient; ++c) {
                        xk(r, c) = s0[c];
                        xk1(r, c) = s1[c];
                    }
                    tk[r] = data.time_of(row % data.t_count);
                }
                pair_cursor = (pair_cursor + pb) % pair_pool.size();

                ForwardCache cache_k, cache_k1, cache_p;
                Matrix zk = mlp_forward(wm.coder.encoder, xk, cache_k);
                Matrix zk1 = mlp_forward(wm.coder.encoder, xk1, cache_k1);
                Matrix pin = with_time_column(zk, tk);
                Matrix pout = residual_forward(wm.propagator, pin, cache_p);
                Matrix zpred = drop_time_column(pout);
                auto [loss_prop, grad_pred] = mse_loss(zpred, zk1);
                prop_avg.add(loss_prop, static_cast<double>(pb));

                // d(λ·L)/d(pred) and d(λ·L)/d(target)
                Matrix grad_pred_l = grad_pred;
                for (std::size_t i = 0; i < grad_pred_l.size(); ++i)
                    grad_pred_l.data()[i] *= cfg.lambda;
                Matrix grad_pout = pad_time_column_zero(grad_pred_l);
                Matrix grad_pin = residual_backward(wm.propagator, cache_p, grad_pout, prop_grads);
                Matrix grad_zk = drop_time_column(grad_pin);
                mlp_backward(wm.coder.encoder, cache_k, grad_zk, enc_grads);
                Matrix grad_zk1(zk1.rows(), zk1.cols());
                for (std::size_t i = 0; i < grad_zk1.size(); ++i)
                    grad_zk1.data()[i] = -grad_pred_l.data()[i];
                mlp_backward(wm.coder.encoder, cache_k1, grad_zk1, enc_grads);

                auto prefs = param_refs(wm.propagator.inner);
                auto grefs = param_refs(prop_grads);
                adamw_step(prefs, grefs, prop_opt);
            }

            auto erefs = param_refs(wm.coder.encoder);
            auto egrefs = param_refs(enc_grads);
            adamw_step(erefs, egrefs, enc_opt);
            auto drefs = param_refs(wm.coder.decoder);
            auto dgrefs = param_refs(dec_grads);
            adamw_step(drefs, dgrefs, dec_opt);
        }

        const double mean_ae = ae_avg.mean();
        const double mean_prop = prop_avg.mean();
        const double total = mean_ae + cfg.lambda * mean_prop;
        trace.push_back({stage, wm.window_index, epoch, mean_ae, mean_prop, total, lr});
        lr = plateau_update(sched, lr, total);
    }
    return wm;
}

void train_finetune_propagator(WindowModel& wm, const WindowData& data, const TrainConfig& cfg,
                               std::uint64_t window_seed, bool accumulation, std::size_t epochs,
                               std::vector<EpochLoss>& trace) {
    cfg.validate();
    const std::size_t d = wm.coder.latent_dim();
    // encoder frozen: all latent targets precomputed once
    Matrix latents = wm.coder.encode(data.states);

    AdamWState opt;
    opt.lr = cfg.lr;
    PlateauSchedule sched = cfg.schedule;
    double lr = cfg.lr;
    const std::uint64_t stage_seed = derive_seed(window_seed, 4);

    if (!accumulation) {
        for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
            Rng shuffle_rng(derive_seed(stage_seed, kEpochTag, epoch));
            opt.lr = lr;
            const double loss =
                displacement_epoch(wm.propagator, opt, latents, data, d, cfg, shuffle_rng);
            trace.push_back(
                {"finetune-displacement", wm.window_index, epoch, 0.0, loss, loss, lr});
            lr = plateau_update(sched, lr, loss);
        }
        return;
    }

    const std::size_t total_steps = data.t_count - 1;  // 𝐓ᵢ
    std::vector<std::size_t> order = iota_indices(data.n_traj);
    MlpGrads grads;
    grads.init_like(wm.propagator.inner);

    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(stage_seed, kEpochTag, epoch));
        shuffle_rng.shuffle(order);
        opt.lr = lr;
        EpochAverager avg;
        for (std::size_t lo = 0; lo < order.size(); lo += cfg.batch_size) {
            const std::size_t b = std::min(cfg.batch_size, order.size() - lo);
            // rollout from the window's first index; losses pooled over all
            // rollout lengths s = 1..𝐓ᵢ, backprop through the whole chain
            Matrix z(b, d);
            for (std::size_t r = 0; r < b; ++r)
                for (std::size_t c = 0; c < d; ++c) z(r, c) = latents(data.row(order[lo + r], 0), c);

            std::vector<ForwardCache> caches(total_steps);
            std::vector<Matrix> diffs(total_steps);
            double loss_sum = 0.0;
            for (std::size_t s = 1; s <= total_steps; ++s) {
                std::vector<double> ts(b, data.time_of(s - 1));
                Matrix pin = with_time_column(z, ts);
                Matrix pout = residual_forward(wm.propagator, pin, caches[s - 1]);
                z = drop_time_column(pout);
                Matrix diff(b, d);
                for (std::size_t r = 0; r < b; ++r)
                    for (std::size_t c = 0; c < d; ++c)
                        diff(r, c) = z(r, c) - latents(data.row(order[lo + r], s), c);
                for (std::size_t i = 0; i < diff.size(); ++i)
                    loss_sum += diff.data()[i] * diff.data()[i];
                diffs[s - 1] = std::move(diff);
            }
            const double denom = static_cast<double>(b) * static_cast<double>(total_steps);
            const double scale = 2.0 / denom;

            grads.zero();
            Matrix carry(b, d);
            for (std::size_t s = total_steps; s-- > 0;) {
                Matrix g(b, d);
                for (std::size_t i = 0; i < g.size(); ++i)
                    g.data()[i] = scale * diffs[s].data()[i] + carry.data()[i];
                Matrix grad_pout = pad_time_column_zero(g);
                Matrix grad_pin = residual_backward(wm.propagator, caches[s], grad_pout, grads);
                carry = drop_time_column(grad_pin);
            }
            auto prefs = param_refs(wm.propagator.inner);
            auto grefs = param_refs(grads);
            adamw_step(prefs, grefs, opt);
            avg.add(loss_sum / denom, static_cast<double>(b));
        }
        const double mean = avg.mean();
        trace.push_back({"finetune-accumulate", wm.window_index, epoch, 0.0, mean, mean, lr});
        lr = plateau_update(sched, lr, mean);
    }
}

ResidualNet train_transcoder(const WindowModel& wm, const WindowModel& wm_next,
                             const Matrix& start_states, const Matrix& end_states,
                             const TrainConfig& cfg, std::uint64_t boundary_seed,
                             std::vector<EpochLoss>& trace) {
    cfg.validate();
    const std::size_t d = wm.coder.latent_dim();
    const std::size_t n = start_states.rows();
    if (end_states.rows() != n) throw DataError("train_transcoder: state count mismatch");

    // all other nets frozen: roll window i's codes to the boundary once
    Matrix z = wm.coder.encode(start_states);
    for (std::size_t k = wm.k_start; k < wm.k_end; ++k) {
        std::vector<double> ts(n, wm.delta_t * static_cast<double>(k));
        Matrix pin = with_time_column(z, ts);
        Matrix pout = residual_eval(wm.propagator, pin);
        z = drop_time_column(pout);
    }
    Matrix target = wm_next.coder.encode(end_states);
    const double t_boundary = wm.delta_t * static_cast<double>(wm.k_end);

    std::vector<std::size_t> hidden(cfg.prop_depth, cfg.prop_width);
    ResidualNet tc = residual_init(d + 1, hidden, derive_seed(boundary_seed, 5));

    AdamWState opt;
    opt.lr = cfg.lr;
    PlateauSchedule sched = cfg.schedule;
    double lr = cfg.lr;
    std::vector<std::size_t> order = iota_indices(n);
    MlpGrads grads;
    grads.init_like(tc.inner);

    for (std::size_t epoch = 0; epoch < cfg.epochs_transcoder; ++epoch) {
        Rng shuffle_rng(derive_seed(boundary_seed, kEpochTag, epoch));
        shuffle_rng.shuffle(order);
        opt.lr = lr;
        EpochAverager avg;
        for (std::size_t lo = 0; lo < n; lo += cfg.batch_size) {
            const std::size_t b = std::min(cfg.batch_size, n - lo);
            Matrix zb(b, d), tb(b, d);
            for (std::size_t r = 0; r < b; ++r)
                for (std::size_t c = 0; c < d; ++c) {
                    zb(r, c) = z(order[lo + r], c);
                    tb(r, c) = target(order[lo + r], c);
                }
            std::vector<double> ts(b, t_boundary);
            Matrix pin = with_time_column(zb, ts);
            ForwardCache cache;
            Matrix pout = residual_forward(tc, pin, cache);
            Matrix zpred = drop_time_column(pout);
            auto [loss, grad_z] = mse_loss(zpred, tb);
            grads.zero();
            Matrix grad_pout = pad_time_column_zero(grad_z);
            residual_backward(tc, cache, grad_pout, grads);
            auto prefs = param_refs(tc.inner);
            auto grefs = param_refs(grads);
            adamw_step(prefs, grefs, opt);
            avg.add(loss, static_cast<double>(b));
        }
        const double mean = avg.mean();
        trace.push_back({"transcoder", wm.window_index, epoch, 0.0, mean, mean, lr});
        lr = plateau_update(sched, lr, mean);
    }
    return tc;
}

WeldModel train_weldnet(const TrajectoryDataset& ds, CoderKind kind, std::size_t n_windows,
                        std::size_t latent_dim, const TrainConfig& cfg, bool parallel_windows) {
    cfg.validate();
    ds.validate();
    if (latent_dim == 0) throw DataError("train_weldnet: latent_dim must be positive");

    WeldModel model;
    model.layout = split_windows(ds.time.n_steps, n_windows);
    model.latent_dim = latent_dim;
    model.delta_t = ds.time.dt();
    model.coder_kind = kind;
    model.config = cfg;
    model.windows.resize(n_windows);

    const TrajectorySplit split = split_dataset(ds, cfg.test_fraction);
    if (split.train.empty()) throw DataError("train_weldnet: empty training split");

    const bool joint = cfg.variant == AblationVariant::joint_accumulate ||
                       cfg.variant == AblationVariant::joint_displacement;
    const bool accumulation = cfg.variant == AblationVariant::joint_accumulate ||
                              cfg.variant == AblationVariant::separate_accumulate;
    // Separate variants train the propagator only in stage 3, for the
    // combined epoch budget of the joint variants.
    const std::size_t finetune_epochs =
        joint ? cfg.epochs_finetune : cfg.epochs_joint + cfg.epochs_finetune;

    std::vector<std::vector<EpochLoss>> window_traces(n_windows);
    const std::size_t workers = parallel_windows ? std::min(n_windows, thread_cap()) : 1;
    run_parallel_tasks(n_windows, workers, [&](std::size_t w) {
        const std::uint64_t wseed = derive_seed(cfg.seed, kWindowTag, w);
        WindowData data =
            extract_window(ds, split.train, model.layout.start(w), model.layout.end(w));
        TrainConfig stage_cfg = cfg;
        if (!joint) stage_cfg.lambda = 0.0;
        WindowModel wm =
            train_joint(data, latent_dim, stage_cfg, wseed, kind, window_traces[w]);
        wm.window_index = w;
        for (auto& row : window_traces[w]) row.window = w;
        train_finetune_propagator(wm, data, cfg, wseed, accumulation, finetune_epochs,
                                  window_traces[w]);
        model.windows[w] = std::move(wm);
    });

    std::vector<std::vector<EpochLoss>> boundary_traces(n_windows - 1);
    model.transcoders.resize(n_windows >= 1 ? n_windows - 1 : 0);
    run_parallel_tasks(n_windows - 1, workers, [&](std::size_t i) {
        const std::uint64_t bseed = derive_seed(cfg.seed, kBoundaryTag, i);
        const std::size_t n_train = split.train.size();
        Matrix start_states(n_train, ds.space.n_points);
        Matrix end_states(n_train, ds.space.n_points);
        for (std::size_t n = 0; n < n_train; ++n) {
            ds.copy_state(split.train[n], model.layout.start(i), start_states, n);
            ds.copy_state(split.train[n], model.layout.end(i), end_states, n);
        }
        model.transcoders[i] =
            train_transcoder(model.windows[i], model.windows[i + 1], start_states, end_states,
                             cfg, bseed, boundary_traces[i]);
        for (auto& row : boundary_traces[i]) row.window = i;
    });

    for (std::size_t w = 0; w < n_windows; ++w)
        model.traces.insert(model.traces.end(), window_traces[w].begin(), window_traces[w].end());
    for (std::size_t i = 0; i + 1 < n_windows; ++i)
        model.traces.insert(model.traces.end(), boundary_traces[i].begin(),
                            boundary_traces[i].end());
    return model;
}

std::vector<double> weld_infer(const WeldModel& model, const std::vector<double>& x0,
                               std::size_t k) {
    if (model.windows.empty()) throw DataError("weld_infer: empty model");
    const std::size_t last = model.layout.boundaries.back();
    if (k > last) throw DataError("weld_infer: time index out of range");
    const std::size_t target_window = model.layout.owner(k);
    LatentCode code = encode_with_time(model.windows[0], x0, 0.0);
    for (std::size_t j = 0; j < target_window; ++j) {
        const WindowModel& wm = model.windows[j];
        while (code.time_index < wm.k_end) code = propagate(wm, code);
        // transcode at the shared boundary; time is passed through unchanged
        Matrix pin(1, code.z.size() + 1);
        for (std::size_t i = 0; i < code.z.size(); ++i) pin(0, i) = code.z[i];
        pin(0, code.z.size()) = code.t;
        Matrix pout = residual_eval(model.transcoders[j], pin);
        for (std::size_t i = 0; i < code.z.size(); ++i) code.z[i] = pout(0, i);
    }
    const WindowModel& wm = model.windows[target_window];
    while (code.time_index < k) code = propagate(wm, code);
    return decode(wm, code);
}

void weld_predict_series(const WeldModel& model, const Matrix& x0,
                         const std::function<void(std::size_t, const Matrix&)>& emit) {
    if (model.windows.empty()) throw DataError("weld_predict_series: empty model");
    const std::size_t b = x0.rows();
    Matrix z = model.windows[0].coder.encode(x0);
    for (std::size_t w = 0; w < model.windows.size(); ++w) {
        const WindowModel& wm = model.windows[w];
        if (w == 0) emit(wm.k_start, wm.coder.decode(z));
        for (std::size_t k = wm.k_start; k < wm.k_end; ++k) {
            std::vector<double> ts(b, model.delta_t * static_cast<double>(k));
            Matrix pin = with_time_column(z, ts);
            Matrix pout = residual_eval(wm.propagator, pin);
            z = drop_time_column(pout);
            emit(k + 1, wm.coder.decode(z));
        }
        if (w + 1 < model.windows.size()) {
            std::vector<double> ts(b, model.delta_t * static_cast<double>(wm.k_end));
            Matrix pin = with_time_column(z, ts);
            Matrix pout = residual_eval(model.transcoders[w], pin);
            z = drop_time_column(pout);
        }
    }
}

}  // namespace weld
