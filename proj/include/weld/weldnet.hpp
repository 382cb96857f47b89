#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "weld/coder.hpp"
#include "weld/dataset.hpp"
#include "weld/optim.hpp"
#include "weld/windows.hpp"

namespace weld {

// §4.5 training-algorithm variants:
//   i   joint AE+propagator, then accumulation finetune      (default)
//   ii  joint AE+propagator, then displacement finetune
//   iii separate AE, then accumulation-trained propagator
//   iv  separate AE, then displacement-trained propagator
enum class AblationVariant { joint_accumulate, joint_displacement, separate_accumulate,
                             separate_displacement };

AblationVariant parse_variant(const std::string& name);  // "i".."iv"
std::string variant_name(AblationVariant v);

struct TrainConfig {
    double lambda = 0.1;
    std::size_t batch_size = 32;
    double lr = 1e-4;
    std::size_t epochs_joint = 300;
    std::size_t epochs_finetune = 150;
    std::size_t epochs_transcoder = 300;
    PlateauSchedule schedule;  // copied fresh at the start of every stage
    AblationVariant variant = AblationVariant::joint_accumulate;
    std::uint64_t seed = 0;
    std::size_t coder_width = 500;
    std::size_t coder_depth = 3;
    std::size_t prop_width = 200;
    std::size_t prop_depth = 3;
    double test_fraction = 0.2;

    void validate() const;
};

// Latent code (z, t); t always lies on the time grid during training and is
// advanced by exactly Δt per propagator application. The index is the source
// of truth, t = time_index·Δt.
struct LatentCode {
    std::vector<double> z;
    std::size_t time_index = 0;
    double t = 0.0;
};

struct WindowModel {
    std::size_t window_index = 0;
    std::size_t k_start = 0;  // first/last time-grid index of the window
    std::size_t k_end = 0;
    double delta_t = 0.0;
    CoderPair coder;
    ResidualNet propagator;  // over R^{d+1}
};

struct EpochLoss {
    std::string stage;
    std::size_t window = 0;  // window or boundary index
    std::size_t epoch = 0;
    double loss_ae = 0.0;
    double loss_prop = 0.0;
    double total = 0.0;
    double lr = 0.0;
};

struct WeldModel {
    WindowLayout layout;
    std::vector<WindowModel> windows;
    std::vector<ResidualNet> transcoders;  // W−1, over R^{d+1}
    std::size_t latent_dim = 0;
    double delta_t = 0.0;
    CoderKind coder_kind = CoderKind::neural;
    TrainConfig config;
    std::vector<EpochLoss> traces;
};

// --- single-code operations ---------------------------------------------

// z = encoder(x) with the time coordinate set (not learned). t must lie in
// the window's closed range.
LatentCode encode_with_time(const WindowModel& wm, const std::vector<double>& x, double t);

// One step: z-part from the displacement net, time advanced by exactly Δt.
// Stepping past the window end is an error.
LatentCode propagate(const WindowModel& wm, const LatentCode& code);

std::vector<double> decode(const WindowModel& wm, const LatentCode& code);

// --- training -------------------------------------------------------------

// Snapshots of one closed window for the training trajectories, row-major
// over (trajectory, local time index).
struct WindowData {
    Matrix states;  // (n_traj·t_count) × D
    std::size_t n_traj = 0;
    std::size_t t_count = 0;  // steps + 1
    std::size_t k_start = 0;
    double delta_t = 0.0;

    std::size_t row(std::size_t n, std::size_t j) const { return n * t_count + j; }
    double time_of(std::size_t j) const {
        return delta_t * static_cast<double>(k_start + j);
    }
};

WindowData extract_window(const TrajectoryDataset& ds, const std::vector<std::size_t>& traj,
                          std::size_t k_start, std::size_t k_end);

// Stage 2: minimise L_ae + λ·L_prop by minibatch AdamW; propagator-loss
// gradients flow into the encoder. λ=0 degenerates to pure autoencoder
// training and leaves the propagator at its initialisation. For the PCA
// coder the reduction is fitted directly and only the propagator trains.
WindowModel train_joint(const WindowData& data, std::size_t latent_dim, const TrainConfig& cfg,
                        std::uint64_t window_seed, CoderKind kind,
                        std::vector<EpochLoss>& trace);

// Stage 3: encoder and decoder frozen. `accumulation` selects the rollout
// loss over all lengths s=1..𝐓ᵢ from the window start (Eq.-style averaging);
// otherwise the one-step displacement loss is used.
void train_finetune_propagator(WindowModel& wm, const WindowData& data, const TrainConfig& cfg,
                               std::uint64_t window_seed, bool accumulation, std::size_t epochs,
                               std::vector<EpochLoss>& trace);

// Stage 4: transcoder regression from window i's rolled-out boundary codes
// to window i+1's encodings; all other nets frozen.
ResidualNet train_transcoder(const WindowModel& wm, const WindowModel& wm_next,
                             const Matrix& start_states, const Matrix& end_states,
                             const TrainConfig& cfg, std::uint64_t boundary_seed,
                             std::vector<EpochLoss>& trace);

// All four stages. Stages 2–3 are independent across windows and stage 4
// across boundaries; `parallel_windows` runs them on a worker pool with
// bit-identical results to the serial order.
WeldModel train_weldnet(const TrajectoryDataset& ds, CoderKind kind, std::size_t n_windows,
                        std::size_t latent_dim, const TrainConfig& cfg,
                        bool parallel_windows = false);

// --- inference ------------------------------------------------------------

// Eq.-style composition: encode with window 1 at t=0, roll and transcode
// through earlier windows, roll the owning window to k, decode. A boundary
// index belongs to the earlier window.
std::vector<double> weld_infer(const WeldModel& model, const std::vector<double>& x0,
                               std::size_t k);

// Batched rollout emitting the decoded prediction at every time index once,
// using the same ownership convention as weld_infer.
void weld_predict_series(const WeldModel& model, const Matrix& x0,
                         const std::function<void(std::size_t, const Matrix&)>& emit);

}  // namespace weld
