#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weld/dataset.hpp"
#include "weld/weldnet.hpp"

namespace weld {

// High Dimensional Propagator: a single non-residual net x(t) ↦ x(t+Δt)
// learned directly in R^D (displacement training destabilises at this
// dimension, so the state is predicted directly).
struct HdpModel {
    MlpNet net;  // D → D
    double delta_t = 0.0;
};

// Baseline that maps (x(0), t) ↦ x(t); only queried from initial states.
struct TimeInputModel {
    MlpNet net;  // D+1 → D, raw t appended to the input
    double t_end = 0.0;
};

struct BaselineConfig {
    std::size_t width = 1000;
    std::size_t depth = 3;
    std::size_t batch_size = 32;
    double lr = 1e-4;
    std::size_t epochs = 300;
    PlateauSchedule schedule;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
};

HdpModel train_hdp(const TrajectoryDataset& ds, const BaselineConfig& cfg,
                   std::vector<EpochLoss>& trace);

// k-fold composition of the one-step map.
std::vector<double> hdp_rollout(const HdpModel& m, const std::vector<double>& x0, std::size_t k);
Matrix hdp_rollout(const HdpModel& m, const Matrix& x0, std::size_t k);

TimeInputModel train_time_input(const TrajectoryDataset& ds, const BaselineConfig& cfg,
                                std::vector<EpochLoss>& trace);

std::vector<double> time_input_predict(const TimeInputModel& m, const std::vector<double>& x0,
                                       double t);
Matrix time_input_predict(const TimeInputModel& m, const Matrix& x0, double t);

// Model directories for the baselines share the checkpoint container with
// kind tags "hdp" / "time-input".
void save_hdp_model(const std::string& dir, const HdpModel& model,
                    const std::vector<EpochLoss>& trace, std::uint64_t seed);
HdpModel load_hdp_model(const std::string& dir);
void save_time_input_model(const std::string& dir, const TimeInputModel& model,
                           const std::vector<EpochLoss>& trace, std::uint64_t seed);
TimeInputModel load_time_input_model(const std::string& dir);

}  // namespace weld
