#pragma once

#include <string>
#include <variant>
#include <vector>

#include "weld/baselines.hpp"
#include "weld/dataset.hpp"
#include "weld/weldnet.hpp"

namespace weld {

// ‖pred − truth‖₂ / ‖truth‖₂. A zero-norm truth is an error.
double relative_error(const std::vector<double>& pred, const std::vector<double>& truth);

enum class ReportKind { projection, operator_error };

// Reported errors are means over test samples of per-sample relative errors
// (not the relative error of means).
struct ErrorReport {
    ReportKind kind = ReportKind::projection;
    std::string model_tag;
    std::vector<double> per_time;  // length T
    // (parameter, relative error at final time) per test sample, sorted by
    // parameter
    std::vector<std::pair<double, double>> per_sample_final;
};

// Any trained predictor the toolkit can evaluate end to end.
using PredictorRef = std::variant<const WeldModel*, const HdpModel*, const TimeInputModel*>;

// Mean autoencoder reconstruction error at each time over the given test
// trajectories, using the window owning each time index (boundaries belong
// to the earlier window).
ErrorReport projection_error_vs_time(const WeldModel& model, const TrajectoryDataset& ds,
                                     const std::vector<std::size_t>& test,
                                     const std::string& model_tag);

// Mean end-to-end prediction error from the initial state at each time.
ErrorReport operator_error_vs_time(PredictorRef model, const TrajectoryDataset& ds,
                                   const std::vector<std::size_t>& test,
                                   const std::string& model_tag);

// Per-sample final-time errors keyed (and sorted) by trajectory parameter.
ErrorReport error_vs_parameter(PredictorRef model, const TrajectoryDataset& ds,
                               const std::vector<std::size_t>& test,
                               const std::string& model_tag);

// One CSV per report, deterministic ordering, model tag in the filename.
// Returns the written paths.
std::vector<std::string> emit_report_csv(const std::vector<ErrorReport>& reports,
                                         const std::string& out_dir,
                                         const TimeGrid* time = nullptr);

}  // namespace weld
