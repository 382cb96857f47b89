#include "weld/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "weld/csv.hpp"
#include "weld/error.hpp"

namespace weld {

namespace fs = std::filesystem;

double relative_error(const std::vector<double>& pred, const std::vector<double>& truth) {
    if (pred.size() != truth.size()) throw DataError("relative_error: length mismatch");
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        diff2 += d * d;
        norm2 += truth[i] * truth[i];
    }
    if (norm2 == 0.0) throw DataError("relative_error: zero-norm truth");
    return std::sqrt(diff2 / norm2);
}

namespace {

double batch_row_relative_error(const Matrix& pred, std::size_t row, const float* truth,
                                std::size_t dim) {
    double diff2 = 0.0, norm2 = 0.0;
    const double* p = pred.row(row);
    for (std::size_t c = 0; c < dim; ++c) {
        const double t = truth[c];
        diff2 += (p[c] - t) * (p[c] - t);
        norm2 += t * t;
    }
    if (norm2 == 0.0) throw DataError("relative_error: zero-norm truth");
    return std::sqrt(diff2 / norm2);
}

Matrix gather_states(const TrajectoryDataset& ds, const std::vector<std::size_t>& test,
                     std::size_t t) {
    Matrix x(test.size(), ds.space.n_points);
    for (std::size_t n = 0; n < test.size(); ++n) ds.copy_state(test[n], t, x, n);
    return x;
}

// Fills report.per_time and the final-time per-sample errors from a
// predictor that emits decoded states per time index.
void fill_operator_report(ErrorReport& report, const TrajectoryDataset& ds,
                          const std::vector<std::size_t>& test, PredictorRef model) {
    const std::size_t T = ds.time.n_steps;
    const std::size_t dim = ds.space.n_points;
    report.per_time.assign(T, 0.0);
    std::vector<double> final_errors(test.size(), 0.0);

    Matrix x0 = gather_states(ds, test, 0);
    const auto record = [&](std::size_t k, const Matrix& pred) {
        double mean = 0.0;
        for (std::size_t n = 0; n < test.size(); ++n) {
            const double err = batch_row_relative_error(pred, n, ds.state(test[n], k), dim);
            mean += err;
            if (k + 1 == T) final_errors[n] = err;
        }
        report.per_time[k] = mean / static_cast<double>(test.size());
    };

    if (std::holds_alternative<const WeldModel*>(model)) {
        weld_predict_series(*std::get<const WeldModel*>(model), x0, record);
    } else if (std::holds_alternative<const HdpModel*>(model)) {
        const HdpModel* hdp = std::get<const HdpModel*>(model);
        Matrix x = x0;
        record(0, x);
        for (std::size_t k = 1; k < T; ++k) {
            x = mlp_eval(hdp->net, x);
            record(k, x);
        }
    } else {
        const TimeInputModel* ti = std::get<const TimeInputModel*>(model);
        for (std::size_t k = 0; k < T; ++k)
            record(k, time_input_predict(*ti, x0, ds.time.time(k)));
    }

    report.per_sample_final.clear();
    for (std::size_t n = 0; n < test.size(); ++n)
        report.per_sample_final.emplace_back(ds.params[test[n]], final_errors[n]);
    std::stable_sort(report.per_sample_final.begin(), report.per_sample_final.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
}

}  // namespace

ErrorReport projection_error_vs_time(const WeldModel& model, const TrajectoryDataset& ds,
                                     const std::vector<std::size_t>& test,
                                     const std::string& model_tag) {
    if (test.empty()) throw DataError("projection_error_vs_time: empty test set");
    if (model.windows.empty()) throw DataError("projection_error_vs_time: empty model");
    if (model.windows[0].coder.ambient_dim() != ds.space.n_points)
        throw DataError("projection_error_vs_time: model/dataset dimension mismatch");
    const std::size_t T = ds.time.n_steps;
    ErrorReport report;
    report.kind = ReportKind::projection;
    report.model_tag = model_tag;
    report.per_time.assign(T, 0.0);
    std::vector<double> final_errors(test.size(), 0.0);
    for (std::size_t k = 0; k < T; ++k) {
        const WindowModel& wm = model.windows[model.layout.owner(k)];
        Matrix x = gather_states(ds, test, k);
        Matrix recon = wm.coder.decode(wm.coder.encode(x));
        double mean = 0.0;
        for (std::size_t n = 0; n < test.size(); ++n) {
            const double err = batch_row_relative_error(recon, n, ds.state(test[n], k),
                                                        ds.space.n_points);
            mean += err;
            if (k + 1 == T) final_errors[n] = err;
        }
        report.per_time[k] = mean / static_cast<double>(test.size());
    }
    for (std::size_t n = 0; n < test.size(); ++n)
        report.per_sample_final.emplace_back(ds.params[test[n]], final_errors[n]);
    std::stable_sort(report.per_sample_final.begin(), report.per_sample_final.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return report;
}

ErrorReport operator_error_vs_time(PredictorRef model, const TrajectoryDataset& ds,
                                   const std::vector<std::size_t>& test,
                                   const std::string& model_tag) {
    if (test.empty()) throw DataError("operator_error_vs_time: empty test set");
    ErrorReport report;
    report.kind = ReportKind::operator_error;
    report.model_tag = model_tag;
    fill_operator_report(report, ds, test, model);
    return report;
}

ErrorReport error_vs_parameter(PredictorRef model, const TrajectoryDataset& ds,
                               const std::vector<std::size_t>& test,
                               const std::string& model_tag) {
    // the per-parameter view is the final-time column of the operator report
    ErrorReport report = operator_error_vs_time(model, ds, test, model_tag);
    report.per_time.clear();
    return report;
}

std::vector<std::string> emit_report_csv(const std::vector<ErrorReport>& reports,
                                         const std::string& out_dir, const TimeGrid* time) {
    std::vector<std::string> written;
    if (reports.empty()) return written;
    fs::create_directories(out_dir);
    for (const auto& report : reports) {
        if (!report.per_time.empty()) {
            const std::string kind =
                report.kind == ReportKind::projection ? "projection" : "operator";
            const std::string path = out_dir + "/" + report.model_tag + "_" + kind + "_vs_time.csv";
            std::ofstream out(path);
            if (!out) throw DataError("emit_report_csv: cannot open " + path);
            out << "time_index,time,mean_relative_error\n";
            for (std::size_t k = 0; k < report.per_time.size(); ++k) {
                const double t = time ? time->time(k) : static_cast<double>(k);
                out << k << ',' << csv_double(t) << ',' << csv_double(report.per_time[k]) << '\n';
            }
            if (!out) throw DataError("emit_report_csv: write failed for " + path);
            written.push_back(path);
        }
        if (!report.per_sample_final.empty()) {
            const std::string path =
                out_dir + "/" + report.model_tag + "_error_vs_parameter.csv";
            std::ofstream out(path);
            if (!out) throw DataError("emit_report_csv: cannot open " + path);
            out << "parameter,final_time_relative_error\n";
            for (const auto& [param, err] : report.per_sample_final)
                out << csv_double(param) << ',' << csv_double(err) << '\n';
            if (!out) throw DataError("emit_report_csv: write failed for " + path);
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace weld
