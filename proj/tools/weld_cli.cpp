// Command-line driver: dataset generation, training, evaluation, intrinsic
// dimension reports, and table aggregation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "weld/baselines.hpp"
#include "weld/csv.hpp"
#include "weld/evalkit.hpp"
#include "weld/families.hpp"
#include "weld/id_estimate.hpp"
#include "weld/weldnet.hpp"
#include "weld/weldnet_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace weld;

#define WELD_PARSE(app, argc, argv)                                   \
    try {                                                             \
        (app).parse((argc), (argv));                                  \
    } catch (const CLI::CallForHelp& e) {                             \
        (app).exit(e);                                                \
        return 0;                                                     \
    } catch (const CLI::ParseError& e) {                              \
        (app).exit(e);                                                \
        return 2;                                                     \
    }

namespace {

json load_config_file(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1]);
            if (!in) throw DataError(std::string("cannot open config file ") + argv[i + 1]);
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw DataError(std::string("malformed config file: ") + e.what());
            }
            return j;
        }
    }
    return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_sidecar(const std::string& out_path, const json& resolved) {
    const fs::path p(out_path);
    fs::path dir = p.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    fs::path sidecar = fs::is_directory(p) || p.extension().empty()
                           ? p / "run_config.json"
                           : dir / (p.stem().string() + ".run_config.json");
    if (sidecar.has_parent_path()) fs::create_directories(sidecar.parent_path());
    std::ofstream out(sidecar);
    if (!out) throw DataError("cannot write config sidecar " + sidecar.string());
    out << resolved.dump(2) << "\n";
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::size_t>(std::stoul(item)));
    }
    return out;
}

int cmd_gen_data(int argc, char** argv, const json& file_cfg) {
    CLI::App app{"generate a trajectory dataset"};
    std::string family_name_ = "tscale", out_path = "dataset.wtrj", config_path;
    std::size_t n = 500, steps = 301, points = 512, substeps = 8;
    std::uint64_t seed = 0;
    from_config(file_cfg, "family", family_name_);
    from_config(file_cfg, "n", n);
    from_config(file_cfg, "steps", steps);
    from_config(file_cfg, "points", points);
    from_config(file_cfg, "substeps", substeps);
    from_config(file_cfg, "seed", seed);
    from_config(file_cfg, "out", out_path);
    app.add_option("--family", family_name_, "family: tscale tshift bscale bshift kscale kshift");
    app.add_option("--n", n, "number of trajectories");
    app.add_option("--steps", steps, "time steps");
    app.add_option("--points", points, "spatial points");
    app.add_option("--substeps", substeps, "internal solver substeps per output step");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_path, "output dataset path");
    app.add_option("--config", config_path, "JSON config (flags win)");
    WELD_PARSE(app, argc, argv);

    const Family family = parse_family(family_name_);
    const TimeGrid time = family_time_grid(family, steps);
    const SpatialGrid grid = family_spatial_grid(family, points);
    json resolved{{"command", "gen-data"}, {"family", family_name_}, {"n", n},
                  {"steps", steps},        {"points", points},       {"substeps", substeps},
                  {"seed", seed},          {"out", out_path},        {"t_end", time.t_end}};
    write_sidecar(out_path, resolved);

    TrajectoryDataset ds = gen_dataset(family, n, time, grid, seed, substeps);
    dataset_write(ds, out_path);
    std::cerr << "wrote " << out_path << " (" << n << "x" << steps << "x" << points << ")\n";
    return 0;
}

int cmd_train(int argc, char** argv, const json& file_cfg) {
    CLI::App app{"train a model"};
    std::string data_path, out_dir = "model", coder = "ff", baseline, ablation = "i", config_path;
    std::size_t windows = 4, latent = 4;
    bool parallel = false;
    TrainConfig cfg;
    BaselineConfig bcfg;
    from_config(file_cfg, "data", data_path);
    from_config(file_cfg, "out", out_dir);
    from_config(file_cfg, "coder", coder);
    from_config(file_cfg, "baseline", baseline);
    from_config(file_cfg, "ablation", ablation);
    from_config(file_cfg, "windows", windows);
    from_config(file_cfg, "latent", latent);
    from_config(file_cfg, "parallel_windows", parallel);
    if (file_cfg.contains("train")) cfg = train_config_from_json(file_cfg.at("train"));
    app.add_option("--data", data_path, "dataset path")->required();
    app.add_option("--out", out_dir, "output model directory");
    app.add_option("--coder", coder, "coder kind: ff or pca");
    app.add_option("--baseline", baseline, "train a baseline instead: hdp or time-input");
    app.add_option("--windows", windows, "number of windows");
    app.add_option("--latent", latent, "latent dimension d");
    app.add_option("--ablation", ablation, "training variant: i ii iii iv");
    app.add_flag("--parallel-windows", parallel, "train windows on a worker pool");
    app.add_option("--seed", cfg.seed, "training seed");
    app.add_option("--epochs-joint", cfg.epochs_joint, "stage-2 epochs");
    app.add_option("--epochs-finetune", cfg.epochs_finetune, "stage-3 epochs");
    app.add_option("--epochs-transcoder", cfg.epochs_transcoder, "stage-4 epochs");
    app.add_option("--batch", cfg.batch_size, "batch size");
    app.add_option("--lr", cfg.lr, "learning rate");
    app.add_option("--lambda", cfg.lambda, "propagator loss weight");
    app.add_option("--coder-width", cfg.coder_width, "encoder/decoder hidden width");
    app.add_option("--prop-width", cfg.prop_width, "propagator/transcoder hidden width");
    app.add_option("--baseline-width", bcfg.width, "baseline hidden width");
    app.add_option("--baseline-epochs", bcfg.epochs, "baseline epochs");
    app.add_option("--config", config_path, "JSON config (flags win)");
    WELD_PARSE(app, argc, argv);

    cfg.variant = parse_variant(ablation);
    TrajectoryDataset ds = dataset_read(data_path);

    json resolved{{"command", "train"},   {"data", data_path}, {"out", out_dir},
                  {"windows", windows},   {"latent", latent},  {"coder", coder},
                  {"baseline", baseline}, {"ablation", ablation},
                  {"parallel_windows", parallel}, {"train", train_config_to_json(cfg)}};
    fs::create_directories(out_dir);
    write_sidecar(out_dir, resolved);

    if (!baseline.empty()) {
        bcfg.seed = cfg.seed;
        bcfg.batch_size = cfg.batch_size;
        bcfg.lr = cfg.lr;
        std::vector<EpochLoss> trace;
        if (baseline == "hdp") {
            HdpModel model = train_hdp(ds, bcfg, trace);
            save_hdp_model(out_dir, model, trace, bcfg.seed);
        } else if (baseline == "time-input") {
            TimeInputModel model = train_time_input(ds, bcfg, trace);
            save_time_input_model(out_dir, model, trace, bcfg.seed);
        } else {
            throw UsageError("unknown baseline '" + baseline + "' (valid: hdp, time-input)");
        }
        std::cerr << "wrote baseline model " << out_dir << "\n";
        return 0;
    }

    WeldModel model =
        train_weldnet(ds, parse_coder_kind(coder), windows, latent, cfg, parallel);
    save_weld_model(out_dir, model);
    std::cerr << "wrote model " << out_dir << "\n";
    return 0;
}

ErrorReport eval_weld(const std::string& model_dir, const TrajectoryDataset& ds,
                      const std::string& out_dir, const std::string& tag) {
    WeldModel model = load_weld_model(model_dir);
    if (model.windows.at(0).coder.ambient_dim() != ds.space.n_points)
        throw DataError("eval: model expects D=" +
                        std::to_string(model.windows[0].coder.ambient_dim()) +
                        ", dataset has D=" + std::to_string(ds.space.n_points));
    if (model.layout.boundaries.back() != ds.time.n_steps - 1)
        throw DataError("eval: model trained for T=" +
                        std::to_string(model.layout.boundaries.back() + 1) +
                        ", dataset has T=" + std::to_string(ds.time.n_steps));
    const TrajectorySplit split = split_dataset(ds, model.config.test_fraction);
    ErrorReport proj = projection_error_vs_time(model, ds, split.test, tag);
    ErrorReport op = operator_error_vs_time(&model, ds, split.test, tag);
    emit_report_csv({proj, op}, out_dir, &ds.time);
    return op;
}

int cmd_eval(int argc, char** argv, const json& file_cfg) {
    CLI::App app{"evaluate a model against a dataset"};
    std::string model_dir, data_path, out_dir = "reports", config_path, table_times;
    from_config(file_cfg, "model", model_dir);
    from_config(file_cfg, "data", data_path);
    from_config(file_cfg, "out", out_dir);
    app.add_option("--model", model_dir, "model directory")->required();
    app.add_option("--data", data_path, "dataset path")->required();
    app.add_option("--out", out_dir, "report output directory");
    app.add_option("--table-times", table_times,
                   "comma-separated time indices for a paper-style table row");
    app.add_option("--config", config_path, "JSON config (flags win)");
    WELD_PARSE(app, argc, argv);

    TrajectoryDataset ds = dataset_read(data_path);
    const std::string tag = fs::path(model_dir).filename().string();
    json resolved{{"command", "eval"}, {"model", model_dir}, {"data", data_path},
                  {"out", out_dir},    {"tag", tag}};
    fs::create_directories(out_dir);
    write_sidecar(out_dir, resolved);

    std::ifstream manifest_in(model_dir + "/manifest.json");
    if (!manifest_in) throw DataError("eval: no manifest.json in " + model_dir);
    json manifest;
    manifest_in >> manifest;
    const std::string format = manifest.value("format", "");

    ErrorReport op;
    if (format == "weld-model-1") {
        op = eval_weld(model_dir, ds, out_dir, tag);
    } else if (format == "weld-baseline-1") {
        const std::string kind = manifest.value("kind", "");
        const TrajectorySplit split = split_dataset(ds, 0.2);
        if (kind == "hdp") {
            HdpModel model = load_hdp_model(model_dir);
            if (model.net.spec.input_dim != ds.space.n_points)
                throw DataError("eval: model/dataset dimension mismatch");
            op = operator_error_vs_time(&model, ds, split.test, tag);
        } else {
            TimeInputModel model = load_time_input_model(model_dir);
            if (model.net.spec.input_dim != ds.space.n_points + 1)
                throw DataError("eval: model/dataset dimension mismatch");
            op = operator_error_vs_time(&model, ds, split.test, tag);
        }
        ErrorReport params = op;
        params.per_time.clear();
        emit_report_csv({op, params}, out_dir, &ds.time);
    } else {
        throw DataError("eval: unrecognised model directory " + model_dir);
    }

    if (!table_times.empty()) {
        const auto cols = parse_index_list(table_times);
        const std::string path = out_dir + "/" + tag + "_table_row.csv";
        std::ofstream out(path);
        out << "model";
        for (std::size_t c : cols) out << ',' << c;
        out << '\n' << tag;
        for (std::size_t c : cols) {
            if (c >= op.per_time.size()) throw DataError("eval: table time index out of range");
            out << ',' << csv_double(op.per_time[c]);
        }
        out << '\n';
    }
    std::cout << "final_time_mean_relative_error " << csv_double(op.per_time.back()) << "\n";
    return 0;
}

int cmd_id(int argc, char** argv, const json& file_cfg) {
    CLI::App app{"intrinsic dimension report"};
    std::string data_path, out_path = "id_report.csv", method = "mle", times_text, config_path;
    bool all_times = false;
    std::size_t subsample = 50000, k = 20;
    std::uint64_t seed = 0;
    from_config(file_cfg, "data", data_path);
    from_config(file_cfg, "out", out_path);
    from_config(file_cfg, "method", method);
    app.add_option("--data", data_path, "dataset path")->required();
    app.add_option("--times", times_text, "comma-separated time indices");
    app.add_flag("--all-times", all_times, "estimate on the pooled cloud of all times");
    app.add_option("--subsample", subsample, "subsample size for the all-times estimate");
    app.add_option("--method", method, "estimator: mle or twonn");
    app.add_option("--k", k, "neighbour count for mle");
    app.add_option("--seed", seed, "subsample seed");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--config", config_path, "JSON config (flags win)");
    WELD_PARSE(app, argc, argv);

    TrajectoryDataset ds = dataset_read(data_path);
    json resolved{{"command", "id"},   {"data", data_path},   {"times", times_text},
                  {"all_times", all_times}, {"subsample", subsample}, {"method", method},
                  {"k", k},            {"seed", seed},        {"out", out_path}};
    write_sidecar(out_path, resolved);
    const auto rows =
        dataset_id_report(ds, parse_index_list(times_text), all_times, subsample, seed, method, k);
    write_id_report_csv(rows, out_path);
    for (const auto& r : rows)
        std::cout << r.method << " " << r.slice << " " << csv_double(r.value) << "\n";
    return 0;
}

int cmd_report(int argc, char** argv, const json& file_cfg) {
    CLI::App app{"aggregate *_operator_vs_time.csv reports into one table"};
    std::string dir = "reports", out_path = "table.csv";
    std::string times_text = "30,60,90,120,150,180,210,240,270,300";
    std::string config_path;
    from_config(file_cfg, "dir", dir);
    from_config(file_cfg, "out", out_path);
    from_config(file_cfg, "times", times_text);
    app.add_option("--dir", dir, "directory of eval CSVs");
    app.add_option("--times", times_text, "time-index columns");
    app.add_option("--out", out_path, "combined table path");
    app.add_option("--config", config_path, "JSON config (flags win)");
    WELD_PARSE(app, argc, argv);

    const auto cols = parse_index_list(times_text);
    std::map<std::string, std::vector<double>> table;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        const std::string suffix = "_operator_vs_time.csv";
        if (name.size() <= suffix.size() ||
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        const std::string tag = name.substr(0, name.size() - suffix.size());
        std::ifstream in(entry.path());
        std::string line;
        std::getline(in, line);  // header
        std::vector<double> per_time;
        while (std::getline(in, line)) {
            const auto last = line.rfind(',');
            if (last == std::string::npos) continue;
            per_time.push_back(std::stod(line.substr(last + 1)));
        }
        std::vector<double> row;
        for (std::size_t c : cols) {
            if (c >= per_time.size())
                throw DataError("report: time index " + std::to_string(c) + " out of range in " +
                                name);
            row.push_back(per_time[c]);
        }
        table[tag] = row;
    }
    if (table.empty()) throw DataError("report: no *_operator_vs_time.csv files in " + dir);
    std::ofstream out(out_path);
    if (!out) throw DataError("report: cannot open " + out_path);
    out << "model";
    for (std::size_t c : cols) out << ',' << c;
    out << '\n';
    for (const auto& [tag, row] : table) {
        out << tag;
        for (double v : row) out << ',' << csv_double(v);
        out << '\n';
    }
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        if (argc < 2) {
            std::cerr << "usage: weld <gen-data|train|eval|id|report> [flags]\n"
                         "       weld <subcommand> --help\n";
            return 2;
        }
        const std::string sub = argv[1];
        json file_cfg = load_config_file(argc, argv);
        if (sub == "gen-data") return cmd_gen_data(argc - 1, argv + 1, file_cfg);
        if (sub == "train") return cmd_train(argc - 1, argv + 1, file_cfg);
        if (sub == "eval") return cmd_eval(argc - 1, argv + 1, file_cfg);
        if (sub == "id") return cmd_id(argc - 1, argv + 1, file_cfg);
        if (sub == "report") return cmd_report(argc - 1, argv + 1, file_cfg);
        std::cerr << "unknown subcommand '" << sub << "'\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
