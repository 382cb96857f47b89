#include "weld/weldnet_io.hpp"

#include <filesystem>
#include <fstream>

#include "weld/checkpoint.hpp"
#include "weld/error.hpp"

namespace weld {

namespace fs = std::filesystem;
using nlohmann::json;

json train_config_to_json(const TrainConfig& cfg) {
    return json{{"lambda", cfg.lambda},
                {"batch_size", cfg.batch_size},
                {"lr", cfg.lr},
                {"epochs_joint", cfg.epochs_joint},
                {"epochs_finetune", cfg.epochs_finetune},
                {"epochs_transcoder", cfg.epochs_transcoder},
                {"schedule",
                 {{"factor", cfg.schedule.factor},
                  {"patience", cfg.schedule.patience},
                  {"min_lr", cfg.schedule.min_lr}}},
                {"variant", variant_name(cfg.variant)},
                {"seed", cfg.seed},
                {"coder_width", cfg.coder_width},
                {"coder_depth", cfg.coder_depth},
                {"prop_width", cfg.prop_width},
                {"prop_depth", cfg.prop_depth},
                {"test_fraction", cfg.test_fraction}};
}

TrainConfig train_config_from_json(const json& j) {
    TrainConfig cfg;
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.lr = j.value("lr", cfg.lr);
    cfg.epochs_joint = j.value("epochs_joint", cfg.epochs_joint);
    cfg.epochs_finetune = j.value("epochs_finetune", cfg.epochs_finetune);
    cfg.epochs_transcoder = j.value("epochs_transcoder", cfg.epochs_transcoder);
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        cfg.schedule.factor = s.value("factor", cfg.schedule.factor);
        cfg.schedule.patience = s.value("patience", cfg.schedule.patience);
        cfg.schedule.min_lr = s.value("min_lr", cfg.schedule.min_lr);
    }
    cfg.variant = parse_variant(j.value("variant", "i"));
    cfg.seed = j.value("seed", cfg.seed);
    cfg.coder_width = j.value("coder_width", cfg.coder_width);
    cfg.coder_depth = j.value("coder_depth", cfg.coder_depth);
    cfg.prop_width = j.value("prop_width", cfg.prop_width);
    cfg.prop_depth = j.value("prop_depth", cfg.prop_depth);
    cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
    return cfg;
}

namespace {

json traces_to_json(const std::vector<EpochLoss>& traces) {
    json rows = json::array();
    for (const auto& t : traces)
        rows.push_back({{"stage", t.stage},
                        {"window", t.window},
                        {"epoch", t.epoch},
                        {"loss_ae", t.loss_ae},
                        {"loss_prop", t.loss_prop},
                        {"total", t.total},
                        {"lr", t.lr}});
    return rows;
}

std::vector<EpochLoss> traces_from_json(const json& rows) {
    std::vector<EpochLoss> traces;
    for (const auto& r : rows)
        traces.push_back({r.at("stage").get<std::string>(), r.at("window").get<std::size_t>(),
                          r.at("epoch").get<std::size_t>(), r.at("loss_ae").get<double>(),
                          r.at("loss_prop").get<double>(), r.at("total").get<double>(),
                          r.at("lr").get<double>()});
    return traces;
}

}  // namespace

void save_weld_model(const std::string& dir, const WeldModel& model) {
    fs::create_directories(dir);
    const std::size_t n_windows = model.windows.size();
    json manifest{{"format", "weld-model-1"},
                  {"coder_kind", coder_kind_name(model.coder_kind)},
                  {"latent_dim", model.latent_dim},
                  {"delta_t", model.delta_t},
                  {"boundaries", model.layout.boundaries},
                  {"n_windows", n_windows},
                  {"config", train_config_to_json(model.config)},
                  {"loss_traces", traces_to_json(model.traces)}};

    for (std::size_t w = 0; w < n_windows; ++w) {
        const WindowModel& wm = model.windows[w];
        CheckpointMeta meta;
        meta.window = static_cast<int>(w);
        meta.seed = model.config.seed;
        meta.stage = "final";
        if (wm.coder.kind == CoderKind::neural) {
            meta.role = "encoder";
            save_mlp_checkpoint(dir + "/enc_w" + std::to_string(w) + ".wnet", wm.coder.encoder,
                                meta);
            meta.role = "decoder";
            save_mlp_checkpoint(dir + "/dec_w" + std::to_string(w) + ".wnet", wm.coder.decoder,
                                meta);
        } else {
            meta.role = "pca";
            save_pca_checkpoint(dir + "/pca_w" + std::to_string(w) + ".wnet", wm.coder.pca, meta);
        }
        meta.role = "propagator";
        save_mlp_checkpoint(dir + "/prop_w" + std::to_string(w) + ".wnet", wm.propagator.inner,
                            meta);
    }
    for (std::size_t i = 0; i + 1 < n_windows; ++i) {
        CheckpointMeta meta;
        meta.role = "transcoder";
        meta.window = static_cast<int>(i);
        meta.seed = model.config.seed;
        meta.stage = "final";
        save_mlp_checkpoint(dir + "/trans_" + std::to_string(i) + ".wnet",
                            model.transcoders[i].inner, meta);
    }

    std::ofstream out(dir + "/manifest.json");
    if (!out) throw DataError("save_weld_model: cannot write manifest in " + dir);
    out << manifest.dump(2) << "\n";
}

WeldModel load_weld_model(const std::string& dir) {
    std::ifstream in(dir + "/manifest.json");
    if (!in) throw DataError("load_weld_model: no manifest.json in " + dir);
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw DataError(std::string("load_weld_model: malformed manifest: ") + e.what());
    }
    if (manifest.value("format", "") != "weld-model-1")
        throw DataError("load_weld_model: unsupported manifest format");

    WeldModel model;
    model.coder_kind = parse_coder_kind(manifest.at("coder_kind").get<std::string>());
    model.latent_dim = manifest.at("latent_dim").get<std::size_t>();
    model.delta_t = manifest.at("delta_t").get<double>();
    model.layout.boundaries = manifest.at("boundaries").get<std::vector<std::size_t>>();
    model.config = train_config_from_json(manifest.at("config"));
    model.traces = traces_from_json(manifest.at("loss_traces"));

    const std::size_t n_windows = manifest.at("n_windows").get<std::size_t>();
    model.windows.resize(n_windows);
    for (std::size_t w = 0; w < n_windows; ++w) {
        WindowModel& wm = model.windows[w];
        wm.window_index = w;
        wm.k_start = model.layout.start(w);
        wm.k_end = model.layout.end(w);
        wm.delta_t = model.delta_t;
        wm.coder.kind = model.coder_kind;
        if (model.coder_kind == CoderKind::neural) {
            wm.coder.encoder = load_mlp_checkpoint(dir + "/enc_w" + std::to_string(w) + ".wnet");
            wm.coder.decoder = load_mlp_checkpoint(dir + "/dec_w" + std::to_string(w) + ".wnet");
        } else {
            wm.coder.pca = load_pca_checkpoint(dir + "/pca_w" + std::to_string(w) + ".wnet");
        }
        wm.propagator.inner =
            load_mlp_checkpoint(dir + "/prop_w" + std::to_string(w) + ".wnet");
    }
    model.transcoders.resize(n_windows > 0 ? n_windows - 1 : 0);
    for (std::size_t i = 0; i + 1 < n_windows; ++i)
        model.transcoders[i].inner =
            load_mlp_checkpoint(dir + "/trans_" + std::to_string(i) + ".wnet");
    return model;
}

}  // namespace weld
