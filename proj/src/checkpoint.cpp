#include "weld/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "weld/error.hpp"

namespace weld {

using nlohmann::json;

namespace {

constexpr char kMagic[9] = "WELDNET1";

json meta_to_json(const CheckpointMeta& meta) {
    return json{{"role", meta.role},
                {"window", meta.window},
                {"seed", meta.seed},
                {"stage", meta.stage}};
}

void read_meta_fields(const json& j, CheckpointMeta& meta) {
    meta.kind = j.at("kind").get<std::string>();
    meta.role = j.value("role", "");
    meta.window = j.value("window", -1);
    meta.seed = j.value("seed", std::uint64_t{0});
    meta.stage = j.value("stage", "");
}

void write_container(const std::string& path, const json& header,
                     const std::vector<const double*>& arrays,
                     const std::vector<std::size_t>& sizes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("checkpoint: cannot open " + path + " for writing");
    const std::string head = header.dump();
    out.write(kMagic, 8);
    const std::uint32_t len = static_cast<std::uint32_t>(head.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    for (std::size_t i = 0; i < arrays.size(); ++i)
        out.write(reinterpret_cast<const char*>(arrays[i]),
                  static_cast<std::streamsize>(sizes[i] * sizeof(double)));
    if (!out) throw DataError("checkpoint: write failed for " + path);
}

json read_header(std::ifstream& in, const std::string& path) {
    char magic[8];
    if (!in.read(magic, 8)) throw DataError("checkpoint: truncated file " + path);
    if (std::memcmp(magic, kMagic, 8) != 0) throw DataError("checkpoint: bad magic in " + path);
    std::uint32_t len = 0;
    if (!in.read(reinterpret_cast<char*>(&len), 4))
        throw DataError("checkpoint: truncated header in " + path);
    std::string head(len, '\0');
    if (!in.read(head.data(), len)) throw DataError("checkpoint: truncated header in " + path);
    try {
        return json::parse(head);
    } catch (const json::exception& e) {
        throw DataError("checkpoint: malformed header in " + path + ": " + e.what());
    }
}

void read_array(std::ifstream& in, double* dst, std::size_t count, const std::string& path) {
    if (!in.read(reinterpret_cast<char*>(dst),
                 static_cast<std::streamsize>(count * sizeof(double))))
        throw DataError("checkpoint: truncated payload in " + path);
}

}  // namespace

void save_mlp_checkpoint(const std::string& path, const MlpNet& net, const CheckpointMeta& meta) {
    json header = meta_to_json(meta);
    header["kind"] = "mlp";
    header["spec"] = {{"input_dim", net.spec.input_dim},
                      {"hidden_widths", net.spec.hidden_widths},
                      {"output_dim", net.spec.output_dim}};
    std::vector<const double*> arrays;
    std::vector<std::size_t> sizes;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        arrays.push_back(net.weights[l].data());
        sizes.push_back(net.weights[l].size());
        arrays.push_back(net.biases[l].data());
        sizes.push_back(net.biases[l].size());
    }
    write_container(path, header, arrays, sizes);
}

MlpNet load_mlp_checkpoint(const std::string& path, CheckpointMeta* meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint: cannot open " + path);
    json header = read_header(in, path);
    CheckpointMeta m;
    read_meta_fields(header, m);
    if (m.kind != "mlp") throw DataError("checkpoint: expected mlp, found " + m.kind);
    MlpSpec spec;
    spec.input_dim = header.at("spec").at("input_dim").get<std::size_t>();
    spec.hidden_widths = header.at("spec").at("hidden_widths").get<std::vector<std::size_t>>();
    spec.output_dim = header.at("spec").at("output_dim").get<std::size_t>();
    MlpNet net = mlp_init(spec, 0);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        read_array(in, net.weights[l].data(), net.weights[l].size(), path);
        read_array(in, net.biases[l].data(), net.biases[l].size(), path);
    }
    if (meta) *meta = m;
    return net;
}

void save_pca_checkpoint(const std::string& path, const PcaModel& model,
                         const CheckpointMeta& meta) {
    json header = meta_to_json(meta);
    header["kind"] = "pca";
    header["spec"] = {{"ambient_dim", model.ambient_dim()}, {"latent_dim", model.latent_dim()}};
    write_container(path, header,
                    {model.mean.data(), model.components.data(), model.eigenvalues.data()},
                    {model.mean.size(), model.components.size(), model.eigenvalues.size()});
}

PcaModel load_pca_checkpoint(const std::string& path, CheckpointMeta* meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint: cannot open " + path);
    json header = read_header(in, path);
    CheckpointMeta m;
    read_meta_fields(header, m);
    if (m.kind != "pca") throw DataError("checkpoint: expected pca, found " + m.kind);
    const std::size_t ambient = header.at("spec").at("ambient_dim").get<std::size_t>();
    const std::size_t latent = header.at("spec").at("latent_dim").get<std::size_t>();
    PcaModel model;
    model.mean.resize(ambient);
    model.components = Matrix(latent, ambient);
    model.eigenvalues.resize(latent);
    read_array(in, model.mean.data(), ambient, path);
    read_array(in, model.components.data(), model.components.size(), path);
    read_array(in, model.eigenvalues.data(), latent, path);
    if (meta) *meta = m;
    return model;
}

CheckpointMeta read_checkpoint_meta(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("checkpoint: cannot open " + path);
    json header = read_header(in, path);
    CheckpointMeta m;
    read_meta_fields(header, m);
    return m;
}

}  // namespace weld
