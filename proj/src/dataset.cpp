#include "weld/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "weld/error.hpp"
#include "weld/rng.hpp"

namespace weld {

using nlohmann::json;

namespace {
constexpr char kMagic[9] = "WTRJ0001";

json grid_to_json(const SpatialGrid& g) {
    return json{{"n_points", g.n_points},
                {"domain_start", g.domain_start},
                {"domain_end", g.domain_end},
                {"periodic", g.periodic}};
}

SpatialGrid grid_from_json(const json& j) {
    SpatialGrid g;
    g.n_points = j.at("n_points").get<std::size_t>();
    g.domain_start = j.at("domain_start").get<double>();
    g.domain_end = j.at("domain_end").get<double>();
    g.periodic = j.at("periodic").get<bool>();
    return g;
}
}  // namespace

void TrajectoryDataset::validate() const {
    time.validate();
    space.validate();
    if (values.size() != n_samples * time.n_steps * space.n_points)
        throw DataError("TrajectoryDataset: value array size mismatch");
    if (params.size() != n_samples)
        throw DataError("TrajectoryDataset: parameter list length mismatch");
    for (float v : values)
        if (!std::isfinite(v)) throw DataError("TrajectoryDataset: non-finite value");
}

void dataset_write(const TrajectoryDataset& ds, const std::string& path) {
    ds.validate();
    json header{{"family", ds.family},
                {"n_samples", ds.n_samples},
                {"n_steps", ds.time.n_steps},
                {"n_points", ds.space.n_points},
                {"t_end", ds.time.t_end},
                {"space", grid_to_json(ds.space)},
                {"seed", ds.seed},
                {"params", ds.params}};
    const std::string head = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("dataset_write: cannot open " + path);
    out.write(kMagic, 8);
    const std::uint32_t len = static_cast<std::uint32_t>(head.size());
    out.write(reinterpret_cast<const char*>(&len), 4);
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.write(reinterpret_cast<const char*>(ds.values.data()),
              static_cast<std::streamsize>(ds.values.size() * sizeof(float)));
    if (!out) throw DataError("dataset_write: write failed for " + path);
}

TrajectoryDataset dataset_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("dataset_read: cannot open " + path);
    char magic[8];
    if (!in.read(magic, 8)) throw DataError("dataset_read: truncated file (magic)");
    if (std::memcmp(magic, "WTRJ", 4) != 0)
        throw DataError("dataset_read: bad magic");
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw DataError("dataset_read: unsupported version " + std::string(magic + 4, 4));
    std::uint32_t len = 0;
    if (!in.read(reinterpret_cast<char*>(&len), 4))
        throw DataError("dataset_read: truncated file (header length)");
    std::string head(len, '\0');
    if (!in.read(head.data(), len)) throw DataError("dataset_read: truncated file (header)");

    TrajectoryDataset ds;
    try {
        json j = json::parse(head);
        ds.family = j.at("family").get<std::string>();
        ds.n_samples = j.at("n_samples").get<std::size_t>();
        ds.time.n_steps = j.at("n_steps").get<std::size_t>();
        ds.time.t_end = j.at("t_end").get<double>();
        ds.space = grid_from_json(j.at("space"));
        ds.seed = j.at("seed").get<std::uint64_t>();
        ds.params = j.at("params").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw DataError(std::string("dataset_read: malformed header: ") + e.what());
    }
    const std::size_t count = ds.n_samples * ds.time.n_steps * ds.space.n_points;
    ds.values.resize(count);
    if (!in.read(reinterpret_cast<char*>(ds.values.data()),
                 static_cast<std::streamsize>(count * sizeof(float))))
        throw DataError("dataset_read: truncated file (values)");
    ds.validate();
    return ds;
}

TrajectorySplit split_dataset(const TrajectoryDataset& ds, double test_fraction) {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0))
        throw DataError("split_dataset: bad test fraction");
    std::vector<std::size_t> order(ds.n_samples);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(ds.seed, /*tag0=*/0x53504c4954ULL));  // "SPLIT"
    rng.shuffle(order);
    const std::size_t n_test = static_cast<std::size_t>(
        std::floor(test_fraction * static_cast<double>(ds.n_samples)));
    TrajectorySplit split;
    split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(split.test.begin(), split.test.end());
    std::sort(split.train.begin(), split.train.end());
    return split;
}

}  // namespace weld
