#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weld/grid.hpp"
#include "weld/matrix.hpp"

namespace weld {

// N trajectories × T time steps × D spatial samples, stored as 32-bit floats
// (promoted to 64-bit when batches are assembled for training).
struct TrajectoryDataset {
    std::string family;
    TimeGrid time;
    SpatialGrid space;
    std::size_t n_samples = 0;
    std::vector<float> values;   // [n][t][d]
    std::vector<double> params;  // one scalar parameter per trajectory
    std::uint64_t seed = 0;

    std::size_t n_steps() const { return time.n_steps; }
    std::size_t n_points() const { return space.n_points; }

    float value(std::size_t n, std::size_t t, std::size_t d) const {
        return values[(n * time.n_steps + t) * space.n_points + d];
    }
    const float* state(std::size_t n, std::size_t t) const {
        return values.data() + (n * time.n_steps + t) * space.n_points;
    }
    float* state(std::size_t n, std::size_t t) {
        return values.data() + (n * time.n_steps + t) * space.n_points;
    }

    // Copy one state into a row of a 64-bit matrix.
    void copy_state(std::size_t n, std::size_t t, Matrix& dst, std::size_t row) const {
        const float* src = state(n, t);
        double* out = dst.row(row);
        for (std::size_t d = 0; d < space.n_points; ++d) out[d] = src[d];
    }

    std::vector<double> state_vector(std::size_t n, std::size_t t) const {
        const float* src = state(n, t);
        return std::vector<double>(src, src + space.n_points);
    }

    void validate() const;
};

// Binary container: magic "WTRJ0001", u32 little-endian JSON header length,
// JSON header, then float32 little-endian values in [n][t][d] order.
// Round-trips are bit-exact.
void dataset_write(const TrajectoryDataset& ds, const std::string& path);
TrajectoryDataset dataset_read(const std::string& path);

// Deterministic train/test trajectory split (fraction held out for testing,
// derived from the dataset seed so every model sees the same split).
struct TrajectorySplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
TrajectorySplit split_dataset(const TrajectoryDataset& ds, double test_fraction = 0.2);

}  // namespace weld
