#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "weld/dataset.hpp"
#include "weld/matrix.hpp"

namespace weld {

struct IdEstimate {
    std::string method;  // "mle" or "twonn"
    std::string slice;   // "t=<k>" or "all"
    double value = 0.0;
    std::size_t k_neighbors = 0;  // mle only
    std::size_t n_points_used = 0;
};

// Exact brute-force kNN: per-point sorted distances to the k nearest
// neighbours (self excluded), Euclidean metric. O(M²·D); fine for the
// ≤50 000-point clouds handled here.
Matrix knn_distances(const Matrix& points, std::size_t k);

// Levina–Bickel maximum-likelihood estimate with the Haro integral
// approximation and MacKay–Ghahramani averaging (details in the source).
// Exact duplicate points are perturbed by 1e-12·scale noise first; a zero
// neighbour distance after perturbation is an error.
IdEstimate mle_id(const Matrix& points, std::size_t k = 20);

// Two-nearest-neighbour estimator with discard fraction 0: least squares of
// −log(1 − i/M) against log(r₂/r₁) through the origin over all points.
IdEstimate twonn_id(const Matrix& points);

// Per-time estimates plus an all-times estimate on a seeded random
// subsample (clamped to the population size).
std::vector<IdEstimate> dataset_id_report(const TrajectoryDataset& ds,
                                          const std::vector<std::size_t>& time_indices,
                                          bool all_times, std::size_t subsample,
                                          std::uint64_t seed, const std::string& method = "mle",
                                          std::size_t k = 20);

// CSV with columns method, slice, estimate, k, n.
void write_id_report_csv(const std::vector<IdEstimate>& rows, const std::string& path);

}  // namespace weld
