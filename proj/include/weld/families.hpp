#pragma once

#include <cstdint>
#include <string>

#include "weld/dataset.hpp"
#include "weld/grid.hpp"

namespace weld {

// Piecewise-linear hat supported on [0, eps] with peak 1 at eps/2:
// (2/eps)·(σ(x) − 2σ(x − eps/2) + σ(x − eps)).
double hat(double eps, double x);

// Soliton profile φ_c(x) = (c/2)·sech(√c·x/2)².
double soliton(double c, double x);

// The six initial-condition families. tscale/tshift ride the transport
// equation, bscale/bshift the viscous Burgers' equation, kscale/kshift KdV.
enum class Family { tscale, tshift, bscale, bshift, kscale, kshift };

Family parse_family(const std::string& name);
std::string family_name(Family f);

// Per-family defaults: horizon and spatial domain.
TimeGrid family_time_grid(Family f, std::size_t n_steps = 301);
SpatialGrid family_spatial_grid(Family f, std::size_t n_points = 512);

// Generate a dataset: per-trajectory parameters drawn i.i.d. uniform from the
// family's range, trajectories solved (or evaluated analytically for
// transport) on the grids. Deterministic per seed; samples are generated in
// parallel, each from its own derived seed.
TrajectoryDataset gen_dataset(Family family, std::size_t n_samples, const TimeGrid& time,
                              const SpatialGrid& grid, std::uint64_t seed,
                              std::size_t substeps = 8);

}  // namespace weld
