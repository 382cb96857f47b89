#include "weld/families.hpp"

#include <cmath>
#include <exception>

#include "weld/error.hpp"
#include "weld/grf.hpp"
#include "weld/rng.hpp"
#include "weld/solvers.hpp"

namespace weld {

double hat(double eps, double x) {
    if (!(eps > 0.0)) throw DataError("hat: eps must be positive");
    const auto relu = [](double v) { return v > 0.0 ? v : 0.0; };
    return 2.0 / eps * (relu(x) - 2.0 * relu(x - eps / 2.0) + relu(x - eps));
}

double soliton(double c, double x) {
    if (!(c > 0.0)) throw DataError("soliton: c must be positive");
    const double s = 1.0 / std::cosh(std::sqrt(c) * x / 2.0);
    return c / 2.0 * s * s;
}

Family parse_family(const std::string& name) {
    if (name == "tscale") return Family::tscale;
    if (name == "tshift") return Family::tshift;
    if (name == "bscale") return Family::bscale;
    if (name == "bshift") return Family::bshift;
    if (name == "kscale") return Family::kscale;
    if (name == "kshift") return Family::kshift;
    throw UsageError("unknown family '" + name +
                     "' (valid: tscale, tshift, bscale, bshift, kscale, kshift)");
}

std::string family_name(Family f) {
    switch (f) {
        case Family::tscale: return "tscale";
        case Family::tshift: return "tshift";
        case Family::bscale: return "bscale";
        case Family::bshift: return "bshift";
        case Family::kscale: return "kscale";
        default: return "kshift";
    }
}

TimeGrid family_time_grid(Family f, std::size_t n_steps) {
    switch (f) {
        case Family::tscale:
        case Family::tshift: return TimeGrid{0.3, n_steps};
        case Family::bscale:
        case Family::bshift: return TimeGrid{1.0, n_steps};
        default: return TimeGrid{0.01, n_steps};
    }
}

SpatialGrid family_spatial_grid(Family f, std::size_t n_points) {
    switch (f) {
        case Family::tscale:
        case Family::tshift: return SpatialGrid{n_points, 0.0, 1.0, false};
        case Family::bscale:
        case Family::bshift: return SpatialGrid{n_points, 0.0, 1.0, true};
        default: return SpatialGrid{n_points, 0.0, 6.0, true};
    }
}

namespace {

constexpr std::uint64_t kParamTag = 0x504152414dULL;  // "PARAM"
constexpr std::uint64_t kBaseTag = 0x42415345ULL;     // "BASE"

double draw_parameter(Family f, std::uint64_t seed, std::size_t n) {
    Rng rng(derive_seed(seed, kParamTag, n));
    switch (f) {
        case Family::tscale: return rng.uniform(1.0, 4.0);
        case Family::tshift: return rng.uniform(0.0, 3.0);
        case Family::bscale: return rng.uniform(-0.9, 0.9);
        case Family::bshift: return rng.uniform(0.0, 1.0);
        case Family::kscale: return rng.uniform(6.0, 18.0);
        default: return rng.uniform(0.0, 0.4);
    }
}

void store_trajectory(TrajectoryDataset& ds, std::size_t n, const Matrix& traj) {
    for (std::size_t t = 0; t < ds.time.n_steps; ++t) {
        float* dst = ds.state(n, t);
        const double* src = traj.row(t);
        for (std::size_t d = 0; d < ds.space.n_points; ++d)
            dst[d] = static_cast<float>(src[d]);
    }
}

}  // namespace

TrajectoryDataset gen_dataset(Family family, std::size_t n_samples, const TimeGrid& time,
                              const SpatialGrid& grid, std::uint64_t seed,
                              std::size_t substeps) {
    time.validate();
    grid.validate();
    if (n_samples == 0) throw DataError("gen_dataset: n_samples must be positive");

    TrajectoryDataset ds;
    ds.family = family_name(family);
    ds.time = time;
    ds.space = grid;
    ds.n_samples = n_samples;
    ds.seed = seed;
    ds.params.resize(n_samples);
    ds.values.assign(n_samples * time.n_steps * grid.n_points, 0.0f);
    for (std::size_t n = 0; n < n_samples; ++n)
        ds.params[n] = draw_parameter(family, seed, n);

    const bool transport = family == Family::tscale || family == Family::tshift;
    const bool burgers = family == Family::bscale || family == Family::bshift;

    // bscale/bshift share two base fields drawn once per dataset
    GrfDraw w0, w1;
    if (burgers) {
        GrfSpec gspec;
        gspec.grid = grid;
        w0 = sample_grf_modes(gspec, derive_seed(seed, kBaseTag, 0));
        w1 = sample_grf_modes(gspec, derive_seed(seed, kBaseTag, 1));
    }

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t n = 0; n < n_samples; ++n) {
        try {
        const double p = ds.params[n];
        if (transport) {
            const auto g = [&](double x) {
                if (family == Family::tscale)
                    return p * hat(0.05, x - 0.1) + hat(0.05, x - 0.2);
                return hat(0.05, x - 0.1) + 2.5 * hat(0.05, x - (0.2 + 0.1 * p));
            };
            for (std::size_t k = 0; k < time.n_steps; ++k) {
                const auto u = transport_solution(g, time.time(k), grid);
                float* dst = ds.state(n, k);
                for (std::size_t d = 0; d < grid.n_points; ++d)
                    dst[d] = static_cast<float>(u[d]);
            }
        } else if (burgers) {
            std::vector<double> u0(grid.n_points);
            if (family == Family::bscale) {
                const auto f0 = grf_render(w0, grid);
                const auto f1 = grf_render(w1, grid);
                const double b = std::sqrt(1.0 - p * p);
                for (std::size_t d = 0; d < grid.n_points; ++d)
                    u0[d] = p * f0[d] + b * f1[d];
            } else {
                const auto f0 = grf_render(w0, grid, p);
                const auto f1 = grf_render(w1, grid, p);
                const double b = std::sqrt(0.75);
                for (std::size_t d = 0; d < grid.n_points; ++d)
                    u0[d] = 0.5 * f0[d] + b * f1[d];
            }
            store_trajectory(ds, n, solve_burgers(u0, 1e-3, time, grid, substeps));
        } else {
            std::vector<double> u0(grid.n_points);
            for (std::size_t d = 0; d < grid.n_points; ++d) {
                const double x = grid.point(d);
                if (family == Family::kscale)
                    u0[d] = soliton(p * p, x - 1.0) + soliton(36.0, x - 2.0);
                else
                    u0[d] = soliton(36.0, x - 1.0) + soliton(36.0, x - 2.0 - p);
            }
            store_trajectory(ds, n, solve_kdv(u0, time, grid, substeps));
        }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return ds;
}

}  // namespace weld
