#pragma once

#include <cstddef>
#include <vector>

#include "weld/error.hpp"

namespace weld {

// Equally spaced 1-D spatial grid. Periodic grids exclude the right
// endpoint; non-periodic grids include both endpoints.
struct SpatialGrid {
    std::size_t n_points = 512;
    double domain_start = 0.0;
    double domain_end = 1.0;
    bool periodic = false;

    double length() const { return domain_end - domain_start; }

    double spacing() const {
        return periodic ? length() / static_cast<double>(n_points)
                        : length() / static_cast<double>(n_points - 1);
    }

    double point(std::size_t j) const { return domain_start + spacing() * static_cast<double>(j); }

    std::vector<double> points() const {
        std::vector<double> xs(n_points);
        for (std::size_t j = 0; j < n_points; ++j) xs[j] = point(j);
        return xs;
    }

    void validate() const {
        if (n_points < 2) throw DataError("SpatialGrid: need at least 2 points");
        if (!(domain_end > domain_start)) throw DataError("SpatialGrid: empty domain");
    }

    bool operator==(const SpatialGrid&) const = default;
};

// Equally spaced time grid, t_0 = 0 .. t_{n_steps-1} = t_end.
struct TimeGrid {
    double t_end = 0.3;
    std::size_t n_steps = 301;

    double dt() const { return t_end / static_cast<double>(n_steps - 1); }

    // Times are always index·dt, never accumulated by repeated addition.
    double time(std::size_t k) const { return dt() * static_cast<double>(k); }

    void validate() const {
        if (n_steps < 2) throw DataError("TimeGrid: need at least 2 steps");
        if (!(t_end > 0.0)) throw DataError("TimeGrid: t_end must be positive");
    }

    bool operator==(const TimeGrid&) const = default;
};

}  // namespace weld
