#pragma once

#include <functional>
#include <vector>

#include "weld/grid.hpp"
#include "weld/matrix.hpp"

namespace weld {

// Weak solution of u_t = -u_x with zero Dirichlet inflow: u(x,t) = g(x-t)
// where x-t is inside the domain, 0 otherwise. g is evaluated analytically
// at the shifted grid points, never interpolated from a discrete array.
std::vector<double> transport_solution(const std::function<double(double)>& g, double t,
                                       const SpatialGrid& grid);

// Pseudo-spectral ETDRK4 solvers on periodic power-of-two grids with 2/3-rule
// dealiasing of the quadratic term. The trajectory is sampled on the output
// TimeGrid; each output step is integrated with `substeps` internal ETDRK4
// steps (at least 8). Blow-up (|u| > 1e6 or NaN) raises NumericError naming
// the failing output step.

// u_t = nu·u_xx − u·u_x
Matrix solve_burgers(const std::vector<double>& u0, double nu, const TimeGrid& time,
                     const SpatialGrid& grid, std::size_t substeps = 8);

// u_t = −u_xxx − u·u_x
Matrix solve_kdv(const std::vector<double>& u0, const TimeGrid& time, const SpatialGrid& grid,
                 std::size_t substeps = 8);

}  // namespace weld
