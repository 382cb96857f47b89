#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "weld/grid.hpp"

namespace weld {

// Mean-zero Gaussian random field on a periodic grid with spectral
// covariance amplitude²·((2πk/L)² + k0²)^(−smoothness): independent complex
// Gaussian Fourier coefficients, Hermitian-symmetrised so samples are real.
struct GrfSpec {
    double amplitude = 49.0;         // 7²
    double length_scale_k0 = 7.0;
    double smoothness_exponent = 2.5;
    SpatialGrid grid{512, 0.0, 1.0, true};
};

// Standard deviation of the mode-k Fourier coefficient.
double grf_mode_std(const GrfSpec& spec, std::size_t k);

// One spectral draw. Coefficients are stored in DFT index order with
// c[n-k] = conj(c[k]); the field is u(x_j) = Σ_m c_m exp(2πi m j / n).
struct GrfDraw {
    GrfSpec spec;
    std::vector<std::complex<double>> coeffs;
};

GrfDraw sample_grf_modes(const GrfSpec& spec, std::uint64_t seed);

// Evaluate a draw on a grid, optionally translated by `shift` (periodic,
// exact spectral translation so shifts need not be grid multiples). The
// grid may be a power-of-two refinement of the drawing grid.
std::vector<double> grf_render(const GrfDraw& draw, const SpatialGrid& grid, double shift = 0.0);

// Draw and evaluate on the spec's own grid.
std::vector<double> sample_grf(const GrfSpec& spec, std::uint64_t seed);

}  // namespace weld
