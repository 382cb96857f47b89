#include "weld/grf.hpp"

#include <cmath>

#include "weld/error.hpp"
#include "weld/fft.hpp"
#include "weld/rng.hpp"

namespace weld {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double grf_mode_std(const GrfSpec& spec, std::size_t k) {
    const double wavenumber = kTwoPi * static_cast<double>(k) / spec.grid.length();
    return spec.amplitude *
           std::pow(wavenumber * wavenumber + spec.length_scale_k0 * spec.length_scale_k0,
                    -spec.smoothness_exponent / 2.0);
}

GrfDraw sample_grf_modes(const GrfSpec& spec, std::uint64_t seed) {
    spec.grid.validate();
    if (!spec.grid.periodic) throw DataError("sample_grf: grid must be periodic");
    const std::size_t n = spec.grid.n_points;
    if (!is_power_of_two(n)) throw DataError("sample_grf: grid size must be a power of two");
    GrfDraw draw;
    draw.spec = spec;
    draw.coeffs.assign(n, {0.0, 0.0});
    Rng rng(seed);
    draw.coeffs[0] = {rng.normal() * grf_mode_std(spec, 0), 0.0};
    const double inv_sqrt2 = 0.70710678118654752440084436210485;
    for (std::size_t k = 1; k < n / 2; ++k) {
        const double s = grf_mode_std(spec, k);
        const double re = rng.normal() * s * inv_sqrt2;
        const double im = rng.normal() * s * inv_sqrt2;
        draw.coeffs[k] = {re, im};
        draw.coeffs[n - k] = {re, -im};
    }
    // Nyquist mode must be real for a real field
    draw.coeffs[n / 2] = {rng.normal() * grf_mode_std(spec, n / 2), 0.0};
    return draw;
}

std::vector<double> grf_render(const GrfDraw& draw, const SpatialGrid& grid, double shift) {
    grid.validate();
    if (!grid.periodic) throw DataError("grf_render: grid must be periodic");
    const std::size_t n_src = draw.coeffs.size();
    const std::size_t n = grid.n_points;
    if (!is_power_of_two(n) || n < n_src)
        throw DataError("grf_render: target grid must be a power-of-two refinement");
    std::vector<std::complex<double>> c(n, {0.0, 0.0});
    // embed source modes; the source Nyquist splits evenly between ±n_src/2
    c[0] = draw.coeffs[0];
    for (std::size_t k = 1; k < n_src / 2; ++k) {
        c[k] = draw.coeffs[k];
        c[n - k] = draw.coeffs[n_src - k];
    }
    if (n == n_src) {
        c[n_src / 2] = draw.coeffs[n_src / 2];
    } else {
        c[n_src / 2] = draw.coeffs[n_src / 2] * 0.5;
        c[n - n_src / 2] = draw.coeffs[n_src / 2] * 0.5;
    }
    if (shift != 0.0) {
        const double length = grid.length();
        for (std::size_t k = 0; k < n; ++k) {
            const double m = (k <= n / 2) ? static_cast<double>(k)
                                          : static_cast<double>(k) - static_cast<double>(n);
            const double ang = -kTwoPi * m * shift / length;
            c[k] *= std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }
    // u_j = Σ_m c_m exp(+2πi m j / n)  (unnormalised inverse DFT)
    for (auto& v : c) v *= static_cast<double>(n);
    fft_inplace(c, true);
    std::vector<double> field(n);
    for (std::size_t j = 0; j < n; ++j) field[j] = c[j].real();
    return field;
}

std::vector<double> sample_grf(const GrfSpec& spec, std::uint64_t seed) {
    return grf_render(sample_grf_modes(spec, seed), spec.grid);
}

}  // namespace weld
