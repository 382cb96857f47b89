#pragma once

#include <complex>
#include <vector>

namespace weld {

// Iterative radix-2 complex FFT for the power-of-two grids used throughout
// (512/1024 points). Unnormalised forward transform; inverse divides by n.
// Kept in-project so results are bit-reproducible across thread counts and
// runs, which the dataset generator relies on.
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse);

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& a);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& a);

bool is_power_of_two(std::size_t n);

}  // namespace weld
