#pragma once

#include <cstddef>
#include <vector>

#include "weld/matrix.hpp"

namespace weld {

// Symmetric eigendecomposition by cyclic Jacobi rotations. Sweeps until the
// off-diagonal Frobenius norm falls below tol·‖A‖_F. Eigenpairs are returned
// sorted by descending eigenvalue; eigenvectors are the columns of `vectors`.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;
};
EigenDecomposition jacobi_eigen(const Matrix& sym, double tol = 1e-12);

// Linear reduction: mean + top-d orthonormal directions of the snapshot
// covariance (divisor M, so the mean squared reconstruction residual equals
// the sum of the discarded eigenvalues exactly on the fitting data).
struct PcaModel {
    std::vector<double> mean;  // length D
    Matrix components;         // d×D, rows orthonormal
    std::vector<double> eigenvalues;  // length d, descending

    std::size_t ambient_dim() const { return mean.size(); }
    std::size_t latent_dim() const { return components.rows(); }
};

// Fits on data rows. Uses the D×D covariance or the M×M Gram matrix,
// whichever is smaller. d above the data rank is allowed (eigenvalues pad
// with zeros); d > min(M, D) is an error. Each component's largest-magnitude
// entry is made positive so fits are reproducible.
PcaModel pca_fit(const Matrix& data, std::size_t d);

// encode: Cᵀ(x−mean) per row; decode: C z + mean per row.
Matrix pca_encode(const PcaModel& m, const Matrix& x);
Matrix pca_decode(const PcaModel& m, const Matrix& z);

std::vector<double> pca_encode(const PcaModel& m, const std::vector<double>& x);
std::vector<double> pca_decode(const PcaModel& m, const std::vector<double>& z);

}  // namespace weld
