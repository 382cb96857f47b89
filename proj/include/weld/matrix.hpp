#pragma once

#include <cstddef>
#include <vector>

#include "weld/error.hpp"

namespace weld {

// Dense row-major matrix of 64-bit floats. Vectors are 1×n or n×1 as needed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Dense kernels. The primary versions are OpenMP-parallel over output rows;
// every output element is accumulated sequentially by a single thread, so
// results are bit-identical for any thread count. kernels::serial holds the
// plain reference loops kept for testing and benchmarking.
namespace kernels {

// C[m×n] = A[m×k] · B[k×n]
void matmul(const Matrix& a, const Matrix& b, Matrix& c);
// C[k×n] = Aᵀ · B with A[m×k], B[m×n]   (weight gradients)
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c);
// C[m×k] = A · Bᵀ with A[m×n], B[k×n]   (input gradients)
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c);

// out[r,:] = in[r,:] + bias for every row
void add_bias(const Matrix& in, const std::vector<double>& bias, Matrix& out);
// out = max(in, 0); mask keeps the subgradient convention relu'(0) = 0
void relu(const Matrix& in, Matrix& out);
// grad_in = grad_out ⊙ 1[pre > 0]
void relu_backward(const Matrix& grad_out, const Matrix& pre, Matrix& grad_in);
// column sums (bias gradients); serial reduction per column
void col_sums(const Matrix& a, std::vector<double>& out);

namespace serial {
void matmul(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c);
void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c);
}  // namespace serial

}  // namespace kernels

}  // namespace weld
