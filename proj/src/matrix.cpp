#include "weld/matrix.hpp"

#include <string>

namespace weld {
namespace kernels {

namespace {

void check_mul(const Matrix& a, const Matrix& b, const Matrix& c,
               std::size_t m, std::size_t k, std::size_t n, const char* what) {
    if (a.size() == 0 || b.size() == 0)
        throw DataError(std::string(what) + ": empty operand");
    (void)m;
    (void)k;
    (void)n;
    (void)c;
}

}  // namespace

void matmul(const Matrix& a, const Matrix& b, Matrix& c) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != k || c.rows() != m || c.cols() != n)
        throw DataError("matmul: shape mismatch " + std::to_string(m) + "x" + std::to_string(k) +
                        " * " + std::to_string(b.rows()) + "x" + std::to_string(n));
    check_mul(a, b, c, m, k, n, "matmul");
    const double* A = a.data();
    const double* B = b.data();
    double* C = c.data();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        double* Ci = C + i * n;
        for (std::size_t j = 0; j < n; ++j) Ci[j] = 0.0;
        const double* Ai = A + i * k;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = Ai[p];
            const double* Bp = B + p * n;
            for (std::size_t j = 0; j < n; ++j) Ci[j] += av * Bp[j];
        }
    }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != m || c.rows() != k || c.cols() != n)
        throw DataError("matmul_tn: shape mismatch");
    check_mul(a, b, c, m, k, n, "matmul_tn");
    const double* A = a.data();
    const double* B = b.data();
    double* C = c.data();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < k; ++i) {
        double* Ci = C + i * n;
        for (std::size_t j = 0; j < n; ++j) Ci[j] = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
            const double av = A[r * k + i];
            const double* Br = B + r * n;
            for (std::size_t j = 0; j < n; ++j) Ci[j] += av * Br[j];
        }
    }
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c) {
    const std::size_t m = a.rows(), n = a.cols(), k = b.rows();
    if (b.cols() != n || c.rows() != m || c.cols() != k)
        throw DataError("matmul_nt: shape mismatch");
    check_mul(a, b, c, m, n, k, "matmul_nt");
    // transpose b once (tiled) so the multiply runs the vector-friendly
    // ikj loop instead of a scalar dot-product reduction
    thread_local std::vector<double> bt_storage;
    bt_storage.resize(n * k);
    double* BT = bt_storage.data();
    const double* B = b.data();
    constexpr std::size_t tile = 32;
#pragma omp parallel for schedule(static)
    for (std::size_t jj = 0; jj < k; jj += tile)
        for (std::size_t pp = 0; pp < n; pp += tile)
            for (std::size_t j = jj; j < std::min(jj + tile, k); ++j)
                for (std::size_t p = pp; p < std::min(pp + tile, n); ++p)
                    BT[p * k + j] = B[j * n + p];
    const double* A = a.data();
    double* C = c.data();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        const double* Ai = A + i * n;
        double* Ci = C + i * k;
        for (std::size_t j = 0; j < k; ++j) Ci[j] = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const double av = Ai[p];
            const double* Bp = BT + p * k;
            for (std::size_t j = 0; j < k; ++j) Ci[j] += av * Bp[j];
        }
    }
}

void add_bias(const Matrix& in, const std::vector<double>& bias, Matrix& out) {
    const std::size_t m = in.rows(), n = in.cols();
    if (bias.size() != n || !in.same_shape(out)) throw DataError("add_bias: shape mismatch");
    const double* I = in.data();
    double* O = out.data();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) O[i * n + j] = I[i * n + j] + bias[j];
}

void relu(const Matrix& in, Matrix& out) {
    if (!in.same_shape(out)) throw DataError("relu: shape mismatch");
    const double* I = in.data();
    double* O = out.data();
    const std::size_t sz = in.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < sz; ++i) O[i] = I[i] > 0.0 ? I[i] : 0.0;
}

void relu_backward(const Matrix& grad_out, const Matrix& pre, Matrix& grad_in) {
    if (!grad_out.same_shape(pre) || !grad_out.same_shape(grad_in))
        throw DataError("relu_backward: shape mismatch");
    const double* G = grad_out.data();
    const double* P = pre.data();
    double* O = grad_in.data();
    const std::size_t sz = pre.size();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < sz; ++i) O[i] = P[i] > 0.0 ? G[i] : 0.0;
}

void col_sums(const Matrix& a, std::vector<double>& out) {
    out.assign(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const double* Ar = a.row(r);
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += Ar[j];
    }
}

namespace serial {

void matmul(const Matrix& a, const Matrix& b, Matrix& c) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != k || c.rows() != m || c.cols() != n)
        throw DataError("serial::matmul: shape mismatch");
    for (std::size_t i = 0; i < m; ++i) {
        double* Ci = c.row(i);
        for (std::size_t j = 0; j < n; ++j) Ci[j] = 0.0;
        const double* Ai = a.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const double av = Ai[p];
            const double* Bp = b.row(p);
            for (std::size_t j = 0; j < n; ++j) Ci[j] += av * Bp[j];
        }
    }
}

void matmul_tn(const Matrix& a, const Matrix& b, Matrix& c) {
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    if (b.rows() != m || c.rows() != k || c.cols() != n)
        throw DataError("serial::matmul_tn: shape mismatch");
    c.fill(0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double* Ci = c.row(i);
        for (std::size_t r = 0; r < m; ++r) {
            const double av = a(r, i);
            const double* Br = b.row(r);
            for (std::size_t j = 0; j < n; ++j) Ci[j] += av * Br[j];
        }
    }
}

void matmul_nt(const Matrix& a, const Matrix& b, Matrix& c) {
    const std::size_t m = a.rows(), n = a.cols(), k = b.rows();
    if (b.cols() != n || c.rows() != m || c.cols() != k)
        throw DataError("serial::matmul_nt: shape mismatch");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < n; ++p) s += a(i, p) * b(j, p);
            c(i, j) = s;
        }
}

}  // namespace serial

}  // namespace kernels
}  // namespace weld
