#include "weld/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace weld {

EigenDecomposition jacobi_eigen(const Matrix& sym, double tol) {
    const std::size_t n = sym.rows();
    if (sym.cols() != n) throw DataError("jacobi_eigen: matrix not square");
    Matrix a = sym;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double frob = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) frob += a.data()[i] * a.data()[i];
    frob = std::sqrt(frob);
    const double threshold = tol * std::max(frob, 1e-300);

    const std::size_t max_sweeps = 64;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
        if (std::sqrt(off) <= threshold) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                // stable tan of the rotation angle
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] > diag[y]; });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = diag[order[j]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

namespace {

// Fix each direction's sign so its largest-magnitude entry is positive.
void canonicalise_sign(Matrix& components) {
    for (std::size_t r = 0; r < components.rows(); ++r) {
        double* row = components.row(r);
        std::size_t arg = 0;
        for (std::size_t j = 1; j < components.cols(); ++j)
            if (std::abs(row[j]) > std::abs(row[arg])) arg = j;
        if (row[arg] < 0.0)
            for (std::size_t j = 0; j < components.cols(); ++j) row[j] = -row[j];
    }
}

}  // namespace

PcaModel pca_fit(const Matrix& data, std::size_t d) {
    const std::size_t m = data.rows(), dim = data.cols();
    if (d < 1) throw DataError("pca_fit: d must be at least 1");
    if (d > std::min(m, dim)) throw DataError("pca_fit: d exceeds min(M, D)");

    PcaModel model;
    model.mean.assign(dim, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        const double* row = data.row(r);
        for (std::size_t j = 0; j < dim; ++j) model.mean[j] += row[j];
    }
    for (double& v : model.mean) v /= static_cast<double>(m);

    Matrix centered(m, dim);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < dim; ++j) centered(r, j) = data(r, j) - model.mean[j];

    model.components = Matrix(d, dim);
    model.eigenvalues.assign(d, 0.0);

    if (dim <= m) {
        // covariance route: C = XᵀX / M
        Matrix cov(dim, dim);
        kernels::matmul_tn(centered, centered, cov);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < cov.size(); ++i) cov.data()[i] *= inv_m;
        EigenDecomposition eig = jacobi_eigen(cov);
        for (std::size_t j = 0; j < d; ++j) {
            model.eigenvalues[j] = std::max(eig.values[j], 0.0);
            for (std::size_t i = 0; i < dim; ++i) model.components(j, i) = eig.vectors(i, j);
        }
    } else {
        // Gram route: G = XXᵀ / M shares nonzero eigenvalues with the covariance,
        // components are Xᵀg normalised.
        Matrix gram(m, m);
        kernels::matmul_nt(centered, centered, gram);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t i = 0; i < gram.size(); ++i) gram.data()[i] *= inv_m;
        EigenDecomposition eig = jacobi_eigen(gram);
        for (std::size_t j = 0; j < d; ++j) {
            const double lambda = std::max(eig.values[j], 0.0);
            model.eigenvalues[j] = lambda;
            double norm2 = 0.0;
            std::vector<double> dir(dim, 0.0);
            for (std::size_t r = 0; r < m; ++r) {
                const double g = eig.vectors(r, j);
                const double* row = centered.row(r);
                for (std::size_t i = 0; i < dim; ++i) dir[i] += g * row[i];
            }
            for (double x : dir) norm2 += x * x;
            const double norm = std::sqrt(norm2);
            if (norm > 1e-150) {
                for (std::size_t i = 0; i < dim; ++i) model.components(j, i) = dir[i] / norm;
            } else {
                // below the data rank: zero eigenvalue, direction completed from
                // the canonical axis least covered by the components so far
                model.eigenvalues[j] = 0.0;
                std::size_t best_axis = 0;
                double best_resid = -1.0;
                for (std::size_t axis = 0; axis < dim; ++axis) {
                    double covered = 0.0;
                    for (std::size_t r = 0; r < j; ++r)
                        covered += model.components(r, axis) * model.components(r, axis);
                    if (1.0 - covered > best_resid) {
                        best_resid = 1.0 - covered;
                        best_axis = axis;
                    }
                }
                std::vector<double> e(dim, 0.0);
                e[best_axis] = 1.0;
                for (std::size_t r = 0; r < j; ++r) {
                    double dot = model.components(r, best_axis);
                    for (std::size_t i = 0; i < dim; ++i) e[i] -= dot * model.components(r, i);
                }
                double en = 0.0;
                for (double xv : e) en += xv * xv;
                en = std::sqrt(en);
                for (std::size_t i = 0; i < dim; ++i) model.components(j, i) = e[i] / en;
            }
        }
    }
    canonicalise_sign(model.components);
    return model;
}

Matrix pca_encode(const PcaModel& m, const Matrix& x) {
    if (x.cols() != m.ambient_dim()) throw DataError("pca_encode: dimension mismatch");
    Matrix centered(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t j = 0; j < x.cols(); ++j) centered(r, j) = x(r, j) - m.mean[j];
    Matrix z(x.rows(), m.latent_dim());
    kernels::matmul_nt(centered, m.components, z);
    return z;
}

Matrix pca_decode(const PcaModel& m, const Matrix& z) {
    if (z.cols() != m.latent_dim()) throw DataError("pca_decode: dimension mismatch");
    Matrix x(z.rows(), m.ambient_dim());
    kernels::matmul(z, m.components, x);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t j = 0; j < x.cols(); ++j) x(r, j) += m.mean[j];
    return x;
}

std::vector<double> pca_encode(const PcaModel& m, const std::vector<double>& x) {
    Matrix row(1, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) row(0, i) = x[i];
    Matrix z = pca_encode(m, row);
    return std::vector<double>(z.data(), z.data() + z.size());
}

std::vector<double> pca_decode(const PcaModel& m, const std::vector<double>& z) {
    Matrix row(1, z.size());
    for (std::size_t i = 0; i < z.size(); ++i) row(0, i) = z[i];
    Matrix x = pca_decode(m, row);
    return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace weld
