#include "weld/id_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "weld/csv.hpp"
#include "weld/error.hpp"
#include "weld/rng.hpp"

namespace weld {

Matrix knn_distances(const Matrix& points, std::size_t k) {
    const std::size_t m = points.rows(), dim = points.cols();
    if (k == 0 || k >= m) throw DataError("knn_distances: need 0 < k < M");
    Matrix out(m, k);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < m; ++i) {
        // partial selection of the k smallest distances
        std::vector<double> best(k, std::numeric_limits<double>::infinity());
        const double* pi = points.row(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const double* pj = points.row(j);
            double d2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double diff = pi[c] - pj[c];
                d2 += diff * diff;
            }
            if (d2 < best.back()) {
                // insert in sorted position
                std::size_t pos = k - 1;
                while (pos > 0 && best[pos - 1] > d2) {
                    best[pos] = best[pos - 1];
                    --pos;
                }
                best[pos] = d2;
            }
        }
        for (std::size_t c = 0; c < k; ++c) out(i, c) = std::sqrt(best[c]);
    }
    return out;
}

namespace {

double data_scale(const Matrix& points) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        lo = std::min(lo, points.data()[i]);
        hi = std::max(hi, points.data()[i]);
    }
    const double extent = hi - lo;
    return extent > 0.0 ? extent : 1.0;
}

// Both estimators divide by neighbour distances, so exact duplicates are
// broken up by tiny additive noise before distances are computed.
Matrix knn_with_duplicate_guard(const Matrix& points, std::size_t k) {
    Matrix dists = knn_distances(points, k);
    bool has_zero = false;
    for (std::size_t i = 0; i < dists.rows(); ++i)
        if (dists(i, 0) == 0.0) has_zero = true;
    if (!has_zero) return dists;

    Matrix jittered = points;
    const double eps = 1e-12 * data_scale(points);
    Rng rng(0x4a49545445524aULL);  // fixed jitter seed
    for (std::size_t i = 0; i < jittered.size(); ++i)
        jittered.data()[i] += rng.uniform(-eps, eps);
    dists = knn_distances(jittered, k);
    for (std::size_t i = 0; i < dists.rows(); ++i)
        if (dists(i, 0) == 0.0)
            throw NumericError("id estimate: zero neighbour distance after perturbation");
    return dists;
}

}  // namespace

IdEstimate mle_id(const Matrix& points, std::size_t k) {
    const std::size_t m = points.rows();
    if (m <= k) throw DataError("mle_id: need more than k points");
    Matrix dists = knn_with_duplicate_guard(points, k);

    // Levina–Bickel per-point likelihood: the inverse estimate at x is the
    // mean of log(T_k(x)/T_j(x)) over j < k. The Haro integral approximation
    // normalises by the expected ball count k rather than the k-1 interior
    // points; MacKay–Ghahramani averaging inverts the mean of the inverses.
    double inv_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double tk = dists(i, k - 1);
        if (tk == 0.0) throw NumericError("mle_id: zero k-th neighbour distance");
        double s = 0.0;
        for (std::size_t j = 0; j + 1 < k; ++j) s += std::log(tk / dists(i, j));
        inv_sum += s / static_cast<double>(k);
    }
    IdEstimate est;
    est.method = "mle";
    est.value = static_cast<double>(m) / inv_sum;
    est.k_neighbors = k;
    est.n_points_used = m;
    return est;
}

IdEstimate twonn_id(const Matrix& points) {
    const std::size_t m = points.rows();
    if (m < 3) throw DataError("twonn_id: need at least 3 points");
    Matrix dists = knn_with_duplicate_guard(points, 2);

    std::vector<double> mu(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (dists(i, 0) == 0.0) throw NumericError("twonn_id: zero nearest-neighbour distance");
        mu[i] = dists(i, 1) / dists(i, 0);
    }
    std::sort(mu.begin(), mu.end());

    // Fit −log(1 − F̂) = d·log μ through the origin with F̂(μ_(i)) = i/M.
    // Discard fraction is 0; the final point maps to −log(0) and is excluded
    // as non-finite rather than by discarding a quantile.
    double sxy = 0.0, sxx = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double f = static_cast<double>(i + 1) / static_cast<double>(m);
        const double y = -std::log1p(-f);
        if (!std::isfinite(y)) continue;
        const double x = std::log(mu[i]);
        sxy += x * y;
        sxx += x * x;
        ++used;
    }
    if (sxx == 0.0) throw NumericError("twonn_id: degenerate distance ratios");
    IdEstimate est;
    est.method = "twonn";
    est.value = sxy / sxx;
    est.n_points_used = used;
    return est;
}

std::vector<IdEstimate> dataset_id_report(const TrajectoryDataset& ds,
                                          const std::vector<std::size_t>& time_indices,
                                          bool all_times, std::size_t subsample,
                                          std::uint64_t seed, const std::string& method,
                                          std::size_t k) {
    ds.validate();
    const bool use_mle = method == "mle";
    if (!use_mle && method != "twonn")
        throw UsageError("dataset_id_report: method must be mle or twonn");

    std::vector<IdEstimate> rows;
    for (std::size_t t : time_indices) {
        if (t >= ds.time.n_steps) throw DataError("dataset_id_report: time index out of range");
        Matrix slice(ds.n_samples, ds.space.n_points);
        for (std::size_t n = 0; n < ds.n_samples; ++n) ds.copy_state(n, t, slice, n);
        IdEstimate est = use_mle ? mle_id(slice, k) : twonn_id(slice);
        est.slice = "t=" + std::to_string(t);
        rows.push_back(est);
    }
    if (all_times) {
        const std::size_t population = ds.n_samples * ds.time.n_steps;
        const std::size_t take = std::min(subsample, population);
        std::vector<std::size_t> order(population);
        for (std::size_t i = 0; i < population; ++i) order[i] = i;
        Rng rng(derive_seed(seed, 0x414c4cULL));  // "ALL"
        rng.shuffle(order);
        Matrix cloud(take, ds.space.n_points);
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t n = order[i] / ds.time.n_steps;
            const std::size_t t = order[i] % ds.time.n_steps;
            ds.copy_state(n, t, cloud, i);
        }
        IdEstimate est = use_mle ? mle_id(cloud, k) : twonn_id(cloud);
        est.slice = "all";
        rows.push_back(est);
    }
    return rows;
}

void write_id_report_csv(const std::vector<IdEstimate>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("write_id_report_csv: cannot open " + path);
    out << "method,slice,estimate,k,n\n";
    for (const auto& r : rows)
        out << r.method << ',' << r.slice << ',' << csv_double(r.value) << ',' << r.k_neighbors
            << ',' << r.n_points_used << '\n';
    if (!out) throw DataError("write_id_report_csv: write failed");
}

}  // namespace weld
