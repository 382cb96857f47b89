// Times the OpenMP kernels against the serial reference implementations on
// training-shaped matrices and on the brute-force kNN scan.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "weld/id_estimate.hpp"
#include "weld/matrix.hpp"
#include "weld/rng.hpp"

using namespace weld;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
    return m;
}

template <typename Fn>
double time_loop(Fn&& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void bench_matmul(std::size_t m, std::size_t k, std::size_t n, Rng& rng) {
    Matrix a = random_matrix(m, k, rng);
    Matrix b = random_matrix(k, n, rng);
    Matrix c(m, n), c_ref(m, n);
    const double flops = 2.0 * static_cast<double>(m) * k * n;
    const int reps = std::max(1, static_cast<int>(2e8 / flops));
    const double t_omp = time_loop([&] { kernels::matmul(a, b, c); }, reps);
    const double t_ser = time_loop([&] { kernels::serial::matmul(a, b, c_ref); }, reps);
    bool identical = true;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c.data()[i] != c_ref.data()[i]) identical = false;
    std::printf("matmul %4zux%4zux%4zu  omp %7.2f GFLOP/s  serial %7.2f GFLOP/s  x%.2f  %s\n", m,
                k, n, flops / t_omp / 1e9, flops / t_ser / 1e9, t_ser / t_omp,
                identical ? "bit-identical" : "MISMATCH");
}

void bench_knn(std::size_t points, std::size_t dim, Rng& rng) {
    Matrix cloud = random_matrix(points, dim, rng);
    const double t = time_loop([&] { knn_distances(cloud, 20); }, 3);
    std::printf("knn    %zu points x %zu dims: %.3f s/run\n", points, dim, t);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#endif
    Rng rng(42);
    bench_matmul(32, 512, 500, rng);
    bench_matmul(32, 500, 500, rng);
    bench_matmul(32, 200, 200, rng);
    bench_matmul(256, 512, 512, rng);
    bench_knn(2000, 10, rng);
    bench_knn(1000, 512, rng);
    return 0;
}
