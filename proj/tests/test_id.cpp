#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "weld/id_estimate.hpp"
#include "weld/rng.hpp"

using namespace weld;
namespace fs = std::filesystem;

namespace {

// m-flat embedded in R^10 through a random rotation plus offset
Matrix random_flat(std::size_t n_points, std::size_t flat_dim, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t ambient = 10;
    Matrix basis(flat_dim, ambient);
    for (std::size_t i = 0; i < basis.size(); ++i) basis.data()[i] = rng.normal();
    // orthonormalise rows
    for (std::size_t r = 0; r < flat_dim; ++r) {
        for (std::size_t p = 0; p < r; ++p) {
            double dot = 0.0;
            for (std::size_t c = 0; c < ambient; ++c) dot += basis(r, c) * basis(p, c);
            for (std::size_t c = 0; c < ambient; ++c) basis(r, c) -= dot * basis(p, c);
        }
        double norm = 0.0;
        for (std::size_t c = 0; c < ambient; ++c) norm += basis(r, c) * basis(r, c);
        norm = std::sqrt(norm);
        for (std::size_t c = 0; c < ambient; ++c) basis(r, c) /= norm;
    }
    Matrix points(n_points, ambient);
    for (std::size_t n = 0; n < n_points; ++n) {
        std::vector<double> coord(flat_dim);
        for (auto& v : coord) v = rng.uniform(0.0, 1.0);
        for (std::size_t c = 0; c < ambient; ++c) {
            double s = 0.3;
            for (std::size_t q = 0; q < flat_dim; ++q) s += coord[q] * basis(q, c);
            points(n, c) = s;
        }
    }
    return points;
}

}  // namespace

TEST_CASE("knn distances: hand examples and ordering") {
    Matrix pts(3, 1);
    pts(0, 0) = 0.0;
    pts(1, 0) = 1.0;
    pts(2, 0) = 3.0;
    Matrix d = knn_distances(pts, 1);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(1, 0) == 1.0);
    CHECK(d(2, 0) == 2.0);

    Matrix two(2, 2);
    two(0, 0) = 0.0;
    two(1, 0) = 3.0;
    Matrix d2 = knn_distances(two, 1);
    CHECK(d2(0, 0) == d2(1, 0));

    Matrix cloud = random_flat(50, 2, 1);
    Matrix dk = knn_distances(cloud, 10);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j + 1 < 10; ++j) CHECK(dk(i, j) <= dk(i, j + 1));

    CHECK_THROWS_AS(knn_distances(pts, 3), DataError);
}

TEST_CASE("mle: synthetic flats recover their dimension") {
    Matrix segment = random_flat(2000, 1, 2);
    const IdEstimate one = mle_id(segment);
    CHECK(one.value > 0.85);
    CHECK(one.value < 1.15);
    CHECK(one.k_neighbors == 20);

    Matrix square = random_flat(2000, 2, 3);
    const IdEstimate two = mle_id(square);
    CHECK(two.value > 1.8);
    CHECK(two.value < 2.2);
}

TEST_CASE("twonn: synthetic flats recover their dimension") {
    Matrix segment = random_flat(2000, 1, 4);
    const IdEstimate one = twonn_id(segment);
    CHECK(one.value > 0.8);
    CHECK(one.value < 1.2);

    Matrix square = random_flat(2000, 2, 5);
    const IdEstimate two = twonn_id(square);
    CHECK(two.value > 1.7);
    CHECK(two.value < 2.3);
}

TEST_CASE("monotone ordering across 1-, 2- and 3-flats") {
    const IdEstimate a = mle_id(random_flat(2000, 1, 6));
    const IdEstimate b = mle_id(random_flat(2000, 2, 7));
    const IdEstimate c = mle_id(random_flat(2000, 3, 8));
    CHECK(std::abs(a.value - 1.0) < 0.3);
    CHECK(std::abs(b.value - 2.0) < 0.3);
    CHECK(std::abs(c.value - 3.0) < 0.3);
    CHECK(a.value < b.value);
    CHECK(b.value < c.value);
}

TEST_CASE("estimates are scale- and translation-invariant") {
    Matrix cloud = random_flat(500, 2, 9);
    const double base_mle = mle_id(cloud).value;
    const double base_twonn = twonn_id(cloud).value;
    Matrix moved = cloud;
    for (std::size_t i = 0; i < moved.size(); ++i) moved.data()[i] = 3.7 * moved.data()[i] + 11.0;
    CHECK(mle_id(moved).value == doctest::Approx(base_mle).epsilon(1e-9));
    CHECK(twonn_id(moved).value == doctest::Approx(base_twonn).epsilon(1e-9));
}

TEST_CASE("exact duplicates are perturbed rather than fatal") {
    Matrix cloud = random_flat(200, 1, 10);
    // duplicate a handful of points exactly
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t c = 0; c < 10; ++c) cloud(i + 100, c) = cloud(i, c);
    const IdEstimate est = mle_id(cloud);
    CHECK(std::isfinite(est.value));
    CHECK(est.value > 0.5);
    CHECK(est.value < 1.5);
}

TEST_CASE("dataset report: slices, subsample clamp and csv") {
    TrajectoryDataset ds;
    ds.family = "synthetic";
    ds.time = TimeGrid{0.1, 5};
    ds.space = SpatialGrid{6, 0.0, 1.0, false};
    ds.n_samples = 60;
    ds.params.assign(60, 0.0);
    ds.values.assign(60 * 5 * 6, 0.0f);
    Rng rng(12);
    for (std::size_t n = 0; n < 60; ++n) {
        const double a = rng.uniform(0.0, 1.0);
        ds.params[n] = a;
        for (std::size_t t = 0; t < 5; ++t)
            for (std::size_t d = 0; d < 6; ++d)
                ds.state(n, t)[d] = static_cast<float>(
                    std::sin(a + 0.3 * static_cast<double>(t) + static_cast<double>(d)));
    }
    const auto rows = dataset_id_report(ds, {0, 4}, true, 1000000, 3, "mle", 10);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].slice == "t=0");
    CHECK(rows[1].slice == "t=4");
    CHECK(rows[2].slice == "all");
    CHECK(rows[2].n_points_used == 300);  // clamped to the population

    const std::string path = (fs::temp_directory_path() / "weld_id_test.csv").string();
    write_id_report_csv(rows, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "method,slice,estimate,k,n");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);
    fs::remove(path);

    CHECK_THROWS_AS(dataset_id_report(ds, {9}, false, 10, 0, "mle", 10), DataError);
    CHECK_THROWS_AS(dataset_id_report(ds, {0}, false, 10, 0, "bogus", 10), UsageError);
}
