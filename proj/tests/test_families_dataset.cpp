#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "weld/families.hpp"
#include "weld/grf.hpp"
#include "weld/rng.hpp"

using namespace weld;
namespace fs = std::filesystem;

TEST_CASE("hat: support, peak and ramp") {
    CHECK(hat(0.05, 0.0) == 0.0);
    CHECK(hat(0.05, 0.025) == doctest::Approx(1.0));
    CHECK(hat(0.05, 0.0125) == doctest::Approx(0.5));
    CHECK(hat(0.05, -0.01) == 0.0);
    CHECK(hat(0.05, 0.06) == doctest::Approx(0.0));
    CHECK_THROWS_AS(hat(0.0, 0.1), DataError);
}

TEST_CASE("soliton: peak, symmetry and a fixed value") {
    CHECK(soliton(36.0, 0.0) == doctest::Approx(18.0));
    for (double x : {0.3, 1.7, 4.0})
        CHECK(soliton(36.0, x) == doctest::Approx(soliton(36.0, -x)).epsilon(1e-15));
    // 2·sech(1)^2 = 2 / cosh(1)^2
    CHECK(soliton(4.0, 1.0) == doctest::Approx(0.8399486832280524).epsilon(1e-12));
    CHECK_THROWS_AS(soliton(-1.0, 0.0), DataError);
}

TEST_CASE("family defaults") {
    CHECK(family_time_grid(Family::tscale).t_end == 0.3);
    CHECK(family_time_grid(Family::bshift).t_end == 1.0);
    CHECK(family_time_grid(Family::kscale).t_end == 0.01);
    CHECK(family_spatial_grid(Family::tscale).periodic == false);
    CHECK(family_spatial_grid(Family::bscale).periodic == true);
    CHECK(family_spatial_grid(Family::kshift).domain_end == 6.0);
    CHECK_THROWS_AS(parse_family("kdv-bogus"), UsageError);
}

TEST_CASE("tscale: initial snapshot instantiates the hat-pair formula") {
    TimeGrid time{0.3, 4};
    SpatialGrid grid{128, 0.0, 1.0, false};
    TrajectoryDataset ds = gen_dataset(Family::tscale, 3, time, grid, 11);
    for (std::size_t n = 0; n < ds.n_samples; ++n) {
        const double a = ds.params[n];
        CHECK(a >= 1.0);
        CHECK(a <= 4.0);
        for (std::size_t j = 0; j < grid.n_points; ++j) {
            const double x = grid.point(j);
            const float expect =
                static_cast<float>(a * hat(0.05, x - 0.1) + hat(0.05, x - 0.2));
            CHECK(ds.value(n, 0, j) == expect);
        }
    }
}

TEST_CASE("kshift: h=0 initial condition is the two-soliton formula") {
    TimeGrid time{0.01, 3};
    SpatialGrid grid{256, 0.0, 6.0, true};
    TrajectoryDataset ds = gen_dataset(Family::kshift, 2, time, grid, 5);
    for (std::size_t n = 0; n < ds.n_samples; ++n) {
        const double h = ds.params[n];
        for (std::size_t j = 0; j < grid.n_points; ++j) {
            const double x = grid.point(j);
            const float expect =
                static_cast<float>(soliton(36.0, x - 1.0) + soliton(36.0, x - 2.0 - h));
            CHECK(ds.value(n, 0, j) == expect);
        }
    }
}

TEST_CASE("bscale: initial states combine the shared base fields on the unit circle") {
    TimeGrid time{0.05, 3};
    SpatialGrid grid{128, 0.0, 1.0, true};
    TrajectoryDataset ds = gen_dataset(Family::bscale, 3, time, grid, 21);
    GrfSpec gspec;
    gspec.grid = grid;
    GrfDraw w0 = sample_grf_modes(gspec, derive_seed(21, 0x42415345ULL, 0));
    GrfDraw w1 = sample_grf_modes(gspec, derive_seed(21, 0x42415345ULL, 1));
    auto f0 = grf_render(w0, grid);
    auto f1 = grf_render(w1, grid);
    for (std::size_t n = 0; n < ds.n_samples; ++n) {
        const double a = ds.params[n];
        const double b = std::sqrt(1.0 - a * a);
        CHECK(a * a + b * b == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = 0; j < grid.n_points; j += 17)
            CHECK(ds.value(n, 0, j) ==
                  doctest::Approx(a * f0[j] + b * f1[j]).epsilon(1e-6));
    }
}

TEST_CASE("dataset: round-trip is bit-exact and the size formula holds") {
    TimeGrid time{0.3, 7};
    SpatialGrid grid{64, 0.0, 1.0, false};
    TrajectoryDataset ds = gen_dataset(Family::tshift, 4, time, grid, 2);
    const std::string path = (fs::temp_directory_path() / "weld_ds_test.wtrj").string();
    dataset_write(ds, path);
    TrajectoryDataset back = dataset_read(path);
    CHECK(back.family == ds.family);
    CHECK(back.values == ds.values);
    CHECK(back.params == ds.params);
    CHECK(back.seed == ds.seed);
    CHECK(back.time == ds.time);
    CHECK(back.space == ds.space);

    // header + 4·N·T·D payload bytes
    std::ifstream in(path, std::ios::binary);
    in.seekg(8);
    std::uint32_t header_len = 0;
    in.read(reinterpret_cast<char*>(&header_len), 4);
    const auto file_size = fs::file_size(path);
    CHECK(file_size == 12 + header_len + 4 * ds.n_samples * time.n_steps * grid.n_points);
    fs::remove(path);
}

TEST_CASE("dataset: magic, version and truncation errors are distinct") {
    TimeGrid time{0.3, 3};
    SpatialGrid grid{32, 0.0, 1.0, false};
    TrajectoryDataset ds = gen_dataset(Family::tscale, 2, time, grid, 1);
    const auto tmp = fs::temp_directory_path();
    const std::string good = (tmp / "weld_ds_good.wtrj").string();
    dataset_write(ds, good);

    auto mutate = [&](const std::string& out, auto fn) {
        std::ifstream in(good, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        fn(bytes);
        std::ofstream o(out, std::ios::binary);
        o.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    };

    const std::string bad_magic = (tmp / "weld_ds_bad_magic.wtrj").string();
    mutate(bad_magic, [](std::string& b) { b[0] = 'X'; });
    CHECK_THROWS_WITH_AS(dataset_read(bad_magic), doctest::Contains("bad magic"), DataError);

    const std::string bad_version = (tmp / "weld_ds_bad_version.wtrj").string();
    mutate(bad_version, [](std::string& b) { b[7] = '9'; });
    CHECK_THROWS_WITH_AS(dataset_read(bad_version), doctest::Contains("unsupported version"),
                         DataError);

    const std::string truncated = (tmp / "weld_ds_truncated.wtrj").string();
    mutate(truncated, [](std::string& b) { b.resize(b.size() - 17); });
    CHECK_THROWS_WITH_AS(dataset_read(truncated), doctest::Contains("truncated"), DataError);

    for (const auto& p : {good, bad_magic, bad_version, truncated}) fs::remove(p);
}

TEST_CASE("gen-data determinism and split reproducibility") {
    TimeGrid time{0.3, 5};
    SpatialGrid grid{64, 0.0, 1.0, false};
    TrajectoryDataset a = gen_dataset(Family::tscale, 10, time, grid, 77);
    TrajectoryDataset b = gen_dataset(Family::tscale, 10, time, grid, 77);
    CHECK(a.values == b.values);
    CHECK(a.params == b.params);

    TrajectorySplit s1 = split_dataset(a, 0.2);
    TrajectorySplit s2 = split_dataset(b, 0.2);
    CHECK(s1.train == s2.train);
    CHECK(s1.test == s2.test);
    CHECK(s1.train.size() == 8);
    CHECK(s1.test.size() == 2);
    for (std::size_t t : s1.test)
        for (std::size_t tr : s1.train) CHECK(t != tr);
}
