#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigeom/numerics.hpp"

using namespace epigeom;

TEST_CASE("adaptive quadrature on known integrals") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::exp(-x * x / 2); }, -9.0, 9.0, 1e-14) ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
    const double pieces = integrate_pieces([](double x) { return std::abs(x); }, {-1.0, 0.0, 2.0});
    CHECK(pieces == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("golden section refinement finds a smooth maximum") {
    const auto m = maximize_scalar([](double x) { return -(x - 0.37) * (x - 0.37); }, 0.0, 1.0, 128);
    CHECK(m.arg == doctest::Approx(0.37).epsilon(1e-9));
}

TEST_CASE("fft convolution matches direct convolution") {
    const std::vector<double> a{1, 2, 3, 0.5};
    const std::vector<double> b{-1, 0.25, 4};
    const auto got = convolve_fft(a, b);
    REQUIRE(got.size() == a.size() + b.size() - 1);
    for (size_t k = 0; k < got.size(); ++k) {
        double want = 0;
        for (size_t i = 0; i < a.size(); ++i)
            if (k >= i && k - i < b.size()) want += a[i] * b[k - i];
        CHECK(got[k] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("2-D fft convolution matches direct convolution") {
    const std::vector<double> a{1, 2, 3, 4, 5, 6};        // 2x3
    const std::vector<double> b{1, -1, 0.5, 2};           // 2x2
    const auto got = convolve_fft_2d(a, 2, 3, b, 2, 2);   // 3x4
    auto direct = [&](int r, int c) {
        double s = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 3; ++j) {
                const int bi = r - i, bj = c - j;
                if (bi >= 0 && bi < 2 && bj >= 0 && bj < 2) s += a[i * 3 + j] * b[bi * 2 + bj];
            }
        return s;
    };
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(got[static_cast<size_t>(r) * 4 + c] == doctest::Approx(direct(r, c)).epsilon(1e-12));
}

TEST_CASE("rng determinism and normal moments") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng r(7);
    double sum = 0, sumsq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.02));
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("direction basics") {
    const Direction d = Direction::from_angle(0.3);
    CHECK(d.perpendicular().angle() == doctest::Approx(0.3 + kPi / 2));
    CHECK(dot(d.components, d.perpendicular().components) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(Direction(Vec{1.0, 1.0}), std::invalid_argument);
    const auto dirs = circle_directions(8);
    CHECK(dirs.size() == 8);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(dirs[i][0] == doctest::Approx(-dirs[i + 4][0]).epsilon(1e-12));
        CHECK(dirs[i][1] == doctest::Approx(-dirs[i + 4][1]).epsilon(1e-12));
    }
}

TEST_CASE("spd solve and determinant") {
    SymMatrix m(2);
    m.at(0, 0) = 4;
    m.at(0, 1) = 1;
    m.at(1, 0) = 1;
    m.at(1, 1) = 3;
    CHECK(determinant_spd(m) == doctest::Approx(11.0).epsilon(1e-14));
    const Vec x = solve_spd(m, Vec{9, 8});
    CHECK(4 * x[0] + 1 * x[1] == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(1 * x[0] + 3 * x[1] == doctest::Approx(8.0).epsilon(1e-12));
    SymMatrix bad(2);
    bad.at(0, 0) = 1;
    bad.at(0, 1) = 2;
    bad.at(1, 0) = 2;
    bad.at(1, 1) = 1;
    CHECK_THROWS_AS(cholesky(bad), std::invalid_argument);
}

TEST_CASE("parallel_for writes disjoint slots") {
    std::vector<int> out(100, -1);
    parallel_for(100, [&](int i) { out[static_cast<size_t>(i)] = i * i; });
    for (int i = 0; i < 100; ++i) CHECK(out[static_cast<size_t>(i)] == i * i);
}
