#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigeom/renyi.hpp"

using namespace epigeom;

namespace {

Density grid_of(const Density& f, double radius, int res) {
    return Density::from_grid(f.discretize(radius, res), f.concavity());
}

}  // namespace

TEST_CASE("uniform on [0,1]: h_p = 0 for every p") {
    const Density u = Density::uniform_interval(0.0, 1.0);
    for (double p : {0.0, 0.5, 1.0, 2.0, 7.0, kInf}) {
        const EntropyResult r = renyi_entropy(u, p);
        CHECK(r.h == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.entropy_power == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gaussian closed forms") {
    const Density g = Density::standard_gaussian(1);
    // h_2 = log(2 sqrt(pi)); oracle: integral of phi^2 = 1/(2 sqrt(pi))
    const double phi2 = integrate(
        [](double x) {
            const double f = std::exp(-x * x / 2) / std::sqrt(2 * kPi);
            return f * f;
        },
        -10.0, 10.0, 1e-14);
    CHECK(phi2 == doctest::Approx(1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-12));
    const EntropyResult h2 = renyi_entropy(g, 2.0);
    CHECK(h2.h == doctest::Approx(-std::log(phi2)).epsilon(1e-12));
    CHECK(h2.h == doctest::Approx(1.265512).epsilon(1e-6));
    CHECK(h2.method == EntropyMethod::ClosedForm);

    // Shannon branch
    CHECK(renyi_entropy(g, 1.0).h == doctest::Approx(0.5 * std::log(2 * kPi * std::exp(1.0))));
    CHECK(renyi_entropy(g, 1.0).h == doctest::Approx(1.418939).epsilon(1e-6));
    // p = inf
    CHECK(renyi_entropy(g, kInf).h == doctest::Approx(0.5 * std::log(2 * kPi)).epsilon(1e-12));
    // p = 0: unbounded support
    CHECK(renyi_entropy(g, 0.0).h == kInf);
    CHECK_THROWS_AS(renyi_entropy(g, -0.5), std::invalid_argument);
}

TEST_CASE("triangle density: h_inf = 0") {
    const Density tri = Density::piecewise_linear({{-1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0}},
                                                  Concavity::log_concave());
    CHECK(renyi_entropy(tri, kInf).h == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(renyi_entropy(tri, 0.0).h == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // h_2 of the triangle: -log(int f^2) = -log(2/3)
    CHECK(renyi_entropy(tri, 2.0).h == doctest::Approx(-std::log(2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("entropy power values") {
    CHECK(entropy_power(Density::uniform_interval(-1.0, 1.0), 0.0) == doctest::Approx(4.0));
    CHECK(entropy_power(Density::standard_gaussian(1), 2.0) ==
          doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(entropy_power(Density::uniform_interval(0.0, 1.0), 3.0) == doctest::Approx(1.0));
}

TEST_CASE("directional entropy power") {
    const Density g2 = Density::standard_gaussian(2);
    // N_1(v . X) = |v|^2 N_1(standard gaussian) = 25 * 2 pi e
    CHECK(directional_entropy_power(g2, Vec{3.0, 4.0}, 1.0) ==
          doctest::Approx(25.0 * 2.0 * kPi * std::exp(1.0)).epsilon(1e-10));
    // homogeneity: doubling v doubles N^{1/2} exactly
    const Density sq = Density::uniform(SupportBody::box(Vec{0.5, 0.5}));
    const double n1 = std::sqrt(directional_entropy_power(sq, Vec{0.3, 0.8}, 2.0));
    const double n2 = std::sqrt(directional_entropy_power(sq, Vec{0.6, 1.6}, 2.0));
    CHECK(n2 == doctest::Approx(2.0 * n1).epsilon(1e-12));
    // axis marginal of the unit square at p = 0: range 1
    CHECK(directional_entropy_power(sq, Vec{1.0, 0.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(directional_entropy_power(sq, Vec{0.0, 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("monotonicity of h_p in p") {
    const std::vector<Density> fixtures{
        Density::standard_gaussian(1), Density::exponential(1.5), Density::exponential_power(1.0),
        Density::semicircle(2.0),
        Density::piecewise_linear({{-1.0, 1.0, 0.25, 0.75}}, Concavity::log_concave())};
    for (const auto& f : fixtures) {
        double prev = kInf;
        for (double p : {0.5, 0.9, 1.0, 1.5, 2.0, 4.0, 16.0, kInf}) {
            const EntropyResult r = renyi_entropy(f, p);
            CHECK(r.h <= prev + 2.0 * r.error_estimate + 1e-12);
            prev = r.h;
        }
    }
}

TEST_CASE("scaling law h_p(aX) = h_p(X) + n log a") {
    const std::vector<Density> fixtures{Density::standard_gaussian(1), Density::exponential(2.0),
                                        Density::uniform_interval(-0.3, 1.1)};
    for (const auto& f : fixtures)
        for (double a : {0.5, 2.0, 5.0})
            for (double p : {0.5, 1.0, 2.0}) {
                const double lhs = renyi_entropy(f.scale(a), p).h;
                const double rhs = renyi_entropy(f, p).h + std::log(a);
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
            }
    // 2-D: n = 2
    const Density g2 = Density::standard_gaussian(2);
    CHECK(renyi_entropy(g2.scale(2.0), 2.0).h ==
          doctest::Approx(renyi_entropy(g2, 2.0).h + 2.0 * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("quadrature path agrees with closed forms") {
    // 1-D adaptive quadrature route within 1e-6 of the closed forms
    for (const Density& f : {Density::standard_gaussian(1), Density::exponential(1.0),
                             Density::uniform_interval(-0.5, 0.5)}) {
        for (double p : {0.5, 1.0, 2.0, 3.0}) {
            const EntropyResult exact = renyi_entropy(f, p);
            const EntropyResult quad = renyi_entropy_quadrature(f, p);
            CHECK(quad.method == EntropyMethod::Quadrature);
            CHECK(std::abs(quad.h - exact.h) < 1e-6);
        }
    }
    // 2-D route (grid-backed) within 1e-4
    const Density g2 = Density::standard_gaussian(2);
    for (double p : {1.0, 2.0})
        CHECK(std::abs(renyi_entropy_quadrature(g2, p).h - renyi_entropy(g2, p).h) < 1e-4);
    // grid densities report the quadrature method with a finite error estimate
    const Density grid1 = grid_of(Density::standard_gaussian(1), 8.2, 4096);
    const EntropyResult r = renyi_entropy(grid1, 2.0);
    CHECK(r.method == EntropyMethod::Quadrature);
    CHECK(r.h == doctest::Approx(renyi_entropy(Density::standard_gaussian(1), 2.0).h).epsilon(1e-5));
}

TEST_CASE("monte carlo cross-check within 3 standard errors") {
    const int n = 1000000;
    for (const Density& f :
         {Density::standard_gaussian(1), Density::uniform_interval(0.0, 2.0)}) {
        for (double p : {1.0, 2.0}) {
            const EntropyResult mc = renyi_entropy_monte_carlo(f, p, 12345, n);
            const EntropyResult exact = renyi_entropy(f, p);
            CHECK(std::abs(mc.h - exact.h) <= 3.0 * mc.error_estimate + 1e-9);
            CHECK(mc.method == EntropyMethod::MonteCarlo);
        }
    }
}

TEST_CASE("convolution-wrapper entropies are quadrature with finite error") {
    const Density tri = Density::uniform_interval(-0.5, 0.5).self_convolve();
    const EntropyResult r = renyi_entropy(tri, 2.0);
    CHECK(r.method == EntropyMethod::Quadrature);
    // triangle on [-1,1]: int f^2 = 2/3
    CHECK(r.h == doctest::Approx(-std::log(2.0 / 3.0)).epsilon(1e-9));
    CHECK(r.error_estimate >= 0.0);
    CHECK(std::isfinite(r.error_estimate));
}

TEST_CASE("divergent integrals report infinities, not errors") {
    const Density heavy = Density::generalized_gaussian(-1.0, 1);
    CHECK(renyi_entropy(heavy, 0.0).h == kInf);
    CHECK(renyi_entropy(heavy, 0.0).entropy_power == kInf);
}
