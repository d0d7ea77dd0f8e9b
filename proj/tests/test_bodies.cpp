#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "epigeom/star_body.hpp"

using namespace epigeom;

namespace {

Density unit_disk() { return Density::uniform(SupportBody::ball(2, 1.0)); }
Density unit_square() { return Density::uniform(SupportBody::box(Vec{0.5, 0.5})); }

}  // namespace

TEST_CASE("cross-section body of the unit disk") {
    const auto dirs = circle_directions(8);
    // p = 1: integral of ((2/pi) sqrt(1-t^2))^2 over [-1,1] equals 16/(3 pi^2)
    const double oracle = integrate(
        [](double t) {
            const double m = 2.0 / kPi * std::sqrt(std::max(0.0, 1.0 - t * t));
            return m * m;
        },
        -1.0, 1.0, 1e-12);
    CHECK(oracle == doctest::Approx(16.0 / (3.0 * kPi * kPi)).epsilon(1e-9));
    const StarBody c1 = cross_section_body(unit_disk(), 1.0, dirs);
    for (double r : c1.radii) CHECK(r == doctest::Approx(0.540380).epsilon(1e-6));

    // p = -1: reciprocal of the range of v.X (diameter 2)
    const StarBody cm1 = cross_section_body(unit_disk(), -1.0, dirs);
    for (double r : cm1.radii) CHECK(r == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(cross_section_body(unit_disk(), 0.0, dirs), std::invalid_argument);
}

TEST_CASE("cross-section two-path agreement") {
    const auto dirs = circle_directions(64);
    const std::vector<Density> fixtures{unit_disk(), Density::standard_gaussian(2), unit_square()};
    for (const auto& f : fixtures)
        for (double p : {0.5, 1.0, 2.0}) {
            const StarBody direct = cross_section_body(f, p, dirs);
            for (size_t i = 0; i < dirs.size(); ++i) {
                const double via_np = cross_section_radius_via_entropy(f, p, dirs[i]);
                CHECK(direct.radii[i] == doctest::Approx(via_np).epsilon(1e-4));
            }
        }
}

TEST_CASE("gaussian cross-section radius is direction-free") {
    const auto dirs = circle_directions(16);
    for (double p : {0.5, 2.0}) {
        const StarBody b = cross_section_body(Density::standard_gaussian(2), p, dirs);
        for (double r : b.radii) CHECK(r == doctest::Approx(b.radii[0]).epsilon(1e-10));
    }
}

TEST_CASE("intersection body of densities") {
    const auto dirs = circle_directions(12);
    const StarBody disk = intersection_body_of_density(unit_disk(), dirs);
    for (double r : disk.radii) CHECK(r == doctest::Approx(2.0 / kPi).epsilon(1e-12));
    const StarBody gauss = intersection_body_of_density(Density::standard_gaussian(2), dirs);
    for (double r : gauss.radii)
        CHECK(r == doctest::Approx(1.0 / std::sqrt(2.0 * kPi)).epsilon(1e-12));
    // symmetry rho(v) = rho(-v) for the square marginals too
    const StarBody sq = intersection_body_of_density(unit_square(), dirs);
    for (size_t i = 0; i < 6; ++i) CHECK(sq.radii[i] == doctest::Approx(sq.radii[i + 6]).epsilon(1e-12));
}

TEST_CASE("intersection body of a star body") {
    const auto dirs = circle_directions(360);
    // disk of radius r: central chord 2r
    StarBody disk;
    disk.dim = 2;
    disk.directions = dirs;
    disk.radii.assign(dirs.size(), 1.7);
    disk.label = "disk";
    CHECK(intersection_body_of_starbody(disk, Direction::from_angle(0.77)) ==
          doctest::Approx(3.4).epsilon(1e-12));

    // unit square as a star body: vertical central chord has length 1
    StarBody square;
    square.dim = 2;
    square.directions = dirs;
    for (const Direction& v : dirs)
        square.radii.push_back(0.5 / std::max(std::abs(v[0]), std::abs(v[1])));
    square.label = "square";
    CHECK(intersection_body_of_starbody(square, Direction(Vec{1.0, 0.0})) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(intersection_body_of_starbody(square, Direction(Vec{-1.0, 0.0})) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("radial mean body") {
    // 1-D uniform[0,1], p = 1, v = +1: integral of (1-x) dx = 1/2
    const Density u01 = Density::uniform_interval(0.0, 1.0);
    CHECK(radial_mean_radius(u01, 1.0, Direction(Vec{1.0})) == doctest::Approx(0.5).epsilon(1e-9));
    // disk, p = inf: difference body of the unit disk has radius 2
    CHECK(radial_mean_radius(unit_disk(), kInf, Direction::from_angle(0.3)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(radial_mean_radius(Density::standard_gaussian(2), kInf, Direction::from_angle(0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(radial_mean_radius(u01, -1.0, Direction(Vec{1.0})), std::invalid_argument);
}

TEST_CASE("radial mean body: R_inf exact for polytopes") {
    const SupportBody hexagon = SupportBody::polytope({{1, 0},
                                                       {0.5, std::sqrt(3.0) / 2},
                                                       {-0.5, std::sqrt(3.0) / 2},
                                                       {-1, 0},
                                                       {-0.5, -std::sqrt(3.0) / 2},
                                                       {0.5, -std::sqrt(3.0) / 2}});
    const Density f = Density::uniform(hexagon);
    const auto dirs = circle_directions(24);
    const StarBody rinf = radial_mean_body(f, kInf, dirs);
    for (size_t i = 0; i < dirs.size(); ++i)
        CHECK(rinf.radii[i] == doctest::Approx(2.0 * hexagon.radial(dirs[i])).epsilon(1e-12));
}

TEST_CASE("ball mean body") {
    // uniform unit disk, p = 2: (int_0^1 r/pi dr)^{1/2} = (1/(2 pi))^{1/2}
    CHECK(ball_mean_radius(unit_disk(), 2.0, Direction::from_angle(1.0)) ==
          doctest::Approx(std::sqrt(1.0 / (2.0 * kPi))).epsilon(1e-9));
    // triangle density, p = 1, v = +1: int_0^1 (1-r) dr = 1/2
    const Density tri = Density::piecewise_linear({{-1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0}},
                                                  Concavity::log_concave());
    CHECK(ball_mean_radius(tri, 1.0, Direction(Vec{1.0})) == doctest::Approx(0.5).epsilon(1e-9));
    // R_1(uniform[0,1]) = B_1(fhat): both equal 1/2
    const Density u01 = Density::uniform_interval(0.0, 1.0);
    CHECK(ball_mean_radius(u01.self_convolve(), 1.0, Direction(Vec{1.0})) ==
          doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("polar centroid body") {
    const auto dirs = circle_directions(8);
    // standard gaussian, p = 2: second moment 1
    CHECK(centroid_moment(Density::standard_gaussian(1), 2.0, Direction(Vec{1.0})) ==
          doctest::Approx(1.0).epsilon(1e-10));
    const StarBody g = polar_centroid_body(Density::standard_gaussian(2), 2.0, dirs);
    for (double r : g.radii) CHECK(r == doctest::Approx(1.0).epsilon(1e-9));
    // uniform [-1/2, 1/2]: second moment 1/12
    CHECK(polar_centroid_body(Density::uniform_interval(-0.5, 0.5), 2.0,
                              {Direction(Vec{1.0}), Direction(Vec{-1.0})})
              .radii[0] == doctest::Approx(std::sqrt(12.0)).epsilon(1e-9));
    // homogeneity: density of 2X halves the radius
    const Density f = Density::standard_gaussian(1);
    const double r1 = polar_centroid_body(f, 2.0, {Direction(Vec{1.0}), Direction(Vec{-1.0})}).radii[0];
    const double r2 =
        polar_centroid_body(f.scale(2.0), 2.0, {Direction(Vec{1.0}), Direction(Vec{-1.0})}).radii[0];
    CHECK(r2 == doctest::Approx(0.5 * r1).epsilon(1e-9));
}

TEST_CASE("z body: dilation of the polar centroid body") {
    const auto dirs = circle_directions(8);
    // p = 1: dilation factor (2/2)^1 = 1
    const StarBody z1 = z_body(Density::standard_gaussian(2), 1.0, dirs);
    const StarBody g1 = polar_centroid_body(Density::standard_gaussian(2), 1.0, dirs);
    for (size_t i = 0; i < dirs.size(); ++i) CHECK(z1.radii[i] == g1.radii[i]);
    // gaussian 1-D, p = 2: rho = (2/3)^{1/2}
    const StarBody z2 = z_body(Density::standard_gaussian(1), 2.0,
                               {Direction(Vec{1.0}), Direction(Vec{-1.0})});
    CHECK(z2.radii[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-9));
    // dilation law to machine precision against the explicit factor
    const StarBody g2 = polar_centroid_body(Density::standard_gaussian(2), 2.0, dirs);
    const StarBody zz = z_body(Density::standard_gaussian(2), 2.0, dirs);
    for (size_t i = 0; i < dirs.size(); ++i)
        CHECK(zz.radii[i] ==
              doctest::Approx(std::pow(2.0 / 3.0, 0.5) * g2.radii[i]).epsilon(1e-14));
}

TEST_CASE("z body near p = -1 approaches the intersection body") {
    const double p = -0.999;
    const Direction v = Direction::from_angle(0.4);
    const double zm = z_moment(unit_disk(), p, v);  // rho^{-p}
    CHECK(zm == doctest::Approx(2.0 / kPi).epsilon(0.01));
}

TEST_CASE("support body operations") {
    const SupportBody square = SupportBody::box(Vec{0.5, 0.5});
    CHECK(square.support(Vec{1.0, 0.0}) == doctest::Approx(0.5));
    const Vec diag{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    CHECK(square.support(diag) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    const SupportBody ball2 = SupportBody::ball(2, 2.0);
    CHECK(ball2.polar_radial(Direction::from_angle(0.123)) == doctest::Approx(0.5));

    // difference body of a symmetric polytope equals its dilation by 2
    const SupportBody diamond = SupportBody::polytope({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
    const SupportBody diff = diamond.difference_body();
    const SupportBody twice = diamond.dilate(2.0);
    for (const Direction& v : circle_directions(36))
        CHECK(diff.support(v.components) == doctest::Approx(twice.support(v.components)).epsilon(1e-13));
    CHECK(diamond.volume() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(diff.volume() == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("polytope radial function") {
    const SupportBody square = SupportBody::box(Vec{0.5, 0.5});
    CHECK(square.radial(Direction(Vec{1.0, 0.0})) == doctest::Approx(0.5));
    CHECK(square.radial(Direction::from_angle(kPi / 4)) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    const SupportBody hexagon = SupportBody::polytope({{1, 0},
                                                       {0.5, std::sqrt(3.0) / 2},
                                                       {-0.5, std::sqrt(3.0) / 2},
                                                       {-1, 0},
                                                       {-0.5, -std::sqrt(3.0) / 2},
                                                       {0.5, -std::sqrt(3.0) / 2}});
    CHECK(hexagon.radial(Direction(Vec{1.0, 0.0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hexagon.radial(Direction::from_angle(kPi / 6)) ==
          doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));  // edge midpoint
    CHECK_THROWS_AS(SupportBody::polytope({{1, 0}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("bodies of symmetric densities are symmetric within 1e-9") {
    const auto dirs = circle_directions(16);
    const std::vector<StarBody> bodies{
        cross_section_body(unit_square(), 2.0, dirs),
        intersection_body_of_density(unit_disk(), dirs),
        ball_mean_body(Density::standard_gaussian(2), 2.0, dirs),
        polar_centroid_body(unit_square(), 1.0, dirs),
    };
    for (const auto& b : bodies) {
        const size_t n = b.count();
        for (size_t i = 0; i < n / 2; ++i)
            CHECK(b.radii[i] == doctest::Approx(b.radii[i + n / 2]).epsilon(1e-9));
    }
}

TEST_CASE("radial mean 2-D integer fast path matches the generic path") {
    // disk, p = 2: the binomial-cumulant route against per-point quadrature
    const Direction v = Direction::from_angle(0.7);
    BodyOptions fast;
    fast.resolution = 512;
    const double a = radial_mean_radius(unit_disk(), 2.0, v, fast);
    const double b = radial_mean_radius(unit_disk(), 2.0 + 1e-13, v, fast);  // generic branch
    CHECK(a == doctest::Approx(b).epsilon(5e-3));
}

TEST_CASE("cross-section body for p in (-1, 0)") {
    // disk at p = -1/2: rho = (int m^{1/2} dt)^{-2} with the semicircle marginal
    const double p = -0.5;
    const double oracle = integrate(
        [](double t) {
            const double m = 2.0 / kPi * std::sqrt(std::max(0.0, 1.0 - t * t));
            return std::pow(m, 0.5);
        },
        -1.0, 1.0, 1e-12);
    const Direction v = Direction::from_angle(0.9);
    const double got = cross_section_radius(unit_disk(), p, v);
    CHECK(got == doctest::Approx(std::pow(oracle, 1.0 / p)).epsilon(1e-8));
    // and it still agrees with the N_{p+1}^{-1/2} route
    CHECK(got == doctest::Approx(cross_section_radius_via_entropy(unit_disk(), p, v)).epsilon(1e-6));
}
