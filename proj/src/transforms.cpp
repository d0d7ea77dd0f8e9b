#include "epigeom/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace epigeom {

SphericalFunction SphericalFunction::from_function(const std::vector<Direction>& dirs,
                                                   std::function<double(const Direction&)> fn,
                                                   bool even) {
    SphericalFunction g;
    g.dim = dirs.empty() ? 2 : dirs.front().dim();
    g.directions = dirs;
    g.values.resize(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i) g.values[i] = fn(dirs[i]);
    g.even = even;
    g.evaluator = std::move(fn);
    g.validate();
    return g;
}

SphericalFunction SphericalFunction::constant(const std::vector<Direction>& dirs, double c) {
    return from_function(dirs, [c](const Direction&) { return c; }, true);
}

SphericalFunction SphericalFunction::from_star_body(const StarBody& k, double power) {
    SphericalFunction g;
    g.dim = k.dim;
    g.directions = k.directions;
    g.values.resize(k.radii.size());
    for (size_t i = 0; i < k.radii.size(); ++i) g.values[i] = std::pow(k.radii[i], power);
    g.even = true;
    StarBody body = k;  // keep a copy alive inside the evaluator
    g.evaluator = [body, power](const Direction& v) {
        return std::pow(body.radius_at_angle(v.angle()), power);
    };
    g.validate();
    return g;
}

double SphericalFunction::value_at_angle(double theta) const {
    if (evaluator) return evaluator(Direction::from_angle(theta));
    const size_t n = directions.size();
    const double step = 2.0 * kPi / static_cast<double>(n);
    double u = std::fmod(theta, 2.0 * kPi);
    if (u < 0) u += 2.0 * kPi;
    const double pos = u / step;
    const size_t i = static_cast<size_t>(pos) % n;
    const double w = pos - std::floor(pos);
    return (1.0 - w) * values[i] + w * values[(i + 1) % n];
}

void SphericalFunction::validate() const {
    if (directions.size() != values.size())
        throw std::invalid_argument("SphericalFunction: direction/value count mismatch");
    if (even) {
        const size_t n = values.size();
        if (n % 2 != 0) throw std::invalid_argument("SphericalFunction: set not antipodally closed");
        double scale = 1.0;
        for (double v : values) scale = std::max(scale, std::abs(v));
        for (size_t i = 0; i < n / 2; ++i)
            if (std::abs(values[i] - values[i + n / 2]) > 1e-9 * scale)
                throw std::invalid_argument("SphericalFunction: marked even but g(u) != g(-u)");
    }
}

// ---------------------------------------------------------------------------

double cosine_transform(const SphericalFunction& g, double p, const Direction& v) {
    if (!(p > -1.0)) throw std::invalid_argument("cosine_transform: p must be > -1");
    if (g.dim != 2) throw std::invalid_argument("cosine_transform: dim must be 2");
    const size_t n = g.directions.size();
    const double step = 2.0 * kPi / static_cast<double>(n);
    const double theta_v = v.angle();

    if (p >= 0.0) {
        double acc = 0;
        for (size_t i = 0; i < n; ++i) {
            const double c = std::abs(std::cos(g.directions[i].angle() - theta_v));
            acc += std::pow(c, p) * g.values[i];
        }
        return acc * step;
    }

    // p in (-1, 0): |cos| ~ |phi| near the two perpendicular angles; replace the
    // quadrature there by the analytic integral against the frozen g
    const double delta = 10.0 * step;
    double acc = 0;
    for (size_t i = 0; i < n; ++i) {
        const double phi = g.directions[i].angle() - theta_v;
        const double d1 = std::abs(std::remainder(phi - 0.5 * kPi, 2.0 * kPi));
        const double d2 = std::abs(std::remainder(phi + 0.5 * kPi, 2.0 * kPi));
        if (std::min(d1, d2) <= delta) continue;
        acc += std::pow(std::abs(std::cos(phi)), p) * g.values[i];
    }
    acc *= step;
    // int_{-delta}^{delta} |sin(phi)|^p dphi = 2 delta^{p+1}/(p+1) - (p/3) delta^{p+3}/(p+3) + ...
    const double patch_integral =
        2.0 * std::pow(delta, p + 1.0) / (p + 1.0) - (p / 3.0) * std::pow(delta, p + 3.0) / (p + 3.0);
    acc += g.value_at_angle(theta_v + 0.5 * kPi) * patch_integral;
    acc += g.value_at_angle(theta_v - 0.5 * kPi) * patch_integral;
    return acc;
}

double radon_transform(const SphericalFunction& g, const Direction& v) {
    if (g.dim == 2) {
        const double theta = v.angle() + 0.5 * kPi;
        return g.value_at_angle(theta) + g.value_at_angle(theta + kPi);
    }
    if (g.dim == 3) {
        if (!g.evaluator)
            throw std::invalid_argument("radon_transform: dim 3 needs an evaluator");
        // orthonormal frame spanning v^perp
        Vec a{1, 0, 0};
        if (std::abs(v[0]) > 0.9) a = Vec{0, 1, 0};
        Vec e1(3), e2(3);
        // e1 = normalize(a - (a.v)v), e2 = v x e1
        const double av = dot(a, v.components);
        for (int i = 0; i < 3; ++i) e1[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] - av * v[i];
        const double n1 = norm(e1);
        for (double& x : e1) x /= n1;
        e2[0] = v[1] * e1[2] - v[2] * e1[1];
        e2[1] = v[2] * e1[0] - v[0] * e1[2];
        e2[2] = v[0] * e1[1] - v[1] * e1[0];
        const int m = 720;
        double acc = 0;
        for (int k = 0; k < m; ++k) {
            const double phi = 2.0 * kPi * k / m;
            Vec u(3);
            for (int i = 0; i < 3; ++i)
                u[static_cast<size_t>(i)] =
                    std::cos(phi) * e1[static_cast<size_t>(i)] + std::sin(phi) * e2[static_cast<size_t>(i)];
            acc += g.evaluator(Direction(u));
        }
        return acc * 2.0 * kPi / m;
    }
    throw std::invalid_argument("radon_transform: unsupported dim");
}

LimitCheck tr_limit_check(const SphericalFunction& g, const Direction& v, double eps) {
    if (!(eps > 0.0 && eps <= 0.1))
        throw std::invalid_argument("tr_limit_check: eps must be in (0, 0.1]");
    LimitCheck c;
    const double p = -1.0 + eps;
    c.lhs = 0.5 * (p + 1.0) * cosine_transform(g, p, v);
    c.rhs = radon_transform(g, v);
    c.gap = std::abs(c.lhs - c.rhs);
    return c;
}

// ---------------------------------------------------------------------------

namespace {

double max_relative_gap(const std::vector<double>& lhs, const std::vector<double>& rhs) {
    double worst = 0;
    for (size_t i = 0; i < lhs.size(); ++i) {
        const double denom = std::max(std::abs(rhs[i]), 1e-300);
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]) / denom);
    }
    return worst;
}

}  // namespace

double zr_identity_check(const Density& f, double p, const std::vector<Direction>& dirs,
                         const BodyOptions& opt) {
    if (!(p >= -1.0) || p == 0.0)
        throw std::invalid_argument("zr_identity_check: p must be >= -1 and nonzero");
    const int n = f.dim();
    if (!(n + p > 0)) throw std::invalid_argument("zr_identity_check: need n + p > 0");

    // Left: Z_p of the radial mean body R_{n+p}(f), via the polar-coordinate
    // moment ((p+1)/(2(n+p))) int |u.v|^p rho^{n+p}(u) du over the sphere.
    // The sphere quadrature needs a finer set than the reporting directions:
    // |u.v|^p has kinks at u perp v.
    const int quad_count = std::max<int>(256, 4 * static_cast<int>(dirs.size()));
    const StarBody rbody = radial_mean_body(f, n + p, circle_directions(quad_count), opt);
    const SphericalFunction powers = SphericalFunction::from_star_body(rbody, double(n) + p);
    std::vector<double> lhs(dirs.size()), rhs(dirs.size());
    parallel_for(static_cast<int>(dirs.size()), [&](int i) {
        const Direction& v = dirs[static_cast<size_t>(i)];
        const double moment =
            0.5 * (p + 1.0) / (double(n) + p) * cosine_transform(powers, p, v);
        lhs[static_cast<size_t>(i)] = std::pow(moment, -1.0 / p);

        // Right: (1/(n+p)) int f(x) rho_{Z_p(f_x)}(v)^{-p} dx, where
        // rho_{Z_p(f_x)}(v)^{-p} = ((p+1)/2) int |v.y|^p f(x+y) dy. Collapsing
        // both integrals onto the marginal m of v.X gives
        // ((p+1)/(2(n+p))) int int m(t) m(s) |t-s|^p dt ds.
        const Density marginal = f.marginal_along(v);
        const double c = marginal.center()[0];
        const double r = marginal.truncation_radius(1e-12);
        const double lo = std::max(marginal.support_lo(), c - r);
        const double hi = std::min(marginal.support_hi(), c + r);
        const int m = 1024;
        const double h = (hi - lo) / (m - 1);
        std::vector<double> mv(static_cast<size_t>(m));
        for (int k = 0; k < m; ++k) mv[static_cast<size_t>(k)] = marginal.evaluate1(lo + k * h);
        double acc = 0;
        for (int a = 0; a < m; ++a) {
            if (mv[static_cast<size_t>(a)] == 0.0) continue;
            const double wa = (a == 0 || a == m - 1) ? 0.5 : 1.0;
            double row = 0;
            for (int b = 0; b < m; ++b) {
                if (a == b) continue;
                const double wb = (b == 0 || b == m - 1) ? 0.5 : 1.0;
                row += wb * mv[static_cast<size_t>(b)] * std::pow(std::abs(a - b) * h, p);
            }
            acc += wa * mv[static_cast<size_t>(a)] * row;
        }
        const double moment_rhs = 0.5 * (p + 1.0) / (double(n) + p) * acc * h * h;
        rhs[static_cast<size_t>(i)] = std::pow(moment_rhs, -1.0 / p);
    });
    return max_relative_gap(lhs, rhs);
}

double zi_limit_check(const Density& f, double eps, const std::vector<Direction>& dirs,
                      const BodyOptions& opt) {
    if (!(eps > 0.0 && eps <= 0.1))
        throw std::invalid_argument("zi_limit_check: eps must be in (0, 0.1]");
    const double p = -1.0 + eps;
    std::vector<double> lhs(dirs.size()), rhs(dirs.size());
    parallel_for(static_cast<int>(dirs.size()), [&](int i) {
        const Direction& v = dirs[static_cast<size_t>(i)];
        lhs[static_cast<size_t>(i)] = z_moment(f, p, v, opt);
        rhs[static_cast<size_t>(i)] = f.section_integral(v, 0.0);
    });
    return max_relative_gap(lhs, rhs);
}

double cn1_radon_check(const Density& f, double eps, const std::vector<Direction>& dirs,
                       const BodyOptions& opt) {
    if (f.dim() != 2) throw std::invalid_argument("cn1_radon_check: dim must be 2");
    if (!(eps > 0.0 && eps <= 0.1))
        throw std::invalid_argument("cn1_radon_check: eps must be in (0, 0.1]");
    const double p = -1.0 + eps;
    const StarBody c1 = cross_section_body(f, 1.0, dirs, opt);
    const SphericalFunction g = SphericalFunction::from_star_body(c1, 1.0);  // n-1 = 1
    std::vector<double> lhs(dirs.size()), rhs(dirs.size());
    parallel_for(static_cast<int>(dirs.size()), [&](int i) {
        const Direction& v = dirs[static_cast<size_t>(i)];
        lhs[static_cast<size_t>(i)] = 0.5 * (p + 1.0) * cosine_transform(g, p, v);
        rhs[static_cast<size_t>(i)] = intersection_body_of_starbody(c1, v);
    });
    return max_relative_gap(lhs, rhs);
}

}  // namespace epigeom
