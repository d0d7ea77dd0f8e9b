#include "epigeom/star_body.hpp"

#include <algorithm>
#include <cmath>

#include "epigeom/renyi.hpp"

namespace epigeom {

double StarBody::radius_at_angle(double theta) const {
    const size_t n = directions.size();
    const double step = 2.0 * kPi / static_cast<double>(n);
    double u = std::fmod(theta, 2.0 * kPi);
    if (u < 0) u += 2.0 * kPi;
    const double pos = u / step;
    const size_t i = static_cast<size_t>(pos) % n;
    const double w = pos - std::floor(pos);
    return (1.0 - w) * radii[i] + w * radii[(i + 1) % n];
}

double StarBody::max_radius() const {
    double m = 0;
    for (double r : radii) m = std::max(m, r);
    return m;
}

void StarBody::validate(bool require_symmetric) const {
    if (directions.size() != radii.size())
        throw std::invalid_argument("StarBody: direction/radius count mismatch");
    for (double r : radii)
        if (!(r > 0) || !std::isfinite(r))
            throw std::invalid_argument("StarBody(" + label + "): radius not positive finite");
    if (require_symmetric) {
        const size_t n = radii.size();
        if (n % 2 != 0) throw std::invalid_argument("StarBody: set not antipodally closed");
        for (size_t i = 0; i < n / 2; ++i)
            if (std::abs(radii[i] - radii[i + n / 2]) > 1e-9 * (1.0 + max_radius()))
                throw std::invalid_argument("StarBody(" + label + "): rho(v) != rho(-v)");
    }
}

namespace {

StarBody build_body(const std::vector<Direction>& dirs, const std::string& label,
                    const std::function<double(const Direction&)>& radius) {
    StarBody b;
    b.dim = dirs.empty() ? 2 : dirs.front().dim();
    b.directions = dirs;
    b.radii.assign(dirs.size(), 0.0);
    b.label = label;
    parallel_for(static_cast<int>(dirs.size()),
                 [&](int i) { b.radii[static_cast<size_t>(i)] = radius(dirs[static_cast<size_t>(i)]); });
    return b;
}

// geometric subdivision of [0, rmax]: adaptive quadrature alone can converge
// prematurely when the density's mass sits in a thin sliver of a wide
// truncation window, so force evaluations on every dyadic scale
std::vector<double> ray_pieces(double rmax, const std::vector<double>& extra = {}) {
    std::vector<double> bps{0.0};
    for (double r = rmax / 1024.0; r < rmax; r *= 2.0) bps.push_back(r);
    bps.push_back(rmax);
    for (double b : extra)
        if (b > 0 && b < rmax) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    return bps;
}

// quadrature of an integrand against the 1-D marginal's support window
double integrate_marginal(const Density& marginal, const std::function<double(double)>& fn,
                          double tol) {
    const double c = marginal.center()[0];
    const double r = marginal.truncation_radius(1e-14);
    const double lo = std::max(marginal.support_lo(), c - r);
    const double hi = std::min(marginal.support_hi(), c + r);
    std::vector<double> bps{lo, hi};
    for (double b : marginal.breakpoints_1d())
        if (b > lo && b < hi) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    return integrate_pieces(fn, bps, tol);
}

}  // namespace

// ---------------------------------------------------------------------------
// Cross-section body
// ---------------------------------------------------------------------------

double cross_section_radius(const Density& f, double p, const Direction& v,
                            const BodyOptions& opt) {
    if (p == 0.0) throw std::invalid_argument("cross_section_radius: p = 0 is undefined");
    if (!(p >= -1.0)) throw std::invalid_argument("cross_section_radius: p must be >= -1");
    if (p == -1.0) {
        const double range = f.range_along(v);
        if (!std::isfinite(range) || range <= 0)
            throw std::invalid_argument("cross_section_radius: unbounded range at p = -1");
        return 1.0 / range;
    }
    const Density marginal = f.marginal_along(v);
    const double integral = integrate_marginal(
        marginal,
        [&](double t) {
            const double m = f.section_integral(v, t);
            return m > 0 ? std::pow(m, p + 1.0) : 0.0;
        },
        opt.quad_tol);
    if (!(integral > 0) || !std::isfinite(integral))
        throw std::invalid_argument("cross_section_radius: section integral diverged");
    return std::pow(integral, 1.0 / p);
}

double cross_section_radius_via_entropy(const Density& f, double p, const Direction& v) {
    const double n = directional_entropy_power(f, v.components, p + 1.0);
    return 1.0 / std::sqrt(n);
}

StarBody cross_section_body(const Density& f, double p, const std::vector<Direction>& dirs,
                            const BodyOptions& opt) {
    StarBody b = build_body(dirs, "cross-section(p=" + std::to_string(p) + ")",
                            [&](const Direction& v) { return cross_section_radius(f, p, v, opt); });
    b.validate(true);  // C_p is symmetric for every density
    return b;
}

// ---------------------------------------------------------------------------
// Intersection bodies
// ---------------------------------------------------------------------------

StarBody intersection_body_of_density(const Density& f, const std::vector<Direction>& dirs) {
    StarBody b = build_body(dirs, "intersection",
                            [&](const Direction& v) { return f.section_integral(v, 0.0); });
    b.validate(true);  // central sections do not see the sign of v
    return b;
}

double intersection_body_of_starbody(const StarBody& k, const Direction& v) {
    if (k.dim != 2) throw std::invalid_argument("intersection_body_of_starbody: dim must be 2");
    const double theta = v.angle() + 0.5 * kPi;
    return k.radius_at_angle(theta) + k.radius_at_angle(theta + kPi);
}

// ---------------------------------------------------------------------------
// Radial mean body
// ---------------------------------------------------------------------------

namespace {

// directional suffix integral g(x) = int_0^inf r^{p-1} f(x + r v) dr on a line
// grid, for integer p, from suffix cumulants of t^j f(t).
double radial_mean_integer_2d(const Density& f, int p, const Direction& v,
                              const BodyOptions& opt) {
    const Vec c = f.center();
    const double radius = f.truncation_radius(opt.tail_bound) * 1.45;
    const int m = static_cast<int>(std::lround(opt.resolution * 1.45)) | 1;  // odd: center node
    const double h = 2.0 * radius / (m - 1);
    const Direction w = v.perpendicular();

    std::vector<double> fv(static_cast<size_t>(m));
    std::vector<std::vector<double>> suffix(static_cast<size_t>(p),
                                            std::vector<double>(static_cast<size_t>(m)));
    std::vector<double> binom(static_cast<size_t>(p));
    binom[0] = 1.0;
    for (int j = 1; j < p; ++j) binom[static_cast<size_t>(j)] =
        binom[static_cast<size_t>(j - 1)] * (p - j) / j;  // C(p-1, j)

    double outer = 0;
    Vec x(2);
    for (int is = 0; is < m; ++is) {
        const double s = -radius + is * h;
        for (int iu = 0; iu < m; ++iu) {
            const double u = -radius + iu * h;
            x[0] = c[0] + s * w[0] + u * v[0];
            x[1] = c[1] + s * w[1] + u * v[1];
            fv[static_cast<size_t>(iu)] = f.evaluate(x);
        }
        // suffix trapezoid cumulants M_j(u_k) = int_{u_k} t^j f dt
        for (int j = 0; j < p; ++j) {
            auto& M = suffix[static_cast<size_t>(j)];
            M[static_cast<size_t>(m - 1)] = 0.0;
            for (int k = m - 2; k >= 0; --k) {
                const double tk = -radius + k * h, tk1 = tk + h;
                const double a = std::pow(tk, j) * fv[static_cast<size_t>(k)];
                const double b = std::pow(tk1, j) * fv[static_cast<size_t>(k + 1)];
                M[static_cast<size_t>(k)] = M[static_cast<size_t>(k + 1)] + 0.5 * h * (a + b);
            }
        }
        double line = 0;
        for (int k = 0; k < m; ++k) {
            const double fk = fv[static_cast<size_t>(k)];
            if (fk == 0.0) continue;
            const double u = -radius + k * h;
            double g = 0;
            double upow = 1.0;  // (-u)^{p-1-j} built from high j down
            // g = sum_j C(p-1,j) (-u)^{p-1-j} M_j(u)
            for (int j = p - 1; j >= 0; --j) {
                g += binom[static_cast<size_t>(j)] * upow * suffix[static_cast<size_t>(j)][static_cast<size_t>(k)];
                upow *= -u;
            }
            const double wgt = (k == 0 || k == m - 1) ? 0.5 : 1.0;
            line += wgt * fk * g;
        }
        const double wgt_s = (is == 0 || is == m - 1) ? 0.5 : 1.0;
        outer += wgt_s * line;
    }
    return outer * h * h;
}

// nested adaptive quadrature for 1-D densities (exact support handling)
double radial_mean_1d(const Density& f, double p, double sign, const BodyOptions& opt) {
    auto inner = [&](double x) {
        // int_0^inf r^{p-1} f(x + r sign) dr = int over t beyond x along sign
        auto h = [&](double r) { return r > 0 ? std::pow(r, p - 1.0) * f.evaluate1(x + r * sign) : 0.0; };
        const double lo = f.support_lo(), hi = f.support_hi();
        double rmax = sign > 0 ? hi - x : x - lo;
        if (!std::isfinite(rmax)) rmax = 2.0 * f.truncation_radius(opt.tail_bound);
        if (rmax <= 0) return 0.0;
        std::vector<double> extra;
        for (double b : f.breakpoints_1d()) {
            const double r = (b - x) / sign;
            if (r > 0 && r < rmax) extra.push_back(r);
        }
        if (p >= 1.0) return integrate_pieces(h, ray_pieces(rmax, extra), opt.quad_tol);
        // r^{p-1} is singular at 0: substitute r = y^{1/p}
        auto hs = [&](double y) {
            const double r = std::pow(y, 1.0 / p);
            return f.evaluate1(x + r * sign) / p;
        };
        std::vector<double> yextra;
        for (double r : extra) yextra.push_back(std::pow(r, p));
        return integrate_pieces(hs, ray_pieces(std::pow(rmax, p), yextra), opt.quad_tol);
    };
    const double c = f.center()[0];
    const double r = f.truncation_radius(opt.tail_bound);
    const double lo = std::max(f.support_lo(), c - r);
    const double hi = std::min(f.support_hi(), c + r);
    std::vector<double> bps{lo, hi};
    for (double b : f.breakpoints_1d())
        if (b > lo && b < hi) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    return integrate_pieces([&](double x) { return f.evaluate1(x) * inner(x); }, bps,
                            opt.quad_tol * 10.0);
}

// slow generic 2-D path for non-integer p
double radial_mean_generic_2d(const Density& f, double p, const Direction& v,
                              const BodyOptions& opt) {
    const Vec c = f.center();
    const double radius = f.truncation_radius(opt.tail_bound) * 1.45;
    const int m = 257;
    const double h = 2.0 * radius / (m - 1);
    double acc = 0;
    Vec x(2);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            x[0] = c[0] - radius + i * h;
            x[1] = c[1] - radius + j * h;
            const double fx = f.evaluate(x);
            if (fx == 0.0) continue;
            auto g = [&](double r) {
                return std::pow(r, p - 1.0) * f.evaluate(Vec{x[0] + r * v[0], x[1] + r * v[1]});
            };
            double inner;
            if (p >= 1.0) {
                inner = integrate(g, 1e-12, 2.0 * radius, opt.quad_tol * 100.0, 24);
            } else {
                inner = integrate(
                    [&](double y) {
                        const double r = std::pow(y, 1.0 / p);
                        return f.evaluate(Vec{x[0] + r * v[0], x[1] + r * v[1]}) / p;
                    },
                    0.0, std::pow(2.0 * radius, p), opt.quad_tol * 100.0, 24);
            }
            const double wi = (i == 0 || i == m - 1) ? 0.5 : 1.0;
            const double wj = (j == 0 || j == m - 1) ? 0.5 : 1.0;
            acc += wi * wj * fx * inner;
        }
    return acc * h * h;
}

}  // namespace

double radial_mean_radius(const Density& f, double p, const Direction& v,
                          const BodyOptions& opt) {
    if (p == kInf) {
        // rho_{R_inf(f)}(v) = rho_{supp f - supp f}(v); exact for uniform supports
        if (const auto* u = std::get_if<Density::Uniform>(&f.family())) {
            return u->body.difference_body().radial(v);
        }
        throw std::invalid_argument("radial_mean_radius: p = inf needs a uniform density");
    }
    if (!(p > 0)) throw std::invalid_argument("radial_mean_radius: p must be positive");
    double integral;
    if (f.dim() == 1) {
        integral = radial_mean_1d(f, p, v[0] > 0 ? 1.0 : -1.0, opt);
    } else if (std::abs(p - std::lround(p)) < 1e-12 && p <= 8.0) {
        integral = radial_mean_integer_2d(f, static_cast<int>(std::lround(p)), v, opt);
    } else {
        integral = radial_mean_generic_2d(f, p, v, opt);
    }
    if (!(integral > 0) || !std::isfinite(integral))
        throw std::invalid_argument("radial_mean_radius: r-integral diverged");
    return std::pow(integral, 1.0 / p);
}

StarBody radial_mean_body(const Density& f, double p, const std::vector<Direction>& dirs,
                          const BodyOptions& opt) {
    StarBody b = build_body(dirs, "radial-mean(p=" + std::to_string(p) + ")",
                            [&](const Direction& v) { return radial_mean_radius(f, p, v, opt); });
    b.validate(f.symmetric());
    return b;
}

// ---------------------------------------------------------------------------
// Ball's mean body
// ---------------------------------------------------------------------------

double ball_mean_radius(const Density& f, double p, const Direction& v, const BodyOptions& opt) {
    if (!(p > 0)) throw std::invalid_argument("ball_mean_radius: p must be positive");
    double rmax;
    if (f.dim() == 1) {
        rmax = v[0] > 0 ? f.support_hi() : -f.support_lo();
        if (!std::isfinite(rmax)) rmax = f.truncation_radius(opt.tail_bound);
    } else {
        rmax = f.truncation_radius(opt.tail_bound) * 1.45;
    }
    auto along = [&](double r) {
        Vec x(static_cast<size_t>(f.dim()));
        for (int i = 0; i < f.dim(); ++i) x[static_cast<size_t>(i)] = r * v[i];
        return f.evaluate(x);
    };
    double integral;
    if (p >= 1.0) {
        std::vector<double> extra;
        if (f.dim() == 1)
            for (double b : f.breakpoints_1d()) {
                const double r = b / v[0];
                if (r > 0 && r < rmax) extra.push_back(r);
            }
        integral = integrate_pieces(
            [&](double r) { return r > 0 ? std::pow(r, p - 1.0) * along(r) : 0.0; },
            ray_pieces(rmax, extra), opt.quad_tol);
    } else {
        integral = integrate_pieces([&](double y) { return along(std::pow(y, 1.0 / p)) / p; },
                                    ray_pieces(std::pow(rmax, p)), opt.quad_tol);
    }
    if (!(integral > 0) || !std::isfinite(integral))
        throw std::invalid_argument("ball_mean_radius: ray integral diverged");
    return std::pow(integral, 1.0 / p);
}

StarBody ball_mean_body(const Density& f, double p, const std::vector<Direction>& dirs,
                        const BodyOptions& opt) {
    StarBody b = build_body(dirs, "ball-mean(p=" + std::to_string(p) + ")",
                            [&](const Direction& v) { return ball_mean_radius(f, p, v, opt); });
    b.validate(f.symmetric());
    return b;
}

// ---------------------------------------------------------------------------
// Centroid-type bodies
// ---------------------------------------------------------------------------

double centroid_moment(const Density& f, double p, const Direction& v, const BodyOptions& opt) {
    if (!(p > -1.0)) throw std::invalid_argument("centroid_moment: p must be > -1");
    const Density marginal = f.dim() == 1 ? f.marginal_along(Direction(Vec{1.0}))
                                          : f.marginal_along(v);
    if (p >= 0.0) {
        const double c = marginal.center()[0];
        const double r = marginal.truncation_radius(1e-14);
        const double lo = std::max(marginal.support_lo(), c - r);
        const double hi = std::min(marginal.support_hi(), c + r);
        std::vector<double> bps{lo, hi};
        if (lo < 0 && hi > 0) bps.push_back(0.0);  // |t|^p kinks at the origin
        for (double b : marginal.breakpoints_1d())
            if (b > lo && b < hi) bps.push_back(b);
        std::sort(bps.begin(), bps.end());
        return integrate_pieces(
            [&](double t) { return std::pow(std::abs(t), p) * marginal.evaluate1(t); }, bps,
            opt.quad_tol);
    }
    // p in (-1, 0): |t|^p is singular at 0. Freeze the marginal on |t| < eps
    // and integrate the power law there analytically.
    const double c = marginal.center()[0];
    const double r = marginal.truncation_radius(1e-14);
    const double lo = std::max(marginal.support_lo(), c - r);
    const double hi = std::min(marginal.support_hi(), c + r);
    const double eps = 1e-5 * std::max(1.0, hi - lo);
    double acc = marginal.evaluate1(0.0) * 2.0 * std::pow(eps, p + 1.0) / (p + 1.0);
    auto g = [&](double t) { return std::pow(std::abs(t), p) * marginal.evaluate1(t); };
    std::vector<double> bps;
    for (double b : marginal.breakpoints_1d()) bps.push_back(b);
    auto side = [&](double a, double b2) {
        if (!(b2 > a)) return 0.0;
        std::vector<double> pieces{a, b2};
        for (double b : bps)
            if (b > a && b < b2) pieces.push_back(b);
        std::sort(pieces.begin(), pieces.end());
        return integrate_pieces(g, pieces, opt.quad_tol);
    };
    acc += side(eps, hi);
    acc += side(lo, -eps);
    return acc;
}

StarBody polar_centroid_body(const Density& f, double p, const std::vector<Direction>& dirs,
                             const BodyOptions& opt) {
    if (!(p > 0)) throw std::invalid_argument("polar_centroid_body: p must be positive");
    StarBody b = build_body(dirs, "polar-centroid(p=" + std::to_string(p) + ")",
                            [&](const Direction& v) {
                                const double m = centroid_moment(f, p, v, opt);
                                if (!(m > 0) || !std::isfinite(m))
                                    throw std::invalid_argument(
                                        "polar_centroid_body: moment diverged");
                                return std::pow(m, -1.0 / p);
                            });
    b.validate(true);
    return b;
}

double z_moment(const Density& f, double p, const Direction& v, const BodyOptions& opt) {
    return 0.5 * (p + 1.0) * centroid_moment(f, p, v, opt);
}

StarBody z_body(const Density& f, double p, const std::vector<Direction>& dirs,
                const BodyOptions& opt) {
    if (!(p > -1.0) || p == 0.0)
        throw std::invalid_argument("z_body: p must be in (-1, inf), p != 0");
    StarBody b = build_body(dirs, "z-body(p=" + std::to_string(p) + ")",
                            [&](const Direction& v) {
                                const double m = z_moment(f, p, v, opt);
                                if (!(m > 0) || !std::isfinite(m))
                                    throw std::invalid_argument("z_body: moment diverged");
                                return std::pow(m, -1.0 / p);
                            });
    b.validate(true);
    return b;
}

}  // namespace epigeom
