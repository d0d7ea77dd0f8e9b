#include "epigeom/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace epigeom {

namespace {

constexpr double kMassTol = 1e-6;
constexpr double kTailBound = 1e-10;

double normal_pdf(double x, double mean, double var) {
    const double z = (x - mean);
    return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * kPi * var);
}

/// integral of cos^q(phi) over [0, pi/2]; q > -1. Near-singular exponents get an
/// analytic endpoint patch (cos ~ sin of the complement).
double cos_power_integral(double q, bool sin_weight = false) {
    if (q <= -1.0) return kInf;
    auto f = [&](double phi) {
        const double c = std::cos(phi);
        const double v = std::pow(c, q);
        return sin_weight ? std::sin(phi) * v : v;
    };
    if (q >= 0.0) return integrate(f, 0.0, 0.5 * kPi, 1e-12);
    const double delta = 1e-4;
    const double body = integrate(f, 0.0, 0.5 * kPi - delta, 1e-12);
    // cos(pi/2 - psi) = sin(psi) ~ psi; weight sin(phi) ~ 1 there
    const double patch = std::pow(delta, q + 1.0) / (q + 1.0);
    return body + patch;
}

double chord_length_2d(const SupportBody& body, const Direction& v, double t);

}  // namespace

// ---------------------------------------------------------------------------
// GridDensity
// ---------------------------------------------------------------------------

double GridDensity::cell_volume() const {
    double v = 1.0;
    for (double s : spacing) v *= s;
    return v;
}

double GridDensity::mass() const {
    double s = 0;
    for (double x : values) s += x;
    return s * cell_volume();
}

double GridDensity::interpolate(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("GridDensity::interpolate: dimension mismatch");
    if (dim() == 1) {
        const double u = (x[0] - origin[0]) / spacing[0];
        if (u < 0 || u > shape[0] - 1) return 0.0;
        const int i = std::min(static_cast<int>(u), shape[0] - 2);
        const double w = u - i;
        return (1 - w) * at(i) + w * at(i + 1);
    }
    const double u = (x[0] - origin[0]) / spacing[0];
    const double w = (x[1] - origin[1]) / spacing[1];
    if (u < 0 || u > shape[0] - 1 || w < 0 || w > shape[1] - 1) return 0.0;
    const int i = std::min(static_cast<int>(u), shape[0] - 2);
    const int j = std::min(static_cast<int>(w), shape[1] - 2);
    const double a = u - i, b = w - j;
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) + (1 - a) * b * at(i, j + 1) +
           a * b * at(i + 1, j + 1);
}

double GridDensity::max_value() const {
    double m = 0;
    for (double v : values) m = std::max(m, v);
    return m;
}

void GridDensity::validate() const {
    if (dim() < 1 || dim() > 2) throw std::invalid_argument("GridDensity: dim must be 1 or 2");
    size_t expect = 1;
    for (int s : shape) {
        if (s < 2) throw std::invalid_argument("GridDensity: axis too short");
        expect *= static_cast<size_t>(s);
    }
    if (values.size() != expect) throw std::invalid_argument("GridDensity: value count mismatch");
    for (double v : values)
        if (!(v >= 0)) throw std::invalid_argument("GridDensity: negative or NaN value");
    const double m = mass();
    if (std::abs(m - 1.0) > kMassTol)
        throw std::invalid_argument("GridDensity: mass " + std::to_string(m) + " is not 1");
    // boundary nodes must be zero so support is strictly inside
    if (dim() == 1) {
        if (at(0) != 0.0 || at(shape[0] - 1) != 0.0)
            throw std::invalid_argument("GridDensity: support touches the grid boundary");
    } else {
        for (int i = 0; i < shape[0]; ++i)
            if (at(i, 0) != 0.0 || at(i, shape[1] - 1) != 0.0)
                throw std::invalid_argument("GridDensity: support touches the grid boundary");
        for (int j = 0; j < shape[1]; ++j)
            if (at(0, j) != 0.0 || at(shape[0] - 1, j) != 0.0)
                throw std::invalid_argument("GridDensity: support touches the grid boundary");
    }
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

Density::Density(int dim, Concavity conc, bool symmetric, Family fam)
    : dim_(dim), concavity_(conc), symmetric_(symmetric),
      family_(std::make_shared<const Family>(std::move(fam))) {}

Density Density::gaussian(Vec mean, SymMatrix cov) {
    const int n = static_cast<int>(mean.size());
    if (cov.n != n) throw std::invalid_argument("gaussian: mean/cov dimension mismatch");
    Gaussian g{std::move(mean), cov, cholesky(cov), std::log(determinant_spd(cov))};
    bool sym = true;
    for (double m : g.mean)
        if (m != 0.0) sym = false;
    return Density(n, Concavity::log_concave(), sym, std::move(g));
}

Density Density::standard_gaussian(int dim) {
    return gaussian(Vec(static_cast<size_t>(dim), 0.0), SymMatrix::identity(dim));
}

Density Density::uniform(SupportBody body, Vec shift) {
    const int n = body.dim();
    if (shift.empty()) shift.assign(static_cast<size_t>(n), 0.0);
    if (static_cast<int>(shift.size()) != n)
        throw std::invalid_argument("uniform: shift dimension mismatch");
    bool sym = true;
    for (double s : shift)
        if (s != 0.0) sym = false;
    return Density(n, Concavity::log_concave(), sym, Uniform{std::move(body), std::move(shift)});
}

Density Density::uniform_interval(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("uniform_interval: need b > a");
    return uniform(SupportBody::interval(0.5 * (b - a)), Vec{0.5 * (a + b)});
}

Density Density::exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("exponential: rate must be positive");
    return Density(1, Concavity::log_concave(), false, Exponential{rate, +1});
}

Density Density::exponential_power(double exponent, double scale) {
    if (!(exponent >= 1)) throw std::invalid_argument("exponential_power: exponent must be >= 1");
    if (!(scale > 0)) throw std::invalid_argument("exponential_power: scale must be positive");
    return Density(1, Concavity::log_concave(), true, ExponentialPower{exponent, scale});
}

Density Density::generalized_gaussian(double beta, int dim, double scale) {
    if (dim < 1 || dim > 2) throw std::invalid_argument("generalized_gaussian: dim must be 1 or 2");
    if (beta == 0.0 || beta > 2.0 / (dim + 1))
        throw std::invalid_argument("generalized_gaussian: need beta != 0 and beta <= 2/(n+1)");
    const double e = 1.0 / beta - 0.5 * dim - 1.0;
    // kernel integral at unit scale, via trigonometric substitution
    double kernel;
    if (beta > 0) {
        const double r0 = std::sqrt(2.0 / beta);
        kernel = (dim == 1) ? 2.0 * r0 * cos_power_integral(2.0 * e + 1.0)
                            : 2.0 * kPi * r0 * r0 * cos_power_integral(2.0 * e + 1.0, true);
    } else {
        const double r0 = std::sqrt(2.0 / -beta);
        kernel = (dim == 1) ? 2.0 * r0 * cos_power_integral(-2.0 * e - 2.0)
                            : 2.0 * kPi * r0 * r0 * cos_power_integral(-2.0 * e - 3.0, true);
    }
    if (!std::isfinite(kernel) || kernel <= 0)
        throw std::invalid_argument("generalized_gaussian: kernel is not integrable");
    const double norm = 1.0 / (kernel * std::pow(scale, dim));
    const Concavity conc = e >= 0 ? Concavity::log_concave() : Concavity::s_concave(1.0 / e);
    return Density(dim, conc, true, GeneralizedGaussian{beta, dim, scale, norm});
}

Density Density::product(std::vector<Density> factors) {
    if (factors.size() < 2) throw std::invalid_argument("product: need >= 2 factors");
    bool sym = true, logc = true;
    for (const Density& f : factors) {
        if (f.dim() != 1) throw std::invalid_argument("product: factors must be 1-D");
        sym = sym && f.symmetric();
        logc = logc && f.concavity().is_log_concave();
    }
    const int n = static_cast<int>(factors.size());
    return Density(n, logc ? Concavity::log_concave() : Concavity::unknown(), sym,
                   Product{std::move(factors)});
}

Density Density::from_grid(GridDensity grid, Concavity conc) {
    grid.validate();
    // detect central symmetry about the box center
    bool sym = true;
    const size_t n = grid.values.size();
    const double sym_tol = 1e-9 * (grid.max_value() + 1.0);
    for (size_t i = 0; i < n && sym; ++i)
        if (std::abs(grid.values[i] - grid.values[n - 1 - i]) > sym_tol) sym = false;
    // symmetric about the origin requires the box itself centered at 0
    if (sym)
        for (int a = 0; a < grid.dim(); ++a) {
            const double hi = grid.origin[static_cast<size_t>(a)] +
                              grid.spacing[static_cast<size_t>(a)] * (grid.shape[static_cast<size_t>(a)] - 1);
            if (std::abs(hi + grid.origin[static_cast<size_t>(a)]) > 1e-9) sym = false;
        }
    const int d = grid.dim();
    return Density(d, conc, sym, Grid{std::move(grid)});
}

Density Density::piecewise_linear(std::vector<PiecewiseLinear::Segment> segments, Concavity conc) {
    if (segments.empty()) throw std::invalid_argument("piecewise_linear: no segments");
    std::sort(segments.begin(), segments.end(),
              [](const auto& s, const auto& t) { return s.a < t.a; });
    for (size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        if (!(s.b > s.a) || s.ya < 0 || s.yb < 0)
            throw std::invalid_argument("piecewise_linear: bad segment");
        if (i > 0 && s.a < segments[i - 1].b - 1e-15)
            throw std::invalid_argument("piecewise_linear: overlapping segments");
    }
    // symmetric iff the segment picture is mirror-invariant
    auto eval = [&](double x) {
        for (const auto& s : segments)
            if (x >= s.a && x <= s.b) return s.ya + (s.yb - s.ya) * (x - s.a) / (s.b - s.a);
        return 0.0;
    };
    bool sym = true;
    for (const auto& s : segments) {
        for (double x : {s.a, 0.5 * (s.a + s.b), s.b})
            if (std::abs(eval(x) - eval(-x)) > 1e-12 * (1.0 + eval(x))) sym = false;
    }
    return Density(1, conc, sym, PiecewiseLinear{std::move(segments)});
}

Density Density::semicircle(double radius, double center) {
    if (!(radius > 0)) throw std::invalid_argument("semicircle: radius must be positive");
    return Density(1, Concavity::log_concave(), center == 0.0, Semicircle{radius, center});
}

std::string Density::family_name() const {
    struct V {
        std::string operator()(const Gaussian&) const { return "gaussian"; }
        std::string operator()(const Uniform&) const { return "uniform"; }
        std::string operator()(const Exponential&) const { return "exponential"; }
        std::string operator()(const ExponentialPower&) const { return "exponential_power"; }
        std::string operator()(const GeneralizedGaussian&) const { return "generalized_gaussian"; }
        std::string operator()(const Product&) const { return "product"; }
        std::string operator()(const Grid&) const { return "grid"; }
        std::string operator()(const PiecewiseLinear&) const { return "piecewise_linear"; }
        std::string operator()(const Semicircle&) const { return "semicircle"; }
        std::string operator()(const Convolution1&) const { return "convolution"; }
    };
    return std::visit(V{}, *family_);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double exp_power_const(double k) { return 1.0 / (2.0 * std::tgamma(1.0 + 1.0 / k)); }

}  // namespace

double Density::evaluate(const Vec& x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("Density::evaluate: dimension mismatch (got " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(dim_) + ")");
    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        // q = |L^{-1}(x-mean)|^2 by forward substitution
        Vec d(x.size());
        for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - g->mean[i];
        double q = 0;
        for (int i = 0; i < g->chol.n; ++i) {
            double s = d[static_cast<size_t>(i)];
            for (int k = 0; k < i; ++k) s -= g->chol.at(i, k) * d[static_cast<size_t>(k)];
            d[static_cast<size_t>(i)] = s / g->chol.at(i, i);
            q += d[static_cast<size_t>(i)] * d[static_cast<size_t>(i)];
        }
        return std::exp(-0.5 * q - 0.5 * g->log_det) / std::pow(2.0 * kPi, 0.5 * dim_);
    }
    if (const auto* u = std::get_if<Uniform>(family_.get())) {
        Vec y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] - u->shift[i];
        return u->body.contains(y) ? 1.0 / u->body.volume() : 0.0;
    }
    if (const auto* e = std::get_if<Exponential>(family_.get())) {
        const double t = e->orientation * x[0];
        return t >= 0 ? e->rate * std::exp(-e->rate * t) : 0.0;
    }
    if (const auto* e = std::get_if<ExponentialPower>(family_.get())) {
        const double c = exp_power_const(e->exponent);
        return c / e->scale * std::exp(-std::pow(std::abs(x[0] / e->scale), e->exponent));
    }
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        double r2 = 0;
        for (double xi : x) r2 += xi * xi;
        r2 /= g->scale * g->scale;
        const double base = 1.0 - 0.5 * g->beta * r2;
        if (base <= 0) return 0.0;
        const double e = 1.0 / g->beta - 0.5 * g->dim - 1.0;
        return g->norm * std::pow(base, e);
    }
    if (const auto* p = std::get_if<Product>(family_.get())) {
        double v = 1;
        for (size_t i = 0; i < p->factors.size(); ++i) v *= p->factors[i].evaluate(Vec{x[i]});
        return v;
    }
    if (const auto* g = std::get_if<Grid>(family_.get())) return g->grid.interpolate(x);
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) {
        const double t = x[0];
        for (const auto& s : p->segments)
            if (t >= s.a && t <= s.b) return s.ya + (s.yb - s.ya) * (t - s.a) / (s.b - s.a);
        return 0.0;
    }
    if (const auto* s = std::get_if<Semicircle>(family_.get())) {
        const double u = x[0] - s->center;
        const double d2 = s->radius * s->radius - u * u;
        return d2 > 0 ? 2.0 / (kPi * s->radius * s->radius) * std::sqrt(d2) : 0.0;
    }
    const auto& c = std::get<Convolution1>(*family_);
    double t = x[0];
    if (symmetric_) t = -std::abs(t);  // enforce exact evenness of the numeric path
    // integration window for y in f(y) g(t - y), with unbounded supports clamped
    // to the factors' truncation boxes
    const double rf = c.f->truncation_radius(1e-16), rg = c.g->truncation_radius(1e-16);
    const double cf = c.f->center()[0], cg = c.g->center()[0];
    const double lo = std::max(std::max(c.f->support_lo(), cf - rf),
                               std::max(t - c.g->support_hi(), t - cg - rg));
    const double hi = std::min(std::min(c.f->support_hi(), cf + rf),
                               std::min(t - c.g->support_lo(), t - cg + rg));
    if (!(hi > lo)) return 0.0;
    std::vector<double> bps{lo, hi};
    for (double b : c.f->breakpoints_1d())
        if (b > lo && b < hi) bps.push_back(b);
    for (double b : c.g->breakpoints_1d()) {
        const double s = t - b;
        if (s > lo && s < hi) bps.push_back(s);
    }
    std::sort(bps.begin(), bps.end());
    return integrate_pieces([&](double y) { return c.f->evaluate1(y) * c.g->evaluate1(t - y); },
                            bps, 1e-12);
}

// ---------------------------------------------------------------------------
// Support and tails
// ---------------------------------------------------------------------------

Vec Density::center() const {
    if (const auto* g = std::get_if<Gaussian>(family_.get())) return g->mean;
    if (const auto* u = std::get_if<Uniform>(family_.get())) return u->shift;
    if (const auto* g = std::get_if<Grid>(family_.get())) {
        Vec c(g->grid.origin.size());
        for (size_t a = 0; a < c.size(); ++a)
            c[a] = g->grid.origin[a] + 0.5 * g->grid.spacing[a] * (g->grid.shape[a] - 1);
        return c;
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get()))
        return Vec{0.5 * (p->segments.front().a + p->segments.back().b)};
    if (const auto* s = std::get_if<Semicircle>(family_.get())) return Vec{s->center};
    if (const auto* c = std::get_if<Convolution1>(family_.get()))
        return Vec{c->f->center()[0] + c->g->center()[0]};
    if (const auto* p = std::get_if<Product>(family_.get())) {
        Vec c;
        for (const Density& f : p->factors) c.push_back(f.center()[0]);
        return c;
    }
    return Vec(static_cast<size_t>(dim_), 0.0);
}

double Density::support_lo() const {
    if (dim_ != 1) throw std::invalid_argument("support_lo: dim 1 only");
    if (std::get_if<Gaussian>(family_.get())) return -kInf;
    if (const auto* u = std::get_if<Uniform>(family_.get()))
        return u->shift[0] - u->body.radial(Direction(Vec{1.0}));
    if (const auto* e = std::get_if<Exponential>(family_.get()))
        return e->orientation > 0 ? 0.0 : -kInf;
    if (std::get_if<ExponentialPower>(family_.get())) return -kInf;
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get()))
        return g->beta > 0 ? -g->scale * std::sqrt(2.0 / g->beta) : -kInf;
    if (const auto* g = std::get_if<Grid>(family_.get())) return g->grid.origin[0];
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) return p->segments.front().a;
    if (const auto* s = std::get_if<Semicircle>(family_.get())) return s->center - s->radius;
    if (const auto* c = std::get_if<Convolution1>(family_.get()))
        return c->f->support_lo() + c->g->support_lo();
    throw std::invalid_argument("support_lo: unsupported family");
}

double Density::support_hi() const {
    if (dim_ != 1) throw std::invalid_argument("support_hi: dim 1 only");
    if (std::get_if<Gaussian>(family_.get())) return kInf;
    if (const auto* u = std::get_if<Uniform>(family_.get()))
        return u->shift[0] + u->body.radial(Direction(Vec{1.0}));
    if (const auto* e = std::get_if<Exponential>(family_.get()))
        return e->orientation > 0 ? kInf : 0.0;
    if (std::get_if<ExponentialPower>(family_.get())) return kInf;
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get()))
        return g->beta > 0 ? g->scale * std::sqrt(2.0 / g->beta) : kInf;
    if (const auto* g = std::get_if<Grid>(family_.get()))
        return g->grid.origin[0] + g->grid.spacing[0] * (g->grid.shape[0] - 1);
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) return p->segments.back().b;
    if (const auto* s = std::get_if<Semicircle>(family_.get())) return s->center + s->radius;
    if (const auto* c = std::get_if<Convolution1>(family_.get()))
        return c->f->support_hi() + c->g->support_hi();
    throw std::invalid_argument("support_hi: unsupported family");
}

std::vector<double> Density::breakpoints_1d() const {
    if (dim_ != 1) return {};
    if (std::get_if<Uniform>(family_.get())) return {support_lo(), support_hi()};
    if (std::get_if<Exponential>(family_.get())) return {0.0};
    if (std::get_if<ExponentialPower>(family_.get())) return {0.0};
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        if (g->beta > 0) return {support_lo(), support_hi()};
        return {};
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) {
        std::vector<double> b;
        for (const auto& s : p->segments) {
            b.push_back(s.a);
            b.push_back(s.b);
        }
        return b;
    }
    if (const auto* s = std::get_if<Semicircle>(family_.get()))
        return {s->center - s->radius, s->center + s->radius};
    if (const auto* c = std::get_if<Convolution1>(family_.get())) {
        const auto bf = c->f->breakpoints_1d();
        const auto bg = c->g->breakpoints_1d();
        std::vector<double> b;
        if (bf.size() * bg.size() <= 64) {
            for (double x : bf)
                for (double y : bg) b.push_back(x + y);
        }
        return b;
    }
    return {};
}

double Density::truncation_radius(double tail_bound) const {
    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        double smax = 0;
        for (int i = 0; i < g->cov.n; ++i) smax = std::max(smax, std::sqrt(g->cov.at(i, i)));
        double r = 8.0 * smax;
        while (tail_mass_outside(r) > tail_bound) r *= 1.3;
        return r;
    }
    if (const auto* u = std::get_if<Uniform>(family_.get()))
        return u->body.circumradius() * (1.0 + 1e-9) + 1e-12;
    if (const auto* e = std::get_if<Exponential>(family_.get()))
        return -std::log(tail_bound) / e->rate * 1.05;
    if (const auto* e = std::get_if<ExponentialPower>(family_.get())) {
        double r = e->scale * std::pow(std::log(4.0 / tail_bound) + 4.0, 1.0 / e->exponent);
        while (tail_mass_outside(r) > tail_bound) r *= 1.3;
        return r;
    }
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        if (g->beta > 0) return g->scale * std::sqrt(2.0 / g->beta) * (1.0 + 1e-9);
        double r = 4.0 * g->scale;
        while (tail_mass_outside(r) > tail_bound && std::isfinite(r)) r *= 1.5;
        return r;
    }
    if (const auto* p = std::get_if<Product>(family_.get())) {
        double r = 0;
        for (const Density& f : p->factors)
            r = std::max(r, f.truncation_radius(tail_bound / static_cast<double>(p->factors.size())));
        return r;
    }
    if (const auto* g = std::get_if<Grid>(family_.get())) {
        const Vec c = center();
        double r = 0;
        for (size_t a = 0; a < c.size(); ++a)
            r = std::max(r, 0.5 * g->grid.spacing[a] * (g->grid.shape[a] - 1));
        return r;
    }
    if (std::get_if<PiecewiseLinear>(family_.get()) || std::get_if<Semicircle>(family_.get())) {
        const double c = center()[0];
        return std::max(support_hi() - c, c - support_lo()) * (1.0 + 1e-12) + 1e-15;
    }
    const auto& c = std::get<Convolution1>(*family_);
    return c.f->truncation_radius(0.5 * tail_bound) + c.g->truncation_radius(0.5 * tail_bound);
}

double Density::tail_mass_outside(double radius) const {
    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        double t = 0;
        for (int i = 0; i < g->cov.n; ++i)
            t += std::erfc(radius / std::sqrt(2.0 * g->cov.at(i, i)));
        return t;
    }
    if (const auto* u = std::get_if<Uniform>(family_.get()))
        return radius >= u->body.circumradius() ? 0.0 : 1.0;
    if (const auto* e = std::get_if<Exponential>(family_.get()))
        return std::exp(-e->rate * radius);
    if (const auto* e = std::get_if<ExponentialPower>(family_.get())) {
        const double c = exp_power_const(e->exponent);
        return 2.0 * c *
               integrate([&](double u2) { return std::exp(-std::pow(u2, e->exponent)); },
                         radius / e->scale, radius / e->scale + 60.0, 1e-16);
    }
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        if (g->beta > 0) return radius >= g->scale * std::sqrt(2.0 / g->beta) ? 0.0 : 1.0;
        // mass outside the centered ball of the given radius, by radial quadrature
        const double e = 1.0 / g->beta - 0.5 * g->dim - 1.0;
        auto kernel = [&](double r) {
            const double u = r / g->scale;
            const double base = 1.0 + 0.5 * (-g->beta) * u * u;
            const double f = g->norm * std::pow(base, e);
            return g->dim == 1 ? 2.0 * f : 2.0 * kPi * r * f;
        };
        double t = 0, a = radius;
        for (int k = 0; k < 60; ++k) {
            const double b = a * 2.0;
            const double piece = integrate(kernel, a, b, 1e-16);
            t += piece;
            if (piece < 1e-18 * (t + 1e-300)) break;
            a = b;
        }
        return t;
    }
    if (const auto* p = std::get_if<Product>(family_.get())) {
        double t = 0;
        for (const Density& f : p->factors) t += f.tail_mass_outside(radius);
        return t;
    }
    if (std::get_if<Grid>(family_.get())) {
        const auto& g = std::get<Grid>(*family_).grid;
        const Vec c = center();
        double outside = 0;
        if (g.dim() == 1) {
            for (int i = 0; i < g.shape[0]; ++i)
                if (std::abs(g.origin[0] + i * g.spacing[0] - c[0]) > radius) outside += g.at(i);
        } else {
            for (int i = 0; i < g.shape[0]; ++i)
                for (int j = 0; j < g.shape[1]; ++j) {
                    const double x = g.origin[0] + i * g.spacing[0] - c[0];
                    const double y = g.origin[1] + j * g.spacing[1] - c[1];
                    if (std::abs(x) > radius || std::abs(y) > radius) outside += g.at(i, j);
                }
        }
        return outside * g.cell_volume();
    }
    if (std::get_if<PiecewiseLinear>(family_.get()) || std::get_if<Semicircle>(family_.get())) {
        const double c = center()[0];
        return (support_hi() - c <= radius && c - support_lo() <= radius) ? 0.0 : 1.0;
    }
    const auto& c = std::get<Convolution1>(*family_);
    return c.f->tail_mass_outside(0.5 * radius) + c.g->tail_mass_outside(0.5 * radius);
}

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

namespace {

bool is_discontinuous(const Density& d) {
    const std::string name = d.family_name();
    return name == "uniform" || name == "piecewise_linear" || name == "exponential";
}

// enlarge a truncation radius so the zeroed two-node boundary layer stays
// outside it: radius - 2h >= r0 with h = 2 radius/(res-1)
double padded_radius(double r0, int res) { return r0 * (res - 1.0) / (res - 5.0); }

// FFT convolutions leave O(eps) residue where the result is structurally zero;
// flush it and clear the boundary layer so validate() sees a clean support.
void scrub_grid_noise(GridDensity& g) {
    const double floor_value = 1e-14 * g.max_value();
    for (double& v : g.values)
        if (v <= floor_value) v = 0.0;
    if (g.dim() == 1) {
        const int n = g.shape[0];
        g.values[0] = g.values[1] = 0.0;
        g.values[static_cast<size_t>(n - 1)] = g.values[static_cast<size_t>(n - 2)] = 0.0;
    } else {
        const int n0 = g.shape[0], n1 = g.shape[1];
        for (int i = 0; i < n0; ++i)
            for (int j : {0, 1, n1 - 2, n1 - 1}) g.at(i, j) = 0.0;
        for (int j = 0; j < n1; ++j)
            for (int i : {0, 1, n0 - 2, n0 - 1}) g.at(i, j) = 0.0;
    }
}

}  // namespace

GridDensity Density::discretize(double radius, int resolution) const {
    if (resolution < 16) throw std::invalid_argument("discretize: resolution must be >= 16");
    if (dim_ > 2) throw std::invalid_argument("discretize: numeric path supports dim <= 2");
    const double h = 2.0 * radius / (resolution - 1);
    const double inner = radius - 2.0 * h;
    const double tail = tail_mass_outside(inner);
    if (!(tail < kTailBound))
        throw std::invalid_argument("discretize: excluded tail mass " + std::to_string(tail) +
                                    " exceeds 1e-10; enlarge the truncation radius");
    const Vec c = center();
    GridDensity g;
    g.origin.assign(static_cast<size_t>(dim_), 0.0);
    g.spacing.assign(static_cast<size_t>(dim_), h);
    g.shape.assign(static_cast<size_t>(dim_), resolution);
    for (int a = 0; a < dim_; ++a) g.origin[static_cast<size_t>(a)] = c[static_cast<size_t>(a)] - radius;

    const bool super = is_discontinuous(*this);
    const int ss = super ? 4 : 1;
    auto node_value = [&](const Vec& x) {
        if (!super) return evaluate(x);
        double acc = 0;
        Vec y = x;
        if (dim_ == 1) {
            for (int i = 0; i < ss; ++i) {
                y[0] = x[0] + ((i + 0.5) / ss - 0.5) * h;
                acc += evaluate(y);
            }
            return acc / ss;
        }
        for (int i = 0; i < ss; ++i)
            for (int j = 0; j < ss; ++j) {
                y[0] = x[0] + ((i + 0.5) / ss - 0.5) * h;
                y[1] = x[1] + ((j + 0.5) / ss - 0.5) * h;
                acc += evaluate(y);
            }
        return acc / (ss * ss);
    };

    if (dim_ == 1) {
        g.values.resize(static_cast<size_t>(resolution));
        for (int i = 0; i < resolution; ++i)
            g.values[static_cast<size_t>(i)] = node_value(Vec{g.origin[0] + i * h});
        g.values[0] = g.values[1] = 0.0;
        g.values[static_cast<size_t>(resolution - 1)] = 0.0;
        g.values[static_cast<size_t>(resolution - 2)] = 0.0;
    } else {
        g.values.assign(static_cast<size_t>(resolution) * resolution, 0.0);
        parallel_for(resolution, [&](int i) {
            for (int j = 0; j < resolution; ++j) {
                if (i < 2 || j < 2 || i >= resolution - 2 || j >= resolution - 2) continue;
                g.at(i, j) = node_value(Vec{g.origin[0] + i * h, g.origin[1] + j * h});
            }
        });
    }
    const double m = g.mass();
    if (!(m > 0)) throw std::invalid_argument("discretize: zero mass inside truncation box");
    for (double& v : g.values) v /= m;
    g.renorm_factor = m;
    g.validate();
    return g;
}

// ---------------------------------------------------------------------------
// Convolution
// ---------------------------------------------------------------------------

Density Density::self_convolve() const {
    if (const auto* g = std::get_if<Gaussian>(family_.get()))
        return gaussian(Vec(static_cast<size_t>(dim_), 0.0), g->cov.scaled(2.0));
    const Concavity conc =
        concavity_.is_log_concave() ? Concavity::log_concave() : Concavity::unknown();
    if (dim_ == 1) {
        auto f = std::make_shared<const Density>(*this);
        auto r = std::make_shared<const Density>(reflect());
        return Density(1, conc, true, Convolution1{std::move(f), std::move(r)});
    }
    if (dim_ != 2) throw std::invalid_argument("self_convolve: numeric path supports dim <= 2");

    const int res = default_resolution(2);
    const GridDensity base = discretize(padded_radius(truncation_radius(), res), res);
    std::vector<double> flipped(base.values.rbegin(), base.values.rend());
    std::vector<double> corr = convolve_fft_2d(base.values, base.shape[0], base.shape[1], flipped,
                                               base.shape[0], base.shape[1]);
    const int m = 2 * res - 1;
    GridDensity out;
    out.spacing = base.spacing;
    out.shape = {m, m};
    out.origin = {-base.spacing[0] * (res - 1), -base.spacing[1] * (res - 1)};
    out.values.resize(static_cast<size_t>(m) * m);
    const double cv = base.cell_volume();
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::max(0.0, corr[i]) * cv;
    scrub_grid_noise(out);
    // enforce exact central symmetry
    for (size_t i = 0, n = out.values.size(); i < n / 2; ++i) {
        const double avg = 0.5 * (out.values[i] + out.values[n - 1 - i]);
        out.values[i] = out.values[n - 1 - i] = avg;
    }
    const double mass = out.mass();
    for (double& v : out.values) v /= mass;
    out.renorm_factor = mass;
    out.validate();
    return from_grid(std::move(out), conc);
}

Density Density::convolve(const Density& other) const {
    if (dim_ != other.dim_) throw std::invalid_argument("convolve: dimension mismatch");
    const auto* g1 = std::get_if<Gaussian>(family_.get());
    const auto* g2 = std::get_if<Gaussian>(other.family_.get());
    if (g1 && g2) {
        Vec mean(g1->mean);
        for (size_t i = 0; i < mean.size(); ++i) mean[i] += g2->mean[i];
        SymMatrix cov = g1->cov;
        for (size_t i = 0; i < cov.a.size(); ++i) cov.a[i] += g2->cov.a[i];
        return gaussian(std::move(mean), std::move(cov));
    }
    const bool logc = concavity_.is_log_concave() && other.concavity_.is_log_concave();
    const Concavity conc = logc ? Concavity::log_concave() : Concavity::unknown();
    if (dim_ == 1) {
        auto f = std::make_shared<const Density>(*this);
        auto g = std::make_shared<const Density>(other);
        return Density(1, conc, symmetric_ && other.symmetric_, Convolution1{std::move(f), std::move(g)});
    }
    if (dim_ != 2) throw std::invalid_argument("convolve: numeric path supports dim <= 2");

    const int res = default_resolution(2);
    const double r1 = padded_radius(truncation_radius(), res);
    const double r2 = padded_radius(other.truncation_radius(), res);
    const double h = 2.0 * std::min(r1, r2) / (res - 1);
    const int n1 = static_cast<int>(std::ceil(2.0 * r1 / h)) + 1;
    const int n2 = static_cast<int>(std::ceil(2.0 * r2 / h)) + 1;
    const GridDensity a = discretize(0.5 * h * (n1 - 1), n1);
    const GridDensity b = other.discretize(0.5 * h * (n2 - 1), n2);
    std::vector<double> conv =
        convolve_fft_2d(a.values, a.shape[0], a.shape[1], b.values, b.shape[0], b.shape[1]);
    GridDensity out;
    out.spacing = a.spacing;
    out.shape = {a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1};
    out.origin = {a.origin[0] + b.origin[0], a.origin[1] + b.origin[1]};
    out.values.resize(conv.size());
    const double cv = a.cell_volume();
    for (size_t i = 0; i < conv.size(); ++i) out.values[i] = std::max(0.0, conv[i]) * cv;
    scrub_grid_noise(out);
    const double mass = out.mass();
    for (double& v : out.values) v /= mass;
    out.renorm_factor = mass;
    out.validate();
    return from_grid(std::move(out), conc);
}

// ---------------------------------------------------------------------------
// Marginals and sections
// ---------------------------------------------------------------------------

namespace {

// Length of the chord {x . v = t} inside a symmetric convex body (dim 2).
double chord_length_2d(const SupportBody& body, const Direction& v, double t) {
    if (const auto* b = std::get_if<SupportBody::Ball>(&body.representation())) {
        const double d2 = b->radius * b->radius - t * t;
        return d2 > 0 ? 2.0 * std::sqrt(d2) : 0.0;
    }
    // half-plane clipping of the line t*v + s*w
    const Direction w = v.perpendicular();
    double s_lo = -kInf, s_hi = kInf;
    auto clip = [&](double nx, double ny, double c) {
        // constraint: n . x <= c  along x = t v + s w
        const double base = nx * (t * v[0]) + ny * (t * v[1]);
        const double slope = nx * w[0] + ny * w[1];
        if (std::abs(slope) < 1e-15) {
            if (base > c) s_lo = kInf;  // line misses the body
            return;
        }
        const double s = (c - base) / slope;
        if (slope > 0)
            s_hi = std::min(s_hi, s);
        else
            s_lo = std::max(s_lo, s);
    };
    if (const auto* b = std::get_if<SupportBody::Box>(&body.representation())) {
        clip(1, 0, b->half_widths[0]);
        clip(-1, 0, b->half_widths[0]);
        clip(0, 1, b->half_widths[1]);
        clip(0, -1, b->half_widths[1]);
    } else {
        const auto& p = std::get<SupportBody::Polytope>(body.representation());
        const size_t m = p.vertices.size();
        for (size_t i = 0; i < m; ++i) {
            const Vec& a = p.vertices[i];
            const Vec& b2 = p.vertices[(i + 1) % m];
            clip(b2[1] - a[1], a[0] - b2[0], (b2[1] - a[1]) * a[0] + (a[0] - b2[0]) * a[1]);
        }
    }
    return std::max(0.0, s_hi - s_lo);
}

}  // namespace

Density Density::marginal_along(const Direction& v) const {
    if (v.dim() != dim_) throw std::invalid_argument("marginal_along: dimension mismatch");
    if (dim_ == 1) return v[0] > 0 ? *this : reflect();

    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        const double mean = dot(v.components, g->mean);
        double var = 0;
        for (int i = 0; i < g->cov.n; ++i)
            for (int j = 0; j < g->cov.n; ++j) var += v[i] * g->cov.at(i, j) * v[j];
        SymMatrix c(1);
        c.at(0, 0) = var;
        return gaussian(Vec{mean}, c);
    }
    if (const auto* u = std::get_if<Uniform>(family_.get())) {
        const double off = dot(v.components, u->shift);
        if (std::get_if<SupportBody::Ball>(&u->body.representation())) {
            const double r = u->body.circumradius();
            return semicircle(r, off);
        }
        // polygonal body: chord function is piecewise linear between vertex projections
        std::vector<Vec> verts;
        if (const auto* b = std::get_if<SupportBody::Box>(&u->body.representation())) {
            const double wx = b->half_widths[0], wy = b->half_widths[1];
            verts = {{wx, wy}, {-wx, wy}, {-wx, -wy}, {wx, -wy}};
        } else {
            verts = std::get<SupportBody::Polytope>(u->body.representation()).vertices;
        }
        std::vector<double> ts;
        for (const Vec& x : verts) ts.push_back(dot(v.components, x));
        std::sort(ts.begin(), ts.end());
        const double span = ts.back() - ts.front();
        ts.erase(std::unique(ts.begin(), ts.end(),
                             [span](double a, double b) { return std::abs(a - b) <= 1e-12 * span; }),
                 ts.end());
        const double vol = u->body.volume();
        std::vector<PiecewiseLinear::Segment> segs;
        for (size_t k = 0; k + 1 < ts.size(); ++k) {
            const double a = ts[k], b = ts[k + 1];
            // the chord is linear on (a, b); sampling the quarter points and
            // extrapolating avoids roundoff at the vertex projections themselves
            const double y1 = chord_length_2d(u->body, v, a + 0.25 * (b - a)) / vol;
            const double y3 = chord_length_2d(u->body, v, a + 0.75 * (b - a)) / vol;
            const double ya = std::max(0.0, 1.5 * y1 - 0.5 * y3);
            const double yb = std::max(0.0, 1.5 * y3 - 0.5 * y1);
            segs.push_back({a + off, b + off, ya, yb});
        }
        return piecewise_linear(std::move(segs), Concavity::log_concave());
    }
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get()))
        return generalized_gaussian(g->beta, 1, g->scale);
    if (const auto* p = std::get_if<Product>(family_.get())) {
        // v . X = sum of independent scaled factors
        std::vector<Density> terms;
        for (size_t i = 0; i < p->factors.size(); ++i)
            if (std::abs(v[static_cast<int>(i)]) > 1e-15)
                terms.push_back(p->factors[i].scale(v[static_cast<int>(i)]));
        if (terms.empty()) throw std::invalid_argument("marginal_along: zero direction");
        Density acc = terms.front();
        for (size_t i = 1; i < terms.size(); ++i) acc = acc.convolve(terms[i]);
        return acc;
    }
    // grid path: trapezoidal integration along rotated lines with bilinear interpolation
    const auto* gr = std::get_if<Grid>(family_.get());
    if (!gr) throw std::invalid_argument("marginal_along: unsupported family for dim 2");
    const GridDensity& g = gr->grid;
    const Direction w = v.perpendicular();
    // same direction-independent window construction as section_integral
    const Vec c = center();
    double rad2 = 0;
    for (int a = 0; a < 2; ++a) {
        const double half = 0.5 * g.spacing[static_cast<size_t>(a)] * (g.shape[static_cast<size_t>(a)] - 1);
        rad2 += half * half;
    }
    const double span = std::sqrt(rad2);
    const double t_mid = dot(v.components, c);
    const double s_mid = dot(w.components, c);
    const double step = 0.5 * std::min(g.spacing[0], g.spacing[1]);
    const int mt = 2 * static_cast<int>(std::ceil(span / step)) + 5;
    const int ms = 2 * static_cast<int>(std::ceil(span / step)) + 1;
    GridDensity out;
    out.origin = {t_mid - span - 2.0 * step};
    out.spacing = {step};
    out.shape = {mt};
    out.values.assign(static_cast<size_t>(mt), 0.0);
    std::vector<double> line(static_cast<size_t>(ms));
    const double hs = 2.0 * span / (ms - 1);
    for (int i = 2; i < mt - 2; ++i) {
        const double t = out.origin[0] + i * step;
        for (int k = 0; k < ms; ++k) {
            const double s = s_mid - span + k * hs;
            line[static_cast<size_t>(k)] =
                g.interpolate(Vec{t * v[0] + s * w[0], t * v[1] + s * w[1]});
        }
        out.values[static_cast<size_t>(i)] = trapezoid(line, hs);
    }
    const Concavity conc =
        concavity_.is_log_concave() ? Concavity::log_concave() : Concavity::unknown();
    const double mass = out.mass();
    if (std::abs(mass - 1.0) > kMassTol)
        for (double& x : out.values) x /= mass;  // rough grids: keep the contract
    return from_grid(std::move(out), conc);
}

double Density::section_integral(const Direction& v, double t) const {
    if (v.dim() != dim_) throw std::invalid_argument("section_integral: dimension mismatch");
    if (dim_ == 1) return evaluate(Vec{t * v[0]});

    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        const double mean = dot(v.components, g->mean);
        double var = 0;
        for (int i = 0; i < g->cov.n; ++i)
            for (int j = 0; j < g->cov.n; ++j) var += v[i] * g->cov.at(i, j) * v[j];
        return normal_pdf(t, mean, var);
    }
    if (const auto* u = std::get_if<Uniform>(family_.get())) {
        const double off = dot(v.components, u->shift);
        return chord_length_2d(u->body, v, t - off) / u->body.volume();
    }
    if (std::get_if<GeneralizedGaussian>(family_.get()) || std::get_if<Product>(family_.get()))
        return marginal_along(v).evaluate(Vec{t});
    const auto* gr = std::get_if<Grid>(family_.get());
    if (!gr) throw std::invalid_argument("section_integral: unsupported family");
    const GridDensity& g = gr->grid;
    const Direction w = v.perpendicular();
    // direction-independent sampling window (centered at the box center,
    // spanning its circumscribed disk), so antipodal and near-antipodal
    // directions integrate over literally the same node count
    const Vec c = center();
    double rad2 = 0;
    for (int a = 0; a < 2; ++a) {
        const double half = 0.5 * g.spacing[static_cast<size_t>(a)] * (g.shape[static_cast<size_t>(a)] - 1);
        rad2 += half * half;
    }
    const double s_span = std::sqrt(rad2);
    const double s_mid = dot(w.components, c);
    const double step = 0.5 * std::min(g.spacing[0], g.spacing[1]);
    const int ms = 2 * static_cast<int>(std::ceil(s_span / step)) + 1;
    std::vector<double> line(static_cast<size_t>(ms));
    const double h = 2.0 * s_span / (ms - 1);
    for (int k = 0; k < ms; ++k) {
        const double s = s_mid - s_span + k * h;
        line[static_cast<size_t>(k)] = g.interpolate(Vec{t * v[0] + s * w[0], t * v[1] + s * w[1]});
    }
    return trapezoid(line, h);
}

double Density::range_along(const Direction& v) const {
    if (v.dim() != dim_) throw std::invalid_argument("range_along: dimension mismatch");
    if (dim_ == 1) {
        const double lo = support_lo(), hi = support_hi();
        return hi - lo;
    }
    if (std::get_if<Gaussian>(family_.get())) return kInf;
    if (const auto* u = std::get_if<Uniform>(family_.get()))
        return 2.0 * u->body.support(v.components);
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get()))
        return g->beta > 0 ? 2.0 * g->scale * std::sqrt(2.0 / g->beta) : kInf;
    if (const auto* p = std::get_if<Product>(family_.get())) {
        double r = 0;
        for (size_t i = 0; i < p->factors.size(); ++i) {
            if (std::abs(v[static_cast<int>(i)]) < 1e-15) continue;
            const double len =
                p->factors[i].support_hi() - p->factors[i].support_lo();
            r += std::abs(v[static_cast<int>(i)]) * len;
        }
        return r;
    }
    const auto* gr = std::get_if<Grid>(family_.get());
    if (!gr) throw std::invalid_argument("range_along: unsupported family");
    const GridDensity& g = gr->grid;
    double lo = kInf, hi = -kInf;
    const double thresh = 1e-12;
    for (int i = 0; i < g.shape[0]; ++i)
        for (int j = 0; j < g.shape[1]; ++j) {
            if (g.at(i, j) <= thresh) continue;
            const double t = v[0] * (g.origin[0] + i * g.spacing[0]) +
                             v[1] * (g.origin[1] + j * g.spacing[1]);
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    return hi > lo ? hi - lo : 0.0;
}

// ---------------------------------------------------------------------------
// Scaling
// ---------------------------------------------------------------------------

Density Density::scale(double a) const {
    if (a == 0.0) throw std::invalid_argument("scale: factor must be nonzero");
    const double m = std::abs(a);
    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        Vec mean = g->mean;
        for (double& x : mean) x *= a;
        return gaussian(std::move(mean), g->cov.scaled(a * a));
    }
    if (const auto* u = std::get_if<Uniform>(family_.get())) {
        Vec shift = u->shift;
        for (double& x : shift) x *= a;
        return uniform(u->body.dilate(m), std::move(shift));
    }
    if (const auto* e = std::get_if<Exponential>(family_.get())) {
        const int orient = a > 0 ? e->orientation : -e->orientation;
        return Density(1, Concavity::log_concave(), false, Exponential{e->rate / m, orient});
    }
    if (const auto* e = std::get_if<ExponentialPower>(family_.get()))
        return exponential_power(e->exponent, e->scale * m);
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get()))
        return generalized_gaussian(g->beta, g->dim, g->scale * m);
    if (const auto* p = std::get_if<Product>(family_.get())) {
        std::vector<Density> fs;
        for (const Density& f : p->factors) fs.push_back(f.scale(a));
        return product(std::move(fs));
    }
    if (const auto* gr = std::get_if<Grid>(family_.get())) {
        GridDensity g = gr->grid;
        const double an = std::pow(m, dim_);
        for (double& v : g.values) v /= an;
        for (size_t i = 0; i < g.spacing.size(); ++i) g.spacing[i] *= m;
        if (a > 0) {
            for (size_t i = 0; i < g.origin.size(); ++i) g.origin[i] *= a;
        } else {
            // reflect: new node k corresponds to old node (n-1-k) on each axis
            GridDensity r = g;
            if (g.dim() == 1) {
                std::reverse(r.values.begin(), r.values.end());
                r.origin[0] = a * (gr->grid.origin[0] + gr->grid.spacing[0] * (g.shape[0] - 1));
            } else {
                for (int i = 0; i < g.shape[0]; ++i)
                    for (int j = 0; j < g.shape[1]; ++j)
                        r.at(i, j) = g.at(g.shape[0] - 1 - i, g.shape[1] - 1 - j);
                r.origin[0] = a * (gr->grid.origin[0] + gr->grid.spacing[0] * (g.shape[0] - 1));
                r.origin[1] = a * (gr->grid.origin[1] + gr->grid.spacing[1] * (g.shape[1] - 1));
            }
            return from_grid(std::move(r), concavity_);
        }
        return from_grid(std::move(g), concavity_);
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) {
        std::vector<PiecewiseLinear::Segment> segs;
        for (const auto& s : p->segments) {
            if (a > 0)
                segs.push_back({s.a * a, s.b * a, s.ya / m, s.yb / m});
            else
                segs.push_back({s.b * a, s.a * a, s.yb / m, s.ya / m});
        }
        return piecewise_linear(std::move(segs), concavity_);
    }
    if (const auto* s = std::get_if<Semicircle>(family_.get()))
        return semicircle(s->radius * m, s->center * a);
    const auto& c = std::get<Convolution1>(*family_);
    return c.f->scale(a).convolve(c.g->scale(a));
}

// ---------------------------------------------------------------------------
// Integrals
// ---------------------------------------------------------------------------

double Density::support_volume() const {
    if (std::get_if<Gaussian>(family_.get()) || std::get_if<ExponentialPower>(family_.get()) ||
        std::get_if<Exponential>(family_.get()))
        return kInf;
    if (const auto* u = std::get_if<Uniform>(family_.get())) return u->body.volume();
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        if (g->beta <= 0) return kInf;
        const double r = g->scale * std::sqrt(2.0 / g->beta);
        return g->dim == 1 ? 2.0 * r : kPi * r * r;
    }
    if (const auto* p = std::get_if<Product>(family_.get())) {
        double v = 1;
        for (const Density& f : p->factors) v *= f.support_volume();
        return v;
    }
    if (const auto* gr = std::get_if<Grid>(family_.get())) {
        // threshold at mass * 1e-12 to keep numeric noise out of the support count
        const double thresh = 1e-12;
        size_t count = 0;
        for (double v : gr->grid.values)
            if (v > thresh) ++count;
        return static_cast<double>(count) * gr->grid.cell_volume();
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) {
        double len = 0;
        for (const auto& s : p->segments)
            if (s.ya > 0 || s.yb > 0) len += s.b - s.a;
        return len;
    }
    if (const auto* s = std::get_if<Semicircle>(family_.get())) return 2.0 * s->radius;
    const auto& c = std::get<Convolution1>(*family_);
    const double lo = c.f->support_lo() + c.g->support_lo();
    const double hi = c.f->support_hi() + c.g->support_hi();
    return hi - lo;
}

double Density::sup_value() const {
    if (const auto* g = std::get_if<Gaussian>(family_.get()))
        return std::exp(-0.5 * g->log_det) / std::pow(2.0 * kPi, 0.5 * dim_);
    if (const auto* u = std::get_if<Uniform>(family_.get())) return 1.0 / u->body.volume();
    if (const auto* e = std::get_if<Exponential>(family_.get())) return e->rate;
    if (const auto* e = std::get_if<ExponentialPower>(family_.get()))
        return exp_power_const(e->exponent) / e->scale;
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        const double e = 1.0 / g->beta - 0.5 * g->dim - 1.0;
        if (g->beta > 0 && e < 0) return kInf;  // density diverges at the support boundary
        return g->norm;
    }
    if (const auto* p = std::get_if<Product>(family_.get())) {
        double v = 1;
        for (const Density& f : p->factors) v *= f.sup_value();
        return v;
    }
    if (const auto* gr = std::get_if<Grid>(family_.get())) return gr->grid.max_value();
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) {
        double v = 0;
        for (const auto& s : p->segments) v = std::max({v, s.ya, s.yb});
        return v;
    }
    if (const auto* s = std::get_if<Semicircle>(family_.get()))
        return 2.0 / (kPi * s->radius);
    // convolution: scan the window (the result is smooth and unimodal for
    // log-concave inputs, a fine scan is adequate)
    const double lo = std::max(support_lo(), center()[0] - truncation_radius(1e-12));
    const double hi = std::min(support_hi(), center()[0] + truncation_radius(1e-12));
    double best = 0;
    const int n = 2049;
    for (int i = 0; i < n; ++i)
        best = std::max(best, evaluate1(lo + (hi - lo) * i / (n - 1)));
    return best;
}

double Density::mass(double* error) const {
    if (error) *error = 0;
    if (const auto* gr = std::get_if<Grid>(family_.get())) return gr->grid.mass();
    if (std::get_if<Convolution1>(family_.get())) {
        const double lo = std::max(support_lo(), center()[0] - truncation_radius(1e-14));
        const double hi = std::min(support_hi(), center()[0] + truncation_radius(1e-14));
        if (error) *error = 1e-9;
        return integrate([&](double x) { return evaluate1(x); }, lo, hi, 1e-11);
    }
    if (const auto* p = std::get_if<PiecewiseLinear>(family_.get())) {
        double s = 0;
        for (const auto& seg : p->segments) s += 0.5 * (seg.ya + seg.yb) * (seg.b - seg.a);
        return s;
    }
    return 1.0;  // analytic families are normalized by construction
}

namespace {

// quadrature of g(f(x)) over the (possibly clipped) support of a 1-D density
double quad_over_support(const Density& d, const std::function<double(double)>& g, double tol) {
    const double c = d.center()[0];
    const double r = d.truncation_radius(1e-15);
    const double lo = std::max(d.support_lo(), c - r);
    const double hi = std::min(d.support_hi(), c + r);
    std::vector<double> bps{lo, hi};
    for (double b : d.breakpoints_1d())
        if (b > lo && b < hi) bps.push_back(b);
    std::sort(bps.begin(), bps.end());
    return integrate_pieces([&](double x) { return g(d.evaluate1(x)); }, bps, tol);
}

}  // namespace

double Density::lp_integral(double p, bool* closed_form, double* error) const {
    if (!(p > 0) || p == 1.0) throw std::invalid_argument("lp_integral: need p > 0, p != 1");
    if (closed_form) *closed_form = true;
    if (error) *error = 0;
    if (const auto* g = std::get_if<Gaussian>(family_.get()))
        return std::pow(2.0 * kPi, 0.5 * dim_ * (1.0 - p)) * std::exp(0.5 * (1.0 - p) * g->log_det) *
               std::pow(p, -0.5 * dim_);
    if (const auto* u = std::get_if<Uniform>(family_.get()))
        return std::pow(u->body.volume(), 1.0 - p);
    if (const auto* e = std::get_if<Exponential>(family_.get()))
        return std::pow(e->rate, p - 1.0) / p;
    if (const auto* e = std::get_if<ExponentialPower>(family_.get())) {
        const double c = exp_power_const(e->exponent);
        return std::pow(c, p - 1.0) * std::pow(e->scale, 1.0 - p) *
               std::pow(p, -1.0 / e->exponent);
    }
    if (const auto* s = std::get_if<Semicircle>(family_.get())) {
        // c^p R^{p+1} sqrt(pi) Gamma(p/2+1) / Gamma(p/2+3/2)
        const double c = 2.0 / (kPi * s->radius * s->radius);
        return std::pow(c, p) * std::pow(s->radius, p + 1.0) * std::sqrt(kPi) *
               std::exp(std::lgamma(0.5 * p + 1.0) - std::lgamma(0.5 * p + 1.5));
    }
    if (const auto* pl = std::get_if<PiecewiseLinear>(family_.get())) {
        double s = 0;
        for (const auto& seg : pl->segments) {
            const double ymax = std::max(seg.ya, seg.yb);
            if (ymax <= 0) continue;
            if (std::abs(seg.yb - seg.ya) <= 1e-12 * ymax) {
                s += (seg.b - seg.a) * std::pow(0.5 * (seg.ya + seg.yb), p);
            } else {
                const double slope = (seg.yb - seg.ya) / (seg.b - seg.a);
                s += (std::pow(seg.yb, p + 1.0) - std::pow(seg.ya, p + 1.0)) / (slope * (p + 1.0));
            }
        }
        return s;
    }
    if (const auto* pr = std::get_if<Product>(family_.get())) {
        double v = 1;
        bool all_closed = true;
        double err_acc = 0;
        for (const Density& f : pr->factors) {
            bool cf = false;
            double e = 0;
            v *= f.lp_integral(p, &cf, &e);
            all_closed = all_closed && cf;
            err_acc += e;
        }
        if (closed_form) *closed_form = all_closed;
        if (error) *error = err_acc;
        return v;
    }
    if (closed_form) *closed_form = false;
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        const double e = 1.0 / g->beta - 0.5 * g->dim - 1.0;
        const double pe = p * e;
        double kernel;
        if (g->beta > 0) {
            const double r0 = std::sqrt(2.0 / g->beta);
            kernel = (g->dim == 1) ? 2.0 * r0 * cos_power_integral(2.0 * pe + 1.0)
                                   : 2.0 * kPi * r0 * r0 * cos_power_integral(2.0 * pe + 1.0, true);
        } else {
            const double r0 = std::sqrt(2.0 / -g->beta);
            kernel = (g->dim == 1) ? 2.0 * r0 * cos_power_integral(-2.0 * pe - 2.0)
                                   : 2.0 * kPi * r0 * r0 * cos_power_integral(-2.0 * pe - 3.0, true);
        }
        if (error) *error = 1e-10 * kernel;
        return std::pow(g->norm, p) * std::pow(g->scale, g->dim) * kernel;
    }
    if (const auto* gr = std::get_if<Grid>(family_.get())) {
        const GridDensity& g = gr->grid;
        const double cv = g.cell_volume();
        double full = 0;
        for (double v : g.values) full += std::pow(v, p);
        full *= cv;
        // Richardson-style estimate: same sum on the stride-2 subgrid
        double coarse = 0;
        if (g.dim() == 1) {
            for (int i = 0; i < g.shape[0]; i += 2) coarse += std::pow(g.at(i), p);
            coarse *= 2.0 * cv;
        } else {
            for (int i = 0; i < g.shape[0]; i += 2)
                for (int j = 0; j < g.shape[1]; j += 2) coarse += std::pow(g.at(i, j), p);
            coarse *= 4.0 * cv;
        }
        if (error) *error = std::abs(full - coarse);
        return full;
    }
    // 1-D quadrature fallback (convolution wrappers)
    if (dim_ != 1) throw std::invalid_argument("lp_integral: no numeric path for this family");
    const double tol = 1e-11;
    if (error) *error = 1e-9;
    return quad_over_support(*this, [p](double f) { return f > 0 ? std::pow(f, p) : 0.0; }, tol);
}

double Density::shannon_integral(bool* closed_form, double* error) const {
    if (closed_form) *closed_form = true;
    if (error) *error = 0;
    if (const auto* g = std::get_if<Gaussian>(family_.get()))
        return 0.5 * dim_ * std::log(2.0 * kPi * std::exp(1.0)) + 0.5 * g->log_det;
    if (const auto* u = std::get_if<Uniform>(family_.get())) return std::log(u->body.volume());
    if (const auto* e = std::get_if<Exponential>(family_.get())) return 1.0 - std::log(e->rate);
    if (const auto* e = std::get_if<ExponentialPower>(family_.get())) {
        const double c = exp_power_const(e->exponent);
        return -std::log(c / e->scale) + 1.0 / e->exponent;
    }
    if (const auto* pl = std::get_if<PiecewiseLinear>(family_.get())) {
        double s = 0;
        auto F = [](double y) { return y > 0 ? 0.5 * y * y * std::log(y) - 0.25 * y * y : 0.0; };
        for (const auto& seg : pl->segments) {
            const double ymax = std::max(seg.ya, seg.yb);
            if (ymax <= 0) continue;
            if (std::abs(seg.yb - seg.ya) <= 1e-12 * ymax) {
                const double y = 0.5 * (seg.ya + seg.yb);
                s += (seg.b - seg.a) * y * std::log(y);
            } else {
                const double slope = (seg.yb - seg.ya) / (seg.b - seg.a);
                s += (F(seg.yb) - F(seg.ya)) / slope;
            }
        }
        return -s;
    }
    if (const auto* pr = std::get_if<Product>(family_.get())) {
        double v = 0;
        bool all_closed = true;
        double err_acc = 0;
        for (const Density& f : pr->factors) {
            bool cf = false;
            double e = 0;
            v += f.shannon_integral(&cf, &e);
            all_closed = all_closed && cf;
            err_acc += e;
        }
        if (closed_form) *closed_form = all_closed;
        if (error) *error = err_acc;
        return v;
    }
    if (closed_form) *closed_form = false;
    if (const auto* gr = std::get_if<Grid>(family_.get())) {
        const GridDensity& g = gr->grid;
        const double cv = g.cell_volume();
        double s = 0;
        for (double v : g.values)
            if (v > 0) s += v * std::log(v);
        s *= cv;
        double coarse = 0;
        const int stride = 2;
        if (g.dim() == 1) {
            for (int i = 0; i < g.shape[0]; i += stride)
                if (g.at(i) > 0) coarse += g.at(i) * std::log(g.at(i));
            coarse *= stride * cv;
        } else {
            for (int i = 0; i < g.shape[0]; i += stride)
                for (int j = 0; j < g.shape[1]; j += stride)
                    if (g.at(i, j) > 0) coarse += g.at(i, j) * std::log(g.at(i, j));
            coarse *= stride * stride * cv;
        }
        if (error) *error = std::abs(s - coarse);
        return -s;
    }
    if (const auto* g = std::get_if<GeneralizedGaussian>(family_.get())) {
        // radial quadrature of -f log f
        const double r_hi = std::min(truncation_radius(1e-15), 1e9);
        auto integrand = [&](double r) {
            const double f = evaluate(g->dim == 1 ? Vec{r} : Vec{r, 0.0});
            if (f <= 0) return 0.0;
            const double w = g->dim == 1 ? 2.0 : 2.0 * kPi * r;
            return -w * f * std::log(f);
        };
        if (error) *error = 1e-9;
        return integrate(integrand, 0.0, r_hi, 1e-11);
    }
    if (dim_ != 1) throw std::invalid_argument("shannon_integral: no numeric path");
    if (error) *error = 1e-9;
    return quad_over_support(
        *this, [](double f) { return f > 0 ? -f * std::log(f) : 0.0; }, 1e-11);
}

double Density::lp_integral_numeric(double p, double* error) const {
    if (!(p > 0) || p == 1.0)
        throw std::invalid_argument("lp_integral_numeric: need p > 0, p != 1");
    if (dim_ == 1 && !std::get_if<Grid>(family_.get())) {
        if (error) *error = 1e-9;
        return quad_over_support(*this, [p](double f) { return f > 0 ? std::pow(f, p) : 0.0; },
                                 1e-11);
    }
    if (std::get_if<Grid>(family_.get()) || std::get_if<GeneralizedGaussian>(family_.get())) {
        bool closed = false;
        const double v = lp_integral(p, &closed, error);
        if (!closed) return v;
    }
    // analytic 2-D: go through the default grid
    const int res = default_resolution(dim_);
    const Density g = from_grid(discretize(padded_radius(truncation_radius(), res), res),
                                concavity_);
    return g.lp_integral(p, nullptr, error);
}

double Density::shannon_integral_numeric(double* error) const {
    if (dim_ == 1 && !std::get_if<Grid>(family_.get())) {
        if (error) *error = 1e-9;
        return quad_over_support(
            *this, [](double f) { return f > 0 ? -f * std::log(f) : 0.0; }, 1e-11);
    }
    if (std::get_if<Grid>(family_.get()) || std::get_if<GeneralizedGaussian>(family_.get())) {
        bool closed = false;
        const double v = shannon_integral(&closed, error);
        if (!closed) return v;
    }
    const int res = default_resolution(dim_);
    const Density g = from_grid(discretize(padded_radius(truncation_radius(), res), res),
                                concavity_);
    return g.shannon_integral(nullptr, error);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

double sample_gamma(double alpha, Rng& rng) {
    // Marsaglia-Tsang
    if (alpha < 1.0) {
        const double u = rng.uniform();
        return sample_gamma(alpha + 1.0, rng) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = rng.normal();
            v = 1.0 + c * z;
        } while (v <= 0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

std::vector<Vec> Density::sample(uint64_t seed, int count) const {
    if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
    Rng rng(seed);
    std::vector<Vec> out;
    out.reserve(static_cast<size_t>(count));

    if (const auto* g = std::get_if<Gaussian>(family_.get())) {
        for (int k = 0; k < count; ++k) {
            Vec z(static_cast<size_t>(dim_));
            for (double& x : z) x = rng.normal();
            Vec x(static_cast<size_t>(dim_));
            for (int i = 0; i < dim_; ++i) {
                double s = g->mean[static_cast<size_t>(i)];
                for (int j = 0; j <= i; ++j) s += g->chol.at(i, j) * z[static_cast<size_t>(j)];
                x[static_cast<size_t>(i)] = s;
            }
            out.push_back(std::move(x));
        }
        return out;
    }
    if (const auto* u = std::get_if<Uniform>(family_.get())) {
        const auto& rep = u->body.representation();
        if (const auto* b = std::get_if<SupportBody::Ball>(&rep); b && dim_ == 2) {
            for (int k = 0; k < count; ++k) {
                const double r = b->radius * std::sqrt(rng.uniform());
                const double th = 2.0 * kPi * rng.uniform();
                out.push_back(Vec{u->shift[0] + r * std::cos(th), u->shift[1] + r * std::sin(th)});
            }
            return out;
        }
        if (const auto* b = std::get_if<SupportBody::Box>(&rep)) {
            for (int k = 0; k < count; ++k) {
                Vec x(static_cast<size_t>(dim_));
                for (int i = 0; i < dim_; ++i)
                    x[static_cast<size_t>(i)] =
                        u->shift[static_cast<size_t>(i)] +
                        rng.uniform(-b->half_widths[static_cast<size_t>(i)],
                                    b->half_widths[static_cast<size_t>(i)]);
                out.push_back(std::move(x));
            }
            return out;
        }
        // polytope / 1-D ball: rejection from the circumscribed box
        const double r = u->body.circumradius();
        for (int k = 0; k < count; ++k) {
            for (;;) {
                Vec x(static_cast<size_t>(dim_));
                for (int i = 0; i < dim_; ++i) x[static_cast<size_t>(i)] = rng.uniform(-r, r);
                if (u->body.contains(x)) {
                    for (int i = 0; i < dim_; ++i)
                        x[static_cast<size_t>(i)] += u->shift[static_cast<size_t>(i)];
                    out.push_back(std::move(x));
                    break;
                }
            }
        }
        return out;
    }
    if (const auto* e = std::get_if<Exponential>(family_.get())) {
        for (int k = 0; k < count; ++k) {
            double u = rng.uniform();
            while (u <= 0) u = rng.uniform();
            out.push_back(Vec{e->orientation * (-std::log(u) / e->rate)});
        }
        return out;
    }
    if (const auto* e = std::get_if<ExponentialPower>(family_.get())) {
        for (int k = 0; k < count; ++k) {
            const double g = sample_gamma(1.0 / e->exponent, rng);
            const double mag = e->scale * std::pow(g, 1.0 / e->exponent);
            out.push_back(Vec{rng.uniform() < 0.5 ? -mag : mag});
        }
        return out;
    }
    if (const auto* p = std::get_if<Product>(family_.get())) {
        std::vector<std::vector<Vec>> per;
        for (size_t i = 0; i < p->factors.size(); ++i)
            per.push_back(p->factors[i].sample(Rng(seed).split(i + 1).next_u64(), count));
        for (int k = 0; k < count; ++k) {
            Vec x;
            for (size_t i = 0; i < p->factors.size(); ++i)
                x.push_back(per[i][static_cast<size_t>(k)][0]);
            out.push_back(std::move(x));
        }
        return out;
    }
    if (const auto* c = std::get_if<Convolution1>(family_.get())) {
        const auto xs = c->f->sample(Rng(seed).split(1).next_u64(), count);
        const auto ys = c->g->sample(Rng(seed).split(2).next_u64(), count);
        for (int k = 0; k < count; ++k)
            out.push_back(Vec{xs[static_cast<size_t>(k)][0] + ys[static_cast<size_t>(k)][0]});
        return out;
    }
    if (const auto* gr = std::get_if<Grid>(family_.get()); gr && gr->grid.dim() == 1) {
        // inverse CDF over node masses with in-cell jitter
        const GridDensity& g = gr->grid;
        std::vector<double> cdf(g.values.size());
        double acc = 0;
        for (size_t i = 0; i < g.values.size(); ++i) {
            acc += g.values[i];
            cdf[i] = acc;
        }
        for (int k = 0; k < count; ++k) {
            const double u = rng.uniform() * acc;
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            const auto idx = static_cast<size_t>(it - cdf.begin());
            const double x = g.origin[0] + static_cast<double>(idx) * g.spacing[0] +
                             g.spacing[0] * (rng.uniform() - 0.5);
            out.push_back(Vec{x});
        }
        return out;
    }
    if (const auto* gr = std::get_if<Grid>(family_.get())) {
        const GridDensity& g = gr->grid;
        // factorization check: values ~ row_sums x col_sums / total
        std::vector<double> row(static_cast<size_t>(g.shape[0]), 0.0);
        std::vector<double> col(static_cast<size_t>(g.shape[1]), 0.0);
        double total = 0;
        for (int i = 0; i < g.shape[0]; ++i)
            for (int j = 0; j < g.shape[1]; ++j) {
                row[static_cast<size_t>(i)] += g.at(i, j);
                col[static_cast<size_t>(j)] += g.at(i, j);
                total += g.at(i, j);
            }
        bool factorizes = true;
        const double vmax = g.max_value();
        for (int i = 0; i < g.shape[0] && factorizes; ++i)
            for (int j = 0; j < g.shape[1]; ++j)
                if (std::abs(g.at(i, j) - row[static_cast<size_t>(i)] * col[static_cast<size_t>(j)] / total) >
                    1e-9 * vmax) {
                    factorizes = false;
                    break;
                }
        if (factorizes) {
            auto draw_axis = [&](const std::vector<double>& w, double o, double h, Rng& r) {
                double acc = 0;
                for (double x : w) acc += x;
                double u = r.uniform() * acc;
                size_t idx = 0;
                for (; idx < w.size(); ++idx) {
                    u -= w[idx];
                    if (u <= 0) break;
                }
                idx = std::min(idx, w.size() - 1);
                return o + static_cast<double>(idx) * h + h * (r.uniform() - 0.5);
            };
            for (int k = 0; k < count; ++k)
                out.push_back(Vec{draw_axis(row, g.origin[0], g.spacing[0], rng),
                                  draw_axis(col, g.origin[1], g.spacing[1], rng)});
            return out;
        }
        // rejection against the grid maximum
        const double x0 = g.origin[0], x1 = g.origin[0] + g.spacing[0] * (g.shape[0] - 1);
        const double y0 = g.origin[1], y1 = g.origin[1] + g.spacing[1] * (g.shape[1] - 1);
        for (int k = 0; k < count; ++k) {
            for (;;) {
                const Vec x{rng.uniform(x0, x1), rng.uniform(y0, y1)};
                if (rng.uniform() * vmax <= g.interpolate(x)) {
                    out.push_back(x);
                    break;
                }
            }
        }
        return out;
    }
    // bounded 1-D families: rejection from the support box
    if (dim_ == 1 && std::isfinite(support_lo()) && std::isfinite(support_hi()) &&
        std::isfinite(sup_value())) {
        const double lo = support_lo(), hi = support_hi(), m = sup_value();
        for (int k = 0; k < count; ++k) {
            for (;;) {
                const double x = rng.uniform(lo, hi);
                if (rng.uniform() * m <= evaluate1(x)) {
                    out.push_back(Vec{x});
                    break;
                }
            }
        }
        return out;
    }
    throw std::invalid_argument("sample: unsupported family for exact sampling (" + family_name() +
                                ")");
}

}  // namespace epigeom
