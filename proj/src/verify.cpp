#include "epigeom/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace epigeom {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Violated: return "violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

CheckReport finish_report(CheckReport r) {
    if (r.margin >= -r.tolerance)
        r.verdict = Verdict::Holds;
    else if (r.error_estimate > std::abs(r.margin))
        r.verdict = Verdict::Inconclusive;
    else
        r.verdict = Verdict::Violated;
    return r;
}

namespace {

std::string digest(const std::string& text) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(text)));
    return buf;
}

std::string pair_digest(const Density& a, const Density& b, double p) {
    std::ostringstream os;
    os << a.family_name() << "/" << a.dim() << "+" << b.family_name() << "/" << b.dim()
       << "@p=" << p;
    return digest(os.str());
}

// error of N^alpha from the entropy error estimate
double power_error(const EntropyResult& r, double alpha_exp, int n) {
    if (!std::isfinite(r.entropy_power)) return 0.0;
    const double na = std::pow(r.entropy_power, alpha_exp);
    return na * alpha_exp * 2.0 / n * r.error_estimate;
}

}  // namespace

// ---------------------------------------------------------------------------
// EPI checks
// ---------------------------------------------------------------------------

CheckReport check_epi(const Density& fx, const Density& fy, double p, double alpha_exp) {
    if (fx.dim() != fy.dim()) throw std::invalid_argument("check_epi: dimension mismatch");
    const Density sum = fx.convolve(fy);
    const EntropyResult ex = renyi_entropy(fx, p);
    const EntropyResult ey = renyi_entropy(fy, p);
    const EntropyResult es = renyi_entropy(sum, p);
    CheckReport r;
    r.name = "epi";
    r.inputs_digest = pair_digest(fx, fy, p);
    r.lhs = std::pow(es.entropy_power, alpha_exp);
    r.rhs = std::pow(ex.entropy_power, alpha_exp) + std::pow(ey.entropy_power, alpha_exp);
    r.margin = r.lhs - r.rhs;
    const bool closed = ex.method == EntropyMethod::ClosedForm &&
                        ey.method == EntropyMethod::ClosedForm &&
                        es.method == EntropyMethod::ClosedForm;
    r.tolerance = closed ? 1e-6 : 1e-3 * std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.error_estimate = power_error(es, alpha_exp, fx.dim()) + power_error(ex, alpha_exp, fx.dim()) +
                       power_error(ey, alpha_exp, fx.dim());
    return finish_report(r);
}

CheckReport check_linearized(const Density& fx, const Density& fy, double p, double alpha_exp,
                             double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("check_linearized: lambda must be in [0,1]");
    const EntropyResult ex = renyi_entropy(fx, p);
    const EntropyResult ey = renyi_entropy(fy, p);
    CheckReport r;
    r.name = "linearized-epi";
    r.inputs_digest = pair_digest(fx, fy, p);
    EntropyResult es;
    if (lambda == 0.0) {
        es = ey;
    } else if (lambda == 1.0) {
        es = ex;
    } else {
        const Density sx = fx.scale(std::pow(lambda, 0.5 / alpha_exp));
        const Density sy = fy.scale(std::pow(1.0 - lambda, 0.5 / alpha_exp));
        es = renyi_entropy(sx.convolve(sy), p);
    }
    r.lhs = es.h;
    r.rhs = lambda * ex.h + (1.0 - lambda) * ey.h;
    r.margin = r.lhs - r.rhs;
    const bool closed = ex.method == EntropyMethod::ClosedForm &&
                        ey.method == EntropyMethod::ClosedForm &&
                        es.method == EntropyMethod::ClosedForm;
    r.tolerance = closed ? 1e-6 : 1e-3;
    r.error_estimate = es.error_estimate + lambda * ex.error_estimate +
                       (1.0 - lambda) * ey.error_estimate;
    std::ostringstream os;
    os << "lambda=" << lambda;
    r.detail = os.str();
    return finish_report(r);
}

double balancing_lambda(const Density& fx, const Density& fy, double p, double alpha_exp) {
    const double nx = entropy_power(fx, p);
    const double ny = entropy_power(fy, p);
    if (!std::isfinite(nx) || !std::isfinite(ny))
        throw std::invalid_argument("balancing_lambda: infinite entropy power");
    const double ax = std::pow(nx, alpha_exp), ay = std::pow(ny, alpha_exp);
    return ax / (ax + ay);
}

double balancing_residual(const Density& fx, const Density& fy, double p, double alpha_exp) {
    const double lambda = balancing_lambda(fx, fy, p, alpha_exp);
    const Density gx = fx.scale(std::pow(lambda, -0.5 / alpha_exp));
    const Density gy = fy.scale(std::pow(1.0 - lambda, -0.5 / alpha_exp));
    return std::abs(renyi_entropy(gx, p).h - renyi_entropy(gy, p).h);
}

// ---------------------------------------------------------------------------
// Reverse EPI
// ---------------------------------------------------------------------------

JointDensity2D::JointDensity2D(Density d) : density(std::move(d)) {
    if (density.dim() != 2) throw std::invalid_argument("JointDensity2D: dim must be 2");
    if (!density.symmetric())
        throw std::invalid_argument("JointDensity2D: joint density must be symmetric");
}

Density JointDensity2D::marginal_x() const {
    return density.marginal_along(Direction(Vec{1.0, 0.0}));
}

Density JointDensity2D::marginal_y() const {
    return density.marginal_along(Direction(Vec{0.0, 1.0}));
}

double JointDensity2D::entropy_power_sum(double p) const {
    return directional_entropy_power(density, Vec{1.0, 1.0}, p);
}

CheckReport check_reverse_epi(const JointDensity2D& joint, double p) {
    CheckReport r;
    r.name = "reverse-epi";
    r.inputs_digest = pair_digest(joint.density, joint.density, p);
    const double n_sum = joint.entropy_power_sum(p);
    const double n_x = directional_entropy_power(joint.density, Vec{1.0, 0.0}, p);
    const double n_y = directional_entropy_power(joint.density, Vec{0.0, 1.0}, p);
    r.lhs = std::sqrt(n_sum);
    r.rhs = std::sqrt(n_x) + std::sqrt(n_y);
    if (r.lhs == kInf && r.rhs == kInf) {
        // both sides infinite (e.g. p = 0 with unbounded support): trivially true
        r.margin = 0;
        r.tolerance = 0;
        r.detail = "both sides infinite";
        return finish_report(r);
    }
    r.margin = r.rhs - r.lhs;
    const bool grid = joint.density.family_name() == "grid";
    r.tolerance = grid ? 1e-3 * std::max(r.lhs, r.rhs) : 1e-6;
    return finish_report(r);
}

CheckReport check_entropy_convexity(const JointDensity2D& joint, double p, int lambda_points) {
    if (lambda_points < 3)
        throw std::invalid_argument("check_entropy_convexity: need >= 3 lambda points");
    const EntropyResult hx = renyi_entropy(joint.marginal_x(), p);
    const EntropyResult hy = renyi_entropy(joint.marginal_y(), p);
    if (std::abs(hx.h - hy.h) > 1e-4)
        throw std::invalid_argument("check_entropy_convexity: marginal entropies differ (" +
                                    std::to_string(hx.h) + " vs " + std::to_string(hy.h) + ")");
    std::vector<double> g(static_cast<size_t>(lambda_points));
    for (int i = 0; i < lambda_points; ++i) {
        const double lambda = static_cast<double>(i) / (lambda_points - 1);
        if (lambda == 0.0) {
            g[static_cast<size_t>(i)] = hy.h;
        } else if (lambda == 1.0) {
            g[static_cast<size_t>(i)] = hx.h;
        } else {
            const Vec v{lambda, 1.0 - lambda};
            const double len = norm(v);
            const Density m = joint.density.marginal_along(Direction(scaled(v, 1.0 / len)));
            g[static_cast<size_t>(i)] = renyi_entropy(m, p).h + std::log(len);
        }
    }
    double min_second_diff = kInf;
    for (int i = 1; i + 1 < lambda_points; ++i)
        min_second_diff = std::min(min_second_diff,
                                   g[static_cast<size_t>(i - 1)] + g[static_cast<size_t>(i + 1)] -
                                       2.0 * g[static_cast<size_t>(i)]);
    double max_h = -kInf;
    for (double v : g) max_h = std::max(max_h, v);

    CheckReport r;
    r.name = "entropy-convexity";
    r.inputs_digest = pair_digest(joint.density, joint.density, p);
    r.lhs = min_second_diff;          // convexity margin
    r.rhs = hx.h - max_h;             // endpoint-bound margin
    r.margin = std::min(min_second_diff, hx.h - max_h);
    const bool grid = joint.density.family_name() == "grid";
    r.tolerance = grid ? 1e-3 : 1e-6;
    r.error_estimate = 4.0 * (hx.error_estimate + hy.error_estimate);
    std::ostringstream os;
    os << "min_second_difference=" << min_second_diff << " endpoint_margin=" << (hx.h - max_h);
    r.detail = os.str();
    return finish_report(r);
}

CheckReport dct_lower_check(const Density& fx, const Density& fy, double lambda) {
    if (fx.dim() != 1 || fy.dim() != 1)
        throw std::invalid_argument("dct_lower_check: 1-D densities only");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("dct_lower_check: lambda must be in [0,1]");
    const double lx = fx.support_volume(), ly = fy.support_volume();
    if (!std::isfinite(lx) || !std::isfinite(ly))
        throw std::invalid_argument("dct_lower_check: unbounded support");
    CheckReport r;
    r.name = "dct-lower";
    r.inputs_digest = pair_digest(fx, fy, 0.0);
    if (lambda == 0.0) {
        r.lhs = std::log(ly);
    } else if (lambda == 1.0) {
        r.lhs = std::log(lx);
    } else {
        const Density sum = fx.scale(lambda).convolve(fy.scale(1.0 - lambda));
        r.lhs = std::log(sum.support_volume());
    }
    r.rhs = lambda * std::log(lx) + (1.0 - lambda) * std::log(ly);
    r.margin = r.lhs - r.rhs;
    r.tolerance = 1e-9;
    return finish_report(r);
}

// ---------------------------------------------------------------------------
// Identity theorems
// ---------------------------------------------------------------------------

namespace {

double max_rel_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

}  // namespace

CheckReport check_identity_c1(const Density& f, const std::vector<Direction>& dirs,
                              double tolerance, const BodyOptions& opt) {
    if (f.dim() != 2) throw std::invalid_argument("check_identity_c1: dim must be 2");
    if (!f.concavity().is_log_concave())
        throw std::invalid_argument("check_identity_c1: density must be log-concave");
    const StarBody c1 = cross_section_body(f, 1.0, dirs, opt);
    const Density fhat = f.self_convolve();
    const StarBody ihat = intersection_body_of_density(fhat, dirs);
    const StarBody r1 = radial_mean_body(f, 1.0, dirs, opt);
    std::vector<double> ir1(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i)
        ir1[i] = intersection_body_of_starbody(r1, dirs[i]);  // (n-1) factor is 1 here

    CheckReport r;
    r.name = "identity-c1";
    r.inputs_digest = pair_digest(f, f, 1.0);
    const double g1 = max_rel_gap(c1.radii, ihat.radii);
    const double g2 = max_rel_gap(c1.radii, ir1);
    const double g3 = max_rel_gap(ihat.radii, ir1);
    r.lhs = std::max({g1, g2, g3});
    r.rhs = tolerance;
    r.margin = r.rhs - r.lhs;
    r.tolerance = 0;
    std::ostringstream os;
    os << "gap(C1,I(fhat))=" << g1 << " gap(C1,I(R1))=" << g2 << " gap(I(fhat),I(R1))=" << g3;
    r.detail = os.str();
    return finish_report(r);
}

CheckReport check_identity_rp(const Density& f, double p, const std::vector<Direction>& dirs,
                              double tolerance, const BodyOptions& opt) {
    if (!f.concavity().is_log_concave())
        throw std::invalid_argument("check_identity_rp: density must be log-concave");
    const StarBody rp = radial_mean_body(f, p, dirs, opt);
    const Density fhat = f.self_convolve();
    const StarBody bp = ball_mean_body(fhat, p, dirs, opt);
    CheckReport r;
    r.name = "identity-rp";
    r.inputs_digest = pair_digest(f, f, p);
    r.lhs = max_rel_gap(rp.radii, bp.radii);
    r.rhs = tolerance;
    r.margin = r.rhs - r.lhs;
    r.tolerance = 0;
    return finish_report(r);
}

CheckReport check_cminus1(const Density& f, const std::vector<Direction>& dirs, double tolerance) {
    const auto* u = std::get_if<Density::Uniform>(&f.family());
    if (!u)
        throw std::invalid_argument("check_cminus1: density must be uniform on a symmetric body");
    const SupportBody two_k = u->body.dilate(2.0);
    const SupportBody diff = u->body.difference_body();  // R_inf(f) for uniform f
    double worst = 0;
    for (const Direction& v : dirs) {
        const double a = 1.0 / f.range_along(v);
        const double b = 1.0 / two_k.support(v.components);
        const double c = diff.polar_radial(v);
        worst = std::max({worst, std::abs(a - b), std::abs(a - c), std::abs(b - c)});
    }
    CheckReport r;
    r.name = "identity-cminus1";
    r.inputs_digest = pair_digest(f, f, -1.0);
    r.lhs = worst;
    r.rhs = tolerance;
    r.margin = r.rhs - r.lhs;
    r.tolerance = 0;
    return finish_report(r);
}

// ---------------------------------------------------------------------------
// Convexity certificate
// ---------------------------------------------------------------------------

CheckReport convexity_certificate(const StarBody& body, double tolerance) {
    if (body.dim != 2) throw std::invalid_argument("convexity_certificate: dim must be 2");
    body.validate(true);
    const size_t n = body.count();
    std::vector<double> px(n), py(n);
    for (size_t i = 0; i < n; ++i) {
        const double th = body.directions[i].angle();
        px[i] = body.radii[i] * std::cos(th);
        py[i] = body.radii[i] * std::sin(th);
    }
    // single-signed boundary turn, normalized by the segment lengths
    double min_turn = kInf;
    size_t worst = 0;
    for (size_t i = 0; i < n; ++i) {
        const size_t j = (i + 1) % n, k = (i + 2) % n;
        const double ax = px[j] - px[i], ay = py[j] - py[i];
        const double bx = px[k] - px[j], by = py[k] - py[j];
        const double cross = ax * by - ay * bx;
        const double scale = std::sqrt((ax * ax + ay * ay) * (bx * bx + by * by));
        const double turn = scale > 0 ? cross / scale : 0.0;
        if (turn < min_turn) {
            min_turn = turn;
            worst = i;
        }
    }
    // triangle inequality of the reciprocal-radial norm on sampled pairs
    auto norm_of = [&](double x, double y) {
        const double len = std::hypot(x, y);
        if (len == 0) return 0.0;
        return len / body.radius_at_angle(std::atan2(y, x));
    };
    double min_triangle = kInf;
    const size_t stride = std::max<size_t>(1, n / 24);
    for (size_t i = 0; i < n; i += stride)
        for (size_t j = i + 1; j < n; j += stride) {
            const double slack =
                norm_of(px[i], py[i]) + norm_of(px[j], py[j]) - norm_of(px[i] + px[j], py[i] + py[j]);
            min_triangle = std::min(min_triangle, slack);
        }

    CheckReport r;
    r.name = "convexity";
    r.inputs_digest = digest(body.label + ":" + std::to_string(n));
    r.lhs = min_turn;
    r.rhs = min_triangle;
    r.margin = std::min(min_turn, min_triangle);
    r.tolerance = tolerance;
    std::ostringstream os;
    os << "min_turn=" << min_turn << " at vertex " << worst << ", min_triangle_slack=" << min_triangle;
    r.detail = os.str();
    return finish_report(r);
}

}  // namespace epigeom
