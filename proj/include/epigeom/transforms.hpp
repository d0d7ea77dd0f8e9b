#pragma once

#include <functional>

#include "epigeom/star_body.hpp"

namespace epigeom {

/// Continuous function on S^{n-1}, sampled over an antipodally closed
/// direction set; an optional exact evaluator backs off-grid queries.
struct SphericalFunction {
    int dim = 2;
    std::vector<Direction> directions;
    std::vector<double> values;
    bool even = false;
    std::function<double(const Direction&)> evaluator;  // may be empty

    static SphericalFunction from_function(const std::vector<Direction>& dirs,
                                           std::function<double(const Direction&)> fn, bool even);
    static SphericalFunction constant(const std::vector<Direction>& dirs, double c);
    /// g(u) = rho_K(u)^power from a star body (exact on the stored set).
    static SphericalFunction from_star_body(const StarBody& k, double power);

    /// Value at an angle on S^1: evaluator if available, else linear
    /// interpolation between stored samples.
    double value_at_angle(double theta) const;
    void validate() const;
};

/// p-cosine transform T_p g(v) = int_{S^1} |u.v|^p g(u) du, p > -1.
/// For p < 0 the quadrature nodes within ten grid steps of u perp v are
/// replaced by the analytic power-law integral against the frozen g.
double cosine_transform(const SphericalFunction& g, double p, const Direction& v);

/// Spherical Radon transform. dim 2: counting measure on the two points of
/// S^1 cap v^perp, Rg(v) = g(u) + g(-u). dim 3: trapezoid on the great circle
/// (needs the evaluator).
double radon_transform(const SphericalFunction& g, const Direction& v);

struct LimitCheck {
    double lhs = 0;
    double rhs = 0;
    double gap = 0;
};

/// ((p+1)/2) T_p g at p = -1+eps against Rg.
LimitCheck tr_limit_check(const SphericalFunction& g, const Direction& v, double eps);

/// Proposition check rho_{Z_p(R_{n+p}(f))} = ((1/(n+p)) int f(x) rho_{Z_p(f_x)}^{-p} dx)^{-1/p};
/// returns the max relative gap over the directions.
double zr_identity_check(const Density& f, double p, const std::vector<Direction>& dirs,
                         const BodyOptions& opt = {});

/// rho_{Z_p(f)}(v)^{-p} at p = -1+eps against rho_{I(f)}(v); max relative gap.
double zi_limit_check(const Density& f, double eps, const std::vector<Direction>& dirs,
                      const BodyOptions& opt = {});

/// ((p+1)/(2(n-1))) T_p rho_{C_{n-1}(f)}^{n-1} at p = -1+eps against
/// rho_{I(C_{n-1}(f))}; max relative gap (n = 2).
double cn1_radon_check(const Density& f, double eps, const std::vector<Direction>& dirs,
                       const BodyOptions& opt = {});

}  // namespace epigeom
