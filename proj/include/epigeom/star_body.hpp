#pragma once

#include <string>
#include <vector>

#include "epigeom/density.hpp"

namespace epigeom {

/// Symmetric star-shaped set sampled by its radial function over an
/// antipodally closed direction set (equally spaced on S^1).
struct StarBody {
    int dim = 2;
    std::vector<Direction> directions;
    std::vector<double> radii;
    std::string label;

    size_t count() const { return directions.size(); }
    /// Radial function at an arbitrary angle (linear interpolation between
    /// the stored equally spaced samples).
    double radius_at_angle(double theta) const;
    double max_radius() const;
    /// Throws unless every radius is positive and finite; symmetric
    /// constructions must satisfy rho(v) = rho(-v) within 1e-9.
    void validate(bool require_symmetric) const;
};

/// Numeric knobs shared by the body constructors.
struct BodyOptions {
    int resolution = 512;       // samples per axis for line/plane quadrature
    double tail_bound = 1e-12;  // truncation mass for unbounded supports
    double quad_tol = 1e-10;    // adaptive quadrature tolerance
};

/// rho_{C_p(f)}(v) = ( \int (\int_{x.v=t} f)^{p+1} dt )^{1/p}; p >= -1, p != 0.
/// p = -1 uses the range formula 1/|Range(v.X)|.
StarBody cross_section_body(const Density& f, double p, const std::vector<Direction>& dirs,
                            const BodyOptions& opt = {});
double cross_section_radius(const Density& f, double p, const Direction& v,
                            const BodyOptions& opt = {});
/// The entropy-power route rho = N_{p+1}^{-1/2}(v.X), for the two-path check.
double cross_section_radius_via_entropy(const Density& f, double p, const Direction& v);

/// rho_{I(f)}(v) = \int_{v^perp} f.
StarBody intersection_body_of_density(const Density& f, const std::vector<Direction>& dirs);

/// rho_{I(K)}(v) = |K \cap v^perp|; for dim 2 this is rho_K(u) + rho_K(-u), u perp v.
double intersection_body_of_starbody(const StarBody& k, const Direction& v);

/// rho_{R_p(f)}(v) = ( \int f(x) \int_{r>0} r^{p-1} f(x+rv) dr dx )^{1/p};
/// p = inf gives the difference-body radial (uniform densities only).
StarBody radial_mean_body(const Density& f, double p, const std::vector<Direction>& dirs,
                          const BodyOptions& opt = {});
double radial_mean_radius(const Density& f, double p, const Direction& v,
                          const BodyOptions& opt = {});

/// rho_{B_p(f)}(v) = ( \int_{r>0} r^{p-1} f(rv) dr )^{1/p}, p > 0.
StarBody ball_mean_body(const Density& f, double p, const std::vector<Direction>& dirs,
                        const BodyOptions& opt = {});
double ball_mean_radius(const Density& f, double p, const Direction& v,
                        const BodyOptions& opt = {});

/// \int |v.x|^p f(x) dx; for p in (-1,0) the singularity at v.x = 0 is handled
/// by an analytic patch against the frozen marginal value.
double centroid_moment(const Density& f, double p, const Direction& v,
                       const BodyOptions& opt = {});

/// rho_{Gamma_p^o(f)}(v) = centroid_moment^{-1/p}, p > 0.
StarBody polar_centroid_body(const Density& f, double p, const std::vector<Direction>& dirs,
                             const BodyOptions& opt = {});

/// Z_p(f) = (2/(p+1))^{1/p} Gamma_p^o(f); for p in (-1,0) evaluated through
/// rho^{-p} = ((p+1)/2) \int |v.x|^p f dx, which is the same dilation.
StarBody z_body(const Density& f, double p, const std::vector<Direction>& dirs,
                const BodyOptions& opt = {});
/// rho_{Z_p(f)}(v)^{-p} = ((p+1)/2) \int |v.x|^p f(x) dx.
double z_moment(const Density& f, double p, const Direction& v, const BodyOptions& opt = {});

}  // namespace epigeom
