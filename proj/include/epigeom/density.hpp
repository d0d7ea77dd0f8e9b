#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "epigeom/numerics.hpp"
#include "epigeom/support_body.hpp"

namespace epigeom {

enum class ConcavityClass { LogConcave, SConcave, Unknown };

struct Concavity {
    ConcavityClass cls = ConcavityClass::Unknown;
    double s = 0;  // only meaningful for SConcave

    static Concavity log_concave() { return {ConcavityClass::LogConcave, 0}; }
    static Concavity s_concave(double s) { return {ConcavityClass::SConcave, s}; }
    static Concavity unknown() { return {ConcavityClass::Unknown, 0}; }
    bool is_log_concave() const {
        return cls == ConcavityClass::LogConcave || (cls == ConcavityClass::SConcave && s >= 0);
    }
};

/// Node-sampled density on a regular grid (dim 1 or 2), row-major values.
/// Invariants: values >= 0, boundary layer zero, mass = 1 within 1e-6.
struct GridDensity {
    Vec origin;               // position of node (0, ..., 0)
    Vec spacing;              // per axis, positive
    std::vector<int> shape;   // nodes per axis
    std::vector<double> values;
    double renorm_factor = 1.0;  // mass divided out during construction

    int dim() const { return static_cast<int>(shape.size()); }
    double cell_volume() const;
    double mass() const;  // sum * cell volume (trapezoid, given zero boundary)
    double at(int i) const { return values[static_cast<size_t>(i)]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * shape[1] + j]; }
    double& at(int i, int j) { return values[static_cast<size_t>(i) * shape[1] + j]; }
    /// Multilinear interpolation; zero outside the grid.
    double interpolate(const Vec& x) const;
    double max_value() const;
    /// Throws unless non-negative, unit mass, zero boundary.
    void validate() const;
};

/// Probability density on R^n (n = 1 or 2 for numeric paths).
/// Immutable value type; all operations are pure.
class Density {
public:
    struct Gaussian {
        Vec mean;
        SymMatrix cov;
        SymMatrix chol;   // cached lower factor
        double log_det;
    };
    struct Uniform {
        SupportBody body;
        Vec shift;
    };
    struct Exponential {
        double rate;
        int orientation;  // +1: support [0, inf); -1: support (-inf, 0]
    };
    /// Symmetric exponential-power law  c_k/s * exp(-|x/s|^k), dim 1.
    struct ExponentialPower {
        double exponent;
        double scale;
    };
    /// Costa-Hero-Vignat generalized Gaussian A_b (1 - b/2 |x/s|^2)_+^{1/b - n/2 - 1}.
    struct GeneralizedGaussian {
        double beta;
        int dim;
        double scale;
        double norm;  // A_b / s^n precomputed numerically
    };
    struct Product {
        std::vector<Density> factors;  // 1-D each
    };
    struct Grid {
        GridDensity grid;
    };
    /// Piecewise-linear 1-D density; zero outside the listed segments.
    struct PiecewiseLinear {
        struct Segment {
            double a, b, ya, yb;
        };
        std::vector<Segment> segments;  // sorted by a, non-overlapping
    };
    /// Marginal of the uniform disk: 2/(pi R^2) sqrt(R^2 - (t-c)^2), dim 1.
    struct Semicircle {
        double radius;
        double center;
    };
    /// Density of F + G for independent F, G (dim 1), evaluated by quadrature.
    struct Convolution1 {
        std::shared_ptr<const Density> f, g;
    };

    using Family = std::variant<Gaussian, Uniform, Exponential, ExponentialPower,
                                GeneralizedGaussian, Product, Grid, PiecewiseLinear, Semicircle,
                                Convolution1>;

    // Constructors
    static Density gaussian(Vec mean, SymMatrix cov);
    static Density standard_gaussian(int dim);
    static Density uniform(SupportBody body, Vec shift = {});
    /// Uniform on the interval [a, b].
    static Density uniform_interval(double a, double b);
    static Density exponential(double rate);
    static Density exponential_power(double exponent, double scale = 1.0);
    static Density generalized_gaussian(double beta, int dim, double scale = 1.0);
    static Density product(std::vector<Density> factors);
    static Density from_grid(GridDensity grid, Concavity conc = Concavity::unknown());
    static Density piecewise_linear(std::vector<PiecewiseLinear::Segment> segments,
                                    Concavity conc = Concavity::unknown());
    static Density semicircle(double radius, double center = 0.0);

    int dim() const { return dim_; }
    Concavity concavity() const { return concavity_; }
    bool symmetric() const { return symmetric_; }
    const Family& family() const { return *family_; }
    std::string family_name() const;

    // -- spec operations ------------------------------------------------------

    /// f(x); exact for analytic families, multilinear interpolation for grids.
    double evaluate(const Vec& x) const;
    double evaluate1(double x) const { return evaluate(Vec{x}); }

    /// Node-sampled grid over the box center +- radius, renormalized to mass 1.
    /// Throws if the excluded tail mass exceeds 1e-10 or resolution < 16.
    GridDensity discretize(double radius, int resolution) const;

    /// Density of X' - X for X, X' i.i.d. with this density; always symmetric.
    Density self_convolve() const;

    /// Density of X + Y for independent X ~ *this, Y ~ other.
    Density convolve(const Density& other) const;

    /// 1-D density of v . X.
    Density marginal_along(const Direction& v) const;

    /// Integral of f over the hyperplane {x . v = t}.
    double section_integral(const Direction& v, double t) const;

    /// Deterministic i.i.d. samples.
    std::vector<Vec> sample(uint64_t seed, int count) const;

    // -- derived quantities ---------------------------------------------------

    /// Density of a*X (a != 0).
    Density scale(double a) const;
    /// Density of -X.
    Density reflect() const { return scale(-1.0); }

    /// |Range(v . X)| (may be +inf).
    double range_along(const Direction& v) const;
    /// Volume of the support (may be +inf); grids use the mass*1e-12 threshold.
    double support_volume() const;
    /// ess-sup of the density (may be +inf).
    double sup_value() const;
    double mass(double* error = nullptr) const;

    /// Integral of f^p for p > 0, p != 1. closed_form reports the path taken;
    /// error receives a quadrature error estimate (0 for closed forms).
    double lp_integral(double p, bool* closed_form = nullptr, double* error = nullptr) const;
    /// -Integral of f log f.
    double shannon_integral(bool* closed_form = nullptr, double* error = nullptr) const;
    /// Numeric routes that bypass the closed forms (adaptive quadrature in 1-D,
    /// grid sums in 2-D); the cross-check side of the closed-form results.
    double lp_integral_numeric(double p, double* error = nullptr) const;
    double shannon_integral_numeric(double* error = nullptr) const;

    /// Box half-width about center() with tail mass below tail_bound.
    double truncation_radius(double tail_bound = 1e-10) const;
    /// Upper bound for the mass outside the box center +- radius.
    double tail_mass_outside(double radius) const;
    /// Reference point for truncation boxes (mean / shift / 0).
    Vec center() const;

    /// Default grid resolution: 4096 nodes (1-D), 512 per axis (2-D).
    static int default_resolution(int dim) { return dim == 1 ? 4096 : 512; }

    // -- 1-D support/quadrature helpers ----------------------------------------
    double support_lo() const;  // dim 1; -inf allowed
    double support_hi() const;
    /// Potential kink/jump abscissae, for piecewise quadrature (dim 1).
    std::vector<double> breakpoints_1d() const;

private:
    Density(int dim, Concavity conc, bool symmetric, Family fam);

    int dim_;
    Concavity concavity_;
    bool symmetric_;
    std::shared_ptr<const Family> family_;
};

}  // namespace epigeom
