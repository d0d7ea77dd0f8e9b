#pragma once

#include <variant>
#include <vector>

#include "epigeom/numerics.hpp"

namespace epigeom {

/// Symmetric convex body with an exact support function h_K.
/// Representations: origin-symmetric polytope (vertex list), centered ball, centered box.
class SupportBody {
public:
    struct Ball {
        double radius;
    };
    struct Box {
        Vec half_widths;
    };
    struct Polytope {
        std::vector<Vec> vertices;  // must be origin-symmetric; dim 1 or 2
    };

    static SupportBody ball(int dim, double radius);
    static SupportBody box(Vec half_widths);
    static SupportBody polytope(std::vector<Vec> vertices);
    /// [-h, h] as a 1-D box; convenience for interval supports.
    static SupportBody interval(double half_width) { return box(Vec{half_width}); }

    int dim() const { return dim_; }

    /// Support function h_K(v) = sup_{x in K} v.x (v need not be unit).
    double support(const Vec& v) const;
    /// Radial function rho_K(v) for unit v.
    double radial(const Direction& v) const;
    /// Volume (length for dim 1, area for dim 2).
    double volume() const;
    bool contains(const Vec& x, double tol = 0.0) const;
    /// Circumradius: max |x| over K.
    double circumradius() const;

    SupportBody dilate(double c) const;
    /// K - K; equals 2K for symmetric K but is computed from the Minkowski
    /// vertex/parameter sum, not by dilation.
    SupportBody difference_body() const;
    /// Radial function of the polar body: rho_{K°}(v) = 1 / h_K(v).
    double polar_radial(const Direction& v) const;

    const std::variant<Ball, Box, Polytope>& representation() const { return rep_; }

private:
    SupportBody(int dim, std::variant<Ball, Box, Polytope> rep);
    int dim_;
    std::variant<Ball, Box, Polytope> rep_;
};

}  // namespace epigeom
