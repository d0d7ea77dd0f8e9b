#include "epigeom/support_body.hpp"

#include <algorithm>
#include <cmath>

namespace epigeom {

namespace {

void check_symmetric_vertices(const std::vector<Vec>& verts) {
    for (const Vec& v : verts) {
        bool found = false;
        for (const Vec& w : verts) {
            double d = 0;
            for (size_t i = 0; i < v.size(); ++i) d = std::max(d, std::abs(v[i] + w[i]));
            if (d <= 1e-12) {
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("SupportBody: polytope vertex set is not symmetric");
    }
}

// Convex hull (monotone chain), vertices counterclockwise. Collinear and
// duplicate points are dropped, so stored polygons always have one vertex
// per corner.
std::vector<Vec> hull_ccw(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec& a, const Vec& b) {
                              return std::abs(a[0] - b[0]) <= 1e-14 && std::abs(a[1] - b[1]) <= 1e-14;
                          }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    std::vector<Vec> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

SupportBody::SupportBody(int dim, std::variant<Ball, Box, Polytope> rep)
    : dim_(dim), rep_(std::move(rep)) {}

SupportBody SupportBody::ball(int dim, double radius) {
    if (radius <= 0) throw std::invalid_argument("SupportBody::ball: radius must be positive");
    if (dim < 1 || dim > 2) throw std::invalid_argument("SupportBody::ball: dim must be 1 or 2");
    return SupportBody(dim, Ball{radius});
}

SupportBody SupportBody::box(Vec half_widths) {
    if (half_widths.empty() || half_widths.size() > 2)
        throw std::invalid_argument("SupportBody::box: dim must be 1 or 2");
    for (double w : half_widths)
        if (w <= 0) throw std::invalid_argument("SupportBody::box: half-widths must be positive");
    const int d = static_cast<int>(half_widths.size());
    return SupportBody(d, Box{std::move(half_widths)});
}

SupportBody SupportBody::polytope(std::vector<Vec> vertices) {
    if (vertices.size() < 2) throw std::invalid_argument("SupportBody::polytope: need >= 2 vertices");
    const size_t d = vertices.front().size();
    if (d < 1 || d > 2) throw std::invalid_argument("SupportBody::polytope: dim must be 1 or 2");
    for (const Vec& v : vertices)
        if (v.size() != d) throw std::invalid_argument("SupportBody::polytope: mixed dimensions");
    check_symmetric_vertices(vertices);
    if (d == 2) {
        vertices = hull_ccw(std::move(vertices));
        if (vertices.size() < 3)
            throw std::invalid_argument("SupportBody::polytope: polygon is degenerate");
    }
    return SupportBody(static_cast<int>(d), Polytope{std::move(vertices)});
}

double SupportBody::support(const Vec& v) const {
    if (static_cast<int>(v.size()) != dim_)
        throw std::invalid_argument("SupportBody::support: dimension mismatch");
    if (const auto* b = std::get_if<Ball>(&rep_)) return b->radius * norm(v);
    if (const auto* b = std::get_if<Box>(&rep_)) {
        double s = 0;
        for (size_t i = 0; i < v.size(); ++i) s += b->half_widths[i] * std::abs(v[i]);
        return s;
    }
    const auto& p = std::get<Polytope>(rep_);
    double s = -kInf;
    for (const Vec& x : p.vertices) s = std::max(s, dot(v, x));
    return s;
}

double SupportBody::radial(const Direction& v) const {
    if (v.dim() != dim_) throw std::invalid_argument("SupportBody::radial: dimension mismatch");
    if (const auto* b = std::get_if<Ball>(&rep_)) return b->radius;
    if (const auto* b = std::get_if<Box>(&rep_)) {
        double r = kInf;
        for (size_t i = 0; i < b->half_widths.size(); ++i)
            if (std::abs(v.components[i]) > 0) r = std::min(r, b->half_widths[i] / std::abs(v.components[i]));
        return r;
    }
    const auto& p = std::get<Polytope>(rep_);
    if (dim_ == 1) {
        double a = 0;
        for (const Vec& x : p.vertices) a = std::max(a, std::abs(x[0]));
        return a;
    }
    // Largest t with t*v inside the polygon: min over edges of the ray-edge hit.
    const size_t m = p.vertices.size();
    double best = kInf;
    for (size_t i = 0; i < m; ++i) {
        const Vec& a = p.vertices[i];
        const Vec& b = p.vertices[(i + 1) % m];
        // Edge line: n.x = c with outward normal n.
        const double nx = b[1] - a[1], ny = a[0] - b[0];
        const double c = nx * a[0] + ny * a[1];
        const double denom = nx * v[0] + ny * v[1];
        if (denom > 1e-15 && c > 0) best = std::min(best, c / denom);
    }
    return best;
}

double SupportBody::volume() const {
    if (const auto* b = std::get_if<Ball>(&rep_))
        return dim_ == 1 ? 2.0 * b->radius : kPi * b->radius * b->radius;
    if (const auto* b = std::get_if<Box>(&rep_)) {
        double v = 1;
        for (double w : b->half_widths) v *= 2.0 * w;
        return v;
    }
    const auto& p = std::get<Polytope>(rep_);
    if (dim_ == 1) return 2.0 * radial(Direction(Vec{1.0}));
    double a2 = 0;  // shoelace
    const size_t m = p.vertices.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec& u = p.vertices[i];
        const Vec& w = p.vertices[(i + 1) % m];
        a2 += u[0] * w[1] - w[0] * u[1];
    }
    return 0.5 * std::abs(a2);
}

bool SupportBody::contains(const Vec& x, double tol) const {
    if (const auto* b = std::get_if<Ball>(&rep_)) return norm(x) <= b->radius + tol;
    if (const auto* b = std::get_if<Box>(&rep_)) {
        for (size_t i = 0; i < x.size(); ++i)
            if (std::abs(x[i]) > b->half_widths[i] + tol) return false;
        return true;
    }
    const auto& p = std::get<Polytope>(rep_);
    if (dim_ == 1) return std::abs(x[0]) <= radial(Direction(Vec{1.0})) + tol;
    const size_t m = p.vertices.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec& a = p.vertices[i];
        const Vec& b = p.vertices[(i + 1) % m];
        const double nx = b[1] - a[1], ny = a[0] - b[0];
        const double c = nx * a[0] + ny * a[1];
        if (nx * x[0] + ny * x[1] > c + tol * std::max(1.0, std::abs(c))) return false;
    }
    return true;
}

double SupportBody::circumradius() const {
    if (const auto* b = std::get_if<Ball>(&rep_)) return b->radius;
    if (const auto* b = std::get_if<Box>(&rep_)) {
        double s = 0;
        for (double w : b->half_widths) s += w * w;
        return std::sqrt(s);
    }
    const auto& p = std::get<Polytope>(rep_);
    double r = 0;
    for (const Vec& x : p.vertices) r = std::max(r, norm(x));
    return r;
}

SupportBody SupportBody::dilate(double c) const {
    if (c <= 0) throw std::invalid_argument("SupportBody::dilate: factor must be positive");
    if (const auto* b = std::get_if<Ball>(&rep_)) return SupportBody(dim_, Ball{c * b->radius});
    if (const auto* b = std::get_if<Box>(&rep_)) {
        Vec hw = b->half_widths;
        for (double& w : hw) w *= c;
        return SupportBody(dim_, Box{std::move(hw)});
    }
    const auto& p = std::get<Polytope>(rep_);
    std::vector<Vec> verts = p.vertices;
    for (Vec& v : verts)
        for (double& x : v) x *= c;
    return SupportBody(dim_, Polytope{std::move(verts)});
}

SupportBody SupportBody::difference_body() const {
    if (const auto* b = std::get_if<Ball>(&rep_)) return SupportBody(dim_, Ball{2.0 * b->radius});
    if (const auto* b = std::get_if<Box>(&rep_)) {
        Vec hw = b->half_widths;
        for (double& w : hw) w *= 2.0;
        return SupportBody(dim_, Box{std::move(hw)});
    }
    const auto& p = std::get<Polytope>(rep_);
    // Minkowski sum K + (-K): pairwise vertex differences; the support function
    // over the full cloud equals h_{K-K}, interior points are harmless.
    std::vector<Vec> cloud;
    cloud.reserve(p.vertices.size() * p.vertices.size());
    for (const Vec& a : p.vertices)
        for (const Vec& b2 : p.vertices) {
            Vec d(a.size());
            for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b2[i];
            bool zero = true;
            for (double x : d)
                if (std::abs(x) > 1e-15) zero = false;
            if (!zero) cloud.push_back(std::move(d));
        }
    if (dim_ == 2) cloud = hull_ccw(std::move(cloud));
    return SupportBody(dim_, Polytope{std::move(cloud)});
}

double SupportBody::polar_radial(const Direction& v) const {
    return 1.0 / support(v.components);
}

}  // namespace epigeom
