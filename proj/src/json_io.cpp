#include "epigeom/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace epigeom {

using nlohmann::json;

namespace {

Vec vec_from(const json& j) {
    if (j.is_number()) return Vec{j.get<double>()};
    return j.get<Vec>();
}

SupportBody body_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball") return SupportBody::ball(j.value("dim", 2), j.at("radius").get<double>());
    if (kind == "box") return SupportBody::box(vec_from(j.at("half_widths")));
    if (kind == "polytope") {
        std::vector<Vec> verts;
        for (const auto& v : j.at("vertices")) verts.push_back(vec_from(v));
        return SupportBody::polytope(std::move(verts));
    }
    throw std::invalid_argument("density JSON: unknown body kind '" + kind + "'");
}

json body_to_json(const SupportBody& b) {
    json j;
    if (const auto* ball = std::get_if<SupportBody::Ball>(&b.representation())) {
        j["kind"] = "ball";
        j["dim"] = b.dim();
        j["radius"] = ball->radius;
    } else if (const auto* box = std::get_if<SupportBody::Box>(&b.representation())) {
        j["kind"] = "box";
        j["half_widths"] = box->half_widths;
    } else {
        const auto& p = std::get<SupportBody::Polytope>(b.representation());
        j["kind"] = "polytope";
        j["vertices"] = p.vertices;
    }
    return j;
}

}  // namespace

GridDensity grid_from_json(const json& j) {
    GridDensity g;
    g.origin = vec_from(j.at("origin"));
    g.spacing = vec_from(j.at("spacing"));
    g.shape = j.at("shape").get<std::vector<int>>();
    g.values = j.at("values").get<std::vector<double>>();
    g.validate();
    return g;
}

json grid_to_json(const GridDensity& g) {
    json j;
    j["origin"] = g.origin;
    j["spacing"] = g.spacing;
    j["shape"] = g.shape;
    j["values"] = g.values;  // row-major
    return j;
}

Density density_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    try {
        if (family == "gaussian") {
            Vec mean = vec_from(params.at("mean"));
            const int n = static_cast<int>(mean.size());
            SymMatrix cov(n);
            if (params.contains("cov")) {
                const auto rows = params.at("cov");
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) cov.at(i, k) = rows.at(i).at(k).get<double>();
            } else if (params.contains("variance")) {
                const double v = params.at("variance").get<double>();
                for (int i = 0; i < n; ++i) cov.at(i, i) = v;
            } else {
                cov = SymMatrix::identity(n);
            }
            return Density::gaussian(std::move(mean), cov);
        }
        if (family == "uniform") {
            SupportBody body = body_from_json(params.at("body"));
            Vec shift;
            if (params.contains("shift")) shift = vec_from(params.at("shift"));
            return Density::uniform(std::move(body), std::move(shift));
        }
        if (family == "exponential") return Density::exponential(params.at("rate").get<double>());
        if (family == "exponential_power")
            return Density::exponential_power(params.at("exponent").get<double>(),
                                              params.value("scale", 1.0));
        if (family == "generalized_gaussian")
            return Density::generalized_gaussian(params.at("beta").get<double>(),
                                                 j.value("dim", 1), params.value("scale", 1.0));
        if (family == "product") {
            std::vector<Density> fs;
            for (const auto& f : params.at("factors")) fs.push_back(density_from_json(f));
            return Density::product(std::move(fs));
        }
        if (family == "grid") return Density::from_grid(grid_from_json(params));
        if (family == "semicircle")
            return Density::semicircle(params.at("radius").get<double>(),
                                       params.value("center", 0.0));
        if (family == "piecewise_linear") {
            std::vector<Density::PiecewiseLinear::Segment> segs;
            for (const auto& s : params.at("segments"))
                segs.push_back({s.at(0).get<double>(), s.at(1).get<double>(),
                                s.at(2).get<double>(), s.at(3).get<double>()});
            return Density::piecewise_linear(std::move(segs));
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument("density JSON (family '" + family + "'): " + e.what());
    }
    throw std::invalid_argument("density JSON: unknown family '" + family + "'");
}

json density_to_json(const Density& d) {
    json j;
    j["family"] = d.family_name();
    j["dim"] = d.dim();
    json params = json::object();
    if (const auto* g = std::get_if<Density::Gaussian>(&d.family())) {
        params["mean"] = g->mean;
        std::vector<std::vector<double>> cov(static_cast<size_t>(g->cov.n));
        for (int i = 0; i < g->cov.n; ++i) {
            cov[static_cast<size_t>(i)].resize(static_cast<size_t>(g->cov.n));
            for (int k = 0; k < g->cov.n; ++k) cov[static_cast<size_t>(i)][static_cast<size_t>(k)] = g->cov.at(i, k);
        }
        params["cov"] = cov;
    } else if (const auto* u = std::get_if<Density::Uniform>(&d.family())) {
        params["body"] = body_to_json(u->body);
        params["shift"] = u->shift;
    } else if (const auto* e = std::get_if<Density::Exponential>(&d.family())) {
        params["rate"] = e->rate;
    } else if (const auto* e = std::get_if<Density::ExponentialPower>(&d.family())) {
        params["exponent"] = e->exponent;
        params["scale"] = e->scale;
    } else if (const auto* g = std::get_if<Density::GeneralizedGaussian>(&d.family())) {
        params["beta"] = g->beta;
        params["scale"] = g->scale;
    } else if (const auto* p = std::get_if<Density::Product>(&d.family())) {
        json fs = json::array();
        for (const Density& f : p->factors) fs.push_back(density_to_json(f));
        params["factors"] = fs;
    } else if (const auto* g = std::get_if<Density::Grid>(&d.family())) {
        params = grid_to_json(g->grid);
    } else if (const auto* p = std::get_if<Density::PiecewiseLinear>(&d.family())) {
        json segs = json::array();
        for (const auto& s : p->segments) segs.push_back(json::array({s.a, s.b, s.ya, s.yb}));
        params["segments"] = segs;
    } else if (const auto* s = std::get_if<Density::Semicircle>(&d.family())) {
        params["radius"] = s->radius;
        params["center"] = s->center;
    } else {
        throw std::invalid_argument("density_to_json: convolution wrappers are not serializable");
    }
    j["params"] = params;
    return j;
}

StarBody star_body_from_json(const json& j) {
    StarBody b;
    b.dim = 2;
    if (j.contains("generator")) {
        const auto& g = j.at("generator");
        const double base = g.value("base", 1.0);
        const double amp = g.value("amplitude", 0.0);
        const double freq = g.value("frequency", 0.0);
        const int n = j.value("directions", 360);
        b.directions = circle_directions(n);
        for (const Direction& d : b.directions)
            b.radii.push_back(base + amp * std::cos(freq * d.angle()));
        b.label = j.value("label", "generated");
    } else {
        const auto angles = j.at("angles").get<std::vector<double>>();
        b.radii = j.at("radii").get<std::vector<double>>();
        for (double a : angles) b.directions.push_back(Direction::from_angle(a));
        b.label = j.value("label", "fixture");
    }
    b.validate(false);
    return b;
}

json star_body_to_json(const StarBody& b) {
    json j;
    std::vector<double> angles;
    for (const Direction& d : b.directions) angles.push_back(d.angle());
    j["angles"] = angles;
    j["radii"] = b.radii;
    j["label"] = b.label;
    return j;
}

json report_to_json(const CheckReport& r) {
    json j;
    j["name"] = r.name;
    j["inputs_digest"] = r.inputs_digest;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["tolerance"] = r.tolerance;
    j["error_estimate"] = r.error_estimate;
    j["verdict"] = verdict_name(r.verdict);
    j["detail"] = r.detail;
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace epigeom
