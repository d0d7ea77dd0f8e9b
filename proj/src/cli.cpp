#include "epigeom/cli.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "epigeom/exponent.hpp"
#include "epigeom/json_io.hpp"
#include "epigeom/transforms.hpp"
#include "epigeom/verify.hpp"

namespace epigeom::cli {

namespace {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

struct Manifest {
    std::string command_line;
    uint64_t seed = 0;
    json resolutions = json::object();
    std::vector<double> truncation_radii;
    std::map<std::string, double> wall_time;

    void write(const std::string& out_path) const {
        if (out_path.empty()) return;
        json j;
        j["command_line"] = command_line;
        j["config_digest"] = fmt_hash();
        j["seed"] = seed;
        j["resolutions"] = resolutions;
        j["truncation_radii"] = truncation_radii;
        j["tool_version"] = std::string("epigeom ") + kVersion;
        j["wall_time_seconds"] = wall_time;
        write_text_file(out_path + ".manifest.json", j.dump(2) + "\n");
    }
    std::string fmt_hash() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a(command_line)));
        return buf;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> ps;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        if (item == "inf" || item == "Inf" || item == "INF")
            ps.push_back(kInf);
        else
            ps.push_back(std::stod(item));
    }
    if (ps.empty()) throw CLI::ValidationError("--p", "empty value list");
    return ps;
}

// ---- alpha ----------------------------------------------------------------

int cmd_alpha(double p_min, double p_max, int steps, bool exploratory,
              const std::string& format, const std::string& out) {
    std::ostringstream os;
    std::vector<ExponentReport> reports;
    for (int i = 0; i < steps; ++i) {
        const double p = steps == 1 ? p_min : p_min + (p_max - p_min) * i / (steps - 1);
        if (p > 1.0) {
            reports.push_back(comparison_bounds(p));
        } else if (exploratory) {
            // 0 < p < 1 regime: same formula, no validity claim, no bounds
            ExponentReport r;
            r.p = p;
            r.alpha_closed = alpha_exploratory(p);
            r.alpha_opt = std::numeric_limits<double>::quiet_NaN();
            r.bm16 = std::numeric_limits<double>::quiet_NaN();
            r.lower_bound = std::numeric_limits<double>::quiet_NaN();
            r.argmax_lambda = std::numeric_limits<double>::quiet_NaN();
            reports.push_back(r);
        } else {
            throw CLI::ValidationError("--p-min", "p <= 1 needs --exploratory");
        }
    }
    if (format == "csv") {
        os << "p,alpha,alpha_opt,bm16,lower_bound,argmax_lambda\n";
        for (const auto& r : reports)
            os << fmt(r.p) << ',' << fmt(r.alpha_closed) << ',' << fmt(r.alpha_opt) << ','
               << fmt(r.bm16) << ',' << fmt(r.lower_bound) << ',' << fmt(r.argmax_lambda) << '\n';
    } else {
        json arr = json::array();
        for (const auto& r : reports) {
            json j;
            j["p"] = r.p;
            j["alpha"] = r.alpha_closed;
            j["alpha_opt"] = r.alpha_opt;
            j["bm16"] = r.bm16;
            j["lower_bound"] = r.lower_bound;
            j["argmax_lambda"] = r.argmax_lambda;
            arr.push_back(j);
        }
        os << arr.dump(2) << '\n';
    }
    emit(out, os.str());
    return 0;
}

// ---- entropy ---------------------------------------------------------------

int cmd_entropy(const std::string& density_path, const std::string& p_list,
                const std::string& out) {
    const Density f = density_from_json(load_json_file(density_path));
    std::ostringstream os;
    os << "p,h_p,N_p,method,error_estimate\n";
    for (double p : parse_p_list(p_list)) {
        const EntropyResult r = renyi_entropy(f, p);
        os << fmt(p) << ',' << fmt(r.h) << ',' << fmt(r.entropy_power) << ','
           << entropy_method_name(r.method) << ',' << fmt(r.error_estimate) << '\n';
    }
    emit(out, os.str());
    return 0;
}

// ---- body -----------------------------------------------------------------

int cmd_body(const std::string& kind, double p, const std::string& density_path, int directions,
             const std::string& out, Manifest& manifest) {
    const Density f = density_from_json(load_json_file(density_path));
    manifest.truncation_radii.push_back(f.truncation_radius());
    const auto dirs = circle_directions(directions);
    BodyOptions opt;
    StarBody b;
    if (kind == "cross-section")
        b = cross_section_body(f, p, dirs, opt);
    else if (kind == "intersection")
        b = intersection_body_of_density(f, dirs);
    else if (kind == "radial-mean")
        b = radial_mean_body(f, p, dirs, opt);
    else if (kind == "ball")
        b = ball_mean_body(f, p, dirs, opt);
    else if (kind == "polar-centroid")
        b = polar_centroid_body(f, p, dirs, opt);
    else if (kind == "z")
        b = z_body(f, p, dirs, opt);
    else
        throw CLI::ValidationError("--kind", "unknown body kind '" + kind + "'");
    std::ostringstream os;
    os << "angle,ux,uy,radius\n";
    for (size_t i = 0; i < b.count(); ++i)
        os << fmt(b.directions[i].angle()) << ',' << fmt(b.directions[i][0]) << ','
           << fmt(b.directions[i][1]) << ',' << fmt(b.radii[i]) << '\n';
    emit(out, os.str());
    return 0;
}

// ---- transform-check --------------------------------------------------------

int cmd_transform_check(const std::string& which, const std::string& density_path,
                        const std::string& eps_list, double p, int directions,
                        const std::string& out, Manifest& manifest) {
    const auto dirs = circle_directions(directions);
    json result;
    result["which"] = which;
    json entries = json::array();
    if (which == "tr-limit") {
        SphericalFunction g = SphericalFunction::constant(dirs, 1.0);
        if (!density_path.empty()) {
            const Density f = density_from_json(load_json_file(density_path));
            const StarBody body = intersection_body_of_density(f, dirs);
            g = SphericalFunction::from_star_body(body, 1.0);
        }
        for (double eps : parse_p_list(eps_list)) {
            double worst = 0;
            LimitCheck at0{};
            for (const Direction& v : dirs) {
                const LimitCheck c = tr_limit_check(g, v, eps);
                if (c.gap > worst) worst = c.gap;
                if (&v == &dirs.front()) at0 = c;
            }
            json e;
            e["eps"] = eps;
            e["max_gap"] = worst;
            e["lhs_first_direction"] = at0.lhs;
            e["rhs_first_direction"] = at0.rhs;
            entries.push_back(e);
        }
    } else {
        const Density f = density_from_json(load_json_file(density_path));
        manifest.truncation_radii.push_back(f.truncation_radius());
        if (which == "zr") {
            json e;
            e["p"] = p;
            e["max_relative_gap"] = zr_identity_check(f, p, dirs);
            entries.push_back(e);
        } else if (which == "zi") {
            for (double eps : parse_p_list(eps_list)) {
                json e;
                e["eps"] = eps;
                e["max_relative_gap"] = zi_limit_check(f, eps, dirs);
                entries.push_back(e);
            }
        } else if (which == "cn1") {
            for (double eps : parse_p_list(eps_list)) {
                json e;
                e["eps"] = eps;
                e["max_relative_gap"] = cn1_radon_check(f, eps, dirs);
                entries.push_back(e);
            }
        } else {
            throw CLI::ValidationError("--which", "unknown transform check '" + which + "'");
        }
    }
    result["checks"] = entries;
    emit(out, result.dump(2) + "\n");
    return 0;
}

// ---- check ------------------------------------------------------------------

int cmd_check(const std::string& name, const std::string& density_path,
              const std::string& density2_path, const std::string& body_path, double p,
              double alpha_override, double lambda, int lambda_points, int directions,
              double tolerance, const std::string& out, Manifest& manifest) {
    std::vector<CheckReport> reports;
    const auto dirs = circle_directions(directions);

    auto load = [&](const std::string& path) {
        Density d = density_from_json(load_json_file(path));
        manifest.truncation_radii.push_back(d.truncation_radius());
        return d;
    };

    if (name == "epi" || name == "linearized") {
        const Density fx = load(density_path);
        const Density fy = load(density2_path.empty() ? density_path : density2_path);
        const double a = alpha_override > 0 ? alpha_override : alpha(p);
        if (name == "epi") {
            reports.push_back(check_epi(fx, fy, p, a));
        } else {
            reports.push_back(check_linearized(fx, fy, p, a, lambda));
        }
    } else if (name == "reverse-epi") {
        reports.push_back(check_reverse_epi(JointDensity2D(load(density_path)), p));
    } else if (name == "entropy-convexity") {
        reports.push_back(
            check_entropy_convexity(JointDensity2D(load(density_path)), p, lambda_points));
    } else if (name == "dct-lower") {
        const Density fx = load(density_path);
        const Density fy = load(density2_path.empty() ? density_path : density2_path);
        reports.push_back(dct_lower_check(fx, fy, lambda));
    } else if (name == "identity-c1") {
        reports.push_back(check_identity_c1(load(density_path), dirs,
                                            tolerance > 0 ? tolerance : 1e-3));
    } else if (name == "identity-rp") {
        reports.push_back(check_identity_rp(load(density_path), p, dirs,
                                            tolerance > 0 ? tolerance : 1e-3));
    } else if (name == "identity-cminus1") {
        reports.push_back(check_cminus1(load(density_path), dirs,
                                        tolerance > 0 ? tolerance : 1e-9));
    } else if (name == "convexity") {
        const StarBody b = star_body_from_json(load_json_file(body_path));
        reports.push_back(convexity_certificate(b, tolerance > 0 ? tolerance : 1e-6));
    } else {
        throw CLI::ValidationError("check", "unknown check '" + name + "'");
    }

    // deterministic, name-sorted aggregation
    std::sort(reports.begin(), reports.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    json arr = json::array();
    bool violated = false;
    for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        violated = violated || r.verdict == Verdict::Violated;
    }
    emit(out, (reports.size() == 1 ? arr.front().dump(2) : arr.dump(2)) + "\n");
    return violated ? 2 : 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Renyi entropy powers, EPI exponents, and density bodies"};
    app.require_subcommand(1);

    std::string density_path, density2_path, body_path, out_path, format = "csv";
    std::string p_list = "2", eps_list = "1e-1,1e-2,1e-3", kind, which, check_name;
    double p = 2.0, p_min = 1.1, p_max = 10.0, alpha_override = -1.0, lambda = 0.5;
    double tolerance = -1.0;
    int steps = 20, directions = 360, lambda_points = 21;
    uint64_t seed = 20240801;

    bool exploratory = false;
    auto* alpha_cmd = app.add_subcommand("alpha", "Tabulate the EPI exponent alpha(p)");
    alpha_cmd->add_option("--p-min", p_min);
    alpha_cmd->add_option("--p-max", p_max);
    alpha_cmd->add_option("--steps", steps)->check(CLI::PositiveNumber);
    alpha_cmd->add_flag("--exploratory", exploratory,
                        "evaluate the formula for 0 < p < 1 too (no validity claim)");
    alpha_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    alpha_cmd->add_option("--out", out_path);

    auto* entropy_cmd = app.add_subcommand("entropy", "Renyi entropies of a density");
    entropy_cmd->add_option("--density", density_path)->required();
    entropy_cmd->add_option("--p", p_list);
    entropy_cmd->add_option("--out", out_path);

    auto* body_cmd = app.add_subcommand("body", "Star bodies built from a density");
    body_cmd->add_option("--kind", kind)->required();
    body_cmd->add_option("--p", p);
    body_cmd->add_option("--density", density_path)->required();
    body_cmd->add_option("--directions", directions);
    body_cmd->add_option("--out", out_path);

    auto* tc_cmd = app.add_subcommand("transform-check", "Cosine/Radon transform identities");
    tc_cmd->add_option("--which", which)->required();
    tc_cmd->add_option("--density", density_path);
    tc_cmd->add_option("--eps", eps_list);
    tc_cmd->add_option("--p", p);
    tc_cmd->add_option("--directions", directions);
    tc_cmd->add_option("--out", out_path);

    auto* check_cmd = app.add_subcommand("check", "Inequality and identity checks");
    check_cmd->add_option("name", check_name, "check name")->required();
    check_cmd->add_option("--density", density_path);
    check_cmd->add_option("--density2", density2_path);
    check_cmd->add_option("--body", body_path);
    check_cmd->add_option("--p", p);
    check_cmd->add_option("--alpha", alpha_override);
    check_cmd->add_option("--lambda", lambda);
    check_cmd->add_option("--lambda-points", lambda_points);
    check_cmd->add_option("--directions", directions);
    check_cmd->add_option("--tolerance", tolerance);
    check_cmd->add_option("--seed", seed);
    check_cmd->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    Manifest manifest;
    {
        std::ostringstream cl;
        for (int i = 0; i < argc; ++i) cl << (i ? " " : "") << argv[i];
        manifest.command_line = cl.str();
    }
    manifest.seed = seed;
    manifest.resolutions["grid_1d"] = Density::default_resolution(1);
    manifest.resolutions["grid_2d"] = Density::default_resolution(2);
    manifest.resolutions["directions"] = directions;

    try {
        Stopwatch watch;
        int code = 0;
        if (alpha_cmd->parsed())
            code = cmd_alpha(p_min, p_max, steps, exploratory, format, out_path);
        else if (entropy_cmd->parsed())
            code = cmd_entropy(density_path, p_list, out_path);
        else if (body_cmd->parsed())
            code = cmd_body(kind, p, density_path, directions, out_path, manifest);
        else if (tc_cmd->parsed())
            code = cmd_transform_check(which, density_path, eps_list, p, directions, out_path,
                                       manifest);
        else if (check_cmd->parsed())
            code = cmd_check(check_name, density_path, density2_path, body_path, p,
                             alpha_override, lambda, lambda_points, directions, tolerance,
                             out_path, manifest);
        manifest.wall_time[app.get_subcommands().front()->get_name()] = watch.seconds();
        manifest.write(out_path);
        return code;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "epigeom: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "epigeom: " << e.what() << "\n";
        return 1;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("epigeom");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace epigeom::cli
