#include "epigeom/renyi.hpp"

#include <cmath>

namespace epigeom {

const char* entropy_method_name(EntropyMethod m) {
    switch (m) {
        case EntropyMethod::ClosedForm: return "closed-form";
        case EntropyMethod::Quadrature: return "quadrature";
        case EntropyMethod::MonteCarlo: return "monte-carlo";
    }
    return "?";
}

namespace {

double power_from_h(double h, int n) {
    if (h == kInf) return kInf;
    if (h == -kInf) return 0.0;
    return std::exp(2.0 * h / n);
}

}  // namespace

EntropyResult renyi_entropy(const Density& f, double p) {
    if (!(p >= 0)) throw std::invalid_argument("renyi_entropy: p must be >= 0");
    EntropyResult r;
    r.p = p;
    const int n = f.dim();

    if (p == kInf) {
        const double sup = f.sup_value();
        r.h = sup == kInf ? -kInf : -std::log(sup);
        r.method = EntropyMethod::ClosedForm;
    } else if (p == 0.0) {
        const double vol = f.support_volume();
        r.h = vol == kInf ? kInf : std::log(vol);
        r.method =
            f.family_name() == "grid" ? EntropyMethod::Quadrature : EntropyMethod::ClosedForm;
    } else if (std::abs(p - 1.0) < 1e-6) {
        // explicit Shannon branch; the p-formula cancels catastrophically here
        bool closed = false;
        r.h = f.shannon_integral(&closed, &r.error_estimate);
        r.p = p;
        r.method = closed ? EntropyMethod::ClosedForm : EntropyMethod::Quadrature;
    } else {
        bool closed = false;
        const double integral = f.lp_integral(p, &closed, &r.error_estimate);
        r.method = closed ? EntropyMethod::ClosedForm : EntropyMethod::Quadrature;
        if (integral == kInf) {
            r.h = p < 1 ? kInf : -kInf;
        } else if (integral <= 0) {
            r.h = p < 1 ? -kInf : kInf;  // escapes only for degenerate inputs
        } else {
            r.h = std::log(integral) / (1.0 - p);
            if (r.error_estimate > 0)
                r.error_estimate = r.error_estimate / integral / std::abs(1.0 - p);
        }
    }
    r.entropy_power = power_from_h(r.h, n);
    return r;
}

double entropy_power(const Density& f, double p) { return renyi_entropy(f, p).entropy_power; }

EntropyResult renyi_entropy_quadrature(const Density& f, double p) {
    if (!(p > 0) || p == kInf)
        throw std::invalid_argument("renyi_entropy_quadrature: p must be finite and positive");
    EntropyResult r;
    r.p = p;
    r.method = EntropyMethod::Quadrature;
    if (std::abs(p - 1.0) < 1e-6) {
        r.h = f.shannon_integral_numeric(&r.error_estimate);
    } else {
        const double integral = f.lp_integral_numeric(p, &r.error_estimate);
        r.h = std::log(integral) / (1.0 - p);
        if (r.error_estimate > 0)
            r.error_estimate = r.error_estimate / integral / std::abs(1.0 - p);
    }
    r.entropy_power = std::exp(2.0 * r.h / f.dim());
    return r;
}

double directional_entropy_power(const Density& f, const Vec& v, double p) {
    const double len = norm(v);
    if (!(len > 0)) throw std::invalid_argument("directional_entropy_power: zero vector");
    Vec unit = v;
    for (double& x : unit) x /= len;
    const Density marginal = f.marginal_along(Direction(unit));
    return len * len * entropy_power(marginal, p);
}

EntropyResult renyi_entropy_monte_carlo(const Density& f, double p, uint64_t seed, int samples) {
    if (!(p > 0) || p == kInf)
        throw std::invalid_argument("renyi_entropy_monte_carlo: p must be finite and positive");
    const auto xs = f.sample(seed, samples);
    EntropyResult r;
    r.p = p;
    r.method = EntropyMethod::MonteCarlo;
    double sum = 0, sumsq = 0;
    const bool shannon = std::abs(p - 1.0) < 1e-6;
    for (const Vec& x : xs) {
        const double fx = f.evaluate(x);
        const double w = shannon ? (fx > 0 ? -std::log(fx) : 0.0) : std::pow(fx, p - 1.0);
        sum += w;
        sumsq += w * w;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sumsq / samples - mean * mean);
    const double se = std::sqrt(var / samples);
    if (shannon) {
        r.h = mean;
        r.error_estimate = se;
    } else {
        r.h = std::log(mean) / (1.0 - p);
        r.error_estimate = se / (std::abs(1.0 - p) * mean);
    }
    r.entropy_power = power_from_h(r.h, f.dim());
    return r;
}

}  // namespace epigeom
