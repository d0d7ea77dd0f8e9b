#include "epigeom/exponent.hpp"

#include <cmath>

namespace epigeom {

double holder_conjugate(double s) {
    if (!(s >= 1)) throw std::invalid_argument("holder_conjugate: s must be >= 1");
    if (s == 1.0) return kInf;
    if (s == kInf) return 1.0;
    return s / (s - 1.0);
}

double young_constant(double s) {
    if (!(s >= 1)) throw std::invalid_argument("young_constant: s must be >= 1");
    if (s == 1.0 || s == kInf) return 1.0;
    const double sc = holder_conjugate(s);
    return std::pow(s, 1.0 / s) * std::pow(sc, -1.0 / sc);
}

double bernoulli_entropy(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("bernoulli_entropy: lambda must be in [0,1]");
    double h = 0;
    if (lambda > 0) h -= lambda * std::log(lambda);
    if (lambda < 1) h -= (1.0 - lambda) * std::log(1.0 - lambda);
    return h;
}

namespace {

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

}  // namespace

double a_function(double lambda, double p) {
    if (!(p > 1)) throw std::invalid_argument("a_function: p must be > 1");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("a_function: lambda must be in [0,1]");
    const double pc = holder_conjugate(p);
    return pc * (xlogx(1.0 - 1.0 / pc) - xlogx(1.0 - lambda / pc) - xlogx(1.0 - (1.0 - lambda) / pc));
}

double a_function_qr(double lambda, double p) {
    if (!(p > 1)) throw std::invalid_argument("a_function_qr: p must be > 1");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("a_function_qr: lambda must be in [0,1]");
    // independent route through q, r and the sharp Young constants:
    // p' log(c_p / (c_q c_r)) = H(lambda) - A(lambda)
    const double pc = holder_conjugate(p);
    const double q = 1.0 / (1.0 - lambda / pc);
    const double r = 1.0 / (1.0 - (1.0 - lambda) / pc);
    const double cp = young_constant(p), cq = young_constant(q), cr = young_constant(r);
    return bernoulli_entropy(lambda) - pc * std::log(cp / (cq * cr));
}

ExponentContext make_exponent_context(double p, double lambda) {
    if (!(p > 1)) throw std::invalid_argument("make_exponent_context: p must be > 1");
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("make_exponent_context: lambda must be in [0,1]");
    ExponentContext c;
    c.p = p;
    c.p_conj = holder_conjugate(p);
    c.lambda = lambda;
    c.q = lambda > 0 ? 1.0 / (1.0 - lambda / c.p_conj) : 1.0;
    c.r = lambda < 1 ? 1.0 / (1.0 - (1.0 - lambda) / c.p_conj) : 1.0;
    c.c_p = young_constant(p);
    c.c_q = young_constant(c.q);
    c.c_r = young_constant(c.r);
    c.entropy = bernoulli_entropy(lambda);
    c.a_value = a_function(lambda, p);
    return c;
}

ProofDerivatives proof_derivatives(double lambda, double p) {
    if (!(p > 1)) throw std::invalid_argument("proof_derivatives: p must be > 1");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("proof_derivatives: lambda must be in (0,1)");
    const double pc = holder_conjugate(p);
    ProofDerivatives d;
    d.a1 = std::log((pc - lambda) / (pc - (1.0 - lambda)));
    d.h1 = std::log((1.0 - lambda) / lambda);
    d.a2 = (1.0 - 2.0 * pc) / ((pc - lambda) * (pc - (1.0 - lambda)));
    d.h2 = -1.0 / (lambda * (1.0 - lambda));
    return d;
}

ScalarMaximum ratio_sup(double p, int grid) {
    if (!(p > 1)) throw std::invalid_argument("ratio_sup: p must be > 1");
    if (grid < 128) throw std::invalid_argument("ratio_sup: grid must be >= 128");
    auto ratio = [p](double lambda) {
        if (lambda <= 0.0 || lambda >= 1.0) return 0.0;
        return a_function(lambda, p) / bernoulli_entropy(lambda);
    };
    const double eps = 1.0 / (8.0 * grid);
    return maximize_scalar(ratio, eps, 1.0 - eps, grid, 1e-14);
}

namespace {

// bracket B(p) = (p+1)/(p-1) log((p+1)/(2p)) + log p/(p-1); the two log terms
// cancel to O(p-1) near 1, so switch to the series there
double alpha_bracket(double p) {
    const double eps = p - 1.0;
    if (std::abs(eps) < 1e-4)
        return -eps / 4.0 + eps * eps / 8.0 - 7.0 * eps * eps * eps / 96.0;
    return (p + 1.0) / (p - 1.0) * std::log((p + 1.0) / (2.0 * p)) + std::log(p) / (p - 1.0);
}

}  // namespace

double alpha(double p) {
    if (!(p > 1)) throw std::invalid_argument("alpha: p must be > 1");
    return 1.0 / (1.0 + alpha_bracket(p) / std::log(2.0));
}

double alpha_exploratory(double p) {
    if (!(p > 0) || p == 1.0)
        throw std::invalid_argument("alpha_exploratory: p must be positive and != 1");
    return 1.0 / (1.0 + alpha_bracket(p) / std::log(2.0));
}

ExponentReport comparison_bounds(double p) {
    ExponentReport r;
    r.p = p;
    r.alpha_closed = alpha(p);
    const ScalarMaximum sup = ratio_sup(p);
    r.alpha_opt = 1.0 / (1.0 - sup.value);
    r.argmax_lambda = sup.arg;
    r.bm16 = 0.5 * (p + 1.0);
    r.lower_bound = (p - 1.0) / (2.0 * std::log2(0.5 * (p + 1.0)));
    return r;
}

}  // namespace epigeom
