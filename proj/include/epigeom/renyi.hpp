#pragma once

#include "epigeom/density.hpp"

namespace epigeom {

enum class EntropyMethod { ClosedForm, Quadrature, MonteCarlo };

/// h_p and N_p with the computation route and an error estimate.
struct EntropyResult {
    double p = 1;
    double h = 0;        // nats; may be +-inf
    double entropy_power = 1;  // exp(2 h / n); may be +inf or 0
    EntropyMethod method = EntropyMethod::ClosedForm;
    double error_estimate = 0;
};

const char* entropy_method_name(EntropyMethod m);

/// Renyi entropy of order p in [0, inf]. p = 1 is routed to an explicit Shannon
/// branch (|p - 1| < 1e-6 counts as 1); p = 0 is the log support volume; p = inf
/// is -log ess-sup f. Divergent integrals come back as infinite h, not errors.
EntropyResult renyi_entropy(const Density& f, double p);

/// N_p = exp(2 h_p / n).
double entropy_power(const Density& f, double p);

/// N_p(v . X) for a nonzero, not necessarily unit, direction vector:
/// |v|^2 N_p(v_hat . X).
double directional_entropy_power(const Density& f, const Vec& v, double p);

/// Forces the numeric integration route even when a closed form exists;
/// the quadrature side of the closed-form-vs-quadrature consistency checks.
EntropyResult renyi_entropy_quadrature(const Density& f, double p);

/// Monte Carlo cross-check of h_p from i.i.d. samples:
/// (1/(1-p)) log E[f(X)^{p-1}] (p != 1) or -E[log f(X)] (p = 1).
/// error_estimate is one standard error.
EntropyResult renyi_entropy_monte_carlo(const Density& f, double p, uint64_t seed, int samples);

}  // namespace epigeom
