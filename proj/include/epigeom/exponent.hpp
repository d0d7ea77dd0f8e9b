#pragma once

#include "epigeom/numerics.hpp"

namespace epigeom {

/// Holder conjugate s' with 1/s + 1/s' = 1; s = 1 -> inf, s = inf -> 1.
double holder_conjugate(double s);

/// Sharp Young constant c_s = s^{1/s} (s')^{-1/s'}; c_1 = c_inf = 1 by limit.
double young_constant(double s);

/// Shannon entropy of Bernoulli(lambda), nats.
double bernoulli_entropy(double lambda);

/// All per-lambda quantities of the exponent optimization at a given p > 1.
/// q and r satisfy lambda = p'/q', 1 - lambda = p'/r', hence 1/q + 1/r = 1 + 1/p.
struct ExponentContext {
    double p = 2;
    double p_conj = 2;
    double lambda = 0.5;
    double q = 1, r = 1;
    double c_p = 1, c_q = 1, c_r = 1;
    double entropy = 0;    // H(lambda)
    double a_value = 0;    // A(lambda)
};

ExponentContext make_exponent_context(double p, double lambda);

/// A(lambda) evaluated from the rewritten p'-form.
double a_function(double lambda, double p);
/// A(lambda) evaluated through q, r and their Young constants; must agree with
/// a_function to 1e-12.
double a_function_qr(double lambda, double p);

struct ProofDerivatives {
    double a1, h1;  // A'(lambda), H'(lambda)
    double a2, h2;  // A''(lambda), H''(lambda)
};

/// Closed-form derivatives used in the Theorem-2 proof chain.
ProofDerivatives proof_derivatives(double lambda, double p);

/// sup over lambda in (0,1) of A(lambda)/H(lambda), by uniform grid plus
/// golden-section refinement. The proof claims the argmax is 1/2; this routine
/// does not assume it.
ScalarMaximum ratio_sup(double p, int grid = 512);

/// The closed-form EPI exponent
///     alpha(p) = (1 + (1/log 2) ((p+1)/(p-1) log((p+1)/(2p)) + log p/(p-1)))^{-1},
/// series-protected near p = 1.
double alpha(double p);

/// Same formula without the p > 1 validity check, for the open 0 < p < 1 regime.
double alpha_exploratory(double p);

/// Comparison against the (p+1)/2 exponent and its companion lower bound.
struct ExponentReport {
    double p = 2;
    double alpha_closed = 1;
    double alpha_opt = 1;      // (1 - ratio_sup)^{-1}
    double bm16 = 1.5;         // (p+1)/2
    double lower_bound = 0;    // (p-1) / (2 log2((p+1)/2))
    double argmax_lambda = 0.5;
};

ExponentReport comparison_bounds(double p);

}  // namespace epigeom
