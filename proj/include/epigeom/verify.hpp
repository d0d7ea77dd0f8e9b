#pragma once

#include <string>

#include "epigeom/renyi.hpp"
#include "epigeom/star_body.hpp"

namespace epigeom {

enum class Verdict { Holds, Violated, Inconclusive };

const char* verdict_name(Verdict v);

/// Outcome of one inequality/identity check. margin >= -tolerance means the
/// statement holds; a violation whose error bar swallows the margin is
/// inconclusive rather than violated.
struct CheckReport {
    std::string name;
    std::string inputs_digest;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;
    double tolerance = 0;
    double error_estimate = 0;
    Verdict verdict = Verdict::Holds;
    std::string detail;
};

/// Applies the verdict rule to a filled report.
CheckReport finish_report(CheckReport r);

/// Symmetric 2-D random vector (X, Y): carrier of the reverse-EPI conjectures.
struct JointDensity2D {
    Density density;

    explicit JointDensity2D(Density d);
    Density marginal_x() const;
    Density marginal_y() const;
    /// Density data of X + Y (1-D pushforward under (x, y) -> x + y).
    double entropy_power_sum(double p) const;  // N_p(X + Y)
};

/// N_p^alpha(X+Y) >= N_p^alpha(X) + N_p^alpha(Y) for independent X, Y.
CheckReport check_epi(const Density& fx, const Density& fy, double p, double alpha_exp);

/// h_p(l^{1/(2a)}X + (1-l)^{1/(2a)}Y) >= l h_p(X) + (1-l) h_p(Y).
CheckReport check_linearized(const Density& fx, const Density& fy, double p, double alpha_exp,
                             double lambda);

/// lambda* = N_p^a(X) / (N_p^a(X) + N_p^a(Y)).
double balancing_lambda(const Density& fx, const Density& fy, double p, double alpha_exp);
/// |h_p(lambda*^{-1/(2a)} X) - h_p((1-lambda*)^{-1/(2a)} Y)| recomputed through
/// actually rescaled densities.
double balancing_residual(const Density& fx, const Density& fy, double p, double alpha_exp);

/// N_p^{1/2}(X+Y) <= N_p^{1/2}(X) + N_p^{1/2}(Y) for a symmetric joint.
CheckReport check_reverse_epi(const JointDensity2D& joint, double p);

/// Midpoint convexity of lambda -> h_p(lambda X + (1-lambda) Y) on a grid,
/// plus the endpoint bound h_p(lambda X + (1-lambda) Y) <= h_p(X).
/// Requires equal marginal entropies within 1e-4.
CheckReport check_entropy_convexity(const JointDensity2D& joint, double p, int lambda_points);

/// h_0(lambda X + (1-lambda) Y) >= lambda h_0(X) + (1-lambda) h_0(Y)
/// for independent compactly supported 1-D densities.
CheckReport dct_lower_check(const Density& fx, const Density& fy, double lambda);

/// C_1(f) = I(f_hat) = (n-1) I(R_{n-1}(f)): max three-way relative gap.
CheckReport check_identity_c1(const Density& f, const std::vector<Direction>& dirs,
                              double tolerance = 1e-3, const BodyOptions& opt = {});

/// R_p(f) = B_p(f_hat): max relative gap over directions.
CheckReport check_identity_rp(const Density& f, double p, const std::vector<Direction>& dirs,
                              double tolerance = 1e-3, const BodyOptions& opt = {});

/// C_{-1}(f) = (2K)^polar = (R_inf(f))^polar for f supported on symmetric K:
/// compares 1/range(v.X), 1/h_{2K}(v) and the polar radial of the difference
/// body, which is R_inf(f) for uniform densities.
CheckReport check_cminus1(const Density& f, const std::vector<Direction>& dirs,
                          double tolerance = 1e-9);

/// Convexity certificate for a symmetric planar star body: single-signed turn
/// of the boundary polygon plus sampled triangle inequalities for the
/// reciprocal-radial norm.
CheckReport convexity_certificate(const StarBody& body, double tolerance = 1e-6);

}  // namespace epigeom
