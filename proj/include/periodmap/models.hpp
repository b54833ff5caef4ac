#pragma once

#include "periodmap/cech.hpp"

namespace periodmap {

/* Kodaira-Spencer one-form: one Cech 1-cochain of vertical fields per base
 * variable, with coefficients in R_S. */
struct KSForm {
    std::vector<ThetaCochain> theta;  // theta[l], l = 0..s-1
};

/* Two-chart gluing model of an elliptic fiber: functions, forms and fields
 * are Laurent polynomials in the fiber coordinate with exponents in
 * [-window, window]; the two chart overlaps V, V' carry the gluing
 * z -> lambda(t) z with lambda(t) = lambda0 * exp(P(t)).  Every module is
 * based in the chart of its leading vertex, so restriction matrices absorb
 * the chart changes and the deformation sits in the leading-face maps.
 * The canonical one-form theta has theta_l = -(d_l P) on the V' component in
 * degree zero, matching the gluing velocity. */
struct AnnulusParams {
    int window = 3;
    int s = 1;
    int n = 2;
    long lambda0_num = 4;
    long lambda0_den = 1;
    // P(t): exponent polynomial with P(0) = 0.  Defaults to t_1 + ... + t_s.
    std::optional<TruncatedSeries> exponent;
};

struct BuiltinFamily {
    CechModel model;
    KSForm canonical_theta;
};

BuiltinFamily annulus_model(const AnnulusParams& params);

/* Torus-like constant model on the same two-chart combinatorics: zero
 * exterior derivative, zero brackets, zero declared Lie action, constant
 * degree-summing contraction and constant gluing twists.  Fast substrate for
 * property tests; carries global vector fields (flagged by the harness). */
struct AbelianParams {
    int window = 2;
    int s = 1;
    int n = 2;
    long mu0_num = 2;
    long mu0_den = 1;
};

CechModel abelian_model(const AbelianParams& params);

// Leading-edge index helpers shared with the harness: position of the
// component/degree basis vector in a mixed module.
size_t mixed_index(int window, int component, int degree);

}  // namespace periodmap
