#pragma once

#include "periodmap/archimedean.hpp"
#include "periodmap/cech.hpp"
#include "periodmap/models.hpp"

namespace periodmap {

struct DeformationEqFailed : EngineError {
    explicit DeformationEqFailed(const std::string& msg) : EngineError("DeformationEqFailed", msg) {}
};
struct RankJump : EngineError {
    explicit RankJump(const std::string& msg) : EngineError("RankJump", msg) {}
};
struct GmIncompatible : EngineError {
    explicit GmIncompatible(const std::string& msg) : EngineError("GmIncompatible", msg) {}
};

// Cup-then-bracket pairing of two 1-cochains of fields:
// (a cup b)_{i0 i1 i2} = [ a_{i0 i1}|, b_{i1 i2}| ].
ThetaCochain cup_bracket(const CechModel& mod, const ThetaCochain& a, const ThetaCochain& b);

struct DeformationCertificate {
    bool ok = true;
    std::vector<std::string> failures;
};

/* The one-form must be a cocycle for the deformed differential at every t,
 * its leading coefficients strict cocycles at 0, and the deformation
 * equation delta(d theta_l / d t_k) = [theta_l, theta_k] must hold exactly. */
DeformationCertificate deformation_eq_check(const CechModel& mod, const KSForm& theta);

/* Compatibility of the one-form with the model's t-dependence: the operator
 * d_l + iota_{theta_l} commutes with the total differential iff the leading
 * faces move with velocity -Lie(theta on the edge) and every other structure
 * datum is constant in t.  This is what makes the assembled connection the
 * derivative of the family rather than an arbitrary flat connection. */
struct GmCompatibility {
    bool ok = true;
    std::vector<std::string> failures;
};
GmCompatibility gm_compatibility_check(const CechModel& mod, const KSForm& theta);

/* Gauss-Manin operator along d/dt_l: coefficientwise d_l plus contraction
 * with theta_l on the leading edge.  Input must be a total cocycle; the
 * model and one-form must be compatible and the output is checked closed. */
TotalCochain gauss_manin(const CechModel& mod, const KSForm& theta, int l, const TotalCochain& omega);

// --- cohomology of vertical fields at t = 0 ---

struct ThetaCohomology {
    ThetaSpace sp0, sp1, sp2, sp3;
    QMat delta0{0, 0}, delta1{0, 0}, delta2{0, 0};
    SpanReducer bnd1{0};  // im(delta0)
    SpanReducer bnd2{0};  // im(delta1)
    std::vector<QVec> h1_basis;  // canonical representatives, bnd1-reduced
    size_t h0_rank = 0, h1_rank = 0, h2_rank = 0;

    explicit ThetaCohomology(const CechModel& mod);

    bool is_cocycle1(const QVec& v) const;
    // Coordinates of a 1-cocycle's class in the chosen H^1 basis.
    QVec h1_coords(const QVec& cocycle) const;
};

struct Kappa1Class {
    QVec representative;  // flattened Cech^1(Theta) at 0
    QVec coords;          // in the H^1 basis
    bool zero = true;
};

// Class of the leading coefficient of theta_l in H^1(Theta)|_0.
Kappa1Class kappa1(const CechModel& mod, const ThetaCohomology& hh, const KSForm& theta, int l);

// Obstruction pairing: the symmetrized cup-bracket class in H^2(Theta)|_0.
struct ObstructionClass {
    QVec representative;  // flattened Cech^2(Theta), bnd2-reduced
    bool zero = true;
};
ObstructionClass obstruction(const CechModel& mod, const ThetaCohomology& hh, const ThetaCochain& a,
                             const ThetaCochain& b);

// --- the unsymmetrized second Kodaira-Spencer class ---

/* Representative pair (sum of tensor pairs of 1-cochains, 1-cochain),
 * modeling Cech^2(Theta box Theta) (+) Cech^1(Theta) at t = 0. */
struct KSecondClass {
    std::vector<std::pair<ThetaCochain, ThetaCochain>> box;
    ThetaCochain theta;
};

/* Total-complex cocycle residual of a representative at 0: the box column's
 * differential (zero when the factors are cocycles, reported otherwise) and
 * the Theta-column residual  delta(theta) - sum cup[y, x]  over box pairs
 * (x, y); the sign pairs with the deformation equation. */
struct KSecondResidual {
    bool box_ok = true;
    bool theta_ok = true;
    QVec theta_residual;
};
KSecondResidual ks2_cocycle_residual(const CechModel& mod, const KSecondClass& c);

// kappa2 representative for (d/dt_k, d/dt_l); requires the deformation
// equation (DeformationEqFailed otherwise).
KSecondClass kappa2_tilde(const CechModel& mod, const KSForm& theta, int k, int l);

/* Kuenneth data of the box component: sum over pairs of [x] (x) [y] in
 * H^1 (x) H^1 coordinates. */
QMat ks2_box_class(const CechModel& mod, const ThetaCohomology& hh, const KSecondClass& c);

/* Membership in the image of H^1(Theta) -> H^1 of the two-column complex
 * (inclusion as second component).  By row exactness this is the vanishing
 * of the box Kuenneth class; the model's global-field corrections are
 * quotiented explicitly (reported by the harness). */
bool in_image_kappa1(const CechModel& mod, const ThetaCohomology& hh, const KSecondClass& c);

/* Equality of two representatives modulo boundaries and the image of
 * kappa1-classes in the theta slot (the quotient the theorems live in). */
bool ks2_equal_mod_kappa1(const CechModel& mod, const ThetaCohomology& hh,
                          const std::vector<Kappa1Class>& kappa1_span, const KSecondClass& a,
                          const KSecondClass& b);

// --- realized filtered structure ---

struct RealizedVHS {
    FilteredModule module;
    Connection connection;
    std::vector<TotalCochain> basis;  // cocycle representatives over R_S
    TotalSpace space_m;
    TotalSpace space_m1;  // degree m-1, boundaries
};

/* Adapted basis of H^m over R_S with levels from the form-degree filtration,
 * plus connection matrices extracted by expressing Gauss-Manin images in the
 * basis modulo boundaries.  Refuses (RankJump) when the fiber rank at 0
 * differs from the rank over R_S or a lift/expression fails. */
RealizedVHS realize_vhs(const CechModel& mod, const KSForm& theta);

struct GriffithsCertificate {
    bool ok = true;
    QMat d_phi_block{0, 0};
    QMat cup_block{0, 0};
};

/* The degree-(-1) block of the realized connection against cup-contraction
 * with the leading Kodaira-Spencer cocycle, both at 0. */
GriffithsCertificate griffiths_check(const CechModel& mod, const KSForm& theta, int l,
                                     const RealizedVHS& vhs);

// --- Archimedean cochain level ---

/* Laurent-extended cochain, stored by offset: the pair (o, x) stands for the
 * sum of the components of x, each multiplied by T^{p + o} where p is the
 * component's form degree.  The extended differential preserves offsets and
 * F^k membership is simply o <= -k. */
struct ArCochain {
    int m = 0;
    std::map<int, TotalCochain> by_offset;

    bool is_zero() const;
};

bool ar_cochain_in_f(const ArCochain& c, int k);

/* Cochain-level second Archimedean differential: on omega . T^p (offset 0),
 *   zeta -| (xi -| omega).T^p  -  xi -| Lie_zeta(omega).T^{p+1}  +  theta -| omega.T^p
 * with zeta, xi the leading coefficients of theta_k, theta_l and theta the
 * t_k-derivative of theta_l at 0.  Offsets: the first two terms land at
 * offset +2, the contraction term at offset +1. */
ArCochain d2_psi_cochain_value(const CechModel& mod, const KSForm& theta, int k, int l,
                               const TotalCochain& omega);

/* Quotient context for the value above: coordinates are the offset-1 and
 * offset-2 copies of the degree-m fiber space, modulo boundaries in each
 * offset and the contraction images of the basis cocycles (the fiber of
 * span{nabla_eta(F_ar^0)}).  Membership of F_ar^0 itself is the statement
 * that offsets <= 0 are dropped. */
struct ArQuotient {
    TotalSpace space;          // degree-m fiber space
    SpanReducer denominator;   // inside offset-1 (+) offset-2 coordinates

    explicit ArQuotient(const CechModel& mod, const KSForm& theta,
                        const std::vector<TotalCochain>& har_basis);

    QVec project(const ArCochain& c) const;      // offsets 1 and 2, others checked/dropped
    QVec reduce(const ArCochain& c) const;       // canonical residue
    bool is_zero(const ArCochain& c) const;
};

}  // namespace periodmap
