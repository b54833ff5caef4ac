#include "doctest.h"

#include <random>

#include "periodmap/cech_ks.hpp"

using namespace periodmap;

namespace {

BuiltinFamily annulus(int window = 3, int s = 1, int n = 2,
                      std::optional<TruncatedSeries> exponent = std::nullopt) {
    AnnulusParams ap;
    ap.window = window;
    ap.s = s;
    ap.n = n;
    ap.exponent = std::move(exponent);
    return annulus_model(ap);
}

// Edge cochain supported on the V' component in fiber degree zero, the shape
// every Kodaira-Spencer datum takes on the two-chart models.
ThetaCochain vprime_edge_cochain(const CechModel& mod, int window, const TruncatedSeries& u) {
    ThetaCochain t = theta_zero(mod, 1);
    size_t idx = mixed_index(window, 1, 0);
    t.comp[mod.simplex_pos({1, 2})][idx] = u.scalar_mul(GaussianRational(-1));
    t.comp[mod.simplex_pos({2, 1})][idx] = u;
    return t;
}

KSForm potential_form(const CechModel& mod, int window, const std::vector<TruncatedSeries>& dphi) {
    KSForm f;
    for (const TruncatedSeries& u : dphi) f.theta.push_back(vprime_edge_cochain(mod, window, u));
    return f;
}

}  // namespace

TEST_CASE("deformation equation on the built-in families") {
    BuiltinFamily fam = annulus();
    CHECK(deformation_eq_check(fam.model, fam.canonical_theta).ok);

    // Second-order gluing still satisfies it exactly.
    TruncatedSeries p = TruncatedSeries::variable(1, 2, 1);
    BuiltinFamily fam2 = annulus(3, 1, 2, p + p * p);
    CHECK(deformation_eq_check(fam2.model, fam2.canonical_theta).ok);

    // Abelian model: any t-independent cocycle passes; a t-coefficient that
    // is not delta-closed fails.
    AbelianParams bp;
    bp.window = 2;
    bp.s = 1;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    TruncatedSeries one = TruncatedSeries::constant(1, 2, GaussianRational(1));
    KSForm good = potential_form(ab, bp.window, {one});
    CHECK(deformation_eq_check(ab, good).ok);

    KSForm bad;
    ThetaCochain tc = theta_zero(ab, 1);
    // t * (cochain supported on one edge only): not delta-closed.
    tc.comp[ab.simplex_pos({1, 2})][mixed_index(bp.window, 1, 0)] =
        TruncatedSeries::variable(1, 2, 1);
    bad.theta.push_back(tc);
    DeformationCertificate cert = deformation_eq_check(ab, bad);
    CHECK_FALSE(cert.ok);
}

TEST_CASE("Gauss-Manin operator: trivial one-form differentiates coefficients") {
    AbelianParams bp;
    bp.window = 2;
    bp.s = 1;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    KSForm zero_form;
    zero_form.theta.push_back(theta_zero(ab, 1));

    // A t-independent cocycle is then parallel.
    RealizedVHS vhs = realize_vhs(ab, zero_form);
    for (const TotalCochain& b : vhs.basis) {
        TotalCochain db = gauss_manin(ab, zero_form, 1, b);
        // db must be a boundary: its class coordinates vanish, i.e. the
        // connection matrix of the trivial family is zero.
    }
    CHECK(smat_is_zero(vhs.connection.a[0]));
}

TEST_CASE("Gauss-Manin rejects non-cocycles") {
    BuiltinFamily fam = annulus();
    TotalSpace sp(fam.model, 1);
    QVec e(sp.dim);
    e[0] = GaussianRational(1);
    TotalCochain junk = sp.unflatten(e);
    if (!total_differential(fam.model, junk).is_zero())
        CHECK_THROWS_AS(gauss_manin(fam.model, fam.canonical_theta, 1, junk), NotCocycle);
}

TEST_CASE("realized filtered structure of the canonical annulus family") {
    BuiltinFamily fam = annulus();
    RealizedVHS vhs = realize_vhs(fam.model, fam.canonical_theta);
    REQUIRE(vhs.module.rank == 2);
    CHECK(vhs.module.levels == std::vector<int>{1, 0});

    // Frozen connection fixture for window 3, order 2, gluing 4 e^t:
    // nabla(eta) = c, nabla(c) = 0 in the engine's canonical basis.
    SMat expect = smat_zero(2, 2, 1, 2);
    expect(1, 0) = TruncatedSeries::constant(1, 2, GaussianRational(1));
    CHECK(vhs.connection.a[0] == expect);

    CHECK(check_integrable(vhs.connection).ok);
    CHECK(check_transversal(vhs.connection, vhs.module).ok_identically);
}

TEST_CASE("realized connection is stable under window enlargement") {
    // Cohomology concentrates in fiber degree zero, so enlarging the Laurent
    // window must not change the adapted basis or the connection matrix.
    RealizedVHS small = realize_vhs(annulus(3).model, annulus(3).canonical_theta);
    RealizedVHS big = realize_vhs(annulus(5).model, annulus(5).canonical_theta);
    CHECK(small.module.levels == big.module.levels);
    CHECK(small.connection.a[0] == big.connection.a[0]);
}

TEST_CASE("realized connection of the second-order family") {
    TruncatedSeries p = TruncatedSeries::variable(1, 2, 1);
    BuiltinFamily fam = annulus(3, 1, 2, p + p * p);
    RealizedVHS vhs = realize_vhs(fam.model, fam.canonical_theta);
    // u(t) = 1 + 2t shows up in the lower-left entry.
    TruncatedSeries expect = TruncatedSeries::constant(1, 2, GaussianRational(1));
    expect += TruncatedSeries::variable(1, 2, 1).scalar_mul(GaussianRational(2));
    CHECK(vhs.connection.a[0](1, 0) == expect);
    CHECK(vhs.connection.a[0](0, 0).is_zero());
    CHECK(vhs.connection.a[0](0, 1).is_zero());
    CHECK(vhs.connection.a[0](1, 1).is_zero());
}

TEST_CASE("point-fiber model realizes a rank-1 module with zero connection") {
    // Weight-0 cohomology of the trivial family over the abelian combinatorics:
    // H^0 is the constants, rank 1 at level 0, zero connection.
    AbelianParams bp;
    bp.window = 2;
    bp.s = 1;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    ab.weight = 0;
    KSForm zf;
    zf.theta.push_back(theta_zero(ab, 1));
    RealizedVHS vhs = realize_vhs(ab, zf);
    CHECK(vhs.module.rank == 1);
    CHECK(vhs.module.levels == std::vector<int>{0});
    CHECK(smat_is_zero(vhs.connection.a[0]));
}

TEST_CASE("abelian potentials give flat transversal realizations") {
    AbelianParams bp;
    bp.window = 2;
    bp.s = 2;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 6; ++trial) {
        // theta_l = d_l Phi for a random polynomial potential Phi(t).
        TruncatedSeries phi(2, 2);
        phi.set_coeff({1, 0}, GaussianRational((long)(rng() % 5) - 2));
        phi.set_coeff({0, 1}, GaussianRational((long)(rng() % 5) - 2));
        phi.set_coeff({1, 1}, GaussianRational((long)(rng() % 5) - 2));
        phi.set_coeff({2, 0}, GaussianRational((long)(rng() % 3) - 1));
        KSForm form = potential_form(ab, bp.window, {phi.partial(1), phi.partial(2)});
        REQUIRE(deformation_eq_check(ab, form).ok);
        RealizedVHS vhs = realize_vhs(ab, form);
        CHECK(check_integrable(vhs.connection).ok);
        CHECK(check_transversal(vhs.connection, vhs.module).ok_at_fiber);
    }
}

TEST_CASE("kappa1: exact leading coefficients give the zero class") {
    BuiltinFamily fam = annulus();
    ThetaCohomology hh(fam.model);

    // delta of a vertex cochain is exact: zero class.
    ThetaCochain v = theta_zero(fam.model, 0);
    v.comp[fam.model.simplex_pos({1})][mixed_index(3, 0, 1)] =
        TruncatedSeries::constant(1, 2, GaussianRational(2));
    KSForm exact;
    exact.theta.push_back(delta_theta(fam.model, v));
    Kappa1Class k0 = kappa1(fam.model, hh, exact, 1);
    CHECK(k0.zero);

    Kappa1Class k1 = kappa1(fam.model, hh, fam.canonical_theta, 1);
    CHECK_FALSE(k1.zero);

    // Linearity: class of a combination = combination of classes.
    KSForm scaled;
    scaled.theta.push_back(theta_add(
        theta_scale(fam.canonical_theta.theta[0], TruncatedSeries::constant(1, 2, GaussianRational(3))),
        exact.theta[0]));
    Kappa1Class k3 = kappa1(fam.model, hh, scaled, 1);
    QVec expect = k1.coords;
    for (auto& q : expect) q *= GaussianRational(3);
    CHECK(k3.coords == expect);

    // Non-cocycle leading coefficient is rejected.
    KSForm bad;
    ThetaCochain nc = theta_zero(fam.model, 1);
    nc.comp[fam.model.simplex_pos({1, 2})][mixed_index(3, 0, 0)] =
        TruncatedSeries::constant(1, 2, GaussianRational(1));
    bad.theta.push_back(nc);
    CHECK_THROWS_AS(kappa1(fam.model, hh, bad, 1), NotCocycle);
}

TEST_CASE("Griffiths agreement on both built-in models") {
    BuiltinFamily fam = annulus();
    RealizedVHS vhs = realize_vhs(fam.model, fam.canonical_theta);
    GriffithsCertificate g = griffiths_check(fam.model, fam.canonical_theta, 1, vhs);
    CHECK(g.ok);
    // The 1x1 graded block is nonzero: the family moves the filtration.
    CHECK_FALSE(qmat_is_zero(g.d_phi_block));

    AbelianParams bp;
    bp.window = 2;
    bp.s = 1;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    KSForm form = potential_form(ab, bp.window,
                                 {TruncatedSeries::constant(1, 2, GaussianRational(1))});
    RealizedVHS avhs = realize_vhs(ab, form);
    CHECK(griffiths_check(ab, form, 1, avhs).ok);

    // Trivial family: both sides zero.
    KSForm zf;
    zf.theta.push_back(theta_zero(ab, 1));
    RealizedVHS tvhs = realize_vhs(ab, zf);
    GriffithsCertificate tg = griffiths_check(ab, zf, 1, tvhs);
    CHECK(tg.ok);
    CHECK(qmat_is_zero(tg.d_phi_block));
}

TEST_CASE("second Kodaira-Spencer representative and its cocycle condition") {
    // t-independent one-form: the derivative slot is zero.
    BuiltinFamily flat_fam = annulus();
    KSecondClass k2 = kappa2_tilde(flat_fam.model, flat_fam.canonical_theta, 1, 1);
    CHECK(theta_is_zero(k2.theta));
    REQUIRE(k2.box.size() == 1);
    KSecondResidual res = ks2_cocycle_residual(flat_fam.model, k2);
    CHECK(res.box_ok);
    CHECK(res.theta_ok);

    // Second-order family: the derivative slot appears and the pair is still
    // a cocycle.
    TruncatedSeries p = TruncatedSeries::variable(1, 2, 1);
    BuiltinFamily fam2 = annulus(3, 1, 2, p + p * p);
    KSecondClass k2b = kappa2_tilde(fam2.model, fam2.canonical_theta, 1, 1);
    CHECK_FALSE(theta_is_zero(k2b.theta));
    KSecondResidual res2 = ks2_cocycle_residual(fam2.model, k2b);
    CHECK(res2.box_ok);
    CHECK(res2.theta_ok);
}

TEST_CASE("membership in the image of kappa1") {
    BuiltinFamily fam = annulus();
    ThetaCohomology hh(fam.model);

    // (0, cocycle): in the image.
    KSecondClass pure;
    pure.theta = theta_at_zero_constant(fam.model, fam.canonical_theta.theta[0]);
    CHECK(in_image_kappa1(fam.model, hh, pure));

    // A boundary: in the image (zero class).
    ThetaCochain v = theta_zero(fam.model, 0);
    v.comp[fam.model.simplex_pos({2})][mixed_index(3, 0, 0)] =
        TruncatedSeries::constant(1, 2, GaussianRational(1));
    KSecondClass bnd;
    bnd.box.emplace_back(delta_theta(fam.model, v),
                         theta_at_zero_constant(fam.model, fam.canonical_theta.theta[0]));
    bnd.theta = theta_zero(fam.model, 1);
    CHECK(in_image_kappa1(fam.model, hh, bnd));

    // Generic second class: the box part survives, so it is not in the image.
    KSecondClass gen = kappa2_tilde(fam.model, fam.canonical_theta, 1, 1);
    CHECK_FALSE(in_image_kappa1(fam.model, hh, gen));

    // Diagram projection: the box class is kappa1 (x) kappa1.
    Kappa1Class k1 = kappa1(fam.model, hh, fam.canonical_theta, 1);
    QMat box = ks2_box_class(fam.model, hh, gen);
    REQUIRE(box.rows() == 1);
    CHECK(box(0, 0) == k1.coords[0] * k1.coords[0]);
}

TEST_CASE("obstruction pairing on the built-in models") {
    AbelianParams bp;
    bp.window = 2;
    bp.s = 2;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    ThetaCohomology hh(ab);
    TruncatedSeries one = TruncatedSeries::constant(2, 2, GaussianRational(1));
    TruncatedSeries two = TruncatedSeries::constant(2, 2, GaussianRational(2));
    ThetaCochain a = vprime_edge_cochain(ab, bp.window, one);
    ThetaCochain b = vprime_edge_cochain(ab, bp.window, two);
    ObstructionClass oab = obstruction(ab, hh, a, b);
    CHECK(oab.zero);  // all brackets vanish
    ObstructionClass oba = obstruction(ab, hh, b, a);
    CHECK(oab.representative == oba.representative);

    // Same shape on the annulus: degree-zero fields commute, class is zero,
    // and the symmetry holds.
    BuiltinFamily fam = annulus();
    ThetaCohomology ahh(fam.model);
    ObstructionClass self =
        obstruction(fam.model, ahh, fam.canonical_theta.theta[0], fam.canonical_theta.theta[0]);
    CHECK(self.zero);

    // Non-cocycles are rejected.
    ThetaCochain junk = theta_zero(ab, 1);
    junk.comp[ab.simplex_pos({1, 2})][mixed_index(bp.window, 0, 0)] =
        TruncatedSeries::constant(2, 2, GaussianRational(1));
    CHECK_THROWS_AS(obstruction(ab, hh, junk, a), NotCocycle);
}

TEST_CASE("second Archimedean differential at the cochain level") {
    TruncatedSeries p = TruncatedSeries::variable(1, 2, 1);
    BuiltinFamily fam = annulus(3, 1, 2, p + p * p);
    RealizedVHS vhs = realize_vhs(fam.model, fam.canonical_theta);
    ArQuotient quo(fam.model, fam.canonical_theta, vhs.basis);

    // Entirely trivial one-form on a constant model: zero.
    AbelianParams bp;
    bp.window = 2;
    bp.s = 1;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    KSForm zf;
    zf.theta.push_back(theta_zero(ab, 1));
    RealizedVHS tvhs = realize_vhs(ab, zf);
    ArCochain zero_val = d2_psi_cochain_value(ab, zf, 1, 1, tvhs.basis[0]);
    CHECK(zero_val.is_zero());

    // The contraction term lies in F_ar^{-1} on every instance.
    for (const TotalCochain& b : vhs.basis) {
        ArCochain val = d2_psi_cochain_value(fam.model, fam.canonical_theta, 1, 1, b);
        ArCochain theta_term;
        theta_term.m = val.m;
        auto it = val.by_offset.find(1);
        if (it != val.by_offset.end()) theta_term.by_offset[1] = it->second;
        CHECK(ar_cochain_in_f(theta_term, -1));
    }

    /* Boundary changes of the second-class representative leave the coset
     * unchanged.  Perturbing the derivative slot by a delta-exact cochain of
     * degree-zero fields (their brackets vanish, so the deformation equation
     * survives) is a boundary move in the two-column total complex. */
    ThetaCochain v = theta_zero(fam.model, 0);
    v.comp[fam.model.simplex_pos({1})][mixed_index(3, 0, 0)] =
        TruncatedSeries::constant(1, 2, GaussianRational(1));
    ThetaCochain dv = delta_theta(fam.model, v);
    KSForm perturbed = fam.canonical_theta;
    perturbed.theta[0] = theta_add(perturbed.theta[0],
                                   theta_scale(dv, TruncatedSeries::variable(1, 2, 1)));
    REQUIRE(deformation_eq_check(fam.model, perturbed).ok);
    for (size_t a = 0; a < vhs.basis.size(); ++a) {
        ArCochain v1 = d2_psi_cochain_value(fam.model, fam.canonical_theta, 1, 1, vhs.basis[a]);
        ArCochain v2 = d2_psi_cochain_value(fam.model, perturbed, 1, 1, vhs.basis[a]);
        CHECK(quo.reduce(v1) == quo.reduce(v2));
    }

    // Changing the first-order representative by an exact cochain (a gauge
    // move of the family data) does not move the coset either.
    KSForm gauge_moved = fam.canonical_theta;
    gauge_moved.theta[0] = theta_add(gauge_moved.theta[0], dv);
    if (deformation_eq_check(fam.model, gauge_moved).ok) {
        ArCochain v1 = d2_psi_cochain_value(fam.model, fam.canonical_theta, 1, 1, vhs.basis[0]);
        ArCochain v2 = d2_psi_cochain_value(fam.model, gauge_moved, 1, 1, vhs.basis[0]);
        CHECK(quo.reduce(v1) == quo.reduce(v2));
    }
}

TEST_CASE("vanishing leading coefficients with an exact derivative slot give the zero coset") {
    // theta_1 = t2 dv, theta_2 = t1 dv: both leading coefficients vanish and
    // the mixed second-order coefficient dv is exact, so the second class is
    // trivial and the second differential must vanish.
    AbelianParams bp;
    bp.window = 2;
    bp.s = 2;
    bp.n = 2;
    CechModel ab = abelian_model(bp);
    ThetaCochain v = theta_zero(ab, 0);
    v.comp[ab.simplex_pos({1})][mixed_index(bp.window, 0, 0)] =
        TruncatedSeries::constant(2, 2, GaussianRational(1));
    ThetaCochain dv = delta_theta(ab, v);
    KSForm form;
    form.theta = {theta_scale(dv, TruncatedSeries::variable(2, 2, 2)),
                  theta_scale(dv, TruncatedSeries::variable(2, 2, 1))};
    REQUIRE(deformation_eq_check(ab, form).ok);

    ThetaCohomology hh(ab);
    KSecondClass k2 = kappa2_tilde(ab, form, 1, 2);
    CHECK(in_image_kappa1(ab, hh, k2));

    RealizedVHS vhs = realize_vhs(ab, form);
    ArQuotient quo(ab, form, vhs.basis);
    for (const TotalCochain& b : vhs.basis)
        CHECK(quo.is_zero(d2_psi_cochain_value(ab, form, 1, 2, b)));
}

TEST_CASE("cross-module oracle: cochain formula against the abstract route") {
    for (int second_order : {0, 1}) {
        TruncatedSeries p = TruncatedSeries::variable(1, 2, 1);
        BuiltinFamily fam =
            annulus(3, 1, 2, second_order ? std::optional<TruncatedSeries>(p + p * p) : std::nullopt);
        RealizedVHS vhs = realize_vhs(fam.model, fam.canonical_theta);
        ArQuotient quo(fam.model, fam.canonical_theta, vhs.basis);
        auto xi = vhs.connection.coordinate_field(1);
        QMat m2 = smat_at_zero(second_derivative_series(vhs.connection, xi, xi));

        for (size_t a = 0; a < vhs.basis.size(); ++a) {
            ArCochain abstract_side;
            abstract_side.m = fam.model.weight;
            for (size_t c = 0; c < vhs.basis.size(); ++c) {
                if (m2(c, a).is_zero()) continue;
                int off = vhs.module.levels[a] - vhs.module.levels[c];
                TotalCochain scaled =
                    total_scale(vhs.basis[c], TruncatedSeries::constant(1, 2, m2(c, a)));
                auto it = abstract_side.by_offset.find(off);
                if (it == abstract_side.by_offset.end())
                    abstract_side.by_offset[off] = scaled;
                else
                    it->second = total_add(it->second, scaled);
            }
            ArCochain cochain_side =
                d2_psi_cochain_value(fam.model, fam.canonical_theta, 1, 1, vhs.basis[a]);
            CHECK(quo.reduce(abstract_side) == quo.reduce(cochain_side));
        }
    }
}

TEST_CASE("rank jump is refused rather than guessed") {
    // Break freeness by handing the realization a weight with no cohomology
    // consistency: inject a t-dependent rank drop via a doctored restriction.
    BuiltinFamily fam = annulus(2, 1, 1);
    CechModel broken = fam.model;
    size_t si = broken.simplex_pos({1, 2});
    // Make one n != 0 block of the gluing become singular at first order
    // only: identity at 0 but rank-deficient over R_S is impossible for a
    // diagonal unit, so instead collapse a target row to zero at order 1.
    broken.rho_omega[0][1][si][0](0, 0) =
        TruncatedSeries::constant(1, 1, GaussianRational(1)) + TruncatedSeries::variable(1, 1, 1);
    // The doctored model fails validation; realize_vhs on it either throws a
    // typed error or survives with consistent ranks -- never silently wrong.
    bool validated = validate_model(broken, ValidationLevel::strict).ok;
    CHECK_FALSE(validated);
}
