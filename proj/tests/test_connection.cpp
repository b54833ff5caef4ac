#include "doctest.h"

#include "periodmap/generators.hpp"
#include "periodmap/period_maps.hpp"

using namespace periodmap;

namespace {

TruncatedSeries cst(int s, int n, long v) { return TruncatedSeries::constant(s, n, GaussianRational(v)); }

// Rank-3 nilpotent with levels (2,1,0): N e1 = e2, N e2 = e3, N e3 = 0.
Connection nilpotent_connection(int s, int n) {
    Connection c(s, n, 3);
    for (int l = 0; l < s; ++l) {
        c.a[l](1, 0) = cst(s, n, 1);
        c.a[l](2, 1) = cst(s, n, 1);
    }
    return c;
}

FilteredModule three_levels(int s, int n) { return FilteredModule({2, 1, 0}, 2, s, n); }

}  // namespace

TEST_CASE("single-variable connections are always flat") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        Connection c(1, 3, 4);
        for (int b = 0; b < 4; ++b)
            for (int a = 0; a < 4; ++a) c.a[0](b, a) = random_series(1, 3, rng);
        CHECK(check_integrable(c).ok);
    }
}

TEST_CASE("curvature residual of a failing pair") {
    // A1 = E21 constant, A2 = t1 E21: residual d1 A2 - d2 A1 + [A1,A2] = E21.
    int s = 2, n = 2;
    Connection c(s, n, 2);
    c.a[0](1, 0) = cst(s, n, 1);
    c.a[1](1, 0) = TruncatedSeries::variable(s, n, 1);
    FlatnessCertificate cert = check_integrable(c);
    REQUIRE_FALSE(cert.ok);
    CHECK(cert.k == 1);
    CHECK(cert.l == 2);
    REQUIRE(cert.residual.has_value());
    SMat expect = smat_zero(2, 2, s, n);
    expect(1, 0) = cst(s, n, 1);
    CHECK(*cert.residual == expect);
}

TEST_CASE("gauge-trivial connections are flat") {
    /* A_l = g^{-1} d_l g for invertible g: flat whenever the transformed
     * matrices are honest polynomials inside the jet budget.  Exercised with
     * unipotent polynomial gauges and with a generic upper-triangular one. */
    std::mt19937_64 rng(12);
    int s = 2, n = 3;
    FilteredModule f({1, 1, 0}, 1, s, n);
    for (int trial = 0; trial < 5; ++trial) {
        Connection zero(s, n, 3);
        Connection c = gauge_transform(zero, random_unipotent_gauge(f, rng));
        CHECK(check_integrable(c).ok);
    }

    // Strictly triangular n with linear entries across all positions: g = id + n,
    // n^3 = 0 and every product stays within degree 3.
    SMat g = smat_identity(3, s, n);
    g(0, 1) = TruncatedSeries::variable(s, n, 1);
    g(1, 2) = TruncatedSeries::variable(s, n, 2).scalar_mul(GaussianRational(2));
    Connection c = gauge_transform(Connection(s, n, 3), g);
    CHECK(check_integrable(c).ok);
}

TEST_CASE("transversality certificate") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);

    Connection zero(s, n, 3);
    TransversalityCertificate ok = check_transversal(zero, f);
    CHECK(ok.ok_at_fiber);
    CHECK(ok.ok_identically);

    // A e1 = e3 drops two levels: fails outright.
    Connection bad(s, n, 3);
    bad.a[0](2, 0) = cst(s, n, 1);
    TransversalityCertificate fail = check_transversal(bad, f);
    CHECK_FALSE(fail.ok_at_fiber);
    CHECK(fail.row == 2);
    CHECK(fail.col == 0);

    // Nilpotent drops exactly one level each step: fine.
    CHECK(check_transversal(nilpotent_connection(s, n), f).ok_at_fiber);

    // t * (level drop 2) vanishes at the fiber but not identically.
    Connection infinitesimal(s, n, 3);
    infinitesimal.a[0](1, 0) = cst(s, n, 1);
    infinitesimal.a[0](2, 0) = TruncatedSeries::variable(s, n, 1);
    TransversalityCertificate mid = check_transversal(infinitesimal, f);
    CHECK(mid.ok_at_fiber);
    CHECK_FALSE(mid.ok_identically);
}

TEST_CASE("covariant derivative basics") {
    int s = 1, n = 2;
    Connection zero(s, n, 3);
    auto xi = zero.coordinate_field(1);

    // A = 0, x = t e1: nabla_t x = e1.
    std::vector<TruncatedSeries> x(3, TruncatedSeries(s, n));
    x[0] = TruncatedSeries::variable(s, n, 1);
    auto dx = covariant_derivative(zero, xi, x);
    CHECK(dx[0] == cst(s, n, 1));
    CHECK(dx[1].is_zero());

    // A = N, x = e1: nabla_t x = e2.
    Connection nc = nilpotent_connection(s, n);
    std::vector<TruncatedSeries> e1(3, TruncatedSeries(s, n));
    e1[0] = cst(s, n, 1);
    auto de1 = covariant_derivative(nc, nc.coordinate_field(1), e1);
    CHECK(de1[0].is_zero());
    CHECK(de1[1] == cst(s, n, 1));
    CHECK(de1[2].is_zero());
}

TEST_CASE("covariant derivative is O_S-linear in the direction") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        auto inst = gen_flat_transversal(spec, 100 + trial);
        const Connection& c = inst.connection;
        TruncatedSeries fscale = random_series(2, 2, rng);
        std::vector<TruncatedSeries> xi{random_series(2, 2, rng), random_series(2, 2, rng)};
        std::vector<TruncatedSeries> x{random_series(2, 2, rng), random_series(2, 2, rng),
                                       random_series(2, 2, rng)};
        std::vector<TruncatedSeries> fxi = xi;
        for (auto& comp : fxi) comp = comp * fscale;
        auto lhs = covariant_derivative(c, fxi, x);
        auto rhs = covariant_derivative(c, xi, x);
        for (int i = 0; i < 3; ++i) CHECK(lhs[i] == fscale * rhs[i]);
    }
}

TEST_CASE("mismatched ring rejected in covariant derivative") {
    Connection c(1, 2, 2);
    std::vector<TruncatedSeries> x(2, TruncatedSeries(2, 2));
    CHECK_THROWS_AS(covariant_derivative(c, c.coordinate_field(1), x), MismatchedRing);
}

TEST_CASE("identity is parallel for the endomorphism connection") {
    int s = 1, n = 2;
    Connection nc = nilpotent_connection(s, n);
    Connection e = end_connection(nc);
    std::vector<TruncatedSeries> id_flat(9, TruncatedSeries(s, n));
    for (int u = 0; u < 3; ++u) id_flat[u * 3 + u] = cst(s, n, 1);
    auto d = covariant_derivative(e, e.coordinate_field(1), id_flat);
    for (const auto& comp : d) CHECK(comp.is_zero());

    // B = N commutes with A = N.
    std::vector<TruncatedSeries> n_flat(9, TruncatedSeries(s, n));
    n_flat[1 * 3 + 0] = cst(s, n, 1);
    n_flat[2 * 3 + 1] = cst(s, n, 1);
    auto dn = covariant_derivative(e, e.coordinate_field(1), n_flat);
    for (const auto& comp : dn) CHECK(comp.is_zero());

    // B = E_{12}: nabla B = [N, E_{12}] = E_{22}... computed entrywise:
    // N E12 = E22 pattern shifted; E12 N = E13-pattern... checked against
    // a direct commutator.
    QMat b(3, 3);
    b(0, 1) = GaussianRational(1);
    QMat nmat(3, 3);
    nmat(1, 0) = GaussianRational(1);
    nmat(2, 1) = GaussianRational(1);
    QMat expect = nmat * b - b * nmat;
    std::vector<TruncatedSeries> b_flat(9, TruncatedSeries(s, n));
    b_flat[0 * 3 + 1] = cst(s, n, 1);
    auto db = covariant_derivative(e, e.coordinate_field(1), b_flat);
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) CHECK(db[u * 3 + v].eval_at_zero() == expect(u, v));
}

TEST_CASE("endomorphism connection preserves flatness") {
    for (uint64_t seed = 0; seed < 8; ++seed) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {2, 1, 1, 0};
        auto inst = gen_flat_transversal(spec, seed);
        REQUIRE(check_integrable(inst.connection).ok);
        CHECK(check_integrable(end_connection(inst.connection)).ok);
    }
}

TEST_CASE("generator is deterministic and certified") {
    GeneratorSpec spec;
    spec.rank = 3;
    spec.s = 1;
    spec.n = 2;
    auto a = gen_flat_transversal(spec, 7);
    auto b = gen_flat_transversal(spec, 7);
    CHECK(a.connection.a[0] == b.connection.a[0]);

    for (uint64_t seed = 0; seed < 10; ++seed) {
        for (int s : {1, 2}) {
            GeneratorSpec g;
            g.s = s;
            g.n = 2;
            auto inst = gen_flat_transversal(g, seed);
            CHECK(check_integrable(inst.connection).ok);
            CHECK(check_transversal(inst.connection, inst.module).ok_at_fiber);
            CHECK(check_transversal(inst.connection, inst.module).ok_identically);
        }
    }

    // All levels equal: transversality is vacuous, any matrix passes.
    GeneratorSpec flat_levels;
    flat_levels.levels = {1, 1, 1};
    flat_levels.s = 1;
    auto inst = gen_flat_transversal(flat_levels, 3);
    CHECK(check_transversal(inst.connection, inst.module).ok_identically);

    GeneratorSpec bad;
    bad.s = 2;
    bad.non_commuting = true;
    CHECK_THROWS_AS(gen_flat_transversal(bad, 1), SpecInfeasible);
}
