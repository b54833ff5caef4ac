#include "doctest.h"

#include "periodmap/generators.hpp"

using namespace periodmap;

namespace {

TruncatedSeries cst(int s, int n, long v) { return TruncatedSeries::constant(s, n, GaussianRational(v)); }

FilteredModule three_levels(int s, int n) { return FilteredModule({2, 1, 0}, 2, s, n); }

Connection nilpotent_connection(int s, int n) {
    Connection c(s, n, 3);
    for (int l = 0; l < s; ++l) {
        c.a[l](1, 0) = cst(s, n, 1);
        c.a[l](2, 1) = cst(s, n, 1);
    }
    return c;
}

Connection nilpotent_plus_tm(int s, int n) {
    Connection c = nilpotent_connection(s, n);
    c.a[0](2, 0) = TruncatedSeries::variable(s, n, 1);
    return c;
}

std::vector<TruncatedSeries> basis_vec(int rank, int a, int s, int n) {
    std::vector<TruncatedSeries> v(rank, TruncatedSeries(s, n));
    v[a] = TruncatedSeries::constant(s, n, GaussianRational(1));
    return v;
}

}  // namespace

TEST_CASE("termwise covariant derivative on Laurent elements") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    Connection zero(s, n, 3);
    auto xi = zero.coordinate_field(1);

    ArElement y = ar_term(2, basis_vec(3, 0, s, n));
    CHECK(nabla_ar(zero, f, xi, y).empty());

    Connection nc = nilpotent_connection(s, n);
    ArElement dy = nabla_ar(nc, f, xi, y);
    ArElement expect = ar_term(2, basis_vec(3, 1, s, n));
    CHECK(dy == expect);

    // Linearity over Laurent scalars constant in t: T-exponents shift jointly.
    ArElement y2 = ar_add(ar_term(2, basis_vec(3, 0, s, n)), ar_term(-1, basis_vec(3, 2, s, n)), 3, s, n);
    ArElement dy2 = nabla_ar(nc, f, xi, y2);
    CHECK(dy2.term(2) != nullptr);
    CHECK(dy2.term(-1) == nullptr);  // nabla e3 = 0
}

TEST_CASE("drop_T and insert_T are inverse on homogeneous classes") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);

    // e1 T^{p1} in Gr^0 -> e1.
    ArElement y = insert_t(f, basis_vec(3, 0, s, n), 0);
    CHECK(y.term(2) != nullptr);
    auto x = drop_t(f, y, 0);
    CHECK(x[0] == cst(s, n, 1));

    // e2 T^{p1} sits in Gr^{-1}: level p2 = p1 - 1.
    ArElement z = ar_term(2, basis_vec(3, 1, s, n));
    auto back = drop_t(f, z, -1);
    CHECK(back[1] == cst(s, n, 1));

    // Mixed-level term is rejected as inhomogeneous.
    std::vector<TruncatedSeries> mixed = basis_vec(3, 0, s, n);
    mixed[1] = cst(s, n, 1);
    CHECK_THROWS_AS(drop_t(f, ar_term(2, mixed), 0), NotHomogeneous);

    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<TruncatedSeries> v{random_series(s, n, rng), random_series(s, n, rng),
                                       random_series(s, n, rng)};
        for (int k : {-2, -1, 0, 1}) {
            ArElement w = insert_t(f, v, k);
            auto round = drop_t(f, w, k);
            for (int i = 0; i < 3; ++i) CHECK(round[i] == v[i]);
        }
    }
}

TEST_CASE("Laurent filtration membership and transversality of nabla_ar") {
    for (uint64_t seed = 0; seed < 15; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {2, 1, 1, 0};
        auto [f, c] = gen_flat_transversal(spec, seed);
        std::mt19937_64 rng(seed * 977 + 5);

        for (int k : {-1, 0, 1}) {
            // Random element of F_ar^k: each term x_a T^j with j <= level(a) - k.
            ArElement y;
            for (int a = 0; a < f.rank; ++a) {
                int jmax = f.levels[a] - k;
                std::vector<TruncatedSeries> v(f.rank, TruncatedSeries(spec.s, spec.n));
                v[a] = random_series(spec.s, spec.n, rng, 2);
                y = ar_add(y, ar_term(jmax - (int)(rng() % 2), v), f.rank, spec.s, spec.n);
            }
            REQUIRE(in_f_ar(f, y, k));
            for (int l = 1; l <= spec.s; ++l) {
                ArElement dy = nabla_ar(c, f, c.coordinate_field(l), y);
                CHECK(in_f_ar(f, dy, k - 1));
            }
        }
    }
}

TEST_CASE("first Archimedean differential worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    ArModule m(f);
    Connection zero(s, n, 3);
    auto xi = zero.coordinate_field(1);

    CHECK(d_psi(m, zero, xi).is_zero());

    Connection nc = nilpotent_connection(s, n);
    CosetMap dp = d_psi(m, nc, xi);
    CHECK_FALSE(dp.is_zero());
    // Column of e1 T^2: reduced image is e2 T^2 (not in F_ar^0 since p2=1<2).
    auto basis = m.har_basis();
    size_t col_e1_t2 = SIZE_MAX;
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == std::pair<int, int>{0, 2}) col_e1_t2 = i;
    REQUIRE(col_e1_t2 != SIZE_MAX);
    QVec image = dp.reduced_numerator().col(col_e1_t2);
    QVec expect(m.dim());
    expect[m.index(1, 2)] = GaussianRational(1);
    CHECK(image == expect);
}

TEST_CASE("image of d_psi lands one Hodge step down") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {3, 2, 1, 0};
        auto [f, c] = gen_flat_transversal(spec, seed);
        ArModule m(f);
        for (int l = 1; l <= spec.s; ++l) {
            CosetMap dp = d_psi(m, c, c.coordinate_field(l));
            QMat red = dp.reduced_numerator();
            auto basis = m.har_basis();
            for (size_t col = 0; col < basis.size(); ++col) {
                auto [a, j] = basis[col];
                if (j != f.levels[a]) continue;  // classes of Gr^0: x in H^{p,q} . T^p
                QVec column = red.col(col);
                for (int b = 0; b < f.rank; ++b)
                    for (int jj = m.window_min; jj <= m.window_max; ++jj) {
                        if (column[m.index(b, jj)].is_zero()) continue;
                        CHECK(jj == j);
                        CHECK(f.levels[b] == f.levels[a] - 1);
                    }
            }
        }
    }
}

TEST_CASE("graded Archimedean differential equals the first differential") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    ArModule m(f);
    Connection zero(s, n, 3);
    auto xi = zero.coordinate_field(1);
    CHECK(qmat_is_zero(d_psi_bar(m, zero, xi)));

    Connection nc = nilpotent_connection(s, n);
    CHECK(d_psi_bar(m, nc, xi) == first_differential(nc, f, xi));

    // The identity holds on random instances: the Laurent route and the
    // graded-block route agree exactly.
    for (uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2 + seed % 2;
        spec.rank = 4;
        spec.levels = {2, 2, 1, 0};
        auto [fm, c] = gen_flat_transversal(spec, seed);
        ArModule am(fm);
        for (int l = 1; l <= spec.s; ++l)
            CHECK(d_psi_bar(am, c, c.coordinate_field(l)) ==
                  first_differential(c, fm, c.coordinate_field(l)));
    }
}

TEST_CASE("second Archimedean differential worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    ArModule m(f);
    auto xi = Connection(s, n, 3).coordinate_field(1);

    CHECK(d2_psi(m, Connection(s, n, 3), xi, xi).is_zero());

    Connection nc = nilpotent_connection(s, n);
    CosetMap d2 = d2_psi(m, nc, xi, xi);
    auto basis = m.har_basis();
    size_t col_e1_t2 = SIZE_MAX;
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == std::pair<int, int>{0, 2}) col_e1_t2 = i;
    REQUIRE(col_e1_t2 != SIZE_MAX);
    // nabla nabla e1 T^2 = e3 T^2, outside the denominator span.
    QVec image = d2.reduced_numerator().col(col_e1_t2);
    bool nonzero = false;
    for (const auto& q : image) nonzero = nonzero || !q.is_zero();
    CHECK(nonzero);
    QVec raw(m.dim());
    raw[m.index(2, 2)] = GaussianRational(1);
    CHECK(d2.numerator().col(col_e1_t2) == raw);
}

TEST_CASE("second Archimedean differential is symmetric") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {2, 1, 1, 0};
        auto [f, c] = gen_flat_transversal(spec, seed);
        ArModule m(f);
        CHECK(d2_psi(m, c, c.coordinate_field(1), c.coordinate_field(2)) ==
              d2_psi(m, c, c.coordinate_field(2), c.coordinate_field(1)));
    }
}

TEST_CASE("graded second differential worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    ArModule m(f);
    auto xi = Connection(s, n, 3).coordinate_field(1);

    QMat n2(3, 3);
    n2(2, 0) = GaussianRational(1);
    CHECK(d2_psi_bar(m, nilpotent_connection(s, n), xi, xi) == n2);

    QMat mmat(3, 3);
    mmat(2, 0) = GaussianRational(1);
    QMat expect = n2 + mmat;
    CHECK(d2_psi_bar(m, nilpotent_plus_tm(s, n), xi, xi) == expect);
}

TEST_CASE("graded second differential respects the filtration bound") {
    // The degree-(-2) block sends F^p into F^{p-2} by construction; the
    // factorization of the full second differential through it is the
    // substantive check.
    for (uint64_t seed = 0; seed < 25; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {3, 2, 1, 0};
        auto [f, c] = gen_flat_transversal(spec, seed);
        for (int k = 1; k <= spec.s; ++k)
            for (int l = 1; l <= spec.s; ++l)
                CHECK(second_differential_factors_through_graded(c, f, c.coordinate_field(k),
                                                                 c.coordinate_field(l)));
    }
}

TEST_CASE("second-form congruence worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    ArModule m(f);
    auto xi = Connection(s, n, 3).coordinate_field(1);

    CHECK(second_form_congruence_check(m, Connection(s, n, 3), xi, xi).ok);
    CHECK(second_form_congruence_check(m, nilpotent_connection(s, n), xi, xi).ok);

    // A = N + tM: both sides reduce to the class of M.
    Connection c = nilpotent_plus_tm(s, n);
    CongruenceCertificate cert = second_form_congruence_check(m, c, xi, xi);
    CHECK(cert.ok);
    QMat mmat(3, 3);
    mmat(2, 0) = GaussianRational(1);
    CHECK(cert.lhs == mmat);
    CHECK(cert.rhs == mmat);
}

TEST_CASE("second-form congruence on the random corpus") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2 + seed % 2;
        spec.rank = 3 + seed % 3;
        spec.levels.assign(spec.rank, 0);
        for (int i = 0; i < spec.rank; ++i) spec.levels[i] = (spec.rank - 1 - i) % 4;
        auto [f, c] = gen_flat_transversal(spec, seed);
        ArModule m(f);
        for (int k = 1; k <= spec.s; ++k)
            for (int l = 1; l <= spec.s; ++l)
                CHECK(second_form_congruence_check(m, c, c.coordinate_field(k), c.coordinate_field(l)).ok);
    }
}

TEST_CASE("window enlargement never changes a verdict") {
    for (uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2;
        auto [f, c] = gen_flat_transversal(spec, seed);
        ArModule small(f, 2, 0);
        ArModule big(f, 4, 2);
        auto z = c.coordinate_field(1);
        auto x = c.coordinate_field(spec.s);
        CHECK(d2_psi(small, c, z, x).is_zero() == d2_psi(big, c, z, x).is_zero());
        CHECK(second_form_congruence_check(small, c, z, x).ok ==
              second_form_congruence_check(big, c, z, x).ok);
        CHECK(d_psi(small, c, z).is_zero() == d_psi(big, c, z).is_zero());
    }
}
