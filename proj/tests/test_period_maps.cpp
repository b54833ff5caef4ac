#include "doctest.h"

#include "periodmap/generators.hpp"
#include "periodmap/period_maps.hpp"

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

// A(t) = N + t M with M e1 = e3 of pure degree -2.
Connection nilpotent_plus_tm(int s, int n) {
    Connection c = nilpotent_connection(s, n);
    c.a[0](2, 0) = TruncatedSeries::variable(s, n, 1);
    return c;
}

}  // namespace

TEST_CASE("first differential worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    Connection zero(s, n, 3);
    auto xi = zero.coordinate_field(1);

    CHECK(qmat_is_zero(first_differential(zero, f, xi)));

    Connection nc = nilpotent_connection(s, n);
    QMat nmat(3, 3);
    nmat(1, 0) = GaussianRational(1);
    nmat(2, 1) = GaussianRational(1);
    CHECK(first_differential(nc, f, xi) == nmat);

    // A = N + t * (mixed degrees): the t-terms vanish at 0.
    Connection mixed = nilpotent_connection(s, n);
    TruncatedSeries t = TruncatedSeries::variable(s, n, 1);
    mixed.a[0](0, 0) = t;                           // degree 0
    mixed.a[0](0, 1) = t.scalar_mul(GaussianRational(2));  // degree +1
    mixed.a[0](2, 1) = cst(s, n, 1) + t;            // degree -1 with motion
    CHECK(first_differential(mixed, f, xi) == nmat);
}

TEST_CASE("first differential is O_S-linear in the direction at 0") {
    std::mt19937_64 rng(21);
    for (uint64_t seed = 0; seed < 10; ++seed) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        auto [f, c] = gen_flat_transversal(spec, seed);
        TruncatedSeries g = random_series(2, 2, rng);
        auto xi = c.coordinate_field(1);
        std::vector<TruncatedSeries> gxi = xi;
        for (auto& comp : gxi) comp = comp * g;
        QMat lhs = first_differential(c, f, gxi);
        QMat rhs = qmat_scale(first_differential(c, f, xi), g.eval_at_zero());
        CHECK(lhs == rhs);
    }
}

TEST_CASE("second differential worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    auto xi = Connection(s, n, 3).coordinate_field(1);

    CHECK(second_differential(Connection(s, n, 3), f, xi, xi, 2).is_zero());

    // A = N, p = 2: numerator N^2 e1 = e3, denominator span {e1, e2}.
    Connection nc = nilpotent_connection(s, n);
    CosetMap d2 = second_differential(nc, f, xi, xi, 2);
    CHECK_FALSE(d2.is_zero());
    CHECK(d2.denominator().rank() == 2);
    QVec e1(3), e2(3), e3(3);
    e1[0] = GaussianRational(1);
    e2[1] = GaussianRational(1);
    e3[2] = GaussianRational(1);
    CHECK(d2.denominator().contains(e1));
    CHECK(d2.denominator().contains(e2));
    CHECK_FALSE(d2.denominator().contains(e3));
    CHECK(d2.numerator().col(0) == e3);
}

TEST_CASE("second differential is symmetric as a coset map") {
    for (uint64_t seed = 0; seed < 12; ++seed) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {2, 1, 1, 0};
        auto [f, c] = gen_flat_transversal(spec, seed);
        auto z = c.coordinate_field(1);
        auto x = c.coordinate_field(2);
        for (int p = f.min_level(); p <= f.max_level(); ++p)
            CHECK(second_differential(c, f, z, x, p) == second_differential(c, f, x, z, p));
    }
}

TEST_CASE("second fundamental form worked examples") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    auto xi = Connection(s, n, 3).coordinate_field(1);

    // Constant nilpotent: no degree-(-2) part survives.
    CHECK(second_fundamental_form(nilpotent_connection(s, n), f, xi, xi).is_zero());

    // A = N + tM with M of pure degree -2: the class of M.
    Connection c = nilpotent_plus_tm(s, n);
    CosetMap ii = second_fundamental_form(c, f, xi, xi);
    CHECK_FALSE(ii.is_zero());
    QMat m(3, 3);
    m(2, 0) = GaussianRational(1);
    QMat num((size_t)9, 1);
    num.set_col(0, flatten_endo(m));
    CosetMap expect(9, std::move(num), first_differential_image_span(c, f));
    CHECK(ii == expect);
}

TEST_CASE("second fundamental form is bilinear at 0") {
    GeneratorSpec spec;
    spec.s = 2;
    spec.n = 2;
    auto [f, c] = gen_flat_transversal(spec, 5);
    auto z = c.coordinate_field(1);
    auto x = c.coordinate_field(2);

    // zeta + zeta' against xi: compare with the sum of numerators.
    std::vector<TruncatedSeries> zsum = z;
    for (int l = 0; l < 2; ++l) zsum[l] += x[l];
    QMat lhs = second_fundamental_form(c, f, zsum, x).numerator();
    QMat rhs = second_fundamental_form(c, f, z, x).numerator() +
               second_fundamental_form(c, f, x, x).numerator();
    CHECK(lhs == rhs);
}

TEST_CASE("filtration shift bound") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    auto xi = Connection(s, n, 3).coordinate_field(1);
    CHECK(filtration_shift_check(Connection(s, n, 3), f, xi, xi).ok);
    CHECK(filtration_shift_check(nilpotent_connection(s, n), f, xi, xi).ok);

    for (uint64_t seed = 0; seed < 20; ++seed) {
        GeneratorSpec spec;
        spec.s = (seed % 2) ? 1 : 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {3, 2, 1, 0};
        auto [fm, c] = gen_flat_transversal(spec, seed);
        for (int k = 1; k <= spec.s; ++k)
            for (int l = 1; l <= spec.s; ++l)
                CHECK(filtration_shift_check(c, fm, c.coordinate_field(k), c.coordinate_field(l)).ok);
    }
}

TEST_CASE("second differential symmetry with function-coefficient fields") {
    // For tangent vectors with series coefficients the commutator term
    // lands in the denominator span, so symmetry still holds as cosets.
    std::mt19937_64 rng(77);
    for (uint64_t seed = 0; seed < 6; ++seed) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        spec.rank = 4;
        spec.levels = {2, 1, 1, 0};
        auto [f, c] = gen_flat_transversal(spec, seed);
        std::vector<TruncatedSeries> zeta{random_series(2, 2, rng), random_series(2, 2, rng)};
        std::vector<TruncatedSeries> xi{random_series(2, 2, rng), random_series(2, 2, rng)};
        for (int p = f.min_level(); p <= f.max_level(); ++p)
            CHECK(second_differential(c, f, zeta, xi, p) == second_differential(c, f, xi, zeta, p));
    }
}

TEST_CASE("degenerate filtration levels give vacuous blocks") {
    int s = 1, n = 2;
    FilteredModule f = three_levels(s, n);
    Connection nc = nilpotent_connection(s, n);
    auto xi = nc.coordinate_field(1);

    // Above the top level the domain is empty.
    CosetMap top = second_differential(nc, f, xi, xi, f.max_level() + 1);
    CHECK(top.domain_dim() == 0);
    CHECK(top.is_zero());

    // Below the bottom level the filtration is exhaustive.
    CosetMap bottom = second_differential(nc, f, xi, xi, f.min_level() - 3);
    CHECK(bottom.domain_dim() == 3);

    // All levels equal: every graded block off degree zero vanishes.
    FilteredModule flat({1, 1, 1}, 1, s, n);
    Connection any(s, n, 3);
    any.a[0](0, 1) = TruncatedSeries::variable(s, n, 1);
    any.a[0](2, 0) = cst(s, n, 5);
    CHECK(qmat_is_zero(first_differential(any, flat, xi)));
    CHECK(second_fundamental_form(any, flat, xi, xi).is_zero());
}

TEST_CASE("gauge covariance of the fiber invariants") {
    // For level-preserving g with g(0) = id: dPhi at 0 is unchanged and the
    // second-differential/second-form cosets are unchanged.
    std::mt19937_64 rng(31);
    for (uint64_t seed = 0; seed < 8; ++seed) {
        GeneratorSpec spec;
        spec.s = 2;
        spec.n = 2;
        spec.gauge = false;
        spec.rank = 4;
        spec.levels = {2, 1, 1, 0};  // repeated level so the gauge has room
        auto [f, c] = gen_flat_transversal(spec, seed);

        Connection cg = gauge_transform(c, random_unipotent_gauge(f, rng));
        REQUIRE(check_integrable(cg).ok);

        auto z = c.coordinate_field(1);
        auto x = c.coordinate_field(2);
        CHECK(first_differential(c, f, x) == first_differential(cg, f, x));
        for (int p = f.min_level(); p <= f.max_level(); ++p)
            CHECK(second_differential(c, f, z, x, p) == second_differential(cg, f, z, x, p));
        CHECK(second_fundamental_form(c, f, z, x) == second_fundamental_form(cg, f, z, x));
    }
}

TEST_CASE("preconditions raise typed errors") {
    int s = 2, n = 2;
    FilteredModule f = three_levels(s, n);
    Connection bad(s, n, 3);
    bad.a[0](1, 0) = cst(s, n, 1);
    bad.a[1](1, 0) = TruncatedSeries::variable(s, n, 1);
    auto xi = bad.coordinate_field(1);
    CHECK_THROWS_AS(second_differential(bad, f, xi, xi, 2), NotFlat);

    Connection nontrans(1, 2, 3);
    nontrans.a[0](2, 0) = cst(1, 2, 1);
    FilteredModule f1 = three_levels(1, 2);
    auto xi1 = nontrans.coordinate_field(1);
    CHECK_THROWS_AS(first_differential(nontrans, f1, xi1), NotTransversal);
}
