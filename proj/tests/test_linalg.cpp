#include "doctest.h"

#include <random>

#include "periodmap/linalg.hpp"

using namespace periodmap;

namespace {

QMat random_qmat(size_t r, size_t c, std::mt19937& rng) {
    QMat m(r, c);
    std::uniform_int_distribution<int> num(-4, 4);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = GaussianRational::from_parts(num(rng), 1, num(rng), 2);
    return m;
}

}  // namespace

TEST_CASE("rank and kernel dimensions agree") {
    std::mt19937 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
        QMat m = random_qmat(r, c, rng);
        size_t rk = rank(m);
        auto ker = kernel_basis(m);
        CHECK(rk + ker.size() == c);
        for (const auto& v : ker) {
            QVec image = m * v;
            for (const auto& q : image) CHECK(q.is_zero());
        }
    }
}

TEST_CASE("solve_linear finds consistent solutions and rejects inconsistent ones") {
    std::mt19937 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        size_t r = 2 + rng() % 4, c = 1 + rng() % 4;
        QMat m = random_qmat(r, c, rng);
        QVec x0(c);
        for (auto& q : x0) q = GaussianRational((long)(rng() % 7) - 3);
        QVec b = m * x0;
        auto x = solve_linear(m, b);
        REQUIRE(x.has_value());
        QVec back = m * *x;
        for (size_t i = 0; i < r; ++i) CHECK(back[i] == b[i]);
    }

    QMat m(2, 1);
    m(0, 0) = GaussianRational(1);
    m(1, 0) = GaussianRational(1);
    QVec b = {GaussianRational(1), GaussianRational(2)};
    CHECK_FALSE(solve_linear(m, b).has_value());
}

TEST_CASE("SpanReducer canonical reduction") {
    SpanReducer span(3);
    CHECK(span.insert({GaussianRational(1), GaussianRational(2), GaussianRational(0)}));
    CHECK(span.insert({GaussianRational(0), GaussianRational(1), GaussianRational(1)}));
    CHECK_FALSE(span.insert({GaussianRational(2), GaussianRational(5), GaussianRational(1)}));
    CHECK(span.rank() == 2);
    CHECK(span.contains({GaussianRational(1), GaussianRational(3), GaussianRational(1)}));
    CHECK_FALSE(span.contains({GaussianRational(0), GaussianRational(0), GaussianRational(1)}));

    SpanReducer other(3);
    other.insert({GaussianRational(1), GaussianRational(3), GaussianRational(1)});
    other.insert({GaussianRational(1), GaussianRational(2), GaussianRational(0)});
    CHECK(span.same_span(other));
}

TEST_CASE("flattened series solve round-trips") {
    std::mt19937 rng(3);
    int s = 2, n = 2;
    for (int trial = 0; trial < 10; ++trial) {
        size_t dim = 2 + rng() % 3;
        SMat a = smat_zero(dim, dim, s, n);
        std::uniform_int_distribution<int> num(-2, 2);
        for (size_t i = 0; i < dim; ++i)
            for (size_t j = 0; j < dim; ++j) {
                TruncatedSeries f(s, n);
                f.set_coeff({0, 0}, GaussianRational(num(rng)));
                f.set_coeff({1, 0}, GaussianRational(num(rng)));
                f.set_coeff({0, 1}, GaussianRational::from_parts(num(rng), 2, 0, 1));
                a(i, j) = f;
            }
        std::vector<TruncatedSeries> x0;
        for (size_t j = 0; j < dim; ++j) {
            TruncatedSeries f(s, n);
            f.set_coeff({0, 0}, GaussianRational(num(rng)));
            f.set_coeff({1, 1}, GaussianRational(num(rng)));
            x0.push_back(f);
        }
        auto b = smat_apply(a, x0);
        auto x = solve_series(a, b);
        REQUIRE(x.has_value());
        auto back = smat_apply(a, *x);
        for (size_t i = 0; i < dim; ++i) CHECK(back[i] == b[i]);
    }
}

TEST_CASE("series matrix inverse") {
    std::mt19937 rng(4);
    int s = 1, n = 3;
    SMat g = smat_identity(3, s, n);
    TruncatedSeries t = TruncatedSeries::variable(s, n, 1);
    g(0, 1) = t.scalar_mul(GaussianRational(2));
    g(1, 2) = t * t;
    g(2, 2) = TruncatedSeries::constant(s, n, GaussianRational(mpq_class(1, 2))) + t;
    SMat gi = smat_inverse(g);
    CHECK(g * gi == smat_identity(3, s, n));
    CHECK(gi * g == smat_identity(3, s, n));
    (void)rng;
}
