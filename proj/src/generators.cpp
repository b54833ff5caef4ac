#include "periodmap/generators.hpp"

namespace periodmap {

GaussianRational random_rational(std::mt19937_64& rng, int max_num, bool gaussian) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, 2);
    long re_n = num(rng), re_d = den(rng);
    long im_n = gaussian ? num(rng) : 0, im_d = den(rng);
    return GaussianRational::from_parts(re_n, re_d, im_n, im_d);
}

TruncatedSeries random_series(int s, int n, std::mt19937_64& rng, int max_num) {
    TruncatedSeries f(s, n);
    std::function<void(MultiIndex&, int, int)> walk = [&](MultiIndex& m, int pos, int rem) {
        if (pos == s) {
            f.add_coeff(m, random_rational(rng, max_num));
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            m[pos] = e;
            walk(m, pos + 1, rem - e);
        }
        m[pos] = 0;
    };
    MultiIndex m(s, 0);
    walk(m, 0, n);
    return f;
}

namespace {

/* Canonical degree-(-1) nilpotent along the level flag: basis vectors at
 * level p map onto the basis vectors at the next occupied level p' < p
 * (only when p' = p - 1; a gap of two kills the entry, keeping degree -1). */
SMat flag_nilpotent(const FilteredModule& f) {
    SMat n = smat_zero(f.rank, f.rank, f.s, f.n);
    for (int a = 0; a < f.rank; ++a)
        for (int b = 0; b < f.rank; ++b)
            if (f.levels[b] == f.levels[a] - 1) {
                n(b, a) = TruncatedSeries::constant(f.s, f.n, GaussianRational(1));
                break;  // one target per source keeps the pattern sparse
            }
    return n;
}

}  // namespace

SMat random_unipotent_gauge(const FilteredModule& f, std::mt19937_64& rng) {
    /* g = id + n with n level-preserving, n(0) = 0 and n^2 = 0 (sources are
     * restricted to the first basis vector of each level), entries linear in
     * t.  The transformed connection is then an honest polynomial of degree
     * <= 2, so flatness survives truncation exactly for N >= 2.  Generic
     * series gauges would leak curvature into the top jet degree. */
    SMat g = smat_identity(f.rank, f.s, f.n);
    std::vector<int> first_of_level(f.rank, -1);
    for (int a = 0; a < f.rank; ++a) {
        int first = a;
        for (int b = 0; b < a; ++b)
            if (f.levels[b] == f.levels[a]) {
                first = b;
                break;
            }
        first_of_level[a] = first;
    }
    for (int b = 0; b < f.rank; ++b) {
        int a = first_of_level[b];
        if (a == b) continue;
        TruncatedSeries lin(f.s, f.n);
        for (int k = 1; k <= f.s; ++k) {
            MultiIndex m(f.s, 0);
            m[k - 1] = 1;
            lin.set_coeff(m, random_rational(rng, 2));
        }
        g(b, a) = lin;
    }
    return g;
}

GeneratedInstance gen_flat_transversal(const GeneratorSpec& spec, uint64_t seed) {
    if (spec.non_commuting)
        throw SpecInfeasible("constant matrices for s >= 2 must commute");
    if ((int)spec.levels.size() != spec.rank) throw std::invalid_argument("levels/rank mismatch");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

    FilteredModule f(spec.levels, spec.weight, spec.s, spec.n);
    Connection c(spec.s, spec.n, spec.rank);

    if (spec.s == 1) {
        /* Single-variable connections carry no curvature condition, but the
         * frame with a constant splitting is faithful to the graded-quotient
         * statements only when the degree-(-1) part moves inside the image of
         * one nilpotent: take A = c(t) N + d(t) id + U(t) with c a unit, N
         * the flag nilpotent and U strictly level-raising.  Arbitrary
         * degree >= -1 matrices (e.g. A = t N) break the factorization of
         * the second differential through its graded block. */
        SMat nil1 = flag_nilpotent(f);
        TruncatedSeries cu = spec.t_dependent ? random_series(spec.s, spec.n, rng, 2)
                                              : TruncatedSeries::constant(spec.s, spec.n,
                                                                          random_rational(rng, 2));
        if (!cu.is_unit()) cu += TruncatedSeries::constant(spec.s, spec.n, GaussianRational(1));
        if (!cu.is_unit()) cu += TruncatedSeries::constant(spec.s, spec.n, GaussianRational(1));
        TruncatedSeries du = spec.t_dependent ? random_series(spec.s, spec.n, rng, 2)
                                              : TruncatedSeries::constant(spec.s, spec.n,
                                                                          random_rational(rng, 2));
        c.a[0] = smat_scale(nil1, cu) + smat_scale(smat_identity(f.rank, spec.s, spec.n), du);
        for (int b = 0; b < f.rank; ++b)
            for (int a = 0; a < f.rank; ++a)
                if (f.entry_degree(b, a) >= 1)
                    c.a[0](b, a) = spec.t_dependent
                                       ? random_series(spec.s, spec.n, rng, 2)
                                       : TruncatedSeries::constant(spec.s, spec.n,
                                                                   random_rational(rng, 2));
        return {f, c};
    }

    SMat nil = flag_nilpotent(f);
    for (int l = 0; l < spec.s; ++l) {
        GaussianRational cl = random_rational(rng, 2);
        if (cl.is_zero()) cl = GaussianRational(1);
        c.a[l] = smat_scale(nil, TruncatedSeries::constant(spec.s, spec.n, cl));
    }

    if (spec.gauge && spec.n >= 2) {
        Connection gauged = gauge_transform(c, random_unipotent_gauge(f, rng));
        return {f, gauged};
    }
    return {f, c};
}

}  // namespace periodmap
