#include "periodmap/archimedean.hpp"

#include <algorithm>

namespace periodmap {

bool ar_coords_zero(const std::vector<TruncatedSeries>& v) {
    for (const auto& f : v)
        if (!f.is_zero()) return false;
    return true;
}

ArElement ar_term(int t_exp, std::vector<TruncatedSeries> coords) {
    ArElement y;
    y.set(t_exp, std::move(coords), ar_coords_zero);
    return y;
}

ArElement ar_add(const ArElement& a, const ArElement& b, int rank, int s, int n) {
    ArElement out = a;
    for (const auto& [j, v] : b.terms()) {
        std::vector<TruncatedSeries> sum = out.term(j) ? *out.term(j)
                                                       : std::vector<TruncatedSeries>(rank, TruncatedSeries(s, n));
        for (int i = 0; i < rank; ++i) sum[i] += v[i];
        out.set(j, std::move(sum), ar_coords_zero);
    }
    return out;
}

std::vector<std::pair<int, int>> ArModule::har_basis() const {
    std::vector<std::pair<int, int>> out;
    for (int j = window_min; j <= window_max; ++j)
        for (int a = 0; a < base.rank; ++a)
            if (j <= base.levels[a]) out.emplace_back(a, j);
    return out;
}

bool in_f_ar(const FilteredModule& f, const ArElement& y, int k) {
    for (const auto& [j, v] : y.terms())
        for (int a = 0; a < f.rank; ++a)
            if (!v[a].is_zero() && j > f.levels[a] - k) return false;
    return true;
}

ArElement nabla_ar(const Connection& c, const FilteredModule& f,
                   const std::vector<TruncatedSeries>& xi, const ArElement& y) {
    (void)f;
    ArElement out;
    for (const auto& [j, v] : y.terms()) out.set(j, covariant_derivative(c, xi, v), ar_coords_zero);
    return out;
}

std::vector<TruncatedSeries> drop_t(const FilteredModule& f, const ArElement& y, int k) {
    std::vector<TruncatedSeries> out(f.rank, TruncatedSeries(f.s, f.n));
    for (const auto& [j, v] : y.terms())
        for (int a = 0; a < f.rank; ++a) {
            if (v[a].is_zero()) continue;
            if (f.levels[a] != k + j)
                throw NotHomogeneous("term T^" + std::to_string(j) + " component at level " +
                                     std::to_string(f.levels[a]) + " is not in Gr^" + std::to_string(k));
            out[a] += v[a];
        }
    return out;
}

ArElement insert_t(const FilteredModule& f, const std::vector<TruncatedSeries>& x, int k) {
    ArElement out;
    for (int a = 0; a < f.rank; ++a) {
        if (x[a].is_zero()) continue;
        int j = f.levels[a] - k;
        std::vector<TruncatedSeries> v = out.term(j) ? *out.term(j)
                                                     : std::vector<TruncatedSeries>(f.rank, TruncatedSeries(f.s, f.n));
        v[a] += x[a];
        out.set(j, std::move(v), ar_coords_zero);
    }
    return out;
}

namespace {

std::vector<QVec> f_ar_zero_window_fiber(const ArModule& m) {
    std::vector<QVec> den;
    for (int j = m.window_min; j <= m.window_max; ++j)
        for (int b = 0; b < m.base.rank; ++b) {
            if (j > m.base.levels[b]) continue;  // outside F_ar^0
            QVec v(m.dim());
            v[m.index(b, j)] = GaussianRational(1);
            den.push_back(std::move(v));
        }
    return den;
}

}  // namespace

CosetMap d_psi(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& xi) {
    require_fiber_transversal(c, m.base);
    QMat a0 = smat_at_zero(c.contract(xi));
    auto basis = m.har_basis();
    QMat num(m.dim(), basis.size());
    for (size_t col = 0; col < basis.size(); ++col) {
        auto [a, j] = basis[col];
        QVec v(m.dim());
        for (int b = 0; b < m.base.rank; ++b)
            if (!a0(b, a).is_zero()) v[m.index(b, j)] = a0(b, a);
        num.set_col(col, v);
    }
    return CosetMap(m.dim(), std::move(num), f_ar_zero_window_fiber(m));
}

QMat d_psi_bar(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& xi) {
    require_fiber_transversal(c, m.base);
    const FilteredModule& f = m.base;
    QMat out(f.rank, f.rank);
    for (int a = 0; a < f.rank; ++a) {
        // Through the Laurent machinery: insert T's at Gr^0, differentiate,
        // reduce mod F_ar^0, drop T's at Gr^{-1}.
        std::vector<TruncatedSeries> e(f.rank, TruncatedSeries(f.s, f.n));
        e[a] = TruncatedSeries::constant(f.s, f.n, GaussianRational(1));
        ArElement y = insert_t(f, e, 0);
        ArElement dy = nabla_ar(c, f, xi, y);
        // Evaluate at the fiber and reduce modulo F_ar^0.
        ArElement reduced;
        for (const auto& [j, v] : dy.terms()) {
            std::vector<TruncatedSeries> w(f.rank, TruncatedSeries(f.s, f.n));
            for (int b = 0; b < f.rank; ++b) {
                if (j <= f.levels[b]) continue;  // lies in F_ar^0
                GaussianRational q = v[b].eval_at_zero();
                if (!q.is_zero()) w[b] = TruncatedSeries::constant(f.s, f.n, q);
            }
            if (!ar_coords_zero(w)) reduced.set(j, std::move(w), ar_coords_zero);
        }
        std::vector<TruncatedSeries> dropped = drop_t(f, reduced, -1);
        for (int b = 0; b < f.rank; ++b) out(b, a) = dropped[b].eval_at_zero();
    }
    return out;
}

CosetMap d2_psi(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& zeta,
                const std::vector<TruncatedSeries>& xi) {
    require_flat(c);
    require_fiber_transversal(c, m.base);
    const FilteredModule& f = m.base;
    QMat m2 = smat_at_zero(second_derivative_series(c, zeta, xi));

    auto basis = m.har_basis();
    QMat num(m.dim(), basis.size());
    for (size_t col = 0; col < basis.size(); ++col) {
        auto [a, j] = basis[col];
        QVec v(m.dim());
        for (int b = 0; b < f.rank; ++b)
            if (!m2(b, a).is_zero()) v[m.index(b, j)] = m2(b, a);
        num.set_col(col, v);
    }

    std::vector<QVec> den = f_ar_zero_window_fiber(m);
    FlattenedRing ring(f.s, f.n);
    for (int l = 1; l <= c.s; ++l) {
        QMat a0 = smat_at_zero(c.a[l - 1]);
        for (const MultiIndex& mono_idx : ring.monomials()) {
            TruncatedSeries mono(f.s, f.n);
            mono.set_coeff(mono_idx, GaussianRational(1));
            GaussianRational dmono = mono.partial(l).eval_at_zero();
            GaussianRational mono0 = mono.eval_at_zero();
            if (dmono.is_zero() && mono0.is_zero()) continue;
            for (auto [a, j] : basis) {
                QVec v(m.dim());
                v[m.index(a, j)] += dmono;
                if (!mono0.is_zero())
                    for (int b = 0; b < f.rank; ++b)
                        if (!a0(b, a).is_zero()) v[m.index(b, j)] += mono0 * a0(b, a);
                if (!std::all_of(v.begin(), v.end(),
                                 [](const GaussianRational& q) { return q.is_zero(); }))
                    den.push_back(std::move(v));
            }
        }
    }
    return CosetMap(m.dim(), std::move(num), std::move(den));
}

QMat d2_psi_bar(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& zeta,
                const std::vector<TruncatedSeries>& xi) {
    require_flat(c);
    require_fiber_transversal(c, m.base);
    return graded_block(smat_at_zero(second_derivative_series(c, zeta, xi)), m.base, -2);
}

CongruenceCertificate second_form_congruence_check(const ArModule& m, const Connection& c,
                                                   const std::vector<TruncatedSeries>& zeta,
                                                   const std::vector<TruncatedSeries>& xi) {
    const FilteredModule& f = m.base;
    CosetMap lhs = second_fundamental_form(c, f, zeta, xi);

    QMat rhs_mat = d2_psi_bar(m, c, zeta, xi) - d_psi_bar(m, c, zeta) * d_psi_bar(m, c, xi);
    QMat rhs_num((size_t)f.rank * f.rank, 1);
    rhs_num.set_col(0, flatten_endo(rhs_mat));
    CosetMap rhs((size_t)f.rank * f.rank, std::move(rhs_num), first_differential_image_span(c, f));

    CongruenceCertificate cert;
    cert.ok = (lhs == rhs);
    cert.lhs = unflatten_endo(lhs.reduced_numerator().col(0), f.rank);
    cert.rhs = unflatten_endo(rhs.reduced_numerator().col(0), f.rank);
    return cert;
}

bool second_differential_factors_through_graded(const Connection& c, const FilteredModule& f,
                                                const std::vector<TruncatedSeries>& zeta,
                                                const std::vector<TruncatedSeries>& xi) {
    QMat block = graded_block(smat_at_zero(second_derivative_series(c, zeta, xi)), f, -2);
    for (int p = f.min_level(); p <= f.max_level(); ++p) {
        CosetMap full = second_differential(c, f, zeta, xi, p);
        std::vector<int> dom = f.filtration_basis(p);
        QMat num((size_t)f.rank, dom.size());
        for (size_t j = 0; j < dom.size(); ++j) num.set_col(j, block.col(dom[j]));
        CosetMap graded((size_t)f.rank, std::move(num), full.denominator_vectors());
        if (full != graded) return false;
    }
    return true;
}

}  // namespace periodmap
