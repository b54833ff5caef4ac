#include "periodmap/period_maps.hpp"

#include <set>

namespace periodmap {

QMat graded_block(const QMat& m, const FilteredModule& f, int degree) {
    QMat r(m.rows(), m.cols());
    for (size_t b = 0; b < m.rows(); ++b)
        for (size_t a = 0; a < m.cols(); ++a)
            if (f.entry_degree((int)b, (int)a) == degree) r(b, a) = m(b, a);
    return r;
}

SMat graded_block_series(const SMat& m, const FilteredModule& f, int degree) {
    SMat r = m;
    for (size_t b = 0; b < m.rows(); ++b)
        for (size_t a = 0; a < m.cols(); ++a)
            if (f.entry_degree((int)b, (int)a) != degree) r(b, a) = TruncatedSeries(f.s, f.n);
    return r;
}

std::vector<int> occurring_degrees(const FilteredModule& f) {
    std::set<int> degs;
    for (int b = 0; b < f.rank; ++b)
        for (int a = 0; a < f.rank; ++a) degs.insert(f.entry_degree(b, a));
    return std::vector<int>(degs.begin(), degs.end());
}

void require_flat(const Connection& c) {
    FlatnessCertificate cert = check_integrable(c);
    if (!cert.ok)
        throw NotFlat("curvature does not vanish for the pair (" + std::to_string(cert.k) + "," +
                      std::to_string(cert.l) + ")");
}

void require_fiber_transversal(const Connection& c, const FilteredModule& f) {
    TransversalityCertificate cert = check_transversal(c, f);
    if (!cert.ok_at_fiber)
        throw NotTransversal("entry (" + std::to_string(cert.row) + "," + std::to_string(cert.col) +
                             ") of A_" + std::to_string(cert.var) + " drops level by >= 2 at t = 0");
}

QMat first_differential(const Connection& c, const FilteredModule& f,
                        const std::vector<TruncatedSeries>& xi) {
    require_fiber_transversal(c, f);
    return graded_block(smat_at_zero(c.contract(xi)), f, -1);
}

SMat first_differential_series(const Connection& c, const FilteredModule& f,
                               const std::vector<TruncatedSeries>& xi) {
    require_fiber_transversal(c, f);
    return graded_block_series(c.contract(xi), f, -1);
}

std::vector<QVec> first_differential_image_span(const Connection& c, const FilteredModule& f) {
    std::vector<QVec> span;
    for (int l = 1; l <= c.s; ++l) {
        QMat d = graded_block(smat_at_zero(c.a[l - 1]), f, -1);
        for (int deg : occurring_degrees(f)) {
            QMat comp = graded_block(d, f, deg);
            if (!qmat_is_zero(comp)) span.push_back(flatten_endo(comp));
        }
    }
    return span;
}

SMat second_derivative_series(const Connection& c, const std::vector<TruncatedSeries>& zeta,
                              const std::vector<TruncatedSeries>& xi) {
    SMat axi = c.contract(xi);
    SMat m = smat_zero(c.rank, c.rank, c.s, c.n);
    for (int k = 0; k < c.s; ++k) {
        if (zeta[k].is_zero()) continue;
        m = m + smat_scale(smat_partial(axi, k + 1), zeta[k]);
    }
    return m + c.contract(zeta) * axi;
}

CosetMap second_differential(const Connection& c, const FilteredModule& f,
                             const std::vector<TruncatedSeries>& zeta,
                             const std::vector<TruncatedSeries>& xi, int p) {
    require_flat(c);
    require_fiber_transversal(c, f);

    QMat full = smat_at_zero(second_derivative_series(c, zeta, xi));
    std::vector<int> dom = f.filtration_basis(p);
    QMat num((size_t)c.rank, dom.size());
    for (size_t j = 0; j < dom.size(); ++j) num.set_col(j, full.col(dom[j]));

    /* Fiber of F^p + span{nabla_eta(F^p) : all eta} at 0: apply nabla_{d/dt_l}
     * to f * e_a over every monomial f of degree <= N and take constant terms.
     * Only f = 1 and f = t_l survive evaluation, but we walk the full list the
     * contract promises. */
    std::vector<QVec> den;
    for (int a : dom) {
        QVec e((size_t)c.rank);
        e[a] = GaussianRational(1);
        den.push_back(e);
    }
    FlattenedRing ring(c.s, c.n);
    for (int l = 1; l <= c.s; ++l) {
        QMat a0 = smat_at_zero(c.a[l - 1]);
        for (const MultiIndex& m : ring.monomials()) {
            TruncatedSeries mono(c.s, c.n);
            mono.set_coeff(m, GaussianRational(1));
            GaussianRational dmono = mono.partial(l).eval_at_zero();
            GaussianRational mono0 = mono.eval_at_zero();
            if (dmono.is_zero() && mono0.is_zero()) continue;
            for (int a : dom) {
                QVec v((size_t)c.rank);
                v[a] = dmono;
                if (!mono0.is_zero())
                    for (int b = 0; b < c.rank; ++b) v[b] += mono0 * a0(b, a);
                den.push_back(std::move(v));
            }
        }
    }
    return CosetMap((size_t)c.rank, std::move(num), std::move(den));
}

SMat derivative_of_first_differential(const Connection& c, const FilteredModule& f,
                                      const std::vector<TruncatedSeries>& zeta,
                                      const std::vector<TruncatedSeries>& xi) {
    SMat axi = c.contract(xi);
    SMat block = graded_block_series(axi, f, -1);
    SMat w = smat_zero(c.rank, c.rank, c.s, c.n);
    for (int k = 0; k < c.s; ++k) {
        if (zeta[k].is_zero()) continue;
        SMat term = smat_partial(axi, k + 1) + smat_commutator(c.a[k], block);
        w = w + smat_scale(term, zeta[k]);
    }
    return w;
}

CosetMap second_fundamental_form(const Connection& c, const FilteredModule& f,
                                 const std::vector<TruncatedSeries>& zeta,
                                 const std::vector<TruncatedSeries>& xi) {
    require_flat(c);
    require_fiber_transversal(c, f);
    SMat w = derivative_of_first_differential(c, f, zeta, xi);
    QMat block = graded_block(smat_at_zero(w), f, -2);
    QMat num((size_t)c.rank * c.rank, 1);
    num.set_col(0, flatten_endo(block));
    return CosetMap((size_t)c.rank * c.rank, std::move(num), first_differential_image_span(c, f));
}

ShiftCertificate filtration_shift_check(const Connection& c, const FilteredModule& f,
                                        const std::vector<TruncatedSeries>& zeta,
                                        const std::vector<TruncatedSeries>& xi) {
    ShiftCertificate cert;
    SMat w = derivative_of_first_differential(c, f, zeta, xi);
    for (int deg : occurring_degrees(f)) {
        if (deg >= -2) continue;
        if (!smat_is_zero(graded_block_series(w, f, deg))) {
            cert.ok = false;
            cert.offending_degree = deg;
            return cert;
        }
    }
    return cert;
}

Connection gauge_transform(const Connection& c, const SMat& g) {
    SMat gi = smat_inverse(g);
    Connection out(c.s, c.n, c.rank);
    for (int l = 0; l < c.s; ++l) out.a[l] = gi * c.a[l] * g + gi * smat_partial(g, l + 1);
    return out;
}

}  // namespace periodmap
