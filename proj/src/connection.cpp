#include "periodmap/connection.hpp"

namespace periodmap {

SMat Connection::contract(const std::vector<TruncatedSeries>& xi) const {
    if ((int)xi.size() != s) throw std::invalid_argument("tangent vector arity");
    SMat m = smat_zero(rank, rank, s, n);
    for (int l = 0; l < s; ++l) {
        if (xi[l].is_zero()) continue;
        m = m + smat_scale(a[l], xi[l]);
    }
    return m;
}

std::vector<TruncatedSeries> Connection::coordinate_field(int l) const {
    if (l < 1 || l > s) throw std::out_of_range("coordinate field index");
    std::vector<TruncatedSeries> xi(s, TruncatedSeries(s, n));
    xi[l - 1] = TruncatedSeries::constant(s, n, GaussianRational(1));
    return xi;
}

FlatnessCertificate check_integrable(const Connection& c) {
    FlatnessCertificate cert;
    for (int k = 0; k < c.s; ++k)
        for (int l = k + 1; l < c.s; ++l) {
            SMat res = smat_partial(c.a[l], k + 1) - smat_partial(c.a[k], l + 1) +
                       smat_commutator(c.a[k], c.a[l]);
            if (!smat_is_zero(res)) {
                cert.ok = false;
                cert.k = k + 1;
                cert.l = l + 1;
                cert.residual = res;
                return cert;
            }
        }
    return cert;
}

TransversalityCertificate check_transversal(const Connection& c, const FilteredModule& f) {
    TransversalityCertificate cert;
    if (f.rank != c.rank) throw std::invalid_argument("module rank differs from connection rank");
    for (int l = 0; l < c.s; ++l)
        for (int b = 0; b < c.rank; ++b)
            for (int a = 0; a < c.rank; ++a) {
                if (f.levels[a] - f.levels[b] < 2) continue;
                const TruncatedSeries& entry = c.a[l](b, a);
                if (entry.is_zero()) continue;
                if (cert.ok_identically) {
                    cert.ok_identically = false;
                    cert.row = b;
                    cert.col = a;
                    cert.var = l + 1;
                }
                if (!entry.eval_at_zero().is_zero()) {
                    cert.ok_at_fiber = false;
                    cert.row = b;
                    cert.col = a;
                    cert.var = l + 1;
                    return cert;
                }
            }
    return cert;
}

std::vector<TruncatedSeries> covariant_derivative(const Connection& c,
                                                  const std::vector<TruncatedSeries>& xi,
                                                  const std::vector<TruncatedSeries>& x) {
    if ((int)x.size() != c.rank) throw std::invalid_argument("element rank");
    for (const auto& f : x)
        if (f.num_vars() != c.s || f.trunc_order() != c.n)
            throw MismatchedRing("element not over the connection's ring");
    std::vector<TruncatedSeries> out(c.rank, TruncatedSeries(c.s, c.n));
    for (int l = 0; l < c.s; ++l) {
        if (xi[l].is_zero()) continue;
        std::vector<TruncatedSeries> term(c.rank, TruncatedSeries(c.s, c.n));
        for (int i = 0; i < c.rank; ++i) term[i] = x[i].partial(l + 1);
        auto ax = smat_apply(c.a[l], x);
        for (int i = 0; i < c.rank; ++i) out[i] += xi[l] * (term[i] + ax[i]);
    }
    return out;
}

Connection end_connection(const Connection& c) {
    int r = c.rank;
    Connection e(c.s, c.n, r * r);
    for (int l = 0; l < c.s; ++l) {
        const SMat& a = c.a[l];
        SMat k = smat_zero((size_t)r * r, (size_t)r * r, c.s, c.n);
        for (int u = 0; u < r; ++u)
            for (int v = 0; v < r; ++v) {
                size_t row = (size_t)u * r + v;
                for (int x = 0; x < r; ++x) {
                    // (A B)_{uv} takes B_{xv} with weight A_{ux}
                    k(row, (size_t)x * r + v) += a(u, x);
                    // (B A)_{uv} takes B_{ux} with weight A_{xv}
                    k(row, (size_t)u * r + x) -= a(x, v);
                }
            }
        e.a[l] = std::move(k);
    }
    return e;
}

FilteredModule end_module(const FilteredModule& f) {
    std::vector<int> levels((size_t)f.rank * f.rank);
    for (int u = 0; u < f.rank; ++u)
        for (int v = 0; v < f.rank; ++v) levels[(size_t)u * f.rank + v] = f.levels[u] - f.levels[v];
    return FilteredModule(std::move(levels), 0, f.s, f.n);
}

QVec flatten_endo(const QMat& b) {
    QVec v(b.rows() * b.cols());
    for (size_t u = 0; u < b.rows(); ++u)
        for (size_t w = 0; w < b.cols(); ++w) v[u * b.cols() + w] = b(u, w);
    return v;
}

QMat unflatten_endo(const QVec& v, size_t r) {
    if (v.size() != r * r) throw std::invalid_argument("unflatten_endo size");
    QMat b(r, r);
    for (size_t u = 0; u < r; ++u)
        for (size_t w = 0; w < r; ++w) b(u, w) = v[u * r + w];
    return b;
}

}  // namespace periodmap
