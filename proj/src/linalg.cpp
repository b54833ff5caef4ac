#include "periodmap/linalg.hpp"

#include <algorithm>
#include <functional>

namespace periodmap {

std::vector<size_t> rref_in_place(QMat& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t piv = row;
        while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
        GaussianRational d = m(row, col).inverse();
        for (size_t j = col; j < m.cols(); ++j) m(row, j) *= d;
        for (size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col).is_zero()) continue;
            GaussianRational f = m(r, col);
            for (size_t j = col; j < m.cols(); ++j) m(r, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

size_t rank(QMat m) { return rref_in_place(m).size(); }

std::vector<QVec> kernel_basis(const QMat& m_in) {
    QMat m = m_in;
    std::vector<size_t> pivots = rref_in_place(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (size_t p : pivots) is_pivot[p] = true;

    std::vector<QVec> basis;
    for (size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        QVec v(m.cols());
        v[free_col] = GaussianRational(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVec> solve_linear(const QMat& m, const QVec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve_linear shape");
    QMat aug(m.rows(), m.cols() + 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    std::vector<size_t> pivots = rref_in_place(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;  // inconsistent
    QVec x(m.cols());
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
    return x;
}

QVec SpanReducer::reduce(QVec v) const {
    if (v.size() != dim_) throw std::invalid_argument("SpanReducer dimension");
    for (const auto& [p, w] : basis_) {
        if (v[p].is_zero()) continue;
        GaussianRational f = v[p];
        for (size_t j = p; j < dim_; ++j)
            if (!w[j].is_zero()) v[j] -= f * w[j];
    }
    return v;
}

bool SpanReducer::contains(const QVec& v) const {
    QVec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const GaussianRational& q) { return q.is_zero(); });
}

bool SpanReducer::insert(QVec v) {
    v = reduce(std::move(v));
    size_t p = 0;
    while (p < dim_ && v[p].is_zero()) ++p;
    if (p == dim_) return false;
    GaussianRational d = v[p].inverse();
    for (size_t j = p; j < dim_; ++j) v[j] *= d;
    // Back-substitute into existing rows so reduction stays canonical.
    for (auto& [q, w] : basis_) {
        if (w[p].is_zero()) continue;
        GaussianRational f = w[p];
        for (size_t j = p; j < dim_; ++j) w[j] -= f * v[j];
    }
    auto pos = std::lower_bound(basis_.begin(), basis_.end(), p,
                                [](const auto& row, size_t key) { return row.first < key; });
    basis_.insert(pos, {p, std::move(v)});
    return true;
}

bool SpanReducer::same_span(const SpanReducer& other) const {
    if (dim_ != other.dim_ || basis_.size() != other.basis_.size()) return false;
    for (const auto& [p, w] : basis_)
        if (!other.contains(w)) return false;
    return true;
}

FlattenedRing::FlattenedRing(int s, int n) : s_(s), n_(n) {
    // Enumerate all monomials of total degree <= n in graded-lex order.
    MultiIndex cur(s, 0);
    std::function<void(int, int)> gen = [&](int pos, int remaining) {
        if (pos == s) {
            monomials_.push_back(cur);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            cur[pos] = e;
            gen(pos + 1, remaining - e);
        }
        cur[pos] = 0;
    };
    if (s == 0)
        monomials_.push_back(MultiIndex{});
    else
        gen(0, n);
    for (size_t i = 0; i < monomials_.size(); ++i) index_[monomials_[i]] = i;
}

size_t FlattenedRing::monomial_index(const MultiIndex& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw std::out_of_range("monomial outside ring");
    return it->second;
}

QMat FlattenedRing::flatten_matrix(const SMat& a) const {
    size_t nm = monomials_.size();
    QMat out(a.rows() * nm, a.cols() * nm);
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            const TruncatedSeries& f = a(i, j);
            if (f.is_zero()) continue;
            // Multiplication by f sends monomial m to sum over f's monomials.
            for (size_t mj = 0; mj < nm; ++mj) {
                const MultiIndex& m = monomials_[mj];
                int dm = total_degree(m);
                for (const auto& [fm, fc] : f.coefficients()) {
                    if (dm + total_degree(fm) > n_) continue;
                    MultiIndex sum = m;
                    for (int v = 0; v < s_; ++v) sum[v] += fm[v];
                    out(i * nm + index_.at(sum), j * nm + mj) += fc;
                }
            }
        }
    return out;
}

QVec FlattenedRing::flatten_vector(const std::vector<TruncatedSeries>& v) const {
    size_t nm = monomials_.size();
    QVec out(v.size() * nm);
    for (size_t i = 0; i < v.size(); ++i)
        for (const auto& [m, c] : v[i].coefficients()) out[i * nm + index_.at(m)] = c;
    return out;
}

std::vector<TruncatedSeries> FlattenedRing::unflatten_vector(const QVec& v, size_t module_rank) const {
    size_t nm = monomials_.size();
    if (v.size() != module_rank * nm) throw std::invalid_argument("unflatten shape");
    std::vector<TruncatedSeries> out(module_rank, TruncatedSeries(s_, n_));
    for (size_t i = 0; i < module_rank; ++i)
        for (size_t mj = 0; mj < nm; ++mj)
            if (!v[i * nm + mj].is_zero()) out[i].set_coeff(monomials_[mj], v[i * nm + mj]);
    return out;
}

std::optional<std::vector<TruncatedSeries>> solve_series(const SMat& a,
                                                         const std::vector<TruncatedSeries>& b) {
    if (a.empty()) throw std::invalid_argument("solve_series empty");
    int s = a(0, 0).num_vars(), n = a(0, 0).trunc_order();
    FlattenedRing ring(s, n);
    auto x = solve_linear(ring.flatten_matrix(a), ring.flatten_vector(b));
    if (!x) return std::nullopt;
    return ring.unflatten_vector(*x, a.cols());
}

}  // namespace periodmap
