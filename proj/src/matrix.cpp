#include "periodmap/matrix.hpp"

namespace periodmap {

QMat operator+(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("qmat add shape");
    QMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

QMat operator-(const QMat& a, const QMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("qmat sub shape");
    QMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

QMat operator*(const QMat& a, const QMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("qmat mul shape");
    QMat r(a.rows(), b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j) {
                if (b(k, j).is_zero()) continue;
                r(i, j) += a(i, k) * b(k, j);
            }
        }
    return r;
}

QVec operator*(const QMat& a, const QVec& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("qmat vec shape");
    QVec r(a.rows());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero() || v[j].is_zero()) continue;
            r[i] += a(i, j) * v[j];
        }
    return r;
}

QMat qmat_scale(const QMat& a, const GaussianRational& c) {
    QMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * c;
    return r;
}

bool qmat_is_zero(const QMat& a) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

SMat smat_zero(size_t rows, size_t cols, int s, int n) {
    return SMat(rows, cols, TruncatedSeries(s, n));
}

SMat smat_identity(size_t n, int s, int order) {
    SMat m = smat_zero(n, n, s, order);
    for (size_t i = 0; i < n; ++i) m(i, i) = TruncatedSeries::constant(s, order, GaussianRational(1));
    return m;
}

SMat operator+(const SMat& a, const SMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("smat add shape");
    SMat r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
    return r;
}

SMat operator-(const SMat& a, const SMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("smat sub shape");
    SMat r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
    return r;
}

SMat operator*(const SMat& a, const SMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("smat mul shape");
    if (a.rows() == 0 || b.cols() == 0) return SMat(a.rows(), b.cols());
    if (a.cols() == 0) return SMat(a.rows(), b.cols());  // zero map, ring-free entries
    int s = a(0, 0).num_vars(), n = a(0, 0).trunc_order();
    SMat r = smat_zero(a.rows(), b.cols(), s, n);
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (size_t j = 0; j < b.cols(); ++j) {
                if (b(k, j).is_zero()) continue;
                r(i, j) += a(i, k) * b(k, j);
            }
        }
    return r;
}

SMat smat_scale(const SMat& a, const TruncatedSeries& f) {
    SMat r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = r(i, j) * f;
    return r;
}

SMat smat_partial(const SMat& a, int k) {
    SMat r = a;
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = r(i, j).partial(k);
    return r;
}

SMat smat_commutator(const SMat& a, const SMat& b) { return a * b - b * a; }

QMat smat_at_zero(const SMat& a) {
    QMat r(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).eval_at_zero();
    return r;
}

SMat smat_from_q(const QMat& a, int s, int n) {
    SMat r = smat_zero(a.rows(), a.cols(), s, n);
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) r(i, j) = TruncatedSeries::constant(s, n, a(i, j));
    return r;
}

bool smat_is_zero(const SMat& a) {
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero()) return false;
    return true;
}

SMat smat_inverse(const SMat& a) {
    if (a.rows() != a.cols() || a.empty()) throw std::invalid_argument("smat_inverse shape");
    size_t n = a.rows();
    int s = a(0, 0).num_vars(), ord = a(0, 0).trunc_order();

    // a = C + H with H == 0 at t = 0.  Invert C over Q(i), then Neumann:
    // a^{-1} = sum_j (-C^{-1} H)^j C^{-1}, finite because H is nilpotent.
    QMat c0 = smat_at_zero(a);

    // Gauss-Jordan inverse of the constant part.
    QMat inv = QMat::identity(n, GaussianRational(1));
    QMat work = c0;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && work(piv, col).is_zero()) ++piv;
        if (piv == n) throw std::domain_error("series matrix not invertible at 0");
        if (piv != col)
            for (size_t j = 0; j < n; ++j) {
                std::swap(work(piv, j), work(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        GaussianRational d = work(col, col).inverse();
        for (size_t j = 0; j < n; ++j) {
            work(col, j) *= d;
            inv(col, j) *= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || work(r, col).is_zero()) continue;
            GaussianRational f = work(r, col);
            for (size_t j = 0; j < n; ++j) {
                work(r, j) -= f * work(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }

    SMat c0inv = smat_from_q(inv, s, ord);
    SMat h = a - smat_from_q(c0, s, ord);
    SMat t = smat_zero(n, n, s, ord) - c0inv * h;  // -C^{-1} H
    SMat acc = smat_identity(n, s, ord);
    SMat pow = smat_identity(n, s, ord);
    for (int j = 1; j <= ord; ++j) {
        pow = pow * t;
        if (smat_is_zero(pow)) break;
        acc = acc + pow;
    }
    return acc * c0inv;
}

std::vector<TruncatedSeries> smat_apply(const SMat& a, const std::vector<TruncatedSeries>& v) {
    if (a.cols() != v.size()) throw std::invalid_argument("smat apply shape");
    if (a.rows() == 0) return {};
    if (a.cols() == 0) return std::vector<TruncatedSeries>(a.rows());
    int s = a(0, 0).num_vars(), n = a(0, 0).trunc_order();
    std::vector<TruncatedSeries> r(a.rows(), TruncatedSeries(s, n));
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero() || v[j].is_zero()) continue;
            r[i] += a(i, j) * v[j];
        }
    return r;
}

}  // namespace periodmap
