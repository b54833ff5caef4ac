#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "periodmap/rational.hpp"
#include "periodmap/series.hpp"

namespace periodmap {

/* Dense row-major matrix over an exact ring element type (GaussianRational
 * or TruncatedSeries).  Deliberately small: the engine works at desk scale
 * and favours obvious loops over clever kernels. */
template <typename T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(size_t rows, size_t cols, T fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(size_t n, T one) {
        Mat m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T& operator()(size_t r, size_t c) {
        check(r, c);
        return data_[r * cols_ + c];
    }
    const T& operator()(size_t r, size_t c) const {
        check(r, c);
        return data_[r * cols_ + c];
    }

    std::vector<T> col(size_t c) const {
        std::vector<T> v(rows_);
        for (size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }
    void set_col(size_t c, const std::vector<T>& v) {
        if (v.size() != rows_) throw std::invalid_argument("column size mismatch");
        for (size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

private:
    void check(size_t r, size_t c) const {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index");
    }
    size_t rows_, cols_;
    std::vector<T> data_;
};

using QMat = Mat<GaussianRational>;
using SMat = Mat<TruncatedSeries>;
using QVec = std::vector<GaussianRational>;

// --- GaussianRational matrix arithmetic ---

QMat operator+(const QMat& a, const QMat& b);
QMat operator-(const QMat& a, const QMat& b);
QMat operator*(const QMat& a, const QMat& b);
QVec operator*(const QMat& a, const QVec& v);
QMat qmat_scale(const QMat& a, const GaussianRational& c);
bool qmat_is_zero(const QMat& a);

// --- TruncatedSeries matrix arithmetic ---

SMat smat_zero(size_t rows, size_t cols, int s, int n);
SMat smat_identity(size_t n, int s, int order);
SMat operator+(const SMat& a, const SMat& b);
SMat operator-(const SMat& a, const SMat& b);
SMat operator*(const SMat& a, const SMat& b);
SMat smat_scale(const SMat& a, const TruncatedSeries& f);
SMat smat_partial(const SMat& a, int k);
SMat smat_commutator(const SMat& a, const SMat& b);
QMat smat_at_zero(const SMat& a);
SMat smat_from_q(const QMat& a, int s, int n);
bool smat_is_zero(const SMat& a);

// Inverse of a series matrix whose value at 0 is invertible (Neumann series
// against the constant part, exact in the truncated ring).
SMat smat_inverse(const SMat& a);

std::vector<TruncatedSeries> smat_apply(const SMat& a, const std::vector<TruncatedSeries>& v);

}  // namespace periodmap
