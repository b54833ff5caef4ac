#pragma once

#include <vector>

#include "periodmap/linalg.hpp"

namespace periodmap {

/* A linear map recorded together with the subspace it is defined modulo:
 * the engine's realization of quotient-valued homomorphisms.  Numerator
 * columns are the images of a fixed domain basis in the ambient fiber;
 * the denominator is the span being quotiented out.  Everything lives over
 * Q(i) at the base point. */
class CosetMap {
public:
    CosetMap(size_t ambient_dim, QMat numerator, std::vector<QVec> denominator)
        : num_(std::move(numerator)), den_vectors_(std::move(denominator)), den_(ambient_dim) {
        if (num_.rows() != ambient_dim) throw std::invalid_argument("coset numerator dimension");
        for (const auto& v : den_vectors_) {
            if (v.size() != ambient_dim) throw std::invalid_argument("coset denominator dimension");
            den_.insert(v);
        }
    }

    size_t ambient_dim() const { return den_.dim(); }
    size_t domain_dim() const { return num_.cols(); }
    const QMat& numerator() const { return num_; }
    const std::vector<QVec>& denominator_vectors() const { return den_vectors_; }
    const SpanReducer& denominator() const { return den_; }

    // Canonical representative: every column reduced against the denominator.
    QMat reduced_numerator() const {
        QMat r = num_;
        for (size_t c = 0; c < num_.cols(); ++c) r.set_col(c, den_.reduce(num_.col(c)));
        return r;
    }

    bool is_zero() const { return qmat_is_zero(reduced_numerator()); }

    /* Cosets are equal when they quotient by the same span and the numerators
     * agree modulo it. */
    friend bool operator==(const CosetMap& a, const CosetMap& b) {
        if (a.ambient_dim() != b.ambient_dim() || a.domain_dim() != b.domain_dim()) return false;
        if (!a.den_.same_span(b.den_)) return false;
        for (size_t c = 0; c < a.num_.cols(); ++c) {
            QVec diff = a.num_.col(c);
            QVec other = b.num_.col(c);
            for (size_t i = 0; i < diff.size(); ++i) diff[i] -= other[i];
            if (!a.den_.contains(diff)) return false;
        }
        return true;
    }
    friend bool operator!=(const CosetMap& a, const CosetMap& b) { return !(a == b); }

private:
    QMat num_;
    std::vector<QVec> den_vectors_;
    SpanReducer den_;
};

}  // namespace periodmap
