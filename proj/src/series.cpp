#include "periodmap/series.hpp"

#include <ostream>
#include <sstream>

namespace periodmap {

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    if (!a.same_ring(b))
        throw MismatchedRing("series rings differ in product");
    TruncatedSeries r(a.s_, a.n_);
    // Plain sparse convolution; monomials past total degree N are dropped.
    // s <= 3, N <= 6 at desk scale, nothing fancier is warranted.
    for (const auto& [ma, ca] : a.coeffs_) {
        int da = total_degree(ma);
        for (const auto& [mb, cb] : b.coeffs_) {
            if (da + total_degree(mb) > a.n_) continue;
            MultiIndex m(ma);
            for (size_t j = 0; j < m.size(); ++j) m[j] += mb[j];
            r.add_coeff(m, ca * cb);
        }
    }
    return r;
}

TruncatedSeries TruncatedSeries::partial(int k) const {
    if (k < 1 || k > s_) throw std::out_of_range("partial: variable index");
    TruncatedSeries r(s_, n_);
    for (const auto& [m, c] : coeffs_) {
        int e = m[k - 1];
        if (e == 0) continue;
        MultiIndex d(m);
        d[k - 1] = e - 1;
        r.add_coeff(d, c * GaussianRational(e));
    }
    return r;
}

TruncatedSeries TruncatedSeries::inverse() const {
    GaussianRational c0 = eval_at_zero();
    if (c0.is_zero()) throw std::domain_error("series is not a unit");
    // 1/(c0 + h) = c0^{-1} * sum_j (-h/c0)^j, exact since h is nilpotent.
    GaussianRational c0inv = c0.inverse();
    TruncatedSeries h = *this;
    h.add_coeff(MultiIndex(s_, 0), -c0);  // h = f - c0, vanishes at 0
    TruncatedSeries t = h.scalar_mul(-c0inv);
    TruncatedSeries acc = TruncatedSeries::constant(s_, n_, GaussianRational(1));
    TruncatedSeries pow = TruncatedSeries::constant(s_, n_, GaussianRational(1));
    for (int j = 1; j <= n_; ++j) {
        pow = pow * t;
        if (pow.is_zero()) break;
        acc += pow;
    }
    return acc.scalar_mul(c0inv);
}

std::string TruncatedSeries::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t j = 0; j < m.size(); ++j) {
            if (m[j] == 0) continue;
            os << "*t" << (j + 1);
            if (m[j] > 1) os << "^" << m[j];
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& f) { return os << f.str(); }

}  // namespace periodmap
