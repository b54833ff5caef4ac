#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "periodmap/rational.hpp"

namespace periodmap {

/* Errors raised on precondition violations carry a stable machine-readable
 * kind string; the CLI maps each kind to its own exit code. */
struct EngineError : std::runtime_error {
    std::string kind;
    EngineError(std::string k, const std::string& msg) : std::runtime_error(msg), kind(std::move(k)) {}
};

struct MismatchedRing : EngineError {
    explicit MismatchedRing(const std::string& msg) : EngineError("MismatchedRing", msg) {}
};

// Exponent multi-index (t_1^{e_1} ... t_s^{e_s}).
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& m) {
    int d = 0;
    for (int e : m) d += e;
    return d;
}

/* Element of Q(i)[t_1..t_s] / m^{N+1}: a truncated multivariate power series
 * with exact Gaussian-rational coefficients.  Sparse canonical storage: no
 * zero coefficient and no monomial of total degree > N is ever stored, so
 * equality is plain map equality.  Values are immutable in spirit: every
 * operation returns a fresh series. */
class TruncatedSeries {
public:
    TruncatedSeries() : s_(0), n_(0) {}
    TruncatedSeries(int num_vars, int trunc_order) : s_(num_vars), n_(trunc_order) {
        if (num_vars < 0 || trunc_order < 0) throw std::invalid_argument("bad ring parameters");
    }

    static TruncatedSeries constant(int s, int n, GaussianRational c) {
        TruncatedSeries r(s, n);
        r.set_coeff(MultiIndex(s, 0), std::move(c));
        return r;
    }
    // The coordinate t_k, 1-based.
    static TruncatedSeries variable(int s, int n, int k) {
        TruncatedSeries r(s, n);
        if (k < 1 || k > s) throw std::out_of_range("variable index");
        if (n >= 1) {
            MultiIndex m(s, 0);
            m[k - 1] = 1;
            r.set_coeff(m, GaussianRational(1));
        }
        return r;
    }

    int num_vars() const { return s_; }
    int trunc_order() const { return n_; }
    bool same_ring(const TruncatedSeries& o) const { return s_ == o.s_ && n_ == o.n_; }

    bool is_zero() const { return coeffs_.empty(); }
    const std::map<MultiIndex, GaussianRational>& coefficients() const { return coeffs_; }

    GaussianRational coeff(const MultiIndex& m) const {
        auto it = coeffs_.find(m);
        return it == coeffs_.end() ? GaussianRational() : it->second;
    }

    void set_coeff(const MultiIndex& m, GaussianRational c) {
        if ((int)m.size() != s_) throw std::invalid_argument("multi-index arity mismatch");
        for (int e : m)
            if (e < 0) throw std::invalid_argument("negative exponent");
        if (total_degree(m) > n_ || c.is_zero())
            coeffs_.erase(m);
        else
            coeffs_[m] = std::move(c);
    }

    void add_coeff(const MultiIndex& m, const GaussianRational& c) {
        if (total_degree(m) > n_) return;
        auto it = coeffs_.find(m);
        if (it == coeffs_.end()) {
            if (!c.is_zero()) coeffs_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    GaussianRational eval_at_zero() const { return coeff(MultiIndex(s_, 0)); }

    TruncatedSeries operator-() const {
        TruncatedSeries r(s_, n_);
        for (const auto& [m, c] : coeffs_) r.coeffs_.emplace(m, -c);
        return r;
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) {
        require_same_ring(o);
        for (const auto& [m, c] : o.coeffs_) add_coeff(m, c);
        return *this;
    }
    TruncatedSeries& operator-=(const TruncatedSeries& o) {
        require_same_ring(o);
        for (const auto& [m, c] : o.coeffs_) add_coeff(m, -c);
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

    TruncatedSeries scalar_mul(const GaussianRational& c) const {
        TruncatedSeries r(s_, n_);
        if (c.is_zero()) return r;
        for (const auto& [m, v] : coeffs_) r.coeffs_.emplace(m, v * c);
        return r;
    }

    // Formal partial derivative with respect to t_k (1-based).  The result
    // lives in the same (s, N) ring; top-degree information is lost, callers
    // needing exact jets must budget N accordingly.
    TruncatedSeries partial(int k) const;

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a.s_ == b.s_ && a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const TruncatedSeries& a, const TruncatedSeries& b) { return !(a == b); }

    // Unit iff the constant term is nonzero (the ring is local).
    bool is_unit() const { return !eval_at_zero().is_zero(); }
    TruncatedSeries inverse() const;

    std::string str() const;

private:
    void require_same_ring(const TruncatedSeries& o) const {
        if (!same_ring(o))
            throw MismatchedRing("series rings differ: (" + std::to_string(s_) + "," + std::to_string(n_) +
                                 ") vs (" + std::to_string(o.s_) + "," + std::to_string(o.n_) + ")");
    }

    int s_;
    int n_;
    std::map<MultiIndex, GaussianRational> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const TruncatedSeries& f);

}  // namespace periodmap
