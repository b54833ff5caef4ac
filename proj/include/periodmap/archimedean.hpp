#pragma once

#include "periodmap/connection.hpp"
#include "periodmap/coset.hpp"
#include "periodmap/laurent.hpp"
#include "periodmap/period_maps.hpp"

namespace periodmap {

// Module-valued Laurent element: T-exponent -> coordinate vector over R_S.
using ArElement = LaurentT<std::vector<TruncatedSeries>>;

bool ar_coords_zero(const std::vector<TruncatedSeries>& v);

ArElement ar_term(int t_exp, std::vector<TruncatedSeries> coords);
ArElement ar_add(const ArElement& a, const ArElement& b, int rank, int s, int n);

/* The Laurent extension of a filtered module.  The filtration is monomial:
 * a term x_a T^j lies in F_ar^k iff j <= level(a) - k, so membership is pure
 * exponent bookkeeping.  All second-order computations live on the finite
 * T-window [min_level - 2, max_level]; the window is a constructor parameter
 * guarded by the stability property (enlarging it never changes a verdict). */
struct ArModule {
    FilteredModule base;
    int window_min = 0;
    int window_max = 0;

    explicit ArModule(FilteredModule b, int extra_low = 2, int extra_high = 0)
        : base(std::move(b)),
          window_min(base.min_level() - extra_low),
          window_max(base.max_level() + extra_high) {}

    int window_size() const { return window_max - window_min + 1; }
    // Fiber coordinates of the window space at t = 0.
    size_t dim() const { return (size_t)base.rank * window_size(); }
    size_t index(int a, int j) const {
        if (j < window_min || j > window_max) throw std::out_of_range("T-exponent outside window");
        return (size_t)(j - window_min) * base.rank + a;
    }

    // Basis of the window-restricted H_ar = F_ar^0: pairs (a, j), j <= level(a).
    std::vector<std::pair<int, int>> har_basis() const;
};

// Membership in F_ar^k by per-term level arithmetic (exact).
bool in_f_ar(const FilteredModule& f, const ArElement& y, int k);

// Termwise covariant derivative; T-exponents are untouched.
ArElement nabla_ar(const Connection& c, const FilteredModule& f,
                   const std::vector<TruncatedSeries>& xi, const ArElement& y);

/* A homogeneous class y in Gr_{F_ar}^k: every term x_a T^j satisfies
 * level(a) = k + j.  drop_T erases the T-powers; insert_T is its inverse. */
std::vector<TruncatedSeries> drop_t(const FilteredModule& f, const ArElement& y, int k);
ArElement insert_t(const FilteredModule& f, const std::vector<TruncatedSeries>& x, int k);

/* First Archimedean differential at 0, as a coset map on the window space:
 * numerator columns are nabla_xi(e_a T^j) over the H_ar window basis, the
 * denominator is the window fiber of F_ar^0. */
CosetMap d_psi(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& xi);

// Its graded version without T's; equals the first differential of the
// underlying filtered structure.
QMat d_psi_bar(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& xi);

/* Second Archimedean differential: numerator nabla_zeta nabla_xi on the
 * H_ar window basis at 0; denominator = window fiber of F_ar^0 together with
 * the span of nabla_{d/dt_l}(monomial * basis) constant terms. */
CosetMap d2_psi(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& zeta,
                const std::vector<TruncatedSeries>& xi);

// Degree-(-2) graded block of nabla_zeta nabla_xi at 0.
QMat d2_psi_bar(const ArModule& m, const Connection& c, const std::vector<TruncatedSeries>& zeta,
                const std::vector<TruncatedSeries>& xi);

struct CongruenceCertificate {
    bool ok = true;
    QMat lhs{0, 0};
    QMat rhs{0, 0};
};

/* The congruence between the second fundamental form and
 * d2_psi_bar - d_psi_bar(zeta) o d_psi_bar(xi), modulo im(dPhi). */
CongruenceCertificate second_form_congruence_check(const ArModule& m, const Connection& c,
                                                   const std::vector<TruncatedSeries>& zeta,
                                                   const std::vector<TruncatedSeries>& xi);

/* Factorization of the second differential through its graded version:
 * for each level p, the coset of nabla nabla on F^p equals the coset of the
 * pure degree-(-2) block. */
bool second_differential_factors_through_graded(const Connection& c, const FilteredModule& f,
                                                const std::vector<TruncatedSeries>& zeta,
                                                const std::vector<TruncatedSeries>& xi);

}  // namespace periodmap
