#pragma once

#include "periodmap/connection.hpp"
#include "periodmap/coset.hpp"

namespace periodmap {

// Keep only entries of the given graded degree (levels[row] - levels[col]).
QMat graded_block(const QMat& m, const FilteredModule& f, int degree);
SMat graded_block_series(const SMat& m, const FilteredModule& f, int degree);

// Degrees that actually occur in an adapted endomorphism matrix.
std::vector<int> occurring_degrees(const FilteredModule& f);

/* First differential of the period map along xi, i.e. the degree-(-1) graded
 * piece of the contracted connection matrix.  Fiber version at t = 0 and the
 * full R_S-linear version. */
QMat first_differential(const Connection& c, const FilteredModule& f,
                        const std::vector<TruncatedSeries>& xi);
SMat first_differential_series(const Connection& c, const FilteredModule& f,
                               const std::vector<TruncatedSeries>& xi);

/* The subspace im(dPhi) at 0 inside graded endomorphisms: the Q(i)-span of
 * the degree-homogeneous components of dPhi(d/dt_l)|_0 for l = 1..s,
 * flattened to r^2-vectors. */
std::vector<QVec> first_differential_image_span(const Connection& c, const FilteredModule& f);

// nabla_zeta nabla_xi on constant basis vectors as a series matrix:
// sum_k zeta_k (d_k A_xi) + A_zeta A_xi.
SMat second_derivative_series(const Connection& c, const std::vector<TruncatedSeries>& zeta,
                              const std::vector<TruncatedSeries>& xi);

/* Second differential as a coset map F^p -> fiber / (F^p + span{nabla_eta(F^p)}).
 * Numerator columns are nabla_zeta nabla_xi e_a at 0 over the basis of F^p;
 * the denominator exhausts the fiber of the O_S-span by applying nabla_{d/dt_l}
 * to monomial multiples of the F^p basis and taking constant terms. */
CosetMap second_differential(const Connection& c, const FilteredModule& f,
                             const std::vector<TruncatedSeries>& zeta,
                             const std::vector<TruncatedSeries>& xi, int p);

/* Covariant derivative of the first differential, the matrix underlying both
 * the second fundamental form and the filtration-shift bound:
 *   W = sum_k zeta_k ( d_k A_xi + [A_k, (A_xi)^{(-1)}] ).  */
SMat derivative_of_first_differential(const Connection& c, const FilteredModule& f,
                                      const std::vector<TruncatedSeries>& zeta,
                                      const std::vector<TruncatedSeries>& xi);

/* Second fundamental form of the filtered structure: the degree-(-2) graded
 * block of W at 0, as a coset in End modulo im(dPhi). */
CosetMap second_fundamental_form(const Connection& c, const FilteredModule& f,
                                 const std::vector<TruncatedSeries>& zeta,
                                 const std::vector<TruncatedSeries>& xi);

struct ShiftCertificate {
    bool ok = true;
    int offending_degree = 0;  // a degree <= -3 with a nonzero block, when !ok
};

// The derivative of dPhi must shift the filtration by at most two.
ShiftCertificate filtration_shift_check(const Connection& c, const FilteredModule& f,
                                        const std::vector<TruncatedSeries>& zeta,
                                        const std::vector<TruncatedSeries>& xi);

// Gauge transform A_l -> g^{-1} A_l g + g^{-1} d_l g.
Connection gauge_transform(const Connection& c, const SMat& g);

void require_flat(const Connection& c);
void require_fiber_transversal(const Connection& c, const FilteredModule& f);

}  // namespace periodmap
