#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "periodmap/matrix.hpp"

namespace periodmap {

/* Exact linear algebra over Q(i).  Everything downstream (graded blocks,
 * coset equalities, cohomology ranks) reduces to these routines, so they are
 * kept deterministic: pivots are always the first nonzero candidate. */

// Row-reduced echelon form; returns pivot column indices.
std::vector<size_t> rref_in_place(QMat& m);

size_t rank(QMat m);

// Basis of { x : M x = 0 }.
std::vector<QVec> kernel_basis(const QMat& m);

// One solution of M x = b if any.
std::optional<QVec> solve_linear(const QMat& m, const QVec& b);

/* Echelonized span of vectors with canonical reduction.  reduce() returns
 * the canonical residue of a vector modulo the span; insert() grows the span
 * and reports whether the vector was new. */
class SpanReducer {
public:
    explicit SpanReducer(size_t dim) : dim_(dim) {}

    size_t dim() const { return dim_; }
    size_t rank() const { return basis_.size(); }

    QVec reduce(QVec v) const;
    bool contains(const QVec& v) const;
    bool insert(QVec v);
    void insert_all(const std::vector<QVec>& vs) {
        for (const auto& v : vs) insert(v);
    }

    // Span equality via mutual containment.
    bool same_span(const SpanReducer& other) const;

    const std::vector<std::pair<size_t, QVec>>& echelon() const { return basis_; }

private:
    size_t dim_;
    // (pivot index, vector) sorted by pivot; vectors are pivot-normalized
    // and fully reduced against each other.
    std::vector<std::pair<size_t, QVec>> basis_;
};

// --- R_S-linear systems, flattened to Q(i) ---

/* A map (R_S)^c -> (R_S)^r given by a series matrix is Q(i)-linear in the
 * coefficient coordinates.  Flattening indexes unknowns by (column, monomial)
 * and equations by (row, monomial); this turns every module-level solve over
 * the local ring into a plain exact solve.  Desk-scale monomial counts keep
 * the blowup small. */
class FlattenedRing {
public:
    FlattenedRing(int s, int n);

    int s() const { return s_; }
    int n() const { return n_; }
    size_t monomial_count() const { return monomials_.size(); }
    const std::vector<MultiIndex>& monomials() const { return monomials_; }
    size_t monomial_index(const MultiIndex& m) const;

    // Flatten an R_S-module map given by a series matrix.
    QMat flatten_matrix(const SMat& a) const;
    QVec flatten_vector(const std::vector<TruncatedSeries>& v) const;
    std::vector<TruncatedSeries> unflatten_vector(const QVec& v, size_t module_rank) const;

private:
    int s_, n_;
    std::vector<MultiIndex> monomials_;
    std::map<MultiIndex, size_t> index_;
};

// Solve A x = b over R_S (exact, complete for the truncated ring).
std::optional<std::vector<TruncatedSeries>> solve_series(const SMat& a,
                                                         const std::vector<TruncatedSeries>& b);

}  // namespace periodmap
