#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "periodmap/linalg.hpp"
#include "periodmap/matrix.hpp"

namespace periodmap {

struct DegreeMismatch : EngineError {
    explicit DegreeMismatch(const std::string& msg) : EngineError("DegreeMismatch", msg) {}
};
struct WindowOverflow : EngineError {
    explicit WindowOverflow(const std::string& msg) : EngineError("WindowOverflow", msg) {}
};
struct NotCocycle : EngineError {
    explicit NotCocycle(const std::string& msg) : EngineError("NotCocycle", msg) {}
};

// Ordered vertex tuple; repeated vertices allowed (the full semi-simplicial
// nerve of a cover), dimension = size - 1.
using Tuple = std::vector<int>;

std::string tuple_str(const Tuple& t);
Tuple tuple_face(const Tuple& t, int j);  // delete vertex j

/* Bilinear structure map between free modules, stored sparsely.  A pair of
 * input basis indices may be marked out-of-window: the map is undefined there
 * and any application meeting such a pair with nonzero coefficients raises
 * WindowOverflow instead of truncating silently. */
struct Bilinear {
    size_t rank_a = 0, rank_b = 0, rank_out = 0;
    // (out, ia, ib) -> coefficient
    std::map<std::tuple<size_t, size_t, size_t>, TruncatedSeries> entries;
    std::set<std::pair<size_t, size_t>> out_of_window;

    bool pair_in_window(size_t ia, size_t ib) const {
        return !out_of_window.count({ia, ib});
    }
    std::vector<TruncatedSeries> apply(const std::vector<TruncatedSeries>& va,
                                       const std::vector<TruncatedSeries>& vb, int s, int n) const;
};

/* Finite Cech model of a relative situation: a nerve of ordered tuples with
 * a free R_S-module of p-forms and of vertical vector fields on each tuple,
 * and matrix-valued structure maps (face restrictions, fiberwise exterior
 * derivative, Lie bracket, contraction, declared Lie action).  Everything is
 * exact over R_S; gluing data may move with t. */
struct CechModel {
    std::string name;
    int s = 1, n = 2;
    int dim_x = 1;
    int weight = 1;
    int max_q = 3;

    std::vector<std::vector<Tuple>> nerve;             // by dimension 0..max_q
    std::vector<std::map<Tuple, size_t>> nerve_index;  // tuple -> position

    // ranks: omega_rank[p][q][si], theta_rank[q][si]
    std::vector<std::vector<std::vector<size_t>>> omega_rank;
    std::vector<std::vector<size_t>> theta_rank;

    // restrictions from face j of a simplex: rho_*[q][si][j], q >= 1
    std::vector<std::vector<std::vector<SMat>>> rho_theta;
    // rho_omega[p][q][si][j]
    std::vector<std::vector<std::vector<std::vector<SMat>>>> rho_omega;

    // d_map[p][q][si]: Omega^p(Q) -> Omega^{p+1}(Q), p < dim_x
    std::vector<std::vector<std::vector<SMat>>> d_map;

    // per-simplex bilinears: iota[p][q][si] (Theta x Omega^p -> Omega^{p-1},
    // p >= 1), bracket[q][si], lie[p][q][si] (Theta x Omega^p -> Omega^p)
    std::vector<std::vector<std::vector<Bilinear>>> iota;
    std::vector<std::vector<Bilinear>> bracket;
    std::vector<std::vector<std::vector<Bilinear>>> lie;

    size_t simplex_count(int q) const { return q <= max_q ? nerve[q].size() : 0; }
    size_t omega_dim(int p, int q) const;   // total rank of Cech^q(Omega^p)
    size_t theta_dim(int q) const;

    bool has_simplex(const Tuple& t) const;
    size_t simplex_pos(const Tuple& t) const;
};

// --- cochains ---

struct ThetaCochain {
    int q = 0;
    std::vector<std::vector<TruncatedSeries>> comp;  // per simplex of dim q
};

struct FormCochain {
    int q = 0, p = 0;
    std::vector<std::vector<TruncatedSeries>> comp;
};

/* Element of the total complex at degree m: components in Cech^q(Omega^{m-q}). */
struct TotalCochain {
    int m = 0;
    std::map<int, FormCochain> parts;  // keyed by q

    bool is_zero() const;
};

ThetaCochain theta_zero(const CechModel& mod, int q);
FormCochain form_zero(const CechModel& mod, int q, int p);
TotalCochain total_zero(const CechModel& mod, int m);

bool theta_is_zero(const ThetaCochain& c);

ThetaCochain theta_add(const ThetaCochain& a, const ThetaCochain& b);
ThetaCochain theta_scale(const ThetaCochain& a, const TruncatedSeries& f);
ThetaCochain theta_partial(const ThetaCochain& a, int k);
ThetaCochain theta_at_zero_constant(const CechModel& mod, const ThetaCochain& a);

FormCochain form_add(const FormCochain& a, const FormCochain& b);
TotalCochain total_add(const TotalCochain& a, const TotalCochain& b);
TotalCochain total_scale(const TotalCochain& a, const TruncatedSeries& f);
TotalCochain total_partial(const CechModel& mod, const TotalCochain& a, int k);

// Cech differentials (alternating face sums).
ThetaCochain delta_theta(const CechModel& mod, const ThetaCochain& c);
FormCochain delta_form(const CechModel& mod, const FormCochain& c);
FormCochain d_form(const CechModel& mod, const FormCochain& c);

// Total differential D = delta + (-1)^q d on Cech^q.
TotalCochain total_differential(const CechModel& mod, const TotalCochain& c);

/* Contraction with a 0-cochain of fields: (iota_v x)_Q = (-1)^q v_{i0}|_Q -| x_Q. */
TotalCochain iota_vertex(const CechModel& mod, const ThetaCochain& v, const TotalCochain& x);

/* Contraction with a 1-cochain of fields:
 * (iota_theta x)_{i0..i_{q+1}} = (-1)^q theta_{i0 i1}|_Q -| x_{i1..i_{q+1}}|_Q. */
TotalCochain iota_edge(const CechModel& mod, const ThetaCochain& theta, const TotalCochain& x);

/* Cech-level Lie derivative along a 0-cochain: the anticommutator
 * D iota_v + iota_v D.  Reduces to the componentwise Cartan Lie action when
 * delta v = 0. */
TotalCochain lie_derivative(const CechModel& mod, const ThetaCochain& v, const TotalCochain& x);

// Componentwise declared Lie action (for validation and the middle term of
// the second-differential cochain formula).
FormCochain lie_componentwise(const CechModel& mod, const ThetaCochain& v, const FormCochain& x);

// Restriction of a theta-cochain value on the leading edge of Q down to Q.
std::vector<TruncatedSeries> restrict_theta_leading_edge(const CechModel& mod,
                                                         const ThetaCochain& theta, int q_target,
                                                         size_t si);

// --- flattening to coordinate vectors ---

struct TotalSpace {
    const CechModel* mod = nullptr;
    int m = 0;
    // block offsets per q present
    std::map<int, size_t> offset;
    size_t dim = 0;

    TotalSpace() = default;
    TotalSpace(const CechModel& model, int degree);
    QVec flatten_at_zero(const TotalCochain& c) const;
    std::vector<TruncatedSeries> flatten_series(const TotalCochain& c) const;
    TotalCochain unflatten(const QVec& v) const;
    TotalCochain unflatten_series(const std::vector<TruncatedSeries>& v) const;
};

struct ThetaSpace {
    const CechModel* mod = nullptr;
    int q = 0;
    size_t dim = 0;
    ThetaSpace() = default;
    ThetaSpace(const CechModel& model, int degree);
    QVec flatten_at_zero(const ThetaCochain& c) const;
    ThetaCochain unflatten(const QVec& v) const;
};

// Matrix of the total differential at t = 0 (columns over TotalSpace(m)).
QMat total_differential_matrix_at_zero(const CechModel& mod, int m);
QMat delta_theta_matrix_at_zero(const CechModel& mod, int q);

// --- validation ---

struct ValidationFailure {
    std::string identity;
    std::string where;
};

struct ValidationCertificate {
    bool ok = true;
    std::vector<ValidationFailure> failures;
    std::vector<std::string> skipped;  // window-limited identity instances
};

enum class ValidationLevel { strict, extended };

/* Checks d^2 = 0, face functoriality, compatibility of restrictions with d,
 * iota, bracket and the declared Lie action, delta^2 = 0, Dtot^2 = 0, and the
 * Cartan identity on every simplex (extended adds the bracket-contraction
 * identity).  Identities touching out-of-window pairs are recorded as skipped
 * rather than silently assumed. */
ValidationCertificate validate_model(const CechModel& mod, ValidationLevel level);

}  // namespace periodmap
