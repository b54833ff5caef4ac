#pragma once

#include <optional>
#include <string>
#include <vector>

#include "periodmap/filtered_module.hpp"
#include "periodmap/matrix.hpp"

namespace periodmap {

struct NotFlat : EngineError {
    explicit NotFlat(const std::string& msg) : EngineError("NotFlat", msg) {}
};
struct NotTransversal : EngineError {
    explicit NotTransversal(const std::string& msg) : EngineError("NotTransversal", msg) {}
};

/* Connection in the adapted frame: nabla_{d/dt_l}(x) = d_l x + A_l x.
 * One r x r series matrix per base variable. */
struct Connection {
    int s = 0;
    int n = 0;
    int rank = 0;
    std::vector<SMat> a;  // a[l], l = 0..s-1

    Connection() = default;
    Connection(int s_, int n_, int rank_) : s(s_), n(n_), rank(rank_) {
        a.assign(s_, smat_zero(rank_, rank_, s_, n_));
    }

    // A_xi = sum_l xi_l A_l for a tangent vector with series coefficients.
    SMat contract(const std::vector<TruncatedSeries>& xi) const;

    // Coordinate field d/dt_l as a tangent vector (1-based).
    std::vector<TruncatedSeries> coordinate_field(int l) const;
};

struct FlatnessCertificate {
    bool ok = true;
    int k = 0, l = 0;        // failing pair, 1-based, when !ok
    std::optional<SMat> residual;
};

/* Transversality of the connection against an adapted filtration.  The
 * strict check asks every entry with level drop >= 2 to vanish identically;
 * the fiber check only at t = 0.  Operations evaluated at the fiber require
 * fiber transversality; check_transversal reports both. */
struct TransversalityCertificate {
    bool ok_at_fiber = true;
    bool ok_identically = true;
    int row = 0, col = 0, var = 0;  // first offending entry (1-based var)
};

FlatnessCertificate check_integrable(const Connection& c);
TransversalityCertificate check_transversal(const Connection& c, const FilteredModule& f);

// nabla_xi x with x an R_S-coordinate vector.
std::vector<TruncatedSeries> covariant_derivative(const Connection& c,
                                                  const std::vector<TruncatedSeries>& xi,
                                                  const std::vector<TruncatedSeries>& x);

/* Induced connection on End(H) under nabla(Bx) = (nabla B)x + B nabla x,
 * i.e. nabla_l B = d_l B + [A_l, B].  Endomorphisms are flattened row-major,
 * E_{uv} -> index u*r + v, so the matrices are A (x) I - I (x) A^T.
 * The induced module grading puts E_{uv} in level p_u - p_v. */
Connection end_connection(const Connection& c);
FilteredModule end_module(const FilteredModule& f);

QVec flatten_endo(const QMat& b);
QMat unflatten_endo(const QVec& v, size_t r);

}  // namespace periodmap
