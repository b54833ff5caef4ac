#include "periodmap/cech.hpp"

#include <algorithm>
#include <sstream>

namespace periodmap {

std::string tuple_str(const Tuple& t) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
    os << ")";
    return os.str();
}

Tuple tuple_face(const Tuple& t, int j) {
    Tuple f;
    f.reserve(t.size() - 1);
    for (int i = 0; i < (int)t.size(); ++i)
        if (i != j) f.push_back(t[i]);
    return f;
}

std::vector<TruncatedSeries> Bilinear::apply(const std::vector<TruncatedSeries>& va,
                                             const std::vector<TruncatedSeries>& vb, int s,
                                             int n) const {
    if (va.size() != rank_a || vb.size() != rank_b) throw std::invalid_argument("bilinear arity");
    for (const auto& [ia, ib] : out_of_window)
        if (!va[ia].is_zero() && !vb[ib].is_zero())
            throw WindowOverflow("bilinear map undefined on touched basis pair (" +
                                 std::to_string(ia) + "," + std::to_string(ib) + ")");
    std::vector<TruncatedSeries> out(rank_out, TruncatedSeries(s, n));
    for (const auto& [key, coef] : entries) {
        auto [o, ia, ib] = key;
        if (va[ia].is_zero() || vb[ib].is_zero()) continue;
        out[o] += coef * va[ia] * vb[ib];
    }
    return out;
}

size_t CechModel::omega_dim(int p, int q) const {
    size_t d = 0;
    for (size_t si = 0; si < simplex_count(q); ++si) d += omega_rank[p][q][si];
    return d;
}

size_t CechModel::theta_dim(int q) const {
    size_t d = 0;
    for (size_t si = 0; si < simplex_count(q); ++si) d += theta_rank[q][si];
    return d;
}

bool CechModel::has_simplex(const Tuple& t) const {
    int q = (int)t.size() - 1;
    return q >= 0 && q <= max_q && nerve_index[q].count(t) > 0;
}

size_t CechModel::simplex_pos(const Tuple& t) const {
    int q = (int)t.size() - 1;
    auto it = nerve_index[q].find(t);
    if (it == nerve_index[q].end()) throw std::out_of_range("simplex not in nerve: " + tuple_str(t));
    return it->second;
}

// --- zero cochains / arithmetic ---

ThetaCochain theta_zero(const CechModel& mod, int q) {
    ThetaCochain c;
    c.q = q;
    c.comp.resize(mod.simplex_count(q));
    for (size_t si = 0; si < c.comp.size(); ++si)
        c.comp[si].assign(mod.theta_rank[q][si], TruncatedSeries(mod.s, mod.n));
    return c;
}

FormCochain form_zero(const CechModel& mod, int q, int p) {
    FormCochain c;
    c.q = q;
    c.p = p;
    c.comp.resize(mod.simplex_count(q));
    for (size_t si = 0; si < c.comp.size(); ++si)
        c.comp[si].assign(mod.omega_rank[p][q][si], TruncatedSeries(mod.s, mod.n));
    return c;
}

TotalCochain total_zero(const CechModel& mod, int m) {
    TotalCochain c;
    c.m = m;
    for (int q = std::max(0, m - mod.dim_x); q <= std::min(m, mod.max_q); ++q)
        c.parts.emplace(q, form_zero(mod, q, m - q));
    return c;
}

bool theta_is_zero(const ThetaCochain& c) {
    for (const auto& v : c.comp)
        for (const auto& f : v)
            if (!f.is_zero()) return false;
    return true;
}

static bool form_is_zero(const FormCochain& c) {
    for (const auto& v : c.comp)
        for (const auto& f : v)
            if (!f.is_zero()) return false;
    return true;
}

bool TotalCochain::is_zero() const {
    for (const auto& [q, part] : parts)
        if (!form_is_zero(part)) return false;
    return true;
}

ThetaCochain theta_add(const ThetaCochain& a, const ThetaCochain& b) {
    if (a.q != b.q) throw DegreeMismatch("theta cochain degrees differ");
    ThetaCochain out = a;
    for (size_t si = 0; si < out.comp.size(); ++si)
        for (size_t i = 0; i < out.comp[si].size(); ++i) out.comp[si][i] += b.comp[si][i];
    return out;
}

ThetaCochain theta_scale(const ThetaCochain& a, const TruncatedSeries& f) {
    ThetaCochain out = a;
    for (auto& v : out.comp)
        for (auto& g : v) g = g * f;
    return out;
}

ThetaCochain theta_partial(const ThetaCochain& a, int k) {
    ThetaCochain out = a;
    for (auto& v : out.comp)
        for (auto& g : v) g = g.partial(k);
    return out;
}

ThetaCochain theta_at_zero_constant(const CechModel& mod, const ThetaCochain& a) {
    ThetaCochain out = a;
    for (auto& v : out.comp)
        for (auto& g : v) {
            GaussianRational c0 = g.eval_at_zero();
            g = c0.is_zero() ? TruncatedSeries(mod.s, mod.n)
                             : TruncatedSeries::constant(mod.s, mod.n, c0);
        }
    return out;
}

FormCochain form_add(const FormCochain& a, const FormCochain& b) {
    if (a.q != b.q || a.p != b.p) throw DegreeMismatch("form cochain degrees differ");
    FormCochain out = a;
    for (size_t si = 0; si < out.comp.size(); ++si)
        for (size_t i = 0; i < out.comp[si].size(); ++i) out.comp[si][i] += b.comp[si][i];
    return out;
}

TotalCochain total_add(const TotalCochain& a, const TotalCochain& b) {
    if (a.m != b.m) throw DegreeMismatch("total degrees differ");
    TotalCochain out = a;
    for (const auto& [q, part] : b.parts) {
        auto it = out.parts.find(q);
        if (it == out.parts.end())
            out.parts.emplace(q, part);
        else
            it->second = form_add(it->second, part);
    }
    return out;
}

TotalCochain total_scale(const TotalCochain& a, const TruncatedSeries& f) {
    TotalCochain out = a;
    for (auto& [q, part] : out.parts)
        for (auto& v : part.comp)
            for (auto& g : v) g = g * f;
    return out;
}

TotalCochain total_partial(const CechModel& mod, const TotalCochain& a, int k) {
    (void)mod;
    TotalCochain out = a;
    for (auto& [q, part] : out.parts)
        for (auto& v : part.comp)
            for (auto& g : v) g = g.partial(k);
    return out;
}

// --- differentials ---

ThetaCochain delta_theta(const CechModel& mod, const ThetaCochain& c) {
    int q = c.q + 1;
    if (q > mod.max_q) throw DegreeMismatch("delta would leave the nerve window (theta)");
    ThetaCochain out = theta_zero(mod, q);
    for (size_t si = 0; si < mod.simplex_count(q); ++si) {
        for (int j = 0; j <= q; ++j) {
            Tuple face = tuple_face(mod.nerve[q][si], j);
            const auto& src = c.comp[mod.simplex_pos(face)];
            auto restricted = smat_apply(mod.rho_theta[q][si][j], src);
            GaussianRational sign((j % 2) ? -1 : 1);
            for (size_t i = 0; i < restricted.size(); ++i)
                out.comp[si][i] += restricted[i].scalar_mul(sign);
        }
    }
    return out;
}

FormCochain delta_form(const CechModel& mod, const FormCochain& c) {
    int q = c.q + 1;
    if (q > mod.max_q) throw DegreeMismatch("delta would leave the nerve window (forms)");
    FormCochain out = form_zero(mod, q, c.p);
    for (size_t si = 0; si < mod.simplex_count(q); ++si) {
        for (int j = 0; j <= q; ++j) {
            Tuple face = tuple_face(mod.nerve[q][si], j);
            const auto& src = c.comp[mod.simplex_pos(face)];
            auto restricted = smat_apply(mod.rho_omega[c.p][q][si][j], src);
            GaussianRational sign((j % 2) ? -1 : 1);
            for (size_t i = 0; i < restricted.size(); ++i)
                out.comp[si][i] += restricted[i].scalar_mul(sign);
        }
    }
    return out;
}

FormCochain d_form(const CechModel& mod, const FormCochain& c) {
    if (c.p >= mod.dim_x) return form_zero(mod, c.q, c.p + 1 > mod.dim_x ? mod.dim_x : c.p + 1);
    FormCochain out = form_zero(mod, c.q, c.p + 1);
    for (size_t si = 0; si < mod.simplex_count(c.q); ++si)
        out.comp[si] = smat_apply(mod.d_map[c.p][c.q][si], c.comp[si]);
    return out;
}

static TotalCochain total_differential_impl(const CechModel& mod, const TotalCochain& c,
                                            bool* overflow) {
    TotalCochain out = total_zero(mod, c.m + 1);
    for (const auto& [q, part] : c.parts) {
        if (form_is_zero(part)) continue;
        // delta part -> (q+1, p)
        if (q + 1 <= mod.max_q) {
            FormCochain d1 = delta_form(mod, part);
            auto it = out.parts.find(q + 1);
            if (it != out.parts.end()) it->second = form_add(it->second, d1);
        } else if (overflow) {
            *overflow = true;
        } else {
            throw DegreeMismatch("total differential leaves the nerve window at q=" +
                                 std::to_string(q));
        }
        // (-1)^q d part -> (q, p+1)
        if (part.p < mod.dim_x) {
            FormCochain d2 = d_form(mod, part);
            if (q % 2)
                for (auto& v : d2.comp)
                    for (auto& g : v) g = g.scalar_mul(GaussianRational(-1));
            auto it = out.parts.find(q);
            if (it != out.parts.end()) it->second = form_add(it->second, d2);
        }
    }
    return out;
}

TotalCochain total_differential(const CechModel& mod, const TotalCochain& c) {
    return total_differential_impl(mod, c, nullptr);
}

// --- restriction paths ---

static std::vector<TruncatedSeries> restrict_theta_along_prefixes(const CechModel& mod,
                                                                  std::vector<TruncatedSeries> val,
                                                                  const Tuple& target,
                                                                  size_t start_len) {
    // val lives on the prefix of length start_len; push it down to the full
    // tuple one vertex at a time (each step is the last-vertex face map).
    for (size_t len = start_len + 1; len <= target.size(); ++len) {
        Tuple prefix(target.begin(), target.begin() + len);
        size_t si = mod.simplex_pos(prefix);
        val = smat_apply(mod.rho_theta[len - 1][si][len - 1], val);
    }
    return val;
}

std::vector<TruncatedSeries> restrict_theta_leading_edge(const CechModel& mod,
                                                         const ThetaCochain& theta, int q_target,
                                                         size_t si) {
    const Tuple& tq = mod.nerve[q_target][si];
    Tuple edge{tq[0], tq[1]};
    return restrict_theta_along_prefixes(mod, theta.comp[mod.simplex_pos(edge)], tq, 2);
}

// --- contractions and Lie derivative ---

TotalCochain iota_vertex(const CechModel& mod, const ThetaCochain& v, const TotalCochain& x) {
    if (v.q != 0) throw DegreeMismatch("iota_vertex expects a 0-cochain of fields");
    TotalCochain out = total_zero(mod, x.m - 1);
    for (const auto& [q, part] : x.parts) {
        if (part.p < 1 || form_is_zero(part)) continue;
        auto it = out.parts.find(q);
        if (it == out.parts.end()) continue;
        GaussianRational sign((q % 2) ? -1 : 1);
        for (size_t si = 0; si < mod.simplex_count(q); ++si) {
            const Tuple& tq = mod.nerve[q][si];
            Tuple vertex{tq[0]};
            auto vq = restrict_theta_along_prefixes(mod, v.comp[mod.simplex_pos(vertex)], tq, 1);
            auto contracted = mod.iota[part.p][q][si].apply(vq, part.comp[si], mod.s, mod.n);
            for (size_t i = 0; i < contracted.size(); ++i)
                it->second.comp[si][i] += contracted[i].scalar_mul(sign);
        }
    }
    return out;
}

TotalCochain iota_edge(const CechModel& mod, const ThetaCochain& theta, const TotalCochain& x) {
    if (theta.q != 1) throw DegreeMismatch("iota_edge expects a 1-cochain of fields");
    TotalCochain out = total_zero(mod, x.m);
    for (const auto& [q, part] : x.parts) {
        if (part.p < 1 || form_is_zero(part)) continue;
        if (q + 1 > mod.max_q) {
            throw DegreeMismatch("edge contraction leaves the nerve window at q=" +
                                 std::to_string(q));
        }
        auto it = out.parts.find(q + 1);
        if (it == out.parts.end()) continue;
        GaussianRational sign((q % 2) ? -1 : 1);
        for (size_t si = 0; si < mod.simplex_count(q + 1); ++si) {
            const Tuple& tq = mod.nerve[q + 1][si];
            auto th = restrict_theta_leading_edge(mod, theta, q + 1, si);
            Tuple face0 = tuple_face(tq, 0);
            auto xf = smat_apply(mod.rho_omega[part.p][q + 1][si][0], part.comp[mod.simplex_pos(face0)]);
            auto contracted = mod.iota[part.p][q + 1][si].apply(th, xf, mod.s, mod.n);
            for (size_t i = 0; i < contracted.size(); ++i)
                it->second.comp[si][i] += contracted[i].scalar_mul(sign);
        }
    }
    return out;
}

TotalCochain lie_derivative(const CechModel& mod, const ThetaCochain& v, const TotalCochain& x) {
    TotalCochain a = total_differential(mod, iota_vertex(mod, v, x));
    TotalCochain b = iota_vertex(mod, v, total_differential(mod, x));
    return total_add(a, b);
}

FormCochain lie_componentwise(const CechModel& mod, const ThetaCochain& v, const FormCochain& x) {
    if (v.q != x.q) throw DegreeMismatch("componentwise Lie action needs matching Cech degrees");
    FormCochain out = form_zero(mod, x.q, x.p);
    for (size_t si = 0; si < mod.simplex_count(x.q); ++si)
        out.comp[si] = mod.lie[x.p][x.q][si].apply(v.comp[si], x.comp[si], mod.s, mod.n);
    return out;
}

// --- flattening ---

TotalSpace::TotalSpace(const CechModel& model, int degree) : mod(&model), m(degree) {
    size_t off = 0;
    for (int q = std::max(0, m - model.dim_x); q <= std::min(m, model.max_q); ++q) {
        offset[q] = off;
        off += model.omega_dim(m - q, q);
    }
    dim = off;
}

QVec TotalSpace::flatten_at_zero(const TotalCochain& c) const {
    QVec v(dim);
    for (const auto& [q, part] : c.parts) {
        size_t off = offset.at(q);
        for (size_t si = 0; si < part.comp.size(); ++si)
            for (size_t i = 0; i < part.comp[si].size(); ++i) {
                v[off] = part.comp[si][i].eval_at_zero();
                ++off;
            }
    }
    return v;
}

std::vector<TruncatedSeries> TotalSpace::flatten_series(const TotalCochain& c) const {
    std::vector<TruncatedSeries> v(dim, TruncatedSeries(mod->s, mod->n));
    for (const auto& [q, part] : c.parts) {
        size_t off = offset.at(q);
        for (size_t si = 0; si < part.comp.size(); ++si)
            for (size_t i = 0; i < part.comp[si].size(); ++i) {
                v[off] = part.comp[si][i];
                ++off;
            }
    }
    return v;
}

TotalCochain TotalSpace::unflatten(const QVec& v) const {
    std::vector<TruncatedSeries> sv(dim, TruncatedSeries(mod->s, mod->n));
    for (size_t i = 0; i < dim; ++i)
        if (!v[i].is_zero()) sv[i] = TruncatedSeries::constant(mod->s, mod->n, v[i]);
    return unflatten_series(sv);
}

TotalCochain TotalSpace::unflatten_series(const std::vector<TruncatedSeries>& v) const {
    TotalCochain c = total_zero(*mod, m);
    for (auto& [q, part] : c.parts) {
        size_t off = offset.at(q);
        for (size_t si = 0; si < part.comp.size(); ++si)
            for (size_t i = 0; i < part.comp[si].size(); ++i) {
                part.comp[si][i] = v[off];
                ++off;
            }
    }
    return c;
}

ThetaSpace::ThetaSpace(const CechModel& model, int degree) : mod(&model), q(degree) {
    dim = model.theta_dim(q);
}

QVec ThetaSpace::flatten_at_zero(const ThetaCochain& c) const {
    QVec v(dim);
    size_t off = 0;
    for (size_t si = 0; si < c.comp.size(); ++si)
        for (size_t i = 0; i < c.comp[si].size(); ++i) {
            v[off] = c.comp[si][i].eval_at_zero();
            ++off;
        }
    return v;
}

ThetaCochain ThetaSpace::unflatten(const QVec& v) const {
    ThetaCochain c = theta_zero(*mod, q);
    size_t off = 0;
    for (size_t si = 0; si < c.comp.size(); ++si)
        for (size_t i = 0; i < c.comp[si].size(); ++i) {
            if (!v[off].is_zero()) c.comp[si][i] = TruncatedSeries::constant(mod->s, mod->n, v[off]);
            ++off;
        }
    return c;
}

QMat total_differential_matrix_at_zero(const CechModel& mod, int m) {
    TotalSpace dom(mod, m), cod(mod, m + 1);
    QMat out(cod.dim, dom.dim);
    for (size_t col = 0; col < dom.dim; ++col) {
        QVec e(dom.dim);
        e[col] = GaussianRational(1);
        TotalCochain c = dom.unflatten(e);
        out.set_col(col, cod.flatten_at_zero(total_differential(mod, c)));
    }
    return out;
}

QMat delta_theta_matrix_at_zero(const CechModel& mod, int q) {
    ThetaSpace dom(mod, q), cod(mod, q + 1);
    QMat out(cod.dim, dom.dim);
    for (size_t col = 0; col < dom.dim; ++col) {
        QVec e(dom.dim);
        e[col] = GaussianRational(1);
        out.set_col(col, cod.flatten_at_zero(delta_theta(mod, dom.unflatten(e))));
    }
    return out;
}

// --- validation ---

namespace {

struct Validator {
    const CechModel& mod;
    ValidationCertificate cert;

    void fail(const std::string& identity, const std::string& where) {
        cert.ok = false;
        cert.failures.push_back({identity, where});
    }
    void skip(const std::string& what) { cert.skipped.push_back(what); }

    std::vector<TruncatedSeries> basis_vec(size_t rank, size_t i) const {
        std::vector<TruncatedSeries> v(rank, TruncatedSeries(mod.s, mod.n));
        v[i] = TruncatedSeries::constant(mod.s, mod.n, GaussianRational(1));
        return v;
    }

    void check_nerve_closed() {
        for (int q = 1; q <= mod.max_q; ++q)
            for (const Tuple& t : mod.nerve[q])
                for (int j = 0; j <= q; ++j)
                    if (!mod.has_simplex(tuple_face(t, j)))
                        fail("nerve face-closure", tuple_str(t) + " missing face " + std::to_string(j));
    }

    void check_dd() {
        for (int q = 0; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si)
                for (int p = 0; p + 2 <= mod.dim_x; ++p) {
                    SMat dd = mod.d_map[p + 1][q][si] * mod.d_map[p][q][si];
                    if (!smat_is_zero(dd))
                        fail("d o d = 0", "p=" + std::to_string(p) + " " + tuple_str(mod.nerve[q][si]));
                }
    }

    // Simplicial functoriality: restriction along d_j d_k = d_{k-1} d_j (j < k).
    void check_functorial() {
        for (int q = 2; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                const Tuple& t = mod.nerve[q][si];
                for (int k = 1; k <= q; ++k)
                    for (int j = 0; j < k; ++j) {
                        Tuple fk = tuple_face(t, k), fj = tuple_face(t, j);
                        size_t sik = mod.simplex_pos(fk), sij = mod.simplex_pos(fj);
                        SMat lhs_t = mod.rho_theta[q][si][k] * mod.rho_theta[q - 1][sik][j];
                        SMat rhs_t = mod.rho_theta[q][si][j] * mod.rho_theta[q - 1][sij][k - 1];
                        if (!smat_is_zero(lhs_t - rhs_t))
                            fail("restriction functoriality (Theta)",
                                 tuple_str(t) + " j=" + std::to_string(j) + " k=" + std::to_string(k));
                        for (int p = 0; p <= mod.dim_x; ++p) {
                            SMat lhs = mod.rho_omega[p][q][si][k] * mod.rho_omega[p][q - 1][sik][j];
                            SMat rhs = mod.rho_omega[p][q][si][j] * mod.rho_omega[p][q - 1][sij][k - 1];
                            if (!smat_is_zero(lhs - rhs))
                                fail("restriction functoriality (Omega^" + std::to_string(p) + ")",
                                     tuple_str(t) + " j=" + std::to_string(j) + " k=" +
                                         std::to_string(k));
                        }
                    }
            }
    }

    void check_rho_compat() {
        for (int q = 1; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                const Tuple& t = mod.nerve[q][si];
                for (int j = 0; j <= q; ++j) {
                    size_t fsi = mod.simplex_pos(tuple_face(t, j));
                    std::string where = tuple_str(t) + " face " + std::to_string(j);
                    // rho o d = d o rho
                    for (int p = 0; p < mod.dim_x; ++p) {
                        SMat lhs = mod.rho_omega[p + 1][q][si][j] * mod.d_map[p][q - 1][fsi];
                        SMat rhs = mod.d_map[p][q][si] * mod.rho_omega[p][q][si][j];
                        if (!smat_is_zero(lhs - rhs)) fail("restriction commutes with d", where);
                    }
                    check_bilinear_compat(mod.bracket[q - 1][fsi], mod.bracket[q][si],
                                          mod.rho_theta[q][si][j], mod.rho_theta[q][si][j],
                                          mod.rho_theta[q][si][j], "bracket", where);
                    for (int p = 1; p <= mod.dim_x; ++p)
                        check_bilinear_compat(mod.iota[p][q - 1][fsi], mod.iota[p][q][si],
                                              mod.rho_theta[q][si][j], mod.rho_omega[p][q][si][j],
                                              mod.rho_omega[p - 1][q][si][j],
                                              "contraction (p=" + std::to_string(p) + ")", where);
                    for (int p = 0; p <= mod.dim_x; ++p)
                        check_bilinear_compat(mod.lie[p][q - 1][fsi], mod.lie[p][q][si],
                                              mod.rho_theta[q][si][j], mod.rho_omega[p][q][si][j],
                                              mod.rho_omega[p][q][si][j],
                                              "Lie action (p=" + std::to_string(p) + ")", where);
                }
            }
    }

    /* rho_out(map_face(ea, eb)) = map_target(rho_a ea, rho_b eb) on basis
     * pairs; instances meeting out-of-window pairs are recorded as skipped. */
    void check_bilinear_compat(const Bilinear& face_map, const Bilinear& target_map,
                               const SMat& rho_a, const SMat& rho_b, const SMat& rho_out,
                               const std::string& name, const std::string& where) {
        for (size_t ia = 0; ia < face_map.rank_a; ++ia)
            for (size_t ib = 0; ib < face_map.rank_b; ++ib) {
                if (!face_map.pair_in_window(ia, ib)) {
                    skip(name + " compat at " + where + " pair (" + std::to_string(ia) + "," +
                         std::to_string(ib) + ")");
                    continue;
                }
                auto ea = basis_vec(face_map.rank_a, ia);
                auto eb = basis_vec(face_map.rank_b, ib);
                std::vector<TruncatedSeries> lhs =
                    smat_apply(rho_out, face_map.apply(ea, eb, mod.s, mod.n));
                std::vector<TruncatedSeries> rhs;
                try {
                    rhs = target_map.apply(smat_apply(rho_a, ea), smat_apply(rho_b, eb), mod.s, mod.n);
                } catch (const WindowOverflow&) {
                    skip(name + " compat at " + where + " (target overflow)");
                    continue;
                }
                for (size_t i = 0; i < lhs.size(); ++i)
                    if (lhs[i] != rhs[i]) {
                        fail(name + " compatible with restriction", where);
                        return;
                    }
            }
    }

    void check_delta_sq() {
        for (int q = 0; q + 2 <= mod.max_q; ++q) {
            ThetaSpace dom(mod, q);
            for (size_t i = 0; i < dom.dim; ++i) {
                QVec e(dom.dim);
                e[i] = GaussianRational(1);
                ThetaCochain c = dom.unflatten(e);
                ThetaCochain dd = delta_theta(mod, delta_theta(mod, c));
                if (!theta_is_zero(dd)) {
                    fail("delta^2 = 0 (Theta)", "Cech degree " + std::to_string(q));
                    break;
                }
            }
        }
        for (int p = 0; p <= mod.dim_x; ++p)
            for (int q = 0; q + 2 <= mod.max_q; ++q) {
                bool bad = false;
                for (size_t si = 0; si < mod.simplex_count(q) && !bad; ++si)
                    for (size_t i = 0; i < mod.omega_rank[p][q][si] && !bad; ++i) {
                        FormCochain c = form_zero(mod, q, p);
                        c.comp[si][i] = TruncatedSeries::constant(mod.s, mod.n, GaussianRational(1));
                        if (!form_is_zero(delta_form(mod, delta_form(mod, c)))) {
                            fail("delta^2 = 0 (Omega^" + std::to_string(p) + ")",
                                 tuple_str(mod.nerve[q][si]));
                            bad = true;
                        }
                    }
            }
    }

    void check_total_sq() {
        for (int m = 0; m <= mod.max_q + mod.dim_x - 2; ++m) {
            TotalSpace dom(mod, m);
            bool overflow = false;
            for (size_t i = 0; i < dom.dim; ++i) {
                QVec e(dom.dim);
                e[i] = GaussianRational(1);
                TotalCochain c = dom.unflatten(e);
                bool of = false;
                TotalCochain d1 = total_differential_impl(mod, c, &of);
                TotalCochain d2 = total_differential_impl(mod, d1, &of);
                if (of) {
                    overflow = true;
                    continue;
                }
                if (!d2.is_zero()) {
                    fail("total differential squares to zero", "degree " + std::to_string(m));
                    break;
                }
            }
            if (overflow)
                skip("total differential square at degree " + std::to_string(m) +
                     " (nerve window reached)");
        }
    }

    void check_cartan() {
        for (int q = 0; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                const std::string where = tuple_str(mod.nerve[q][si]);
                for (int p = 0; p <= mod.dim_x; ++p) {
                    size_t rv = mod.theta_rank[q][si], rw = mod.omega_rank[p][q][si];
                    for (size_t iv = 0; iv < rv; ++iv)
                        for (size_t iw = 0; iw < rw; ++iw) {
                            auto v = basis_vec(rv, iv);
                            auto w = basis_vec(rw, iw);
                            bool skipped = false;
                            std::vector<TruncatedSeries> lhs(rw, TruncatedSeries(mod.s, mod.n));
                            try {
                                if (p < mod.dim_x) {
                                    auto dw = smat_apply(mod.d_map[p][q][si], w);
                                    auto t1 = mod.iota[p + 1][q][si].apply(v, dw, mod.s, mod.n);
                                    for (size_t i = 0; i < rw; ++i) lhs[i] += t1[i];
                                }
                                if (p >= 1) {
                                    auto iw2 = mod.iota[p][q][si].apply(v, w, mod.s, mod.n);
                                    auto t2 = smat_apply(mod.d_map[p - 1][q][si], iw2);
                                    for (size_t i = 0; i < rw; ++i) lhs[i] += t2[i];
                                }
                            } catch (const WindowOverflow&) {
                                skipped = true;
                            }
                            if (skipped || !mod.lie[p][q][si].pair_in_window(iv, iw)) {
                                skip("Cartan identity at " + where + " p=" + std::to_string(p) +
                                     " pair (" + std::to_string(iv) + "," + std::to_string(iw) + ")");
                                continue;
                            }
                            auto rhs = mod.lie[p][q][si].apply(v, w, mod.s, mod.n);
                            bool mismatch = false;
                            for (size_t i = 0; i < rw && !mismatch; ++i) mismatch = (lhs[i] != rhs[i]);
                            if (mismatch) {
                                fail("Cartan identity (p=" + std::to_string(p) + ")", where);
                                iv = rv;
                                iw = rw;
                            }
                        }
                }
            }
    }

    void check_extended() {
        // iota_{[u,v]} = Lie_u o iota_v - iota_v o Lie_u on each simplex.
        for (int q = 0; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                const std::string where = tuple_str(mod.nerve[q][si]);
                size_t rv = mod.theta_rank[q][si];
                for (int p = 1; p <= mod.dim_x; ++p) {
                    size_t rw = mod.omega_rank[p][q][si];
                    for (size_t iu = 0; iu < rv; ++iu)
                        for (size_t iv = 0; iv < rv; ++iv)
                            for (size_t iw = 0; iw < rw; ++iw) {
                                auto u = basis_vec(rv, iu);
                                auto v = basis_vec(rv, iv);
                                auto w = basis_vec(rw, iw);
                                try {
                                    auto uv = mod.bracket[q][si].apply(u, v, mod.s, mod.n);
                                    auto lhs = mod.iota[p][q][si].apply(uv, w, mod.s, mod.n);
                                    auto t1 = mod.lie[p - 1][q][si].apply(
                                        u, mod.iota[p][q][si].apply(v, w, mod.s, mod.n), mod.s, mod.n);
                                    auto t2 = mod.iota[p][q][si].apply(
                                        v, mod.lie[p][q][si].apply(u, w, mod.s, mod.n), mod.s, mod.n);
                                    bool mismatch = false;
                                    for (size_t i = 0; i < lhs.size() && !mismatch; ++i)
                                        mismatch = (lhs[i] != t1[i] - t2[i]);
                                    if (mismatch) {
                                        fail("bracket-contraction identity", where);
                                        iu = iv = rv;
                                        iw = rw;
                                    }
                                } catch (const WindowOverflow&) {
                                    skip("bracket-contraction identity at " + where);
                                }
                            }
                }
            }
    }
};

}  // namespace

ValidationCertificate validate_model(const CechModel& mod, ValidationLevel level) {
    Validator v{mod, {}};
    v.check_nerve_closed();
    if (!v.cert.ok) return v.cert;  // everything else indexes through faces
    v.check_dd();
    v.check_functorial();
    v.check_rho_compat();
    v.check_delta_sq();
    v.check_total_sq();
    v.check_cartan();
    if (level == ValidationLevel::extended) v.check_extended();
    return v.cert;
}

}  // namespace periodmap
