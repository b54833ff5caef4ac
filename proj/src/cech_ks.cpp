#include "periodmap/cech_ks.hpp"

#include <algorithm>

namespace periodmap {

namespace {

TotalCochain total_at_zero_constant(const CechModel& mod, const TotalCochain& x) {
    TotalCochain out = x;
    for (auto& [q, part] : out.parts)
        for (auto& v : part.comp)
            for (auto& g : v) {
                GaussianRational c0 = g.eval_at_zero();
                g = c0.is_zero() ? TruncatedSeries(mod.s, mod.n)
                                 : TruncatedSeries::constant(mod.s, mod.n, c0);
            }
    return out;
}

bool total_closed_at_zero(const CechModel& mod, const TotalCochain& x) {
    TotalSpace cod(mod, x.m + 1);
    QVec v = cod.flatten_at_zero(total_differential(mod, total_at_zero_constant(mod, x)));
    return std::all_of(v.begin(), v.end(), [](const GaussianRational& q) { return q.is_zero(); });
}

}  // namespace

ThetaCochain cup_bracket(const CechModel& mod, const ThetaCochain& a, const ThetaCochain& b) {
    if (a.q != 1 || b.q != 1) throw DegreeMismatch("cup bracket expects 1-cochains");
    ThetaCochain out = theta_zero(mod, 2);
    for (size_t si = 0; si < mod.simplex_count(2); ++si) {
        const Tuple& t = mod.nerve[2][si];
        auto a_r = restrict_theta_leading_edge(mod, a, 2, si);
        // b on the trailing edge (i1, i2) = leading edge of the 0-face.
        Tuple face0 = tuple_face(t, 0);
        size_t fsi = mod.simplex_pos(face0);
        auto b_face = restrict_theta_leading_edge(mod, b, 1, fsi);
        auto b_r = smat_apply(mod.rho_theta[2][si][0], b_face);
        out.comp[si] = mod.bracket[2][si].apply(a_r, b_r, mod.s, mod.n);
    }
    return out;
}

DeformationCertificate deformation_eq_check(const CechModel& mod, const KSForm& theta) {
    DeformationCertificate cert;
    if ((int)theta.theta.size() != mod.s) {
        cert.ok = false;
        cert.failures.push_back("one-form arity differs from the base dimension");
        return cert;
    }
    for (int l = 0; l < mod.s; ++l) {
        if (!theta_is_zero(delta_theta(mod, theta.theta[l]))) {
            cert.ok = false;
            cert.failures.push_back("theta_" + std::to_string(l + 1) +
                                    " is not a deformed cocycle over R_S");
        }
        ThetaSpace sp2(mod, 2);
        QVec lead = sp2.flatten_at_zero(
            delta_theta(mod, theta_at_zero_constant(mod, theta.theta[l])));
        if (!std::all_of(lead.begin(), lead.end(),
                         [](const GaussianRational& q) { return q.is_zero(); })) {
            cert.ok = false;
            cert.failures.push_back("leading coefficient of theta_" + std::to_string(l + 1) +
                                    " is not a strict cocycle at 0");
        }
    }
    for (int k = 0; k < mod.s; ++k)
        for (int l = 0; l < mod.s; ++l) {
            ThetaCochain lhs = delta_theta(mod, theta_partial(theta.theta[l], k + 1));
            ThetaCochain rhs = cup_bracket(mod, theta.theta[l], theta.theta[k]);
            ThetaCochain diff = theta_add(lhs, theta_scale(rhs, TruncatedSeries::constant(
                                                                    mod.s, mod.n, GaussianRational(-1))));
            if (!theta_is_zero(diff)) {
                cert.ok = false;
                cert.failures.push_back("deformation equation fails for (k,l)=(" +
                                        std::to_string(k + 1) + "," + std::to_string(l + 1) + ")");
            }
        }
    return cert;
}

GmCompatibility gm_compatibility_check(const CechModel& mod, const KSForm& theta) {
    GmCompatibility out;
    auto fail = [&](const std::string& msg) {
        out.ok = false;
        if (out.failures.size() < 8) out.failures.push_back(msg);
    };

    /* Differentiating a truncated series loses the top jet coefficient, so
     * identities involving velocities are decidable through degree n-1 only;
     * the wrong-velocity case is still pinned by the constant term. */
    auto zero_through = [&](const SMat& m) {
        for (size_t r = 0; r < m.rows(); ++r)
            for (size_t c = 0; c < m.cols(); ++c)
                for (const auto& [mi, coef] : m(r, c).coefficients()) {
                    (void)coef;
                    if (total_degree(mi) <= mod.n - 1) return false;
                }
        return true;
    };

    // Matrix of x -> lie(v, x) for a fixed field value v on a simplex.
    auto lie_matrix = [&](const Bilinear& lie, const std::vector<TruncatedSeries>& v) {
        SMat m = smat_zero(lie.rank_out, lie.rank_b, mod.s, mod.n);
        for (const auto& [key, coef] : lie.entries) {
            auto [o, ia, ib] = key;
            if (v[ia].is_zero()) continue;
            m(o, ib) += coef * v[ia];
        }
        return m;
    };

    for (int l = 1; l <= mod.s; ++l) {
        const ThetaCochain& th = theta.theta[l - 1];
        for (int q = 1; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                const Tuple& t = mod.nerve[q][si];
                auto edge_value = restrict_theta_leading_edge(mod, th, q, si);
                for (int j = 0; j <= q; ++j) {
                    SMat rdot_t = smat_partial(mod.rho_theta[q][si][j], l);
                    if (j >= 1) {
                        if (!zero_through(rdot_t))
                            fail("trailing face of " + tuple_str(t) + " moves with t (Theta)");
                    } else {
                        SMat want = smat_zero(0, 0, mod.s, mod.n);
                        SMat lm = lie_matrix(mod.bracket[q][si], edge_value);
                        want = lm * mod.rho_theta[q][si][0];
                        if (!zero_through(rdot_t + want))
                            fail("leading face of " + tuple_str(t) +
                                 " does not move with the one-form (Theta)");
                    }
                    for (int p = 0; p <= mod.dim_x; ++p) {
                        SMat rdot = smat_partial(mod.rho_omega[p][q][si][j], l);
                        if (j >= 1) {
                            if (!zero_through(rdot))
                                fail("trailing face of " + tuple_str(t) + " moves with t (Omega^" +
                                     std::to_string(p) + ")");
                        } else {
                            SMat lm = lie_matrix(mod.lie[p][q][si], edge_value);
                            if (!zero_through(rdot + lm * mod.rho_omega[p][q][si][0]))
                                fail("leading face of " + tuple_str(t) +
                                     " does not move with the one-form (Omega^" +
                                     std::to_string(p) + ")");
                        }
                    }
                }
            }
        // All other structure data must be constant in t.
        for (int q = 0; q <= mod.max_q; ++q)
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                for (int p = 0; p < mod.dim_x; ++p)
                    if (!zero_through(smat_partial(mod.d_map[p][q][si], l)))
                        fail("fiber derivative moves with t at " + tuple_str(mod.nerve[q][si]));
                auto tensor_constant = [&](const Bilinear& b) {
                    for (const auto& [key, coef] : b.entries) {
                        (void)key;
                        for (const auto& [mi, cq] : coef.partial(l).coefficients()) {
                            (void)cq;
                            if (total_degree(mi) <= mod.n - 1) return false;
                        }
                    }
                    return true;
                };
                if (!tensor_constant(mod.bracket[q][si]))
                    fail("bracket moves with t at " + tuple_str(mod.nerve[q][si]));
                for (int p = 0; p <= mod.dim_x; ++p)
                    if (!tensor_constant(mod.iota[p][q][si]) || !tensor_constant(mod.lie[p][q][si]))
                        fail("contraction data moves with t at " + tuple_str(mod.nerve[q][si]));
            }
    }
    return out;
}

TotalCochain gauss_manin(const CechModel& mod, const KSForm& theta, int l,
                         const TotalCochain& omega) {
    if (l < 1 || l > mod.s) throw std::out_of_range("gauss_manin direction");
    GmCompatibility compat = gm_compatibility_check(mod, theta);
    if (!compat.ok)
        throw GmIncompatible("one-form does not match the model's t-dependence: " +
                             (compat.failures.empty() ? "" : compat.failures[0]));
    if (!total_differential(mod, omega).is_zero())
        throw NotCocycle("Gauss-Manin input is not a total cocycle over R_S");
    TotalCochain out = total_add(total_partial(mod, omega, l), iota_edge(mod, theta.theta[l - 1], omega));
    if (!total_differential(mod, out).is_zero())
        throw GmIncompatible("derivative of a cocycle is not closed");
    return out;
}

ThetaCohomology::ThetaCohomology(const CechModel& mod)
    : sp0(mod, 0), sp1(mod, 1), sp2(mod, 2), sp3(mod, 3), bnd1(sp1.dim), bnd2(sp2.dim) {
    delta0 = delta_theta_matrix_at_zero(mod, 0);
    delta1 = delta_theta_matrix_at_zero(mod, 1);
    delta2 = delta_theta_matrix_at_zero(mod, 2);
    for (size_t c = 0; c < delta0.cols(); ++c) bnd1.insert(delta0.col(c));
    for (size_t c = 0; c < delta1.cols(); ++c) bnd2.insert(delta1.col(c));

    h0_rank = kernel_basis(delta0).size();
    SpanReducer h1span(sp1.dim);
    for (const QVec& v : kernel_basis(delta1)) {
        QVec red = bnd1.reduce(v);
        if (h1span.insert(red)) h1_basis.push_back(h1span.echelon().back().second);
    }
    h1_rank = h1_basis.size();
    h2_rank = kernel_basis(delta2).size() - rank(delta1);
}

bool ThetaCohomology::is_cocycle1(const QVec& v) const {
    QVec w = delta1 * v;
    return std::all_of(w.begin(), w.end(), [](const GaussianRational& q) { return q.is_zero(); });
}

QVec ThetaCohomology::h1_coords(const QVec& cocycle) const {
    QVec red = bnd1.reduce(cocycle);
    QMat basis(sp1.dim, h1_basis.size());
    for (size_t c = 0; c < h1_basis.size(); ++c) basis.set_col(c, h1_basis[c]);
    auto sol = solve_linear(basis, red);
    if (!sol) throw NotCocycle("vector is not a cocycle class");
    return *sol;
}

Kappa1Class kappa1(const CechModel& mod, const ThetaCohomology& hh, const KSForm& theta, int l) {
    if (l < 1 || l > mod.s) throw std::out_of_range("kappa1 direction");
    ThetaCochain lead = theta_at_zero_constant(mod, theta.theta[l - 1]);
    QVec v = hh.sp1.flatten_at_zero(lead);
    if (!hh.is_cocycle1(v))
        throw NotCocycle("leading Kodaira-Spencer coefficient is not a strict cocycle");
    Kappa1Class out;
    out.representative = v;
    out.coords = hh.h1_coords(v);
    out.zero = hh.bnd1.contains(v);
    return out;
}

ObstructionClass obstruction(const CechModel& mod, const ThetaCohomology& hh, const ThetaCochain& a,
                             const ThetaCochain& b) {
    QVec va = hh.sp1.flatten_at_zero(a);
    QVec vb = hh.sp1.flatten_at_zero(b);
    if (!hh.is_cocycle1(va) || !hh.is_cocycle1(vb))
        throw NotCocycle("obstruction inputs must be cocycles");
    ThetaCochain a0 = theta_at_zero_constant(mod, a);
    ThetaCochain b0 = theta_at_zero_constant(mod, b);
    ThetaCochain sym = theta_add(cup_bracket(mod, a0, b0), cup_bracket(mod, b0, a0));
    sym = theta_scale(sym, TruncatedSeries::constant(mod.s, mod.n,
                                                     GaussianRational(mpq_class(1, 2))));
    QVec v = hh.sp2.flatten_at_zero(sym);
    ObstructionClass out;
    out.representative = hh.bnd2.reduce(v);
    out.zero = std::all_of(out.representative.begin(), out.representative.end(),
                           [](const GaussianRational& q) { return q.is_zero(); });
    return out;
}

KSecondResidual ks2_cocycle_residual(const CechModel& mod, const KSecondClass& c) {
    KSecondResidual out;
    ThetaSpace sp2(mod, 2);
    auto zero = [](const QVec& v) {
        return std::all_of(v.begin(), v.end(),
                           [](const GaussianRational& q) { return q.is_zero(); });
    };
    for (const auto& [x, y] : c.box) {
        QVec vx = sp2.flatten_at_zero(delta_theta(mod, theta_at_zero_constant(mod, x)));
        QVec vy = sp2.flatten_at_zero(delta_theta(mod, theta_at_zero_constant(mod, y)));
        if (!zero(vx) || !zero(vy)) out.box_ok = false;
    }
    // Theta column: delta(theta) - sum cup[y, x] must vanish at 0.
    ThetaCochain residual = delta_theta(mod, theta_at_zero_constant(mod, c.theta));
    for (const auto& [x, y] : c.box) {
        ThetaCochain cb =
            cup_bracket(mod, theta_at_zero_constant(mod, y), theta_at_zero_constant(mod, x));
        residual = theta_add(
            residual, theta_scale(cb, TruncatedSeries::constant(mod.s, mod.n, GaussianRational(-1))));
    }
    out.theta_residual = sp2.flatten_at_zero(residual);
    out.theta_ok = zero(out.theta_residual);
    return out;
}

KSecondClass kappa2_tilde(const CechModel& mod, const KSForm& theta, int k, int l) {
    DeformationCertificate def = deformation_eq_check(mod, theta);
    if (!def.ok) throw DeformationEqFailed("(" + (def.failures.empty() ? "" : def.failures[0]) + ")");
    KSecondClass out;
    out.box.emplace_back(theta_at_zero_constant(mod, theta.theta[k - 1]),
                         theta_at_zero_constant(mod, theta.theta[l - 1]));
    out.theta = theta_at_zero_constant(mod, theta_partial(theta.theta[l - 1], k));
    KSecondResidual res = ks2_cocycle_residual(mod, out);
    if (!res.box_ok || !res.theta_ok)
        throw DeformationEqFailed("second Kodaira-Spencer representative is not a cocycle");
    return out;
}

QMat ks2_box_class(const CechModel& mod, const ThetaCohomology& hh, const KSecondClass& c) {
    QMat out(hh.h1_rank, hh.h1_rank);
    for (const auto& [x, y] : c.box) {
        QVec vx = hh.sp1.flatten_at_zero(x);
        QVec vy = hh.sp1.flatten_at_zero(y);
        if (!hh.is_cocycle1(vx) || !hh.is_cocycle1(vy))
            throw NotCocycle("box component factors must be cocycles");
        QVec cx = hh.h1_coords(vx);
        QVec cy = hh.h1_coords(vy);
        for (size_t i = 0; i < hh.h1_rank; ++i)
            for (size_t j = 0; j < hh.h1_rank; ++j) out(i, j) += cx[i] * cy[j];
    }
    (void)mod;
    return out;
}

bool in_image_kappa1(const CechModel& mod, const ThetaCohomology& hh, const KSecondClass& c) {
    KSecondResidual res = ks2_cocycle_residual(mod, c);
    if (!res.box_ok || !res.theta_ok)
        throw NotCocycle("second Kodaira-Spencer representative is not a cocycle");
    return qmat_is_zero(ks2_box_class(mod, hh, c));
}

bool ks2_equal_mod_kappa1(const CechModel& mod, const ThetaCohomology& hh,
                          const std::vector<Kappa1Class>& kappa1_span, const KSecondClass& a,
                          const KSecondClass& b) {
    if (ks2_box_class(mod, hh, a) != ks2_box_class(mod, hh, b)) return false;
    SpanReducer den(hh.sp1.dim);
    for (const auto& [p, w] : hh.bnd1.echelon()) {
        (void)p;
        den.insert(w);
    }
    for (const Kappa1Class& k1 : kappa1_span) den.insert(k1.representative);
    QVec d = hh.sp1.flatten_at_zero(a.theta);
    QVec e = hh.sp1.flatten_at_zero(b.theta);
    for (size_t i = 0; i < d.size(); ++i) d[i] -= e[i];
    return den.contains(d);
}

// --- realized filtered structure ---

namespace {

// Series matrix of the total differential on TotalSpace(m).
SMat total_differential_series_matrix(const CechModel& mod, int m) {
    TotalSpace dom(mod, m), cod(mod, m + 1);
    SMat out = smat_zero(cod.dim, dom.dim, mod.s, mod.n);
    for (size_t col = 0; col < dom.dim; ++col) {
        QVec e(dom.dim);
        e[col] = GaussianRational(1);
        auto v = cod.flatten_series(total_differential(mod, dom.unflatten(e)));
        for (size_t r = 0; r < cod.dim; ++r) out(r, col) = v[r];
    }
    return out;
}

}  // namespace

RealizedVHS realize_vhs(const CechModel& mod, const KSForm& theta) {
    const int m = mod.weight;
    RealizedVHS vhs;
    vhs.space_m = TotalSpace(mod, m);
    vhs.space_m1 = TotalSpace(mod, m - 1);

    SMat dm_series = total_differential_series_matrix(mod, m);
    SMat dm1_series = total_differential_series_matrix(mod, m - 1);
    QMat dm0 = smat_at_zero(dm_series);
    QMat dm10 = smat_at_zero(dm1_series);

    size_t null0 = kernel_basis(dm0).size();
    size_t rank_b0 = rank(dm10);
    size_t h_fiber = null0 - rank_b0;

    // Freeness over R_S by length multiplicativity of kernel/image.
    FlattenedRing ring(mod.s, mod.n);
    size_t nm = ring.monomial_count();
    QMat dmf = ring.flatten_matrix(dm_series);
    QMat dm1f = ring.flatten_matrix(dm1_series);
    size_t h_length = (vhs.space_m.dim * nm - rank(dmf)) - rank(dm1f);
    if (h_length != nm * h_fiber)
        throw RankJump("cohomology is not free over the truncated ring: length " +
                       std::to_string(h_length) + " vs " + std::to_string(nm * h_fiber));

    // Adapted fiber basis along the form-degree filtration.
    SpanReducer covered(vhs.space_m.dim);
    for (size_t c = 0; c < dm10.cols(); ++c) covered.insert(dm10.col(c));
    std::vector<QVec> fiber_basis;
    std::vector<int> levels;
    int p_high = std::min(mod.dim_x, m);
    int p_low = std::max(0, m - mod.max_q);
    for (int p = p_high; p >= p_low; --p) {
        // Columns of the F^p subcomplex: parts with form degree >= p.
        std::vector<size_t> cols;
        for (const auto& [q, off] : vhs.space_m.offset) {
            if (m - q < p) continue;
            size_t block = mod.omega_dim(m - q, q);
            for (size_t i = 0; i < block; ++i) cols.push_back(off + i);
        }
        QMat sub(dm0.rows(), cols.size());
        for (size_t j = 0; j < cols.size(); ++j) sub.set_col(j, dm0.col(cols[j]));
        for (const QVec& k : kernel_basis(sub)) {
            QVec emb(vhs.space_m.dim);
            for (size_t j = 0; j < cols.size(); ++j) emb[cols[j]] = k[j];
            if (covered.insert(emb)) {
                fiber_basis.push_back(emb);
                levels.push_back(p);
            }
        }
    }
    if (fiber_basis.size() != h_fiber)
        throw RankJump("adapted basis size " + std::to_string(fiber_basis.size()) +
                       " differs from fiber cohomology rank " + std::to_string(h_fiber));

    // Lift each fiber cocycle to a cocycle over R_S inside its subcomplex.
    for (size_t a = 0; a < fiber_basis.size(); ++a) {
        int p = levels[a];
        std::vector<size_t> cols;
        for (const auto& [q, off] : vhs.space_m.offset) {
            if (m - q < p) continue;
            size_t block = mod.omega_dim(m - q, q);
            for (size_t i = 0; i < block; ++i) cols.push_back(off + i);
        }
        // Unknown higher-order correction y supported on the subcomplex with
        // y(0) = 0; columns of the flattened system drop constant monomials.
        SMat sub = smat_zero(dm_series.rows(), cols.size(), mod.s, mod.n);
        for (size_t j = 0; j < cols.size(); ++j)
            for (size_t r = 0; r < dm_series.rows(); ++r) sub(r, j) = dm_series(r, cols[j]);
        QMat subf = ring.flatten_matrix(sub);
        size_t const_idx = ring.monomial_index(MultiIndex(mod.s, 0));
        std::vector<size_t> unknown_cols;
        for (size_t j = 0; j < cols.size(); ++j)
            for (size_t mi = 0; mi < nm; ++mi)
                if (mi != const_idx) unknown_cols.push_back(j * nm + mi);
        // rhs = -D(constant lift)
        std::vector<TruncatedSeries> v0(cols.size(), TruncatedSeries(mod.s, mod.n));
        for (size_t j = 0; j < cols.size(); ++j) {
            const GaussianRational& q0 = fiber_basis[a][cols[j]];
            if (!q0.is_zero()) v0[j] = TruncatedSeries::constant(mod.s, mod.n, q0);
        }
        QVec rhs = ring.flatten_vector(smat_apply(sub, v0));
        for (auto& q0 : rhs) q0 = -q0;
        QMat sysm(subf.rows(), unknown_cols.size());
        for (size_t j = 0; j < unknown_cols.size(); ++j) sysm.set_col(j, subf.col(unknown_cols[j]));
        auto sol = solve_linear(sysm, rhs);
        if (!sol) throw RankJump("fiber cocycle does not lift inside its filtration level");
        std::vector<TruncatedSeries> lifted = v0;
        for (size_t j = 0; j < unknown_cols.size(); ++j) {
            if ((*sol)[j].is_zero()) continue;
            size_t col = unknown_cols[j] / nm, mi = unknown_cols[j] % nm;
            TruncatedSeries t(mod.s, mod.n);
            t.set_coeff(ring.monomials()[mi], (*sol)[j]);
            lifted[col] += t;
        }
        std::vector<TruncatedSeries> full(vhs.space_m.dim, TruncatedSeries(mod.s, mod.n));
        for (size_t j = 0; j < cols.size(); ++j) full[cols[j]] = lifted[j];
        vhs.basis.push_back(vhs.space_m.unflatten_series(full));
    }

    vhs.module = FilteredModule(levels, mod.weight, mod.s, mod.n);
    vhs.connection = Connection(mod.s, mod.n, (int)fiber_basis.size());

    // Connection entries: express each Gauss-Manin image in the basis modulo
    // boundaries, over R_S.
    size_t h = fiber_basis.size();
    SMat combined = smat_zero(vhs.space_m.dim, h + vhs.space_m1.dim, mod.s, mod.n);
    for (size_t b = 0; b < h; ++b) {
        auto flat = vhs.space_m.flatten_series(vhs.basis[b]);
        for (size_t r = 0; r < vhs.space_m.dim; ++r) combined(r, b) = flat[r];
    }
    for (size_t c = 0; c < vhs.space_m1.dim; ++c)
        for (size_t r = 0; r < vhs.space_m.dim; ++r) combined(r, h + c) = dm1_series(r, c);

    GmCompatibility compat = gm_compatibility_check(mod, theta);
    if (!compat.ok)
        throw GmIncompatible("one-form does not match the model's t-dependence: " +
                             (compat.failures.empty() ? "" : compat.failures[0]));
    for (int l = 1; l <= mod.s; ++l)
        for (size_t a = 0; a < h; ++a) {
            TotalCochain w = total_add(total_partial(mod, vhs.basis[a], l),
                                       iota_edge(mod, theta.theta[l - 1], vhs.basis[a]));
            if (!total_differential(mod, w).is_zero())
                throw GmIncompatible("derivative of a lifted cocycle is not closed");
            auto sol = solve_series(combined, vhs.space_m.flatten_series(w));
            if (!sol) throw RankJump("Gauss-Manin image is not expressible in the lifted basis");
            for (size_t b = 0; b < h; ++b) vhs.connection.a[l - 1](b, a) = (*sol)[b];
        }

    FlatnessCertificate flat = check_integrable(vhs.connection);
    if (!flat.ok) throw GmIncompatible("realized connection is not flat");
    TransversalityCertificate trans = check_transversal(vhs.connection, vhs.module);
    if (!trans.ok_at_fiber) throw GmIncompatible("realized connection is not transversal at 0");
    return vhs;
}

GriffithsCertificate griffiths_check(const CechModel& mod, const KSForm& theta, int l,
                                     const RealizedVHS& vhs) {
    GriffithsCertificate cert;
    cert.d_phi_block = first_differential(vhs.connection, vhs.module,
                                          vhs.connection.coordinate_field(l));

    // Cup-contraction with the leading Kodaira-Spencer cocycle, expressed in
    // the realized fiber basis modulo boundaries.
    size_t h = vhs.basis.size();
    QMat dm10 = smat_at_zero(total_differential_series_matrix(mod, mod.weight - 1));
    QMat sys(vhs.space_m.dim, h + dm10.cols());
    for (size_t b = 0; b < h; ++b)
        sys.set_col(b, vhs.space_m.flatten_at_zero(vhs.basis[b]));
    for (size_t c = 0; c < dm10.cols(); ++c) sys.set_col(h + c, dm10.col(c));

    ThetaCochain lead = theta_at_zero_constant(mod, theta.theta[l - 1]);
    KSForm lead_form;
    lead_form.theta.assign(mod.s, lead);
    QMat cup(h, h);
    for (size_t a = 0; a < h; ++a) {
        TotalCochain fiber_rep = total_at_zero_constant(mod, vhs.basis[a]);
        TotalCochain y = iota_edge(mod, lead, fiber_rep);
        auto sol = solve_linear(sys, vhs.space_m.flatten_at_zero(y));
        if (!sol) throw RankJump("cup image is not a combination of basis classes");
        for (size_t b = 0; b < h; ++b) cup(b, a) = (*sol)[b];
    }
    cert.cup_block = graded_block(cup, vhs.module, -1);
    cert.ok = (cert.cup_block == cert.d_phi_block);
    return cert;
}

// --- Archimedean cochain level ---

bool ArCochain::is_zero() const {
    for (const auto& [o, x] : by_offset)
        if (!x.is_zero()) return false;
    return true;
}

bool ar_cochain_in_f(const ArCochain& c, int k) {
    for (const auto& [o, x] : c.by_offset)
        if (o > -k && !x.is_zero()) return false;
    return true;
}

ArCochain d2_psi_cochain_value(const CechModel& mod, const KSForm& theta, int k, int l,
                               const TotalCochain& omega) {
    if (mod.n < 1)
        throw EngineError("DeformationOrderTooLow",
                          "second-order data needs truncation order >= 1");
    DeformationCertificate def = deformation_eq_check(mod, theta);
    if (!def.ok) throw DeformationEqFailed(def.failures.empty() ? "" : def.failures[0]);
    if (!total_closed_at_zero(mod, omega))
        throw NotCocycle("input class is not closed at the fiber");

    TotalCochain w0 = total_at_zero_constant(mod, omega);
    ThetaCochain zeta = theta_at_zero_constant(mod, theta.theta[k - 1]);
    ThetaCochain xi = theta_at_zero_constant(mod, theta.theta[l - 1]);
    ThetaCochain th = theta_at_zero_constant(mod, theta_partial(theta.theta[l - 1], k));

    ArCochain out;
    out.m = omega.m;

    // zeta -| xi -| omega at offset +2 (double leading-edge contraction).
    TotalCochain t1 = iota_edge(mod, zeta, iota_edge(mod, xi, w0));

    /* - xi -| Lie_zeta(omega) . T^{p+1}: both one-cochains sit on the leading
     * edge of the same simplex; the Lie action is the model's componentwise
     * one on the 0-face, the bold differential supplies the raised T power
     * (offset +2 as well). */
    TotalCochain t2 = total_zero(mod, omega.m);
    for (const auto& [q, part] : w0.parts) {
        if (part.p < 1) continue;
        if (q + 1 > mod.max_q) throw DegreeMismatch("cochain formula leaves the nerve window");
        auto it = t2.parts.find(q + 1);
        if (it == t2.parts.end()) continue;
        for (size_t si = 0; si < mod.simplex_count(q + 1); ++si) {
            const Tuple& t = mod.nerve[q + 1][si];
            auto zr = restrict_theta_leading_edge(mod, zeta, q + 1, si);
            auto xr = restrict_theta_leading_edge(mod, xi, q + 1, si);
            Tuple face0 = tuple_face(t, 0);
            auto wf = smat_apply(mod.rho_omega[part.p][q + 1][si][0], part.comp[mod.simplex_pos(face0)]);
            auto lied = mod.lie[part.p][q + 1][si].apply(zr, wf, mod.s, mod.n);
            auto contracted = mod.iota[part.p][q + 1][si].apply(xr, lied, mod.s, mod.n);
            for (size_t i = 0; i < contracted.size(); ++i)
                it->second.comp[si][i] -= contracted[i];
        }
    }

    // theta -| omega at offset +1.
    TotalCochain t3 = iota_edge(mod, th, w0);

    out.by_offset[2] = total_add(t1, t2);
    out.by_offset[1] = t3;
    return out;
}

ArQuotient::ArQuotient(const CechModel& mod, const KSForm& theta,
                       const std::vector<TotalCochain>& har_basis)
    : space(mod, mod.weight), denominator(2 * TotalSpace(mod, mod.weight).dim) {
    size_t dim = space.dim;
    // Boundaries in each offset copy.
    QMat dm10 = total_differential_matrix_at_zero(mod, mod.weight - 1);
    for (size_t c = 0; c < dm10.cols(); ++c) {
        QVec col = dm10.col(c);
        QVec v1(2 * dim), v2(2 * dim);
        for (size_t i = 0; i < dim; ++i) {
            v1[i] = col[i];
            v2[dim + i] = col[i];
        }
        denominator.insert(v1);
        denominator.insert(v2);
    }
    /* Contraction images of the whole degree-m fiber: the quotient is taken
     * at the level of the complex, so the span of the derivatives of F_ar^0
     * contributes the theta-contraction of every fiber element (not only of
     * the cocycle classes), projected to positive offsets.  The coefficient
     * derivative part stays at nonpositive offsets and is already dropped. */
    (void)har_basis;
    for (int l = 0; l < mod.s; ++l) {
        ThetaCochain lead = theta_at_zero_constant(mod, theta.theta[l]);
        for (size_t i = 0; i < dim; ++i) {
            QVec e(dim);
            e[i] = GaussianRational(1);
            TotalCochain img = iota_edge(mod, lead, space.unflatten(e));
            QVec flat = space.flatten_at_zero(img);
            QVec v(2 * dim);
            for (size_t j = 0; j < dim; ++j) v[j] = flat[j];
            denominator.insert(v);
        }
    }
}

QVec ArQuotient::project(const ArCochain& c) const {
    QVec v(2 * space.dim);
    for (const auto& [o, x] : c.by_offset) {
        if (x.is_zero()) continue;
        if (o <= 0) continue;  // F_ar^0 component, quotiented structurally
        if (o > 2) throw DegreeMismatch("offset beyond the second-order window");
        QVec flat = space.flatten_at_zero(x);
        for (size_t i = 0; i < space.dim; ++i) v[(o - 1) * space.dim + i] += flat[i];
    }
    return v;
}

QVec ArQuotient::reduce(const ArCochain& c) const { return denominator.reduce(project(c)); }

bool ArQuotient::is_zero(const ArCochain& c) const {
    QVec r = reduce(c);
    return std::all_of(r.begin(), r.end(), [](const GaussianRational& q) { return q.is_zero(); });
}

}  // namespace periodmap
