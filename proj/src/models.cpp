#include "periodmap/models.hpp"

namespace periodmap {

namespace {

bool is_pure(const Tuple& t) {
    for (int v : t)
        if (v != t[0]) return false;
    return true;
}

std::vector<std::vector<Tuple>> full_two_vertex_nerve(int max_q) {
    std::vector<std::vector<Tuple>> nerve(max_q + 1);
    for (int q = 0; q <= max_q; ++q) {
        for (int mask = 0; mask < (1 << (q + 1)); ++mask) {
            Tuple t(q + 1);
            for (int i = 0; i <= q; ++i) t[i] = (mask >> i) & 1 ? 2 : 1;
            nerve[q].push_back(t);
        }
    }
    return nerve;
}

// exp(c * P) as an exact truncated series, P(0) = 0.
TruncatedSeries exp_series(const TruncatedSeries& p, const mpq_class& c) {
    int s = p.num_vars(), n = p.trunc_order();
    TruncatedSeries scaled = p.scalar_mul(GaussianRational(c));
    TruncatedSeries acc = TruncatedSeries::constant(s, n, GaussianRational(1));
    TruncatedSeries pow = TruncatedSeries::constant(s, n, GaussianRational(1));
    mpq_class fact = 1;
    for (int j = 1; j <= n; ++j) {
        pow = pow * scaled;
        if (pow.is_zero()) break;
        fact *= j;
        acc += pow.scalar_mul(GaussianRational(mpq_class(1) / fact));
    }
    return acc;
}

struct GluingBuilder {
    int window;       // D
    int s, n;
    int dim_x = 1;
    int max_q = 3;
    // lambda(t)^k for k in [-D, D]; identically 1-powers for the constant model
    std::vector<TruncatedSeries> lam_pow;  // index k + D

    int w() const { return 2 * window + 1; }

    const TruncatedSeries& lam(int k) const { return lam_pow[k + window]; }

    size_t rank_of(const Tuple& t) const { return is_pure(t) ? w() : 2 * (size_t)w(); }

    /* Restriction matrix from face R = d_j(Q) into Q.  Pure modules are based
     * in their own chart, mixed modules in the chart of the leading vertex.
     * On the V component the charts agree; on V' the chart change costs
     * lambda^{eps * degree}. */
    SMat rho(const Tuple& q_tuple, int j) const {
        Tuple r = tuple_face(q_tuple, j);
        int source_chart = r[0];
        int target_chart = q_tuple[0];
        bool src_pure = is_pure(r);
        bool tgt_pure = is_pure(q_tuple);
        int wd = w();

        if (tgt_pure) return smat_identity(wd, s, n);  // faces of pure are pure

        SMat m = smat_zero(2 * wd, src_pure ? wd : 2 * wd, s, n);
        int eps = 0;
        if (source_chart != target_chart) eps = (source_chart == 2) ? 1 : -1;
        for (int d = -window; d <= window; ++d) {
            size_t col_v = src_pure ? (size_t)(d + window) : mixed_index(window, 0, d);
            size_t col_vp = src_pure ? (size_t)(d + window) : mixed_index(window, 1, d);
            TruncatedSeries one = TruncatedSeries::constant(s, n, GaussianRational(1));
            m(mixed_index(window, 0, d), col_v) = one;
            TruncatedSeries tw = eps == 0 ? one : lam(eps * d);
            m(mixed_index(window, 1, d), col_vp) = m(mixed_index(window, 1, d), col_vp) + tw;
        }
        return m;
    }

    // d(zeta^k) = k zeta^k dzeta/zeta, diagonal in both components.
    SMat dmat(const Tuple& t) const {
        size_t r = rank_of(t);
        SMat m = smat_zero(r, r, s, n);
        int comps = is_pure(t) ? 1 : 2;
        for (int c = 0; c < comps; ++c)
            for (int d = -window; d <= window; ++d) {
                size_t i = is_pure(t) ? (size_t)(d + window) : mixed_index(window, c, d);
                if (d != 0) m(i, i) = TruncatedSeries::constant(s, n, GaussianRational(d));
            }
        return m;
    }

    enum class MapKind { contraction, bracket, lie_on_functions, lie_on_forms, zero };

    /* Degree-summing bilinears on each component.  Structure constants:
     * contraction 1, bracket (b - a), Lie action b on functions and (a + b)
     * on one-forms.  Pairs whose honest output exceeds the Laurent window
     * with a nonzero constant are marked out-of-window. */
    Bilinear bilinear(const Tuple& t, MapKind kind) const {
        Bilinear b;
        size_t r = rank_of(t);
        b.rank_a = b.rank_b = b.rank_out = r;
        if (kind == MapKind::zero) return b;
        int comps = is_pure(t) ? 1 : 2;
        for (int c = 0; c < comps; ++c)
            for (int da = -window; da <= window; ++da)
                for (int db = -window; db <= window; ++db) {
                    size_t ia = is_pure(t) ? (size_t)(da + window) : mixed_index(window, c, da);
                    size_t ib = is_pure(t) ? (size_t)(db + window) : mixed_index(window, c, db);
                    long coef = 0;
                    switch (kind) {
                        case MapKind::contraction: coef = 1; break;
                        case MapKind::bracket: coef = db - da; break;
                        case MapKind::lie_on_functions: coef = db; break;
                        case MapKind::lie_on_forms: coef = da + db; break;
                        case MapKind::zero: break;
                    }
                    if (coef == 0) continue;
                    int dsum = da + db;
                    if (dsum < -window || dsum > window) {
                        b.out_of_window.insert({ia, ib});
                        continue;
                    }
                    size_t io = is_pure(t) ? (size_t)(dsum + window) : mixed_index(window, c, dsum);
                    b.entries[{io, ia, ib}] = TruncatedSeries::constant(s, n, GaussianRational(coef));
                }
        return b;
    }

    CechModel build(const std::string& name, bool constant_model) const {
        CechModel mod;
        mod.name = name;
        mod.s = s;
        mod.n = n;
        mod.dim_x = dim_x;
        mod.weight = 1;
        mod.max_q = max_q;
        mod.nerve = full_two_vertex_nerve(max_q);
        mod.nerve_index.resize(max_q + 1);
        for (int q = 0; q <= max_q; ++q)
            for (size_t si = 0; si < mod.nerve[q].size(); ++si)
                mod.nerve_index[q][mod.nerve[q][si]] = si;

        mod.omega_rank.assign(dim_x + 1, {});
        mod.rho_omega.assign(dim_x + 1, {});
        mod.d_map.assign(dim_x + 1, {});
        mod.iota.assign(dim_x + 1, {});
        mod.lie.assign(dim_x + 1, {});
        for (int p = 0; p <= dim_x; ++p) {
            mod.omega_rank[p].resize(max_q + 1);
            mod.rho_omega[p].resize(max_q + 1);
            mod.d_map[p].resize(max_q + 1);
            mod.iota[p].resize(max_q + 1);
            mod.lie[p].resize(max_q + 1);
        }
        mod.theta_rank.resize(max_q + 1);
        mod.rho_theta.resize(max_q + 1);
        mod.bracket.resize(max_q + 1);

        for (int q = 0; q <= max_q; ++q) {
            size_t cnt = mod.nerve[q].size();
            mod.theta_rank[q].resize(cnt);
            mod.rho_theta[q].resize(cnt);
            mod.bracket[q].resize(cnt);
            for (int p = 0; p <= dim_x; ++p) {
                mod.omega_rank[p][q].resize(cnt);
                mod.rho_omega[p][q].resize(cnt);
                mod.d_map[p][q].resize(cnt);
                mod.iota[p][q].resize(cnt);
                mod.lie[p][q].resize(cnt);
            }
            for (size_t si = 0; si < cnt; ++si) {
                const Tuple& t = mod.nerve[q][si];
                size_t r = rank_of(t);
                mod.theta_rank[q][si] = r;
                mod.bracket[q][si] =
                    bilinear(t, constant_model ? MapKind::zero : MapKind::bracket);
                for (int p = 0; p <= dim_x; ++p) {
                    mod.omega_rank[p][q][si] = r;
                    mod.d_map[p][q][si] = constant_model || p == dim_x ? smat_zero(r, r, s, n)
                                                                       : dmat(t);
                    mod.iota[p][q][si] = p == 0 ? Bilinear{r, r, r, {}, {}}
                                                : bilinear(t, MapKind::contraction);
                    if (constant_model)
                        mod.lie[p][q][si] = Bilinear{r, r, r, {}, {}};
                    else
                        mod.lie[p][q][si] = bilinear(
                            t, p == 0 ? MapKind::lie_on_functions : MapKind::lie_on_forms);
                }
                if (q >= 1) {
                    mod.rho_theta[q][si].resize(q + 1);
                    for (int p = 0; p <= dim_x; ++p) mod.rho_omega[p][q][si].resize(q + 1);
                    for (int j = 0; j <= q; ++j) {
                        SMat m = rho(t, j);
                        mod.rho_theta[q][si][j] = m;
                        for (int p = 0; p <= dim_x; ++p) mod.rho_omega[p][q][si][j] = m;
                    }
                }
            }
        }
        return mod;
    }
};

}  // namespace

size_t mixed_index(int window, int component, int degree) {
    return (size_t)component * (2 * window + 1) + (degree + window);
}

BuiltinFamily annulus_model(const AnnulusParams& params) {
    GluingBuilder b;
    b.window = params.window;
    b.s = params.s;
    b.n = params.n;

    TruncatedSeries p = params.exponent ? *params.exponent : TruncatedSeries(params.s, params.n);
    if (!params.exponent)
        for (int l = 1; l <= params.s; ++l) p += TruncatedSeries::variable(params.s, params.n, l);
    if (!p.eval_at_zero().is_zero()) throw std::invalid_argument("gluing exponent must vanish at 0");

    mpq_class lam0(params.lambda0_num, params.lambda0_den);
    lam0.canonicalize();
    if (lam0 == 0 || lam0 == 1 || lam0 == -1)
        throw std::invalid_argument("gluing multiplier must avoid 0 and roots of unity");

    b.lam_pow.clear();
    for (int k = -params.window; k <= params.window; ++k) {
        mpq_class c0 = 1;
        for (int i = 0; i < std::abs(k); ++i) c0 *= lam0;
        if (k < 0) c0 = 1 / c0;
        b.lam_pow.push_back(exp_series(p, mpq_class(k)).scalar_mul(GaussianRational(c0)));
    }

    BuiltinFamily fam;
    fam.model = b.build("annulus-elliptic", /*constant_model=*/false);

    // theta_l = -(d_l P) sitting on the V' component in degree zero, with the
    // opposite sign on the reversed edge.
    fam.canonical_theta.theta.clear();
    for (int l = 1; l <= params.s; ++l) {
        ThetaCochain th = theta_zero(fam.model, 1);
        TruncatedSeries u = p.partial(l);
        size_t idx = mixed_index(params.window, 1, 0);
        th.comp[fam.model.simplex_pos({1, 2})][idx] = -u;
        th.comp[fam.model.simplex_pos({2, 1})][idx] = u;
        fam.canonical_theta.theta.push_back(std::move(th));
    }
    return fam;
}

CechModel abelian_model(const AbelianParams& params) {
    GluingBuilder b;
    b.window = params.window;
    b.s = params.s;
    b.n = params.n;

    mpq_class mu0(params.mu0_num, params.mu0_den);
    mu0.canonicalize();
    if (mu0 == 0 || mu0 == 1 || mu0 == -1)
        throw std::invalid_argument("gluing multiplier must avoid 0 and roots of unity");

    b.lam_pow.clear();
    for (int k = -params.window; k <= params.window; ++k) {
        mpq_class c0 = 1;
        for (int i = 0; i < std::abs(k); ++i) c0 *= mu0;
        if (k < 0) c0 = 1 / c0;
        b.lam_pow.push_back(TruncatedSeries::constant(params.s, params.n, GaussianRational(c0)));
    }
    return b.build("abelian-constant", /*constant_model=*/true);
}

}  // namespace periodmap
