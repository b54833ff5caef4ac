#include "periodmap/json_io.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace periodmap {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

json rational_to_json(const GaussianRational& q) {
    return json::array({q.re.get_num().get_str(), q.re.get_den().get_str(),
                        q.im.get_num().get_str(), q.im.get_den().get_str()});
}

GaussianRational rational_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw SchemaError("rational literal must be four strings");
    auto part = [&](size_t i) {
        const json& v = j[i];
        if (v.is_string()) return mpz_class(v.get<std::string>());
        if (v.is_number_integer()) return mpz_class(v.get<long>());
        throw SchemaError("rational component must be an integer string");
    };
    mpz_class rn = part(0), rd = part(1), in = part(2), id = part(3);
    if (rd == 0 || id == 0) throw SchemaError("zero denominator");
    mpq_class re(rn, rd), im(in, id);
    re.canonicalize();
    im.canonicalize();
    return {re, im};
}

void expect_fields(const json& j, const std::set<std::string>& allowed,
                   const std::set<std::string>& required, bool strict,
                   std::vector<std::string>& warnings, const std::string& where) {
    for (const std::string& r : required)
        if (!j.contains(r)) throw SchemaError(where + ": missing field '" + r + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (allowed.count(it.key())) continue;
        if (strict) throw SchemaError(where + ": unknown field '" + it.key() + "'");
        warnings.push_back(where + ": ignoring unknown field '" + it.key() + "'");
    }
}

SMat smat_from_json(const json& j, size_t rows, size_t cols, int s, int n,
                    const std::string& where) {
    if (!j.is_array() || j.size() != rows) throw SchemaError(where + ": matrix row count");
    SMat m = smat_zero(rows, cols, s, n);
    for (size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw SchemaError(where + ": matrix column count");
        for (size_t c = 0; c < cols; ++c) m(r, c) = series_from_json(j[r][c], s, n);
    }
    return m;
}

json smat_to_json(const SMat& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(series_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json bilinear_to_json(const Bilinear& b) {
    json entries = json::array();
    for (const auto& [key, coef] : b.entries) {
        auto [o, ia, ib] = key;
        entries.push_back(json::array({o, ia, ib, series_to_json(coef)}));
    }
    json window = json::array();
    for (const auto& [ia, ib] : b.out_of_window) window.push_back(json::array({ia, ib}));
    return json{{"rank_a", b.rank_a},
                {"rank_b", b.rank_b},
                {"rank_out", b.rank_out},
                {"entries", std::move(entries)},
                {"out_of_window", std::move(window)}};
}

Bilinear bilinear_from_json(const json& j, int s, int n, const std::string& where) {
    Bilinear b;
    b.rank_a = j.at("rank_a").get<size_t>();
    b.rank_b = j.at("rank_b").get<size_t>();
    b.rank_out = j.at("rank_out").get<size_t>();
    for (const json& e : j.at("entries")) {
        if (!e.is_array() || e.size() != 4) throw SchemaError(where + ": bilinear entry shape");
        size_t o = e[0].get<size_t>(), ia = e[1].get<size_t>(), ib = e[2].get<size_t>();
        if (o >= b.rank_out || ia >= b.rank_a || ib >= b.rank_b)
            throw SchemaError(where + ": bilinear entry out of range");
        b.entries[{o, ia, ib}] = series_from_json(e[3], s, n);
    }
    if (j.contains("out_of_window"))
        for (const json& e : j.at("out_of_window"))
            b.out_of_window.insert({e[0].get<size_t>(), e[1].get<size_t>()});
    return b;
}

}  // namespace

json series_to_json(const TruncatedSeries& f) {
    json terms = json::array();
    for (const auto& [m, c] : f.coefficients())
        terms.push_back(json::array({json(m), rational_to_json(c)}));
    return terms;
}

TruncatedSeries series_from_json(const json& j, int s, int n) {
    if (!j.is_array()) throw SchemaError("series literal must be a list of terms");
    TruncatedSeries f(s, n);
    for (const json& term : j) {
        if (!term.is_array() || term.size() != 2) throw SchemaError("series term shape");
        MultiIndex m = term[0].get<MultiIndex>();
        if ((int)m.size() != s) throw SchemaError("series exponent arity");
        f.add_coeff(m, rational_from_json(term[1]));
    }
    return f;
}

json qmat_to_json(const QMat& m) {
    json rows = json::array();
    for (size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(rational_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json coset_to_json(const CosetMap& c) {
    json den = json::array();
    for (const QVec& v : c.denominator_vectors()) {
        json vec = json::array();
        for (const GaussianRational& q : v) vec.push_back(rational_to_json(q));
        den.push_back(std::move(vec));
    }
    return json{{"numerator", qmat_to_json(c.numerator())},
                {"reduced", qmat_to_json(c.reduced_numerator())},
                {"denominator_span", std::move(den)},
                {"zero", c.is_zero()}};
}

json validation_to_json(const ValidationCertificate& cert) {
    json failures = json::array();
    for (const ValidationFailure& f : cert.failures)
        failures.push_back(json{{"identity", f.identity}, {"where", f.where}});
    return json{{"status", cert.ok ? "ok" : "fail"},
                {"failures", std::move(failures)},
                {"skipped_window_limited", cert.skipped.size()}};
}

json suite_report_to_json(const SuiteReport& rep, bool include_timings) {
    ordered out;
    out["suite"] = rep.suite;
    out["status"] = rep.all_pass ? "pass" : "fail";
    out["conventions"] = rep.conventions;
    out["assumptions"] = rep.assumptions;
    ordered instances = ordered::array();
    for (const InstanceReport& inst : rep.instances) {
        ordered ji;
        ji["seed"] = inst.seed;
        ji["spec"] = inst.spec_desc;
        ordered checks = ordered::array();
        for (const CheckResult& c : inst.checks) {
            ordered jc;
            jc["name"] = c.name;
            jc["status"] = c.pass ? "pass" : "fail";
            if (!c.detail.empty()) jc["detail"] = c.detail;
            checks.push_back(std::move(jc));
        }
        ji["checks"] = std::move(checks);
        instances.push_back(std::move(ji));
    }
    out["instances"] = std::move(instances);
    if (include_timings) out["elapsed_ms"] = rep.elapsed_ms;
    return out;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json connection_to_json(const FilteredModule& f, const Connection& c) {
    json matrices = json::array();
    for (int l = 0; l < c.s; ++l) matrices.push_back(smat_to_json(c.a[l]));
    return json{{"format_version", 1},
                {"kind", "connection"},
                {"ring", json{{"s", f.s}, {"n", f.n}}},
                {"levels", f.levels},
                {"weight", f.weight},
                {"matrices", std::move(matrices)}};
}

json cech_to_json(const CechModel& mod, const KSForm* theta) {
    json nerve = json::array();
    for (int q = 0; q <= mod.max_q; ++q) {
        json level = json::array();
        for (const Tuple& t : mod.nerve[q]) level.push_back(t);
        nerve.push_back(std::move(level));
    }

    json omega_rank = json::array();
    for (int p = 0; p <= mod.dim_x; ++p) omega_rank.push_back(mod.omega_rank[p]);

    auto maps_for = [&](auto getter) {
        json per_q = json::array();
        for (int q = 1; q <= mod.max_q; ++q) {
            json per_si = json::array();
            for (size_t si = 0; si < mod.simplex_count(q); ++si) {
                json per_face = json::array();
                for (int j = 0; j <= q; ++j) per_face.push_back(smat_to_json(getter(q, si, j)));
                per_si.push_back(std::move(per_face));
            }
            per_q.push_back(std::move(per_si));
        }
        return per_q;
    };

    json rho_omega = json::array();
    for (int p = 0; p <= mod.dim_x; ++p)
        rho_omega.push_back(maps_for(
            [&](int q, size_t si, int j) -> const SMat& { return mod.rho_omega[p][q][si][j]; }));

    json d_maps = json::array();
    for (int p = 0; p < mod.dim_x; ++p) {
        json per_q = json::array();
        for (int q = 0; q <= mod.max_q; ++q) {
            json per_si = json::array();
            for (size_t si = 0; si < mod.simplex_count(q); ++si)
                per_si.push_back(smat_to_json(mod.d_map[p][q][si]));
            per_q.push_back(std::move(per_si));
        }
        d_maps.push_back(std::move(per_q));
    }

    auto bilinears_for = [&](auto getter, int p_lo, int p_hi) {
        json per_p = json::array();
        for (int p = p_lo; p <= p_hi; ++p) {
            json per_q = json::array();
            for (int q = 0; q <= mod.max_q; ++q) {
                json per_si = json::array();
                for (size_t si = 0; si < mod.simplex_count(q); ++si)
                    per_si.push_back(bilinear_to_json(getter(p, q, si)));
                per_q.push_back(std::move(per_si));
            }
            per_p.push_back(std::move(per_q));
        }
        return per_p;
    };

    json bracket = json::array();
    for (int q = 0; q <= mod.max_q; ++q) {
        json per_si = json::array();
        for (size_t si = 0; si < mod.simplex_count(q); ++si)
            per_si.push_back(bilinear_to_json(mod.bracket[q][si]));
        bracket.push_back(std::move(per_si));
    }

    json doc{{"format_version", 1},
             {"kind", "cech"},
             {"name", mod.name},
             {"ring", json{{"s", mod.s}, {"n", mod.n}}},
             {"dim_x", mod.dim_x},
             {"weight", mod.weight},
             {"max_q", mod.max_q},
             {"nerve", std::move(nerve)},
             {"theta_rank", mod.theta_rank},
             {"omega_rank", std::move(omega_rank)},
             {"rho_theta", maps_for([&](int q, size_t si, int j) -> const SMat& {
                  return mod.rho_theta[q][si][j];
              })},
             {"rho_omega", std::move(rho_omega)},
             {"d", std::move(d_maps)},
             {"iota", bilinears_for([&](int p, int q, size_t si)
                                        -> const Bilinear& { return mod.iota[p][q][si]; },
                                    1, mod.dim_x)},
             {"lie", bilinears_for([&](int p, int q, size_t si)
                                       -> const Bilinear& { return mod.lie[p][q][si]; },
                                   0, mod.dim_x)},
             {"bracket", std::move(bracket)}};

    if (theta) {
        json ks = json::array();
        for (const ThetaCochain& th : theta->theta) {
            json per_si = json::array();
            for (const auto& comp : th.comp) {
                json vec = json::array();
                for (const TruncatedSeries& f : comp) vec.push_back(series_to_json(f));
                per_si.push_back(std::move(vec));
            }
            ks.push_back(std::move(per_si));
        }
        doc["ks_form"] = std::move(ks);
    }
    return doc;
}

namespace {

ModelFile parse_connection(const json& doc, bool strict, std::vector<std::string>& warnings) {
    ModelFile mf;
    mf.kind = "connection";
    expect_fields(doc, {"format_version", "kind", "ring", "levels", "weight", "matrices"},
                  {"ring", "levels", "matrices"}, strict, warnings, "connection model");
    int s = doc.at("ring").at("s").get<int>();
    int n = doc.at("ring").at("n").get<int>();
    std::vector<int> levels = doc.at("levels").get<std::vector<int>>();
    int weight = doc.value("weight", levels.empty() ? 0 : levels.front());
    FilteredModule f(levels, weight, s, n);
    Connection c(s, n, f.rank);
    const json& mats = doc.at("matrices");
    if (!mats.is_array() || (int)mats.size() != s)
        throw SchemaError("connection model: expected one matrix per base variable");
    for (int l = 0; l < s; ++l)
        c.a[l] = smat_from_json(mats[l], f.rank, f.rank, s, n, "matrix A_" + std::to_string(l + 1));
    mf.module = std::move(f);
    mf.connection = std::move(c);
    return mf;
}

ModelFile parse_cech(const json& doc, bool strict, std::vector<std::string>& warnings) {
    ModelFile mf;
    mf.kind = "cech";
    expect_fields(doc,
                  {"format_version", "kind", "name", "ring", "dim_x", "weight", "max_q", "nerve",
                   "theta_rank", "omega_rank", "rho_theta", "rho_omega", "d", "iota", "lie",
                   "bracket", "ks_form"},
                  {"ring", "dim_x", "weight", "max_q", "nerve", "theta_rank", "omega_rank"}, strict,
                  warnings, "cech model");
    CechModel mod;
    mod.name = doc.value("name", "ingested");
    mod.s = doc.at("ring").at("s").get<int>();
    mod.n = doc.at("ring").at("n").get<int>();
    mod.dim_x = doc.at("dim_x").get<int>();
    mod.weight = doc.at("weight").get<int>();
    mod.max_q = doc.at("max_q").get<int>();
    if (mod.max_q < 0 || mod.max_q > 3) throw SchemaError("max_q must lie in [0, 3]");

    const json& nerve = doc.at("nerve");
    if ((int)nerve.size() != mod.max_q + 1) throw SchemaError("nerve must list dimensions 0..max_q");
    mod.nerve.resize(mod.max_q + 1);
    mod.nerve_index.resize(mod.max_q + 1);
    for (int q = 0; q <= mod.max_q; ++q) {
        for (const json& jt : nerve[q]) {
            Tuple t = jt.get<Tuple>();
            if ((int)t.size() != q + 1) throw SchemaError("tuple arity at dimension " + std::to_string(q));
            mod.nerve_index[q][t] = mod.nerve[q].size();
            mod.nerve[q].push_back(std::move(t));
        }
    }

    mod.theta_rank = doc.at("theta_rank").get<std::vector<std::vector<size_t>>>();
    mod.omega_rank = doc.at("omega_rank").get<std::vector<std::vector<std::vector<size_t>>>>();
    if ((int)mod.omega_rank.size() != mod.dim_x + 1)
        throw SchemaError("omega_rank must cover p = 0..dim_x");

    auto rank_theta = [&](const Tuple& t) { return mod.theta_rank[t.size() - 1][mod.simplex_pos(t)]; };
    auto rank_omega = [&](int p, const Tuple& t) {
        return mod.omega_rank[p][t.size() - 1][mod.simplex_pos(t)];
    };

    mod.rho_theta.resize(mod.max_q + 1);
    mod.rho_omega.assign(mod.dim_x + 1, {});
    for (int p = 0; p <= mod.dim_x; ++p) mod.rho_omega[p].resize(mod.max_q + 1);
    for (int q = 1; q <= mod.max_q; ++q) {
        size_t cnt = mod.simplex_count(q);
        mod.rho_theta[q].resize(cnt);
        for (int p = 0; p <= mod.dim_x; ++p) mod.rho_omega[p][q].resize(cnt);
        for (size_t si = 0; si < cnt; ++si) {
            const Tuple& t = mod.nerve[q][si];
            mod.rho_theta[q][si].resize(q + 1);
            for (int p = 0; p <= mod.dim_x; ++p) mod.rho_omega[p][q][si].resize(q + 1);
            for (int j = 0; j <= q; ++j) {
                Tuple face = tuple_face(t, j);
                if (!mod.has_simplex(face)) throw SchemaError("nerve not closed under faces");
                mod.rho_theta[q][si][j] =
                    smat_from_json(doc.at("rho_theta")[q - 1][si][j], rank_theta(t), rank_theta(face),
                                   mod.s, mod.n, "rho_theta " + tuple_str(t));
                for (int p = 0; p <= mod.dim_x; ++p)
                    mod.rho_omega[p][q][si][j] = smat_from_json(
                        doc.at("rho_omega")[p][q - 1][si][j], rank_omega(p, t), rank_omega(p, face),
                        mod.s, mod.n, "rho_omega " + tuple_str(t));
            }
        }
    }

    mod.d_map.assign(mod.dim_x + 1, {});
    for (int p = 0; p <= mod.dim_x; ++p) {
        mod.d_map[p].resize(mod.max_q + 1);
        for (int q = 0; q <= mod.max_q; ++q) {
            size_t cnt = mod.simplex_count(q);
            mod.d_map[p][q].resize(cnt);
            for (size_t si = 0; si < cnt; ++si) {
                const Tuple& t = mod.nerve[q][si];
                if (p < mod.dim_x)
                    mod.d_map[p][q][si] =
                        smat_from_json(doc.at("d")[p][q][si], rank_omega(p + 1, t), rank_omega(p, t),
                                       mod.s, mod.n, "d " + tuple_str(t));
                else
                    mod.d_map[p][q][si] = smat_zero(rank_omega(p, t), rank_omega(p, t), mod.s, mod.n);
            }
        }
    }

    mod.iota.assign(mod.dim_x + 1, {});
    mod.lie.assign(mod.dim_x + 1, {});
    mod.bracket.resize(mod.max_q + 1);
    for (int p = 0; p <= mod.dim_x; ++p) {
        mod.iota[p].resize(mod.max_q + 1);
        mod.lie[p].resize(mod.max_q + 1);
    }
    for (int q = 0; q <= mod.max_q; ++q) {
        size_t cnt = mod.simplex_count(q);
        mod.bracket[q].resize(cnt);
        for (int p = 0; p <= mod.dim_x; ++p) {
            mod.iota[p][q].resize(cnt);
            mod.lie[p][q].resize(cnt);
        }
        for (size_t si = 0; si < cnt; ++si) {
            const Tuple& t = mod.nerve[q][si];
            mod.bracket[q][si] =
                bilinear_from_json(doc.at("bracket")[q][si], mod.s, mod.n, "bracket " + tuple_str(t));
            for (int p = 0; p <= mod.dim_x; ++p) {
                if (p >= 1)
                    mod.iota[p][q][si] = bilinear_from_json(doc.at("iota")[p - 1][q][si], mod.s, mod.n,
                                                            "iota " + tuple_str(t));
                else
                    mod.iota[p][q][si] = Bilinear{rank_theta(t), rank_omega(0, t), rank_omega(0, t),
                                                  {}, {}};
                mod.lie[p][q][si] = bilinear_from_json(doc.at("lie")[p][q][si], mod.s, mod.n,
                                                       "lie " + tuple_str(t));
            }
        }
    }

    if (doc.contains("ks_form")) {
        KSForm theta;
        const json& ks = doc.at("ks_form");
        if ((int)ks.size() != mod.s)
            throw SchemaError("ks_form must have one 1-cochain per base variable");
        for (int l = 0; l < mod.s; ++l) {
            ThetaCochain th = theta_zero(mod, 1);
            if (ks[l].size() != mod.simplex_count(1)) throw SchemaError("ks_form edge count");
            for (size_t si = 0; si < mod.simplex_count(1); ++si) {
                const json& vec = ks[l][si];
                if (vec.size() != mod.theta_rank[1][si]) throw SchemaError("ks_form component rank");
                for (size_t i = 0; i < vec.size(); ++i)
                    th.comp[si][i] = series_from_json(vec[i], mod.s, mod.n);
            }
            theta.theta.push_back(std::move(th));
        }
        mf.ks_form = std::move(theta);
    }

    mf.cech = std::move(mod);
    return mf;
}

}  // namespace

ModelFile parse_model_json(const json& doc, bool strict) {
    if (!doc.is_object()) throw SchemaError("model document must be an object");
    if (!doc.contains("kind")) throw SchemaError("missing 'kind'");
    int version = doc.value("format_version", 1);
    if (version != 1) throw SchemaError("unsupported format_version");
    std::vector<std::string> warnings;
    std::string kind = doc.at("kind").get<std::string>();
    ModelFile mf;
    if (kind == "connection")
        mf = parse_connection(doc, strict, warnings);
    else if (kind == "cech")
        mf = parse_cech(doc, strict, warnings);
    else
        throw SchemaError("unknown kind '" + kind + "'");
    mf.format_version = version;
    mf.warnings = std::move(warnings);
    return mf;
}

ModelFile load_model_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_model_json(doc, strict);
}

}  // namespace periodmap
