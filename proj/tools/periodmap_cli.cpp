// Command-line front end: model ingestion, fiber computations, theorem
// verification suites, fixture management.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "periodmap/json_io.hpp"
#include "periodmap/models.hpp"

using namespace periodmap;
using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace {

int exit_code_for(const std::string& kind) {
    static const std::map<std::string, int> codes = {
        {"ParseError", 2},        {"SchemaError", 3},
        {"MismatchedRing", 10},   {"NotFlat", 11},
        {"NotTransversal", 12},   {"NotCocycle", 13},
        {"NotHomogeneous", 14},   {"DegreeMismatch", 15},
        {"WindowOverflow", 16},   {"DeformationEqFailed", 17},
        {"RankJump", 18},         {"GmIncompatible", 19},
        {"SpecInfeasible", 20},   {"DeformationOrderTooLow", 21},
    };
    auto it = codes.find(kind);
    return it == codes.end() ? 99 : it->second;
}

void emit(const ordered& doc) { std::cout << canonical_dump(doc); }

int fail_with(const EngineError& e) {
    ordered doc;
    doc["status"] = "error";
    doc["error"] = ordered{{"kind", e.kind}, {"message", e.what()}};
    emit(doc);
    return exit_code_for(e.kind);
}

std::string fixtures_dir() {
    if (const char* env = std::getenv("PERIODMAP_FIXTURES")) return env;
    return "fixtures";
}

std::string resolve_path(const std::string& path) {
    const std::string prefix = "fixture:";
    if (path.rfind(prefix, 0) == 0) return fixtures_dir() + "/" + path.substr(prefix.size()) + ".json";
    return path;
}

std::vector<uint64_t> parse_seeds(const std::string& spec) {
    std::vector<uint64_t> seeds;
    size_t range = spec.find("..");
    if (range != std::string::npos) {
        uint64_t lo = std::stoull(spec.substr(0, range));
        uint64_t hi = std::stoull(spec.substr(range + 2));
        for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    size_t pos = 0;
    while (pos < spec.size()) {
        size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        seeds.push_back(std::stoull(spec.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return seeds;
}

BuiltinFamily builtin_annulus() {
    AnnulusParams ap;
    ap.window = 3;
    ap.s = 1;
    ap.n = 2;
    return annulus_model(ap);
}

CechModel builtin_abelian() {
    AbelianParams bp;
    bp.window = 2;
    bp.s = 1;
    bp.n = 2;
    return abelian_model(bp);
}

int cmd_check(const std::string& path, bool strict) {
    ModelFile mf = load_model_file(resolve_path(path), strict);
    ordered doc;
    doc["command"] = "check";
    doc["kind"] = mf.kind;
    doc["warnings"] = mf.warnings;
    bool ok = true;
    if (mf.kind == "connection") {
        FlatnessCertificate flat = check_integrable(*mf.connection);
        ordered fj;
        fj["status"] = flat.ok ? "ok" : "fail";
        if (!flat.ok) {
            fj["pair"] = ordered::array({flat.k, flat.l});
            ordered res = ordered::array();
            for (size_t r = 0; r < flat.residual->rows(); ++r) {
                ordered row = ordered::array();
                for (size_t c = 0; c < flat.residual->cols(); ++c)
                    row.push_back((*flat.residual)(r, c).str());
                res.push_back(std::move(row));
            }
            fj["residual"] = std::move(res);
        }
        doc["flatness"] = std::move(fj);
        TransversalityCertificate tr = check_transversal(*mf.connection, *mf.module);
        doc["transversality"] =
            ordered{{"status", tr.ok_at_fiber ? "ok" : "fail"},
                    {"identically", tr.ok_identically},
                    {"entry", ordered::array({tr.row, tr.col})}};
        ok = flat.ok && tr.ok_at_fiber;
    } else {
        ValidationCertificate cert = validate_model(*mf.cech, ValidationLevel::strict);
        doc["validation"] = ordered::parse(validation_to_json(cert).dump());
        ok = cert.ok;
        if (mf.ks_form) {
            DeformationCertificate def = deformation_eq_check(*mf.cech, *mf.ks_form);
            doc["deformation_equation"] =
                ordered{{"status", def.ok ? "ok" : "fail"}, {"failures", def.failures}};
            ok = ok && def.ok;
        }
    }
    doc["status"] = ok ? "pass" : "fail";
    emit(doc);
    return ok ? 0 : 1;
}

int cmd_compute(const std::string& what, const std::string& path, bool strict, int k, int l, int p,
                bool have_p) {
    ModelFile mf = load_model_file(resolve_path(path), strict);
    ordered doc;
    doc["command"] = "compute";
    doc["what"] = what;

    auto qmat_out = [&](const QMat& m) { doc["matrix"] = ordered::parse(qmat_to_json(m).dump()); };
    auto coset_out = [&](const CosetMap& c) { doc["coset"] = ordered::parse(coset_to_json(c).dump()); };

    // Laurent-extension vectors print as [T-exponent, module-element] pairs.
    auto ar_vector = [](const ArModule& m, const QVec& v) {
        ordered pairs = ordered::array();
        for (int j = m.window_min; j <= m.window_max; ++j) {
            ordered coords = ordered::array();
            bool nonzero = false;
            for (int a = 0; a < m.base.rank; ++a) {
                const GaussianRational& q = v[m.index(a, j)];
                nonzero = nonzero || !q.is_zero();
                coords.push_back(q.str());
            }
            if (nonzero) pairs.push_back(ordered::array({j, coords}));
        }
        return pairs;
    };
    auto ar_coset_out = [&](const ArModule& m, const CosetMap& c) {
        ordered domain = ordered::array();
        for (auto [a, j] : m.har_basis())
            domain.push_back("e" + std::to_string(a + 1) + ".T^" + std::to_string(j));
        ordered cols = ordered::array(), reduced = ordered::array();
        QMat red = c.reduced_numerator();
        for (size_t col = 0; col < c.numerator().cols(); ++col) {
            cols.push_back(ar_vector(m, c.numerator().col(col)));
            reduced.push_back(ar_vector(m, red.col(col)));
        }
        ordered den = ordered::array();
        for (const QVec& v : c.denominator_vectors()) den.push_back(ar_vector(m, v));
        doc["coset"] = ordered{{"window", ordered::array({m.window_min, m.window_max})},
                               {"domain", std::move(domain)},
                               {"numerator", std::move(cols)},
                               {"reduced", std::move(reduced)},
                               {"denominator_span", std::move(den)},
                               {"zero", c.is_zero()}};
    };

    if (what == "dphi" || what == "d2phi" || what == "ii" || what == "dpsi" || what == "dpsibar" ||
        what == "d2psi" || what == "d2psibar") {
        if (mf.kind != "connection")
            throw SchemaError("'" + what + "' expects a connection-kind model");
        const Connection& c = *mf.connection;
        const FilteredModule& f = *mf.module;
        ArModule m(f);
        auto zeta = c.coordinate_field(k);
        auto xi = c.coordinate_field(l);
        if (what == "dphi") qmat_out(first_differential(c, f, xi));
        if (what == "dpsibar") qmat_out(d_psi_bar(m, c, xi));
        if (what == "d2psibar") qmat_out(d2_psi_bar(m, c, zeta, xi));
        if (what == "d2phi")
            coset_out(second_differential(c, f, zeta, xi, have_p ? p : f.max_level()));
        if (what == "ii") coset_out(second_fundamental_form(c, f, zeta, xi));
        if (what == "dpsi") ar_coset_out(m, d_psi(m, c, xi));
        if (what == "d2psi") ar_coset_out(m, d2_psi(m, c, zeta, xi));
    } else if (what == "kappa1" || what == "kappa2" || what == "obstruction") {
        if (mf.kind != "cech") throw SchemaError("'" + what + "' expects a cech-kind model");
        if (!mf.ks_form) throw SchemaError("'" + what + "' needs a ks_form block");
        const CechModel& mod = *mf.cech;
        ThetaCohomology hh(mod);
        if (what == "kappa1") {
            Kappa1Class k1 = kappa1(mod, hh, *mf.ks_form, l);
            ordered coords = ordered::array();
            for (const GaussianRational& q : k1.coords) coords.push_back(q.str());
            doc["class"] = ordered{{"zero", k1.zero}, {"h1_coordinates", std::move(coords)}};
        } else if (what == "kappa2") {
            KSecondClass k2 = kappa2_tilde(mod, *mf.ks_form, k, l);
            QMat box = ks2_box_class(mod, hh, k2);
            doc["representative"] = ordered{{"box_pairs", k2.box.size()},
                                            {"theta_slot_zero", theta_is_zero(k2.theta)}};
            doc["box_class"] = ordered::parse(qmat_to_json(box).dump());
            doc["in_image_kappa1"] = in_image_kappa1(mod, hh, k2);
        } else {
            ObstructionClass ob =
                obstruction(mod, hh, mf.ks_form->theta[k - 1], mf.ks_form->theta[l - 1]);
            ordered rep = ordered::array();
            for (const GaussianRational& q : ob.representative) rep.push_back(q.str());
            doc["class"] = ordered{{"zero", ob.zero}, {"representative", std::move(rep)}};
        }
    } else {
        throw SchemaError("unknown computation '" + what + "'");
    }
    doc["status"] = "ok";
    emit(doc);
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& seeds_spec, int instances,
               const std::string& model, bool timings) {
    std::vector<uint64_t> seeds = parse_seeds(seeds_spec);
    if (instances > 0 && (int)seeds.size() > instances) seeds.resize(instances);
    ModelChoice mc = model == "abelian" ? ModelChoice::abelian : ModelChoice::annulus;

    SuiteReport rep;
    if (suite == "lemmas")
        rep = suite_lemmas(seeds);
    else if (suite == "prop1")
        rep = suite_prop1(seeds);
    else if (suite == "theorem1")
        rep = suite_theorem1(mc, seeds);
    else if (suite == "theorem2")
        rep = suite_theorem2(mc, seeds);
    else if (suite == "theorem5-6")
        rep = suite_theorem5_6(mc, seeds);
    else if (suite == "all")
        rep = suite_all(seeds);
    else
        throw SchemaError("unknown suite '" + suite + "'");

    emit(ordered::parse(suite_report_to_json(rep, false).dump()));
    if (timings) std::cerr << "elapsed_ms " << rep.elapsed_ms << "\n";
    return rep.all_pass ? 0 : 1;
}

int cmd_gen(const std::string& kind, uint64_t seed, int rank, int s, int n) {
    if (kind == "connection") {
        GeneratorSpec spec;
        spec.rank = rank;
        spec.s = s;
        spec.n = n;
        spec.levels.clear();
        for (int i = 0; i < rank; ++i) spec.levels.push_back(rank - 1 - i);
        auto inst = gen_flat_transversal(spec, seed);
        emit(ordered::parse(connection_to_json(inst.module, inst.connection).dump()));
        return 0;
    }
    if (kind == "annulus") {
        BuiltinFamily fam = builtin_annulus();
        emit(ordered::parse(cech_to_json(fam.model, &fam.canonical_theta).dump()));
        return 0;
    }
    if (kind == "abelian") {
        CechModel mod = builtin_abelian();
        emit(ordered::parse(cech_to_json(mod, nullptr).dump()));
        return 0;
    }
    throw SchemaError("unknown generator kind '" + kind + "'");
}

int cmd_fixtures(const std::string& action, const std::string& name) {
    if (action == "list") {
        ordered doc;
        doc["fixtures"] = ordered::array({"annulus-elliptic", "abelian-constant", "nilpotent-rank3",
                                          "nilpotent-plus-tm", "nonflat-pair", "level-drop-two"});
        emit(doc);
        return 0;
    }
    if (action != "dump") throw SchemaError("fixtures action must be list or dump");

    if (name == "annulus-elliptic") {
        BuiltinFamily fam = builtin_annulus();
        emit(ordered::parse(cech_to_json(fam.model, &fam.canonical_theta).dump()));
        return 0;
    }
    if (name == "abelian-constant") {
        CechModel mod = builtin_abelian();
        emit(ordered::parse(cech_to_json(mod, nullptr).dump()));
        return 0;
    }
    int s = 1, n = 2;
    FilteredModule f({2, 1, 0}, 2, s, n);
    Connection c(s, n, 3);
    if (name == "nilpotent-rank3" || name == "nilpotent-plus-tm") {
        c.a[0](1, 0) = TruncatedSeries::constant(s, n, GaussianRational(1));
        c.a[0](2, 1) = TruncatedSeries::constant(s, n, GaussianRational(1));
        if (name == "nilpotent-plus-tm") c.a[0](2, 0) = TruncatedSeries::variable(s, n, 1);
        emit(ordered::parse(connection_to_json(f, c).dump()));
        return 0;
    }
    if (name == "nonflat-pair") {
        FilteredModule f2({2, 1, 0}, 2, 2, 2);
        Connection c2(2, 2, 3);
        c2.a[0](1, 0) = TruncatedSeries::constant(2, 2, GaussianRational(1));
        c2.a[1](1, 0) = TruncatedSeries::variable(2, 2, 1);
        emit(ordered::parse(connection_to_json(f2, c2).dump()));
        return 0;
    }
    if (name == "level-drop-two") {
        c.a[0](2, 0) = TruncatedSeries::constant(s, n, GaussianRational(1));
        emit(ordered::parse(connection_to_json(f, c).dump()));
        return 0;
    }
    throw SchemaError("unknown fixture '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact engine for period-map differential calculus on finite models"};
    app.require_subcommand(1);

    bool strict = false;
    bool json_out = true;
    app.add_flag("--strict", strict, "reject unknown model fields");
    app.add_flag("--json", json_out, "emit reports as JSON documents (the default and only format)");

    auto* check = app.add_subcommand("check", "validate a model file");
    std::string check_path;
    check->add_option("path", check_path)->required();

    auto* compute = app.add_subcommand("compute", "run a fiber computation");
    std::string compute_what, compute_path;
    int opt_k = 1, opt_l = 1, opt_p = 0;
    compute->add_option("what", compute_what)->required();
    compute->add_option("path", compute_path)->required();
    compute->add_option("--k,--zeta", opt_k, "first direction (1-based)");
    compute->add_option("--l,--xi", opt_l, "second direction (1-based)");
    auto* p_opt = compute->add_option("--p", opt_p, "filtration level");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite, seeds_spec = "1..10", verify_model = "annulus";
    int instances = 0;
    bool timings = false;
    verify->add_option("suite", suite)->required();
    verify->add_option("--seeds", seeds_spec, "seed list or range, e.g. 1..50 or 3,5,8");
    verify->add_option("--instances", instances, "cap on the number of instances");
    verify->add_option("--model", verify_model, "annulus | abelian");
    verify->add_flag("--timings", timings, "print elapsed time to stderr");

    auto* gen = app.add_subcommand("gen", "emit a generated scenario as a model file");
    std::string gen_kind = "connection";
    uint64_t gen_seed = 1;
    int gen_rank = 3, gen_s = 1, gen_n = 2;
    gen->add_option("--kind", gen_kind, "connection | annulus | abelian");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--rank", gen_rank);
    gen->add_option("--s", gen_s);
    gen->add_option("--n", gen_n);

    auto* fixtures = app.add_subcommand("fixtures", "list or dump shipped fixtures");
    std::string fx_action, fx_name;
    fixtures->add_option("action", fx_action)->required();
    fixtures->add_option("name", fx_name);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return cmd_check(check_path, strict);
        if (*compute)
            return cmd_compute(compute_what, compute_path, strict, opt_k, opt_l, opt_p,
                               p_opt->count() > 0);
        if (*verify) return cmd_verify(suite, seeds_spec, instances, verify_model, timings);
        if (*gen) return cmd_gen(gen_kind, gen_seed, gen_rank, gen_s, gen_n);
        if (*fixtures) return cmd_fixtures(fx_action, fx_name);
    } catch (const EngineError& e) {
        return fail_with(e);
    } catch (const std::exception& e) {
        ordered doc;
        doc["status"] = "error";
        doc["error"] = ordered{{"kind", "Internal"}, {"message", e.what()}};
        emit(doc);
        return 99;
    }
    return 0;
}
