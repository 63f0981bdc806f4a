#include <ncglue/acceptance.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace ncglue;

namespace {

struct Options {
    bool json = false;
    std::string pres;
    int D = 0;
};

// --D wins, then NCGLUE_DEGREE_BOUND, then the command's default.
int degree_bound(int flag, int fallback) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("NCGLUE_DEGREE_BOUND")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return fallback;
}

std::shared_ptr<const LoadedPresentation> load(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("--pres is required");
    return load_presentation(data_path(name));
}

json words_json(const Alphabet& A, const std::vector<Word>& ws) {
    json j = json::array();
    for (const auto& w : ws) j.push_back(w.empty() ? "1" : word_string(A, w));
    return j;
}

// Output of one command: reports plus an optional human-readable preamble.
struct Outcome {
    std::vector<Report> reports;
    std::string text;
};

using Command = std::function<Outcome()>;

Outcome single(const std::string& check, const std::function<void(Report&)>& body) {
    return {{timed_report(check, body)}, ""};
}

Outcome cmd_nf(const Options& o, const std::string& expr) {
    auto f = load(o.pres);
    std::string value;
    auto out = single("nf", [&](Report& r) {
        auto rs = rewrite_of(f->file);
        auto e = parse_expression(expr, f->file.alphabet, f->file.params);
        auto n = rs->normal_form(rebase(e, rs->alphabet()));
        value = n.to_string();
        r.details = {{"input", expr}, {"normal_form", value}};
        r.summary = value;
    });
    out.text = value.empty() ? "" : value + "\n";
    return out;
}

Outcome cmd_basis(const Options& o) {
    auto f = load(o.pres);
    int D = degree_bound(o.D, 4);
    return single("basis", [&](Report& r) {
        auto rs = rewrite_of(f->file);
        auto ws = enumerate_filtered_basis(*rs, D);
        std::map<size_t, size_t> by_len;
        for (const auto& w : ws) ++by_len[w.size()];
        for (const auto& [l, n] : by_len) r.dimensions["degree"][std::to_string(l)] = n;
        r.dimensions["D"] = D;
        r.dimensions["total"] = ws.size();
        r.details["words"] = words_json(*rs->alphabet(), ws);
        r.summary = std::to_string(ws.size()) + " normal words of degree <= " + std::to_string(D);
    });
}

Outcome cmd_confluence(const Options& o) {
    auto f = load(o.pres);
    int D = degree_bound(o.D, 6);
    return single("confluence", [&](Report& r) {
        auto rs = rewrite_of(f->file);
        auto rep = confluence_check(*rs, D);
        r.dimensions = {{"D", D}, {"overlaps", rep.overlaps_checked}, {"failures", rep.failures.size()}};
        for (const auto& fl : rep.failures)
            r.witness["failures"].push_back({{"word", word_string(*rs->alphabet(), fl.word)},
                                             {"left", fl.left.to_string()}, {"right", fl.right.to_string()}});
        r.require("all overlaps resolve", rep.confluent());
        r.summary = std::to_string(rep.overlaps_checked) + " overlaps, " + std::to_string(rep.failures.size()) + " unresolved";
    });
}

Outcome cmd_covering(const Options& o) {
    auto f = load(o.pres);
    return single("covering", [&](Report& r) {
        auto c = fd_with_ideals(f->file);
        if (c.J.empty()) throw std::invalid_argument(f->file.name + " declares no ideals");
        std::vector<const QSpan*> ps;
        for (size_t i = 0; i < c.J.size(); ++i) {
            ps.push_back(&c.J[i]);
            r.dimensions["ideals"][c.names[i]] = c.J[i].dim();
        }
        auto I = span_intersection_all(ps);
        r.dimensions["A"] = c.A.dim();
        r.dimensions["intersection"] = I.dim();
        r.require("intersection of the ideals is 0", I.dim() == 0);
        r.summary = "dim A = " + std::to_string(c.A.dim()) + ", dim of the intersection = " + std::to_string(I.dim());
    });
}

Outcome cmd_complete(const Options& o) {
    auto f = load(o.pres);
    std::string text;
    auto out = single("complete", [&](Report& r) {
        auto c = fd_with_ideals(f->file);
        auto rep = covering_completion_check(c.A, c.J);
        r.dimensions = {{"A", rep.dim_A}, {"completion", rep.dim_completion}, {"image", rep.dim_image}};
        r.require("covering", rep.is_covering);
        r.require("complete", rep.complete);
        if (!rep.complete) {
            r.witness["tuple"] = tuple_json(c.A, rep.witness);
            text = "witness without preimage: (";
            for (size_t i = 0; i < rep.witness.size(); ++i)
                text += (i ? ", " : "") + c.A.vec_string(rep.witness[i]) + " + " + c.names[i];
            text += ")\n";
        }
        r.summary = std::string(rep.complete ? "complete" : "incomplete") + ", dim A = " + std::to_string(rep.dim_A) +
                    ", dim A_c = " + std::to_string(rep.dim_completion);
    });
    out.text = text;
    return out;
}

Outcome cmd_lattice(const Options& o) {
    auto f = load(o.pres);
    return single("lattice", [&](Report& r) {
        auto c = fd_with_ideals(f->file);
        auto lat = lattice_condition_check(c.A, c.J);
        auto rows = [](const std::vector<LatticeIdentity>& ids) {
            json j = json::array();
            for (const auto& id : ids)
                j.push_back({{"identity", id.name}, {"lhs", id.lhs_dim}, {"rhs", id.rhs_dim}, {"holds", id.holds}});
            return j;
        };
        r.details["sufficient"] = rows(lat.prop_a);
        r.details["necessary"] = rows(lat.prop_b);
        r.details["complete"] = lat.complete;
        r.details["sufficient_some_ordering"] = lat.prop_a_some_ordering;
        r.details["necessary_all"] = lat.prop_b_all;
        // the lattice conditions bracket completeness; that is what is checked
        r.require("sufficient condition implies complete", !lat.prop_a_some_ordering || lat.complete);
        r.require("complete implies necessary condition", !lat.complete || lat.prop_b_all);
        if (c.J.size() == 3) r.require("three-ideal equivalence", lat.three_ideal_equivalence);
        r.summary = std::string(lat.complete ? "complete" : "incomplete") + ", sufficient condition " +
                    (lat.prop_a_some_ordering ? "holds" : "fails") + ", necessary condition " +
                    (lat.prop_b_all ? "holds" : "fails");
    });
}

Outcome cmd_glue_sphere(const Options& o) {
    int D = degree_bound(o.D, 5);
    std::string pres = o.pres.empty() ? "sphere.alg" : o.pres;
    return single("glue-sphere", [&](Report& r) {
        auto s = sphere_from_files(pres);
        auto k = morphism_kernel_intersection<Scalar>({&s.pi1, &s.pi2}, D);
        auto sur = build_sphere_gluing(Scalar::p(), Scalar::q()).surjectivity(std::min(D, 4));
        r.dimensions = {{"D", D}, {"kernel_intersection", k.dim()}, {"glued_slice", sur.glued_dim},
                        {"image", sur.image_dim}};
        r.require("ker pi1 cap ker pi2 = 0", k.dim() == 0);
        r.require("compatible pairs of degree <= min(D, 4) are images", sur.contained);
        r.summary = "kernel intersection " + std::to_string(k.dim()) + ", " + std::to_string(sur.glued_dim) +
                    " compatible pairs all in the image";
    });
}

Outcome cmd_calculus_adapt(const Options& o, const std::string& ideal) {
    auto f = load(o.pres.empty() ? "sphere_calculus.alg" : o.pres);
    int D = degree_bound(o.D, 4);
    return single("calculus-adapt", [&](Report& r) { calculus_adapt(r, *f, ideal, D); });
}

Outcome cmd_calculus_verify(const Options& o, bool sphere, int samples, unsigned seed) {
    return single("calculus-verify", [&](Report& r) {
        detail::DgaSample s;
        bool closed = true;
        if (sphere) {
            auto sc = build_sphere_calculus<Scalar>();
            s = detail::dga_sample(sc.alphabet, [&sc](const Element<Scalar>& e) { return sc.is_zero(e); }, {}, seed, samples);
            for (const auto& g : sc.generators) closed = closed && sc.is_zero(free_d(g));
            r.details["calculus"] = "sphere";
        } else {
            auto f = load(o.pres);
            auto cal = f->file.calculus();
            auto rs = std::make_shared<const RS>(cal.rs);
            s = detail::dga_sample(
                cal.alphabet, [rs](const Element<Scalar>& e) { return rs->normal_form(e).is_zero(); },
                [rs](const Element<Scalar>& e) { return rs->normal_form(e); }, seed, samples);
            for (const auto& rel : cal.relations) closed = closed && rs->normal_form(free_d(rel)).is_zero();
            r.details["calculus"] = f->file.name;
        }
        r.details["samples"] = detail::dga_json(s);
        r.require("d of every relation lies in the ideal", closed);
        r.require("d^2 = 0", s.d_squared == s.samples);
        r.require("graded Leibniz rule", s.leibniz == s.samples);
        r.require("d respects the quotient", s.d_well_defined == s.samples);
        r.summary = std::to_string(s.samples) + " random samples";
    });
}

Outcome cmd_interface(const Options& o, bool equal) {
    int D = degree_bound(o.D, equal ? 4 : 3);
    return single("interface", [&](Report& r) {
        auto rep = disc_interface_calculus(equal ? Scalar::q() : Scalar::p(), Scalar::q(), D);
        r.dimensions = {{"D", D}, {"ideal_1", rep.ideal_dim1}, {"ideal_2", rep.ideal_dim2}};
        for (const auto& g : rep.degrees)
            r.dimensions["glued"][std::to_string(g.n)] = g.glued,
            r.dimensions["direct_sum"][std::to_string(g.n)] = g.direct_sum;
        for (const auto& [n, ok] : rep.certified) r.details["certified"][n] = ok;
        if (equal) {
            bool none = true;
            for (const auto& [n, ok] : rep.certified) none = none && !ok;
            r.require("no differential of a generator in the interface span", none);
        } else {
            r.require("differentials of the circle generators in the interface ideal", rep.trivial());
            r.require("glued forms are the direct sum", rep.direct_sum());
        }
        r.summary = std::string(equal ? "p = q" : "p != q") + ": interface calculus " +
                    (rep.trivial() ? "trivial" : "not trivial");
    });
}

Outcome cmd_rep_verify(RepKind kind, RepParams prm, int N, bool grid, double tol) {
    return single("rep-verify", [&](Report& r) {
        std::vector<GridPoint> pts;
        if (grid) {
            pts = residual_grid({kind}, {0.3, 0.5, 0.7}, {0.0, std::numbers::pi / 3, std::numbers::pi}, N);
        } else {
            auto rep = build_representation(kind, prm, N);
            pts.push_back({kind, prm, relation_residuals(rep.presentation, rep).max, star_defect(rep)});
            auto res = relation_residuals(rep.presentation, rep);
            r.details["per_relation"] = res.per_relation;
        }
        double worst = 0, star = 0;
        for (const auto& p : pts) {
            worst = std::max(worst, p.residual);
            star = std::max(star, p.star);
            r.details["points"].push_back({{"p", p.params.p}, {"q", p.params.q}, {"theta", p.params.theta},
                                           {"residual", p.residual}, {"star_defect", p.star}});
        }
        r.dimensions = {{"N", N}, {"points", pts.size()}};
        r.details["representation"] = to_string(kind);
        r.details["tolerance"] = tol;
        r.require("interior relation residuals within tolerance", worst <= tol);
        r.require("star structure respected", star <= tol);
        std::ostringstream os;
        os << to_string(kind) << ": max residual " << std::scientific << std::setprecision(2) << worst;
        r.summary = os.str();
    });
}

Outcome cmd_spectrum(RepKind kind, RepParams prm, int N, bool csv) {
    SpectralReport sp;
    auto out = single("spectrum", [&](Report& r) {
        sp = spectral_report(build_representation(kind, prm, N));
        for (const auto& row : sp.rows)
            r.details["rows"].push_back({{"i", row.i}, {"f0", row.f0}, {"f0_expected", row.f0_expected},
                                         {"radius", row.radius}, {"radius_expected", row.radius_expected}});
        r.details["max_error"] = sp.max_error;
        r.details["offdiag"] = sp.offdiag;
        r.dimensions = {{"N", N}, {"rows", sp.rows.size()}};
        r.require("eigenvalues match the closed forms to 1e-12", sp.max_error <= 1e-12);
        std::ostringstream os;
        os << sp.rows.size() << " rows, max error " << std::scientific << std::setprecision(2) << sp.max_error;
        r.summary = os.str();
    });
    if (csv) {
        out.text = sp.csv();
    } else if (!sp.rows.empty()) {
        std::ostringstream os;
        os << std::setw(4) << "i" << std::setw(20) << "f0" << std::setw(20) << "radius" << std::setw(20) << "expected" << '\n';
        os << std::setprecision(12);
        for (const auto& row : sp.rows)
            os << std::setw(4) << row.i << std::setw(20) << row.f0 << std::setw(20) << row.radius << std::setw(20)
               << row.radius_expected << '\n';
        out.text = os.str();
    }
    return out;
}

Outcome cmd_hopf_verify(const Options& o) {
    auto f = load(o.pres);
    int D = degree_bound(o.D, f->file.differentials ? 3 : 4);
    return single("hopf-verify", [&](Report& r) {
        ModuleAxiomReport rep;
        if (f->file.differentials) {
            auto cal = f->file.calculus();
            auto act = f->file.module_action(cal.alphabet);
            rep = module_axiom_check(act, cal.rs, D, false);
        } else {
            auto rs = rewrite_of(f->file);
            auto act = f->file.module_action(rs->alphabet());
            rep = module_axiom_check(act, *rs, D);
        }
        json m = json::array();
        for (const auto& row : rep.pass) {
            json jr = json::array();
            for (char c : row) jr.push_back(c ? "pass" : "fail");
            m.push_back(jr);
        }
        r.details["relations"] = rep.relations;
        r.details["words"] = rep.words;
        r.details["matrix"] = m;
        r.dimensions = {{"D", D}, {"relations", rep.relations.size()}, {"words", rep.words.size()}};
        for (const auto& fl : rep.failures) r.witness["failures"].push_back(fl);
        r.require("module axioms", rep.ok());
        r.summary = std::to_string(rep.checks()) + " checks, " + std::to_string(rep.failures.size()) + " failures";
    });
}

Outcome cmd_accept_all(const std::vector<int>& only, bool json_out) {
    Outcome out;
    out.reports = run_acceptance(
        [json_out](const Report& r) {
            if (!json_out) std::cout << r.line() << std::endl;
        },
        only);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coverings, completions and gluings of noncommutative *-algebras"};
    app.require_subcommand(1);
    Options o;
    Command run;
    bool streamed = false;

    auto common = [&](CLI::App* c, bool with_pres, bool with_D) {
        c->add_flag("--json", o.json, "emit JSON reports");
        if (with_pres) c->add_option("--pres", o.pres, "presentation file (bundled names resolve to the data directory)");
        if (with_D) c->add_option("--D", o.D, "degree bound (default from NCGLUE_DEGREE_BOUND or per command)");
    };

    std::string expr;
    auto* nf = app.add_subcommand("nf", "normal form of an expression");
    common(nf, true, false);
    nf->add_option("--expr", expr, "expression")->required();
    nf->callback([&] { run = [&] { return cmd_nf(o, expr); }; });

    auto* basis = app.add_subcommand("basis", "filtered normal-word basis");
    common(basis, true, true);
    basis->callback([&] { run = [&] { return cmd_basis(o); }; });

    auto* conf = app.add_subcommand("confluence", "critical pair resolution up to degree D");
    common(conf, true, true);
    conf->callback([&] { run = [&] { return cmd_confluence(o); }; });

    auto* cov = app.add_subcommand("covering", "is the ideal family a covering");
    common(cov, true, false);
    cov->callback([&] { run = [&] { return cmd_covering(o); }; });

    auto* comp = app.add_subcommand("complete", "is the covering complete; prints a witness when not");
    common(comp, true, false);
    comp->callback([&] { run = [&] { return cmd_complete(o); }; });

    auto* lat = app.add_subcommand("lattice", "lattice identities for the ideal family");
    common(lat, true, false);
    lat->callback([&] { run = [&] { return cmd_lattice(o); }; });

    auto* glue = app.add_subcommand("glue-sphere", "sphere as gluing of two discs");
    common(glue, true, true);
    glue->callback([&] { run = [&] { return cmd_glue_sphere(o); }; });

    std::string ideal;
    auto* adapt = app.add_subcommand("calculus-adapt", "compare a differential ideal with the adapted kernel");
    common(adapt, true, true);
    adapt->add_option("--ideal", ideal, "named ideal in the file (default: positive-degree relations)");
    adapt->callback([&] { run = [&] { return cmd_calculus_adapt(o, ideal); }; });

    bool sphere = false;
    int samples = 100;
    unsigned seed = 1;
    auto* cver = app.add_subcommand("calculus-verify", "d^2 = 0, Leibniz and well-definedness on random forms");
    common(cver, true, false);
    cver->add_flag("--sphere", sphere, "use the glued sphere calculus");
    cver->add_option("--samples", samples);
    cver->add_option("--seed", seed);
    cver->callback([&] { run = [&] { return cmd_calculus_verify(o, sphere, samples, seed); }; });

    bool equal = false;
    auto* iface = app.add_subcommand("interface", "calculus on the circle interface of two discs");
    common(iface, false, true);
    iface->add_flag("--equal", equal, "use p = q");
    iface->callback([&] { run = [&] { return cmd_interface(o, equal); }; });

    std::string kind = "sphere1";
    RepParams prm{0.5, 0.5, 0.0};
    int N = 64;
    bool grid = false, csv = false;
    double tol = 1e-12;
    auto rep_opts = [&](CLI::App* c) {
        c->add_option("--rep", kind, "disc, sphere1, sphere2, circle_point, disc_point, circle");
        c->add_option("--p", prm.p);
        c->add_option("--q", prm.q);
        c->add_option("--theta", prm.theta);
        c->add_option("--N", N, "truncation size");
    };
    auto* rver = app.add_subcommand("rep-verify", "relation residuals of a truncated representation");
    common(rver, false, false);
    rep_opts(rver);
    rver->add_flag("--grid", grid, "scan p, q in {0.3, 0.5, 0.7}");
    rver->add_option("--tol", tol);
    rver->callback([&] { run = [&] { return cmd_rep_verify(rep_kind_from_string(kind), prm, N, grid, tol); }; });

    auto* spec = app.add_subcommand("spectrum", "diagonal of f0 and f+^2 + f-^2");
    common(spec, false, false);
    rep_opts(spec);
    spec->add_flag("--csv", csv);
    spec->callback([&] { run = [&] { return cmd_spectrum(rep_kind_from_string(kind), prm, N, csv); }; });

    auto* hv = app.add_subcommand("hopf-verify", "module algebra axioms for the action table in a file");
    common(hv, true, true);
    hv->callback([&] { run = [&] { return cmd_hopf_verify(o); }; });

    std::vector<int> only;
    auto* acc = app.add_subcommand("accept-all", "run the acceptance suite");
    common(acc, false, false);
    acc->add_option("--only", only, "criterion numbers");
    acc->callback([&] {
        streamed = !o.json;
        run = [&] { return cmd_accept_all(only, o.json); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    Outcome out;
    try {
        out = run();
    } catch (const std::exception& e) {
        std::cerr << "ncglue: " << e.what() << '\n';
        return 2;
    }
    if (o.json) {
        std::cout << reports_json(out.reports).dump(2) << '\n';
    } else {
        std::cout << out.text;
        if (!streamed)
            for (const auto& r : out.reports) std::cout << r.line() << '\n';
    }
    return any_failed(out.reports) ? 1 : 0;
}
