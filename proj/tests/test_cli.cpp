#include <gtest/gtest.h>

#include <ncglue/acceptance.hpp>

#include <cstdio>

using namespace ncglue;
using E = Element<Scalar>;

namespace {

const std::vector<std::string> fixtures = {"disc_p.alg",          "disc_q.alg",       "circle.alg",
                                           "sphere.alg",          "sphere_q.alg",     "counterexample1.alg",
                                           "counterexample2.alg", "disc_calculus.alg", "circle_calculus.alg",
                                           "sphere_calculus.alg"};

ParseError parse_error(const std::string& text) {
    try {
        parse_presentation(text);
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for:\n" << text;
    return ParseError(ParseError::Kind::syntax, "");
}

bool same_relations(const Presentation& a, const Presentation& b) {
    if (a.relations.size() != b.relations.size()) return false;
    for (size_t i = 0; i < a.relations.size(); ++i)
        if (a.relations[i] != rebase(b.relations[i], a.alphabet)) return false;
    return true;
}

template <class K>
void expect_same_action(const ModuleAction<K>& a, const ModuleAction<K>& b) {
    const auto& A = *a.alphabet();
    for (int l = 0; l < A.base_size(); ++l)
        for (int h = 0; h < 4; ++h)
            EXPECT_EQ(a.act_letter(h, (Letter)l), rebase(b.act_letter(h, (Letter)l), a.alphabet()))
                << "h=" << h << " letter " << A[l].name;
}

struct Run {
    int status = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const char* exe = std::getenv("NCGLUE_CLI");
    Run r;
    if (!exe) return r;
    std::string cmd = std::string(exe) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

#define REQUIRE_CLI()                                                                                                  \
    if (!std::getenv("NCGLUE_CLI")) GTEST_SKIP() << "NCGLUE_CLI not set"

json without_timing(json j) {
    for (auto& r : j["reports"]) r.erase("timing");
    return j;
}

} // namespace

// ---------------------------------------------------------------------------
// Parser

TEST(Parse, DiscFileHasTwoGenerators) {
    auto f = load_presentation(data_path("disc_q.alg"))->file;
    ASSERT_EQ(f.generators.size(), 2u);
    EXPECT_EQ(f.alphabet->base_size(), 2);
    EXPECT_EQ(f.relations.size(), 1u);
    EXPECT_TRUE(same_relations(disc_presentation(Scalar::q(), "y"), f.presentation()));
}

TEST(Parse, SphereFileHasStarPairs) {
    auto f = load_presentation(data_path("sphere.alg"))->file;
    ASSERT_EQ(f.generators.size(), 3u);
    const auto& A = *f.alphabet;
    EXPECT_EQ(A[A.at("f1")].star, A.at("fm1"));
    EXPECT_EQ(A[A.at("f0")].star, A.at("f0"));
    EXPECT_EQ(f.relations.size(), 4u);
    EXPECT_TRUE(same_relations(sphere_presentation(Scalar::p(), Scalar::q()), f.presentation()));
}

TEST(Parse, DanglingOperatorReportsToken) {
    auto A = disc_presentation(Scalar::q()).alphabet;
    try {
        parse_expression("x -", A);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.kind, ParseError::Kind::syntax);
        EXPECT_EQ(e.token, 3);
        EXPECT_EQ(e.column, 4);
    }
}

TEST(Parse, ExpressionSyntax) {
    std::vector<ParamDecl> params = {{"q", true, 0, 1, 0}};
    auto A = disc_presentation(Scalar::q()).alphabet;
    auto x = E::gen(A, "x"), xs = E::gen(A, "x*");
    EXPECT_EQ(parse_expression("x* x - q x x* - (1 - q)", A, params),
              xs * x - Scalar::q() * x * xs - (Scalar(1) - Scalar::q()) * E::unit(A));
    EXPECT_EQ(parse_expression("x^3", A, params), x * x * x);
    EXPECT_EQ(parse_expression("q^(1/4) x / 2", A, params), Scalar::q_pow4(1) * mpq_class(1, 2) * x);
    EXPECT_EQ(parse_expression("s^-3", A, params), E(A, Scalar::q_pow4(-3)));
    EXPECT_EQ(parse_expression("(x + x*) x", A, params), x * x + xs * x);
    EXPECT_THROW(parse_expression("d(x)", A, params), ParseError);
    auto Ad = disc_calculus(Scalar::q()).alphabet;
    EXPECT_EQ(parse_expression("d(x x*)", Ad, params),
              free_d(E::gen(Ad, "x") * E::gen(Ad, "x*")));
}

TEST(Parse, UnknownGenerator) {
    auto e = parse_error("[generators]\nx degree 0 star x*\nx* degree 0 star x\n[relations]\nx z\n");
    EXPECT_EQ(e.kind, ParseError::Kind::unknown_generator);
    EXPECT_EQ(e.line, 5);
}

TEST(Parse, StarMismatch) {
    auto e = parse_error("[generators]\nx degree 0 star y\ny degree 0 star y\n");
    EXPECT_EQ(e.kind, ParseError::Kind::star_mismatch);
}

TEST(Parse, MissingFile) {
    EXPECT_THROW(load_presentation("/nonexistent/none.alg"), ParseError);
}

TEST(Parse, CanonicalRoundTrip) {
    for (const auto& name : fixtures) {
        auto f = load_presentation(data_path(name))->file;
        auto once = print_presentation(f);
        auto g = parse_presentation(once);
        EXPECT_EQ(print_presentation(g), once) << name;
        EXPECT_EQ(g.relations.size(), f.relations.size()) << name;
        for (size_t i = 0; i < f.relations.size(); ++i)
            EXPECT_EQ(g.relations[i].value, rebase(f.relations[i].value, g.alphabet)) << name;
    }
}

TEST(Parse, MorphismsResolveInTarget) {
    auto lp = load_presentation(data_path("sphere.alg"));
    const auto& pi1 = lp->file.morphism("pi1");
    const auto& tgt = lp->target("pi1").file;
    auto x = E::gen(tgt.alphabet, "x"), xs = E::gen(tgt.alphabet, "x*");
    ASSERT_EQ(pi1.resolved.size(), 3u);
    const auto& A = *lp->file.alphabet;
    EXPECT_EQ(pi1.resolved[A.at("f1")], x);
    EXPECT_EQ(pi1.resolved[A.at("f0")], x * xs);
    EXPECT_EQ(pi1.resolved[A.at("fm1")], xs);
}

TEST(Parse, ActionTablesMatchBuiltins) {
    auto dq = load_presentation(data_path("disc_q.alg"))->file;
    expect_same_action(dq.module_action(), disc_action<Scalar>(dq.alphabet, "y"));
    auto sq = load_presentation(data_path("sphere_q.alg"))->file;
    expect_same_action(sq.module_action(), sphere_action<Scalar>(sq.alphabet, Scalar::q(), Scalar::q()));
    EXPECT_THROW(load_presentation(data_path("circle.alg"))->file.action_table(), MissingAction);
}

TEST(Parse, CalculusFiles) {
    auto cal = load_presentation(data_path("disc_calculus.alg"))->file.calculus();
    auto ref = disc_calculus(Scalar::q());
    EXPECT_EQ(cal.alphabet->size(), ref.alphabet->size());
    for (const auto& rel : ref.relations) EXPECT_TRUE(cal.rs.normal_form(rebase(rel, cal.alphabet)).is_zero());
    for (const auto& rel : cal.relations) EXPECT_TRUE(ref.rs.normal_form(rebase(rel, ref.alphabet)).is_zero());

    auto sf = load_presentation(data_path("sphere_calculus.alg"))->file;
    auto gens = positive_degree_relations(sf);
    auto listed = sphere_calculus_generators(Scalar::q(), sf.alphabet);
    ASSERT_EQ(gens.size(), listed.size());
    for (size_t i = 0; i < gens.size(); ++i) EXPECT_EQ(gens[i], listed[i]) << i;
}

// ---------------------------------------------------------------------------
// Reports

TEST(Report, TimingIsTheOnlyVolatileField) {
    auto a = timed_report("x", [](Report& r) { r.require("one", true); });
    auto b = timed_report("x", [](Report& r) { r.require("one", true); });
    EXPECT_EQ(a.to_json(false).dump(), b.to_json(false).dump());
    EXPECT_TRUE(a.to_json().contains("timing"));
    EXPECT_EQ(a.to_json()["schema_version"], report_schema_version);
}

TEST(Report, ExceptionsFail) {
    auto r = timed_report("x", [](Report&) { throw std::runtime_error("boom"); });
    EXPECT_EQ(r.verdict, Verdict::fail);
    EXPECT_NE(r.summary.find("boom"), std::string::npos);
}

TEST(Report, InconclusiveDoesNotOverrideFail) {
    Report r;
    r.inconclusive("a");
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
    r.require("b", false);
    r.inconclusive("c");
    EXPECT_EQ(r.verdict, Verdict::fail);
}

// ---------------------------------------------------------------------------
// Command line

TEST(Cli, NormalForm) {
    REQUIRE_CLI();
    auto r = cli("nf --pres sphere.alg --expr \"f0 f0\"");
    EXPECT_EQ(r.status, 0);
    // f0 + p f1 f0 fm1 - p f1 fm1
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "f0 - p f1 fm1 + p f1 f0 fm1");
}

TEST(Cli, CompleteCounterexampleFails) {
    REQUIRE_CLI();
    auto r = cli("complete --pres counterexample2.alg");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.out.find("witness"), std::string::npos);
    EXPECT_NE(r.out.find("FAIL"), std::string::npos);
    auto j = json::parse(cli("complete --pres counterexample2.alg --json").out);
    EXPECT_EQ(j["verdict"], "fail");
    EXPECT_EQ(j["reports"][0]["dimensions"]["A"], 6);
    EXPECT_EQ(j["reports"][0]["dimensions"]["completion"], 7);
    EXPECT_EQ(j["reports"][0]["witness"]["tuple"].size(), 3u);
}

TEST(Cli, SpectrumTable) {
    REQUIRE_CLI();
    auto r = cli("spectrum --rep sphere1 --p 0.5 --N 64");
    EXPECT_EQ(r.status, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    std::getline(in, line); // row i = 1
    std::istringstream row(line);
    int i;
    double f0, radius;
    row >> i >> f0 >> radius;
    EXPECT_EQ(i, 1);
    EXPECT_DOUBLE_EQ(radius, 0.625);
    EXPECT_NE(cli("spectrum --rep sphere1 --p 0.5 --N 64 --csv").out.find("1,0.5,0.5,0.625,0.625"), std::string::npos);
}

TEST(Cli, JsonIsDeterministic) {
    REQUIRE_CLI();
    for (std::string args : {"basis --pres sphere.alg --D 3 --json", "lattice --pres counterexample1.alg --json",
                             "hopf-verify --pres disc_q.alg --D 3 --json"}) {
        auto a = json::parse(cli(args).out), b = json::parse(cli(args).out);
        EXPECT_EQ(without_timing(a).dump(), without_timing(b).dump()) << args;
        EXPECT_EQ(a["schema_version"], report_schema_version);
    }
}

TEST(Cli, DegreeBoundFromEnvironment) {
    REQUIRE_CLI();
    auto j = json::parse(cli("basis --pres disc_q.alg --json").out);
    EXPECT_EQ(j["reports"][0]["dimensions"]["total"], 15); // default D = 4
    setenv("NCGLUE_DEGREE_BOUND", "6", 1);
    j = json::parse(cli("basis --pres disc_q.alg --json").out);
    unsetenv("NCGLUE_DEGREE_BOUND");
    EXPECT_EQ(j["reports"][0]["dimensions"]["total"], 28);
}

TEST(Cli, Errors) {
    REQUIRE_CLI();
    EXPECT_NE(cli("frobnicate").status, 0);
    EXPECT_EQ(cli("nf --pres missing.alg --expr x").status, 2);
    auto bad = cli("nf --pres disc_q.alg --expr \"y -\"");
    EXPECT_EQ(bad.status, 1);
    EXPECT_NE(bad.out.find("column 4, token 3"), std::string::npos);
}

TEST(Cli, VerificationCommandsPass) {
    REQUIRE_CLI();
    for (std::string args : {"covering --pres counterexample2.alg", "confluence --pres sphere.alg",
                             "glue-sphere --D 4", "interface", "interface --equal", "rep-verify --rep disc --q 0.3",
                             "rep-verify --rep sphere2 --p 0.7 --q 0.3", "hopf-verify --pres sphere_q.alg --D 3",
                             "calculus-verify --pres disc_calculus.alg", "calculus-verify --sphere --samples 20"})
        EXPECT_EQ(cli(args).status, 0) << args;
}
