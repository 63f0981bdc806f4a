#include <ncglue/dga.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace ncglue;

namespace {

using E = Element<Scalar>;
using QE = Element<mpq_class>;

const DGAPresentation& disc_q() {
    static DGAPresentation c = disc_calculus(Scalar::q(), "x");
    return c;
}

const SphereCalculus<Scalar>& sphere_sym() {
    static SphereCalculus<Scalar> s = build_sphere_calculus<Scalar>();
    return s;
}

const RationalPoint* half() {
    static RationalPoint pt{mpq_class(1, 2), mpq_class(1, 2)};
    return &pt;
}

const SphereCalculus<mpq_class>& sphere_half() {
    static SphereCalculus<mpq_class> s = build_sphere_calculus<mpq_class>(half());
    return s;
}

template <class K>
Element<K> random_free(const AlphabetPtr& A, std::mt19937& rng, int max_len, int letters) {
    std::uniform_int_distribution<int> len(0, max_len), letter(0, letters - 1), coef(-3, 3), terms(1, 3);
    Element<K> e(A);
    int n = terms(rng);
    for (int i = 0; i < n; ++i) {
        Word w;
        int l = len(rng);
        for (int j = 0; j < l; ++j) w.push_back((Letter)letter(rng));
        e.add_term(w, K(coef(rng)));
    }
    return e;
}

// homogeneous random element of the given form degree
template <class K>
Element<K> random_homogeneous(const AlphabetPtr& A, std::mt19937& rng, int base_len, int n) {
    int nb = A->base_size();
    std::uniform_int_distribution<int> len(0, base_len), letter(0, nb - 1), coef(-3, 3), terms(1, 3);
    Element<K> e(A);
    int t = terms(rng);
    for (int i = 0; i < t; ++i) {
        Word w;
        int l = len(rng);
        for (int j = 0; j < l; ++j) w.push_back((Letter)letter(rng));
        for (int j = 0; j < n; ++j) {
            std::uniform_int_distribution<int> pos(0, (int)w.size());
            w.insert(w.begin() + pos(rng), (Letter)(nb + letter(rng)));
        }
        e.add_term(w, K(coef(rng)));
    }
    return e;
}

template <class K>
Form<K> random_form(const UniversalForms<K>& om, std::mt19937& rng, int D, int n) {
    auto keys = om.keys(D, n);
    std::uniform_int_distribution<int> pick(0, (int)keys.size() - 1), coef(-3, 3);
    Form<K> f;
    for (int i = 0; i < 3; ++i) UniversalForms<K>::add(f, keys[pick(rng)], K(coef(rng)));
    return f;
}

} // namespace

TEST(Dga, FreeDifferential) {
    auto A = disc_presentation(Scalar::q(), "x", true).alphabet;
    auto x = E::gen(A, "x"), dx = E::gen(A, "d(x)"), xs = E::gen(A, "x*");
    EXPECT_EQ(free_d(x * x), dx * x + x * dx);
    EXPECT_EQ(free_d(x * dx), dx * dx);
    EXPECT_EQ(free_d(dx * x), -(dx * dx));
    EXPECT_TRUE(free_d(E::unit(A)).is_zero());
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        auto e = random_free<Scalar>(A, rng, 4, A->size());
        EXPECT_TRUE(free_d(free_d(e)).is_zero());
        (void)xs;
    }
}

TEST(Dga, DiscCalculusRules) {
    const auto& c = disc_q();
    const auto& A = c.alphabet;
    auto q = Scalar::q();
    auto x = E::gen(A, "x"), xs = E::gen(A, "x*"), dx = E::gen(A, "d(x)"), dxs = E::gen(A, "d(x*)");
    const auto& rs = c.rs;
    EXPECT_EQ(rs.normal_form(dx * x), q * (x * dx));
    EXPECT_EQ(rs.normal_form(dx * xs), q.inverse() * (xs * dx));
    EXPECT_EQ(rs.normal_form(dxs * x), q * (x * dxs));
    EXPECT_EQ(rs.normal_form(dxs * xs), q.inverse() * (xs * dxs));
    EXPECT_TRUE(rs.normal_form(dx * dx).is_zero());
    EXPECT_TRUE(rs.normal_form(dxs * dxs).is_zero());
    EXPECT_EQ(rs.normal_form(dxs * dx), -q * (dx * dxs));
    EXPECT_TRUE(confluence_check(rs, 5).confluent());
    // canonical words x^k x*^l times 1, dx, dx*, dx dx*
    for (int D = 1; D <= 5; ++D) {
        std::array<size_t, 4> count{};
        for (const auto& w : enumerate_filtered_basis(rs, D, false)) ++count[form_degree(*A, w)];
        auto tri = [](int n) { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; };
        EXPECT_EQ(count[0], (size_t)tri(D));
        EXPECT_EQ(count[1], (size_t)(2 * tri(D - 1)));
        EXPECT_EQ(count[2], (size_t)tri(D - 2));
        EXPECT_EQ(count[3], 0u);
    }
}

// d is well defined on the quotient, d^2 = 0, graded Leibniz.
TEST(Dga, DiscCalculusDgaLaws) {
    const auto& c = disc_q();
    const auto& rs = c.rs;
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto e = random_free<Scalar>(c.alphabet, rng, 3, c.alphabet->size());
        auto n = rs.normal_form(e);
        EXPECT_EQ(rs.normal_form(free_d(n)), rs.normal_form(free_d(e)));
        EXPECT_TRUE(rs.normal_form(free_d(rs.normal_form(free_d(n)))).is_zero());
        int deg = i % 3;
        auto rho = random_homogeneous<Scalar>(c.alphabet, rng, 2, deg);
        auto eta = random_homogeneous<Scalar>(c.alphabet, rng, 2, i % 2);
        auto lhs = rs.normal_form(free_d(rho * eta));
        auto rhs = rs.normal_form(free_d(rho) * eta + (deg % 2 ? -rho : rho) * free_d(eta));
        EXPECT_EQ(lhs, rhs);
    }
    for (const auto& r : c.relations) EXPECT_TRUE(rs.normal_form(r).is_zero()) << r;
}

TEST(Dga, CircleTrivialCalculus) {
    auto c = circle_trivial_calculus("a");
    auto A = c.alphabet;
    EXPECT_TRUE(c.rs.normal_form(E::gen(A, "d(a)")).is_zero());
    EXPECT_TRUE(c.rs.normal_form(free_d(E::gen(A, "a") * E::gen(A, "a"))).is_zero());
    EXPECT_EQ(c.rs.normal_form(E::gen(A, "a") * E::gen(A, "a*")), E::unit(A));
}

TEST(Dga, UniversalFormsBasics) {
    UniversalForms<Scalar> om(disc_q().base_rs);
    const auto& dA = om.differential_alphabet();
    auto x = E::gen(dA, "x"), dx = E::gen(dA, "d(x)");
    Word xx{0, 0};
    // d(x^2) is a basis coordinate and equals its Leibniz expansion
    EXPECT_EQ(om.from_free(x * dx + dx * x), om.key(FormKey{Word{}, xx}));
    EXPECT_TRUE(om.d(om.one()).empty());
    EXPECT_EQ(om.d(om.key(FormKey{xx})), om.key(FormKey{Word{}, xx}));
    EXPECT_EQ(om.str(om.from_free(dx * x)), "d(x x) - x d(x)");
}

TEST(Dga, UniversalFormsLaws) {
    for (int which = 0; which < 2; ++which) {
        std::shared_ptr<const RewriteSystem<Scalar>> B =
            which == 0 ? disc_q().base_rs : sphere_sym().sphere;
        UniversalForms<Scalar> om(B);
        const auto& dA = om.differential_alphabet();
        std::mt19937 rng(9 + which);
        for (int i = 0; i < 100; ++i) {
            int n = i % 3, m = (i / 3) % 2;
            auto a = random_form(om, rng, 2, n), b = random_form(om, rng, 2, m), c = random_form(om, rng, 1, 1);
            EXPECT_TRUE(om.d(om.d(a)).empty());
            auto lhs = om.d(om.mul(a, b));
            auto rhs = om.mul(om.d(a), b);
            axpy(rhs, n % 2 ? Scalar(-1) : Scalar(1), om.mul(a, om.d(b)));
            EXPECT_EQ(lhs, rhs);
            EXPECT_EQ(om.mul(om.mul(a, b), c), om.mul(a, om.mul(b, c)));
            // round trip through the free differential algebra
            EXPECT_EQ(om.from_free(om.to_free(a)), a);
            auto fa = om.to_free(a), fb = om.to_free(b);
            EXPECT_EQ(om.from_free(fa * fb), om.mul(a, b));
            EXPECT_EQ(om.from_free(free_d(fa)), om.d(a));
            (void)dA;
        }
    }
}

// Omega^1 in filtered degree <= 2 against {sum a_k (x) b_k : sum a_k b_k = 0}.
// The tensors are a (x) b with |a| + |b| <= 2 together with w (x) 1 for every
// word w of a product (sphere normal forms can be longer than the product).
TEST(Dga, OmegaOneMatchesTensorKernel) {
    for (int which = 0; which < 2; ++which) {
        std::shared_ptr<const RewriteSystem<Scalar>> B = which == 0 ? disc_q().base_rs : sphere_sym().sphere;
        UniversalForms<Scalar> om(B);
        int D = 2;
        auto words = enumerate_filtered_basis(*B, D);
        std::set<std::pair<Word, Word>> tensors;
        for (const auto& a : words)
            for (const auto& b : words) {
                if (a.size() + b.size() > (size_t)D) continue;
                tensors.insert({a, b});
                auto ab = B->normal_form_word(concat(a, b));
                for (const auto& [w, c] : ab.terms()) tensors.insert({w, Word{}});
            }
        Eliminator<Word, Scalar, SliceOrder> el;
        int id = 0;
        size_t kernel = 0;
        for (const auto& [a, b] : tensors) {
            auto ab = B->normal_form_word(concat(a, b));
            SVec<Word, Scalar, SliceOrder> v;
            for (const auto& [w, c] : ab.terms()) v.emplace(w, c);
            if (el.add(v, id++)) ++kernel;
        }
        EXPECT_EQ(om.keys(D, 1).size(), kernel) << which;
    }
}

TEST(Dga, ExtendMorphismExamples) {
    const auto& sc = sphere_sym();
    const auto& S = sc.alphabet;
    auto f0 = E::gen(S, "f0"), df1 = E::gen(S, "d(f1)"), df0 = E::gen(S, "d(f0)");
    auto Y = sc.disc_y->alphabet();
    EXPECT_EQ(sc.pi2.apply(f0 * df1), E::gen(Y, "d(y)"));
    auto X = sc.disc_x->alphabet();
    auto x = E::gen(X, "x"), xs = E::gen(X, "x*"), dx = E::gen(X, "d(x)"), dxs = E::gen(X, "d(x*)");
    EXPECT_EQ(sc.pi1.apply(df0), sc.disc_x->normal_form(x * dxs + dx * xs));
    EXPECT_TRUE(sc.pi2.apply(df0).is_zero());

    // phi_p into the circle calculus with da = 0
    auto p = Scalar::p();
    auto cp = disc_calculus(p, "x");
    auto circ = circle_trivial_calculus("a");
    auto crs = std::make_shared<RewriteSystem<Scalar>>(circ.rs);
    auto CA = circ.alphabet;
    CalculusMorphism<Scalar> phi("phi_p", cp.alphabet, crs, {E::gen(CA, "a"), E::gen(CA, "a*")});
    EXPECT_NO_THROW(phi.check_relations(cp.relations));
    auto X2 = cp.alphabet;
    auto gen = E::gen(X2, "x") * E::gen(X2, "d(x)") - p.inverse() * (E::gen(X2, "d(x)") * E::gen(X2, "x"));
    EXPECT_TRUE(phi.apply(gen).is_zero());

    // x -> y between discs with different parameters is not differentiable
    auto cq = std::make_shared<RewriteSystem<Scalar>>(disc_q().rs);
    auto YA = disc_q().alphabet;
    CalculusMorphism<Scalar> bad("x_to_y", cp.alphabet, cq, {E::gen(YA, "x"), E::gen(YA, "x*")});
    EXPECT_THROW(bad.check_relations(cp.relations), NotDifferentiable);

    // the algebra-level extension
    auto dp = std::make_shared<RewriteSystem<Scalar>>(orient_presentation(disc_presentation(p, "x")));
    auto cpa = std::make_shared<RewriteSystem<Scalar>>(orient_presentation(circle_presentation("a")));
    AlgebraMorphism<Scalar> phim("phi_p", dp, cpa, {E::gen(cpa->alphabet(), "a"), E::gen(cpa->alphabet(), "a*")});
    EXPECT_NO_THROW(extend_morphism_to_forms(phim, crs, cp.ideal_generators));
}

TEST(Dga, AdaptedKernelExamples) {
    const auto& sc = sphere_sym();
    auto ker = adapted_calculus_kernel(*sc.forms, sc.maps(), 4, 2);
    EXPECT_EQ(ker.dim(0), 0u);
    const auto& g = sc.generators;
    EXPECT_TRUE(ker.contains(sc.forms->from_free(g[7]))); // (f1 fm1 - f0) df0
    for (size_t i = 0; i < g.size(); ++i) {
        // the listed (1-q) df0 dfm1 - q fm1 df0 df0, (1-q) df1 df0 - q f1 df0 df0 and
        // (1-f0)((1-q) df1 dfm1 - df0 df0) survive pi1; everything else is killed
        bool listed_misprint = i >= 8 && i <= 10;
        EXPECT_EQ(sc.is_zero(g[i]), !listed_misprint) << g[i];
        EXPECT_EQ(ker.contains(sc.forms->from_free(g[i])), !listed_misprint) << g[i];
        EXPECT_TRUE(sc.pi2.apply(g[i]).is_zero()) << g[i];
    }
    // pi1 of (1-q) df0 dfm1 - q fm1 df0 df0, worked out by hand
    auto X = sc.disc_x->alphabet();
    auto q = sc.q;
    auto xs = E::gen(X, "x*"), x = E::gen(X, "x"), dxdxs = E::gen(X, "d(x)") * E::gen(X, "d(x*)");
    E expected = ((Scalar(1) - q) * q.inverse() - q * (Scalar(1) - q) * (q - q.inverse() + Scalar(1))) * (xs * dxdxs) -
                 q * (q * q - Scalar(1)) * (x * xs * xs * dxdxs);
    EXPECT_EQ(sc.pi1.apply(g[8]), expected);
    EXPECT_TRUE(kernel_is_d_stable(*sc.forms, ker));
    for (int n = 0; n <= 2; ++n)
        for (const auto& v : ker.by_degree[n].rows()) {
            auto s = form_star(*sc.forms, v);
            if (filtered_degree(s.begin()->first) <= 4) EXPECT_TRUE(ker.by_degree[n].contains(s));
        }
}

TEST(Dga, DerivedSphereRelations) {
    const auto& sc = sphere_sym();
    const auto& S = sc.alphabet;
    auto q = sc.q;
    auto df1 = E::gen(S, "d(f1)"), df0 = E::gen(S, "d(f0)"), dfm = E::gen(S, "d(fm1)");
    EXPECT_TRUE(sc.is_zero(df1 * df1));
    EXPECT_TRUE(sc.is_zero(dfm * dfm));
    EXPECT_TRUE(sc.equal(dfm * df1, -q * (df1 * dfm)));
    EXPECT_TRUE(sc.equal(df0 * df1, -(df1 * df0)));
    EXPECT_TRUE(sc.equal(dfm * df0, -(df0 * dfm)));
    EXPECT_FALSE(sc.is_zero(df1 * dfm));
    // the sphere calculus is a DGA: d^2 = 0 and Leibniz through the images
    std::mt19937 rng(21);
    for (int i = 0; i < 100; ++i) {
        int deg = i % 3;
        auto rho = random_homogeneous<Scalar>(S, rng, 2, deg);
        auto eta = random_homogeneous<Scalar>(S, rng, 1, i % 2);
        EXPECT_TRUE(sc.is_zero(free_d(free_d(rho))));
        EXPECT_TRUE(sc.equal(free_d(rho * eta), free_d(rho) * eta + (deg % 2 ? -rho : rho) * free_d(eta)));
    }
}

// Derived degree-2 relations already follow from the listed generators.
TEST(Dga, DerivedRelationsInGeneratedIdeal) {
    const auto& sc = sphere_half();
    std::vector<Form<mpq_class>> gens;
    for (const auto& g : sc.generators) gens.push_back(sc.forms->from_free(g));
    auto I = differential_ideal_span(*sc.forms, gens, 2, 2, 2);
    const auto& S = sc.alphabet;
    auto df1 = QE::gen(S, "d(f1)"), df0 = QE::gen(S, "d(f0)"), dfm = QE::gen(S, "d(fm1)");
    mpq_class q(1, 16);
    for (const auto& e : {df1 * df1, dfm * dfm, dfm * df1 + q * (df1 * dfm), df0 * df1 + df1 * df0,
                          dfm * df0 + df0 * dfm})
        EXPECT_TRUE(I.contains(sc.forms->from_free(e))) << e;
}

TEST(Dga, IdealEqualityNegativeControl) {
    const auto& sc = sphere_half();
    auto ker = adapted_calculus_kernel(*sc.forms, sc.maps(), 2, 2);
    auto rep = verify_relation_ideal_equality(*sc.forms, {}, ker, 2, 2);
    ASSERT_EQ(rep.size(), 2u);
    EXPECT_FALSE(rep[0].equal());
    EXPECT_EQ(rep[0].ideal_dim, 0u);
    EXPECT_GT(rep[0].kernel_dim, 0u);
}

TEST(Dga, DiscIdealMatchesKernel) {
    // kernel of Omega(D_q) -> Gamma(D_q) against the ideal of the four generators
    const auto& c = disc_q();
    RationalPoint pt{mpq_class(1, 2), mpq_class(1, 2)};
    auto B = std::make_shared<RewriteSystem<mpq_class>>(c.base_rs->specialize<mpq_class>(&pt));
    auto G = std::make_shared<RewriteSystem<mpq_class>>(c.rs.specialize<mpq_class>(&pt));
    UniversalForms<mpq_class> om(B);
    const auto& dA = om.differential_alphabet();
    CalculusMorphism<mpq_class> quo("quotient", dA, G, {QE::gen(c.alphabet, "x"), QE::gen(c.alphabet, "x*")});
    auto ker = adapted_calculus_kernel(om, {&quo}, 3, 2);
    std::vector<Form<mpq_class>> gens;
    for (const auto& g : c.ideal_generators) gens.push_back(om.from_free(rebase(specialize<mpq_class>(g, &pt), dA)));
    auto rep = verify_relation_ideal_equality(om, gens, ker, 3, 2);
    for (const auto& r : rep) {
        EXPECT_TRUE(r.contained) << r.form_degree;
        EXPECT_TRUE(r.equal()) << r.form_degree << ": " << r.ideal_dim << " vs " << r.kernel_dim;
    }
}

TEST(Dga, InterfaceDegeneratesForDifferentParameters) {
    auto rep = disc_interface_calculus(Scalar::p(), Scalar::q(), 3);
    EXPECT_TRUE(rep.trivial());
    ASSERT_EQ(rep.degrees.size(), 2u);
    for (const auto& g : rep.degrees) EXPECT_EQ(g.glued, g.direct_sum) << g.n;
    EXPECT_TRUE(rep.direct_sum());
}

TEST(Dga, InterfaceForEqualParameters) {
    auto rep = disc_interface_calculus(Scalar::q(), Scalar::q(), 4);
    for (const auto& [name, ok] : rep.certified) EXPECT_FALSE(ok) << name;
    EXPECT_FALSE(rep.direct_sum());
}

TEST(Dga, ProjectionExamples) {
    const auto& c = disc_q();
    UniversalForms<Scalar> om(c.base_rs);
    const auto& dA = om.differential_alphabet();
    auto q = Scalar::q();
    auto x = E::gen(dA, "x"), dx = E::gen(dA, "d(x)"), dxs = E::gen(dA, "d(x*)");
    auto P1 = [&](const E& e) { return appendix_projection(1, om, om.from_free(e), q); };
    auto P2 = [&](const E& e) { return appendix_projection(2, om, om.from_free(e), q); };
    EXPECT_EQ(P1(free_d(x * x)), (Scalar(1) + q) * (x * dx));
    EXPECT_TRUE(P1(x * dx - q.inverse() * (dx * x)).is_zero());
    EXPECT_EQ(P2(dxs * dx), -q * (dx * dxs));
    EXPECT_EQ(P2(dx * dxs), dx * dxs);
    EXPECT_THROW(P1(dx * dxs), FormDegreeError);
    EXPECT_THROW(P2(dx), FormDegreeError);
}

// P1 and P2 agree with the calculus normal form on every key.
TEST(Dga, ProjectionsAgreeWithNormalForm) {
    const auto& c = disc_q();
    UniversalForms<Scalar> om(c.base_rs);
    auto q = Scalar::q();
    for (int n = 1; n <= 2; ++n)
        for (const auto& k : om.keys(4, n)) {
            auto p = appendix_projection(n, om, om.key(k), q);
            auto g = c.rs.normal_form(rebase(om.to_free(k), c.alphabet));
            EXPECT_EQ(rebase(p, c.alphabet), g) << om.key_string(k);
        }
}

TEST(Dga, ModuleBasis) {
    auto rep = module_basis_check(disc_q(), 3);
    EXPECT_TRUE(rep.p1_kills_generators) << rep.failure;
    EXPECT_TRUE(rep.p2_kills_degree_two) << rep.failure;
    EXPECT_TRUE(rep.derived_relations);
    EXPECT_TRUE(rep.degree_three_empty);
    EXPECT_GT(rep.checked2, 100u);
    // an element outside the ideal is seen
    UniversalForms<Scalar> om(disc_q().base_rs);
    auto f = om.key(FormKey{Word{}, Word{0}});
    EXPECT_FALSE(appendix_projection(1, om, f, Scalar::q()).is_zero());
}
