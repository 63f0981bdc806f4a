#include <ncglue/hopf.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ncglue;

namespace {

using E = Element<Scalar>;

const Scalar s = Scalar::q_pow4(1);
const Scalar q = Scalar::q();

std::shared_ptr<const RewriteSystem<Scalar>> disc_rs() {
    static auto rs = std::make_shared<RewriteSystem<Scalar>>(orient_presentation(disc_presentation(q)));
    return rs;
}

const DGAPresentation& disc_cal() {
    static DGAPresentation c = disc_calculus(q);
    return c;
}

const SphereCalculus<Scalar>& sphere_cal() {
    static SphereCalculus<Scalar> sc = build_sphere_calculus<Scalar>();
    return sc;
}

Word hw(std::initializer_list<int> l) {
    Word w;
    for (int x : l) w.push_back((Letter)x);
    return w;
}

} // namespace

TEST(Hopf, StructureMaps) {
    const auto& H = uq_sl2();
    EXPECT_EQ(H.relations.size(), 7u);
    EXPECT_EQ(*std::max_element(H.relation_group.begin(), H.relation_group.end()), 3);
    auto r = hopf_structure_check(H);
    EXPECT_TRUE(r.ok());
    // m(S x id)Delta(E) = -Ki E + Ki E vanishes in the free algebra already
    EXPECT_TRUE(antipode_contraction(H, HopfE).is_zero());
    EXPECT_FALSE(antipode_contraction(H, HopfF).is_zero());
}

TEST(Hopf, BrokenCoproductIsDetected) {
    HopfAlgebraSpec H = uq_sl2();
    H.coproduct[HopfK][0].right = hw({HopfKi});
    EXPECT_FALSE(hopf_structure_check(H).coassociative);
    HopfAlgebraSpec H2 = uq_sl2();
    H2.counit[HopfK] = Scalar(2);
    EXPECT_FALSE(hopf_structure_check(H2).counit);
}

TEST(Hopf, DiscActionExamples) {
    auto A = disc_rs()->alphabet();
    auto act = disc_action<Scalar>(A);
    auto x = E::gen(A, "x"), xs = E::gen(A, "x*");
    EXPECT_EQ(act.act(HopfF, x), E(A, s));
    EXPECT_EQ(act.act(HopfE, x), -s * (x * x));
    EXPECT_EQ(act.act(HopfK, xs), q.inverse() * xs);
    EXPECT_EQ(act.act(HopfKi, xs), q * xs);
    const auto& H = uq_sl2();
    auto comm = H.gen(HopfE) * H.gen(HopfF) - H.gen(HopfF) * H.gen(HopfE);
    Scalar c = Scalar::q_pow4(2) + Scalar::q_pow4(-2);
    EXPECT_EQ(disc_rs()->normal_form(act.act(comm, x)), c * x);
    EXPECT_EQ(disc_rs()->normal_form(act.act(comm, xs)), -c * xs);
    // E . (F . x) = 0 and F . (E . x) = -q^{1/2}(q^-1 + 1) x
    EXPECT_TRUE(act.act(hw({HopfE, HopfF}), x).is_zero());
    EXPECT_EQ(act.act(hw({HopfF, HopfE}), x), -Scalar::q_pow4(2) * (q.inverse() + Scalar(1)) * x);
    // h . 1 = eps(h) 1
    EXPECT_TRUE(act.act(HopfE, E::unit(A)).is_zero());
    EXPECT_EQ(act.act(HopfK, E::unit(A)), E::unit(A));
}

TEST(Hopf, ActionOnDifferentials) {
    const auto& A = disc_cal().alphabet;
    auto act = disc_action<Scalar>(A);
    auto x = E::gen(A, "x"), dx = E::gen(A, "d(x)");
    EXPECT_EQ(act.act(HopfE, dx), -s * free_d(x * x));
    auto g = x * dx - q.inverse() * (dx * x);
    EXPECT_EQ(act.act(HopfK, g), (q * q) * g);
}

TEST(Hopf, MissingTableEntry) {
    auto A = disc_rs()->alphabet();
    std::vector<std::array<E, 4>> table(1);
    EXPECT_THROW(ModuleAction<Scalar>("short", A, table), MissingAction);
    std::vector<std::array<E, 4>> empty(2);
    EXPECT_THROW(ModuleAction<Scalar>("empty", A, empty), MissingAction);
    auto S = sphere_presentation(Scalar::p(), q).alphabet;
    EXPECT_THROW(sphere_action<Scalar>(S, Scalar::p(), q), std::invalid_argument);
}

TEST(Hopf, ModuleAxiomsDisc) {
    auto act = disc_action<Scalar>(disc_rs()->alphabet());
    auto r = module_axiom_check(act, *disc_rs(), 4);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_EQ(r.words.size(), 15u);
    EXPECT_EQ(r.relations.size(), 7u + 1 + 4);
}

TEST(Hopf, ModuleAxiomsDiscCalculus) {
    const auto& cal = disc_cal();
    auto act = disc_action<Scalar>(cal.alphabet);
    auto rs = std::make_shared<RewriteSystem<Scalar>>(cal.rs);
    auto r = module_axiom_check(act, *rs, 3, false);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
}

TEST(Hopf, ModuleAxiomsSphere) {
    const auto& sc = sphere_cal();
    auto act = sphere_action<Scalar>(sc.sphere->alphabet(), q, q);
    auto r = module_axiom_check(act, *sc.sphere, 4);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_EQ(r.words.size(), 25u);
}

// A relation that does not hold is reported, word by word.
TEST(Hopf, WrongActionFailsAxioms) {
    auto A = disc_rs()->alphabet();
    auto t = detail::disc_table(A, "x", "x*");
    t[1][HopfE] = Scalar::q_pow4(-1) * E::unit(A);
    auto act = ModuleAction<Scalar>("wrong", A, {t[0], t[1]});
    auto r = module_axiom_check(act, *disc_rs(), 2);
    EXPECT_FALSE(r.ok());
    EXPECT_FALSE(r.failures.empty());
}

TEST(Hopf, CompositionAndDEquivariance) {
    const auto& cal = disc_cal();
    auto act = disc_action<Scalar>(cal.alphabet);
    auto rs = std::make_shared<RewriteSystem<Scalar>>(cal.rs);
    auto words = enumerate_filtered_basis(*rs, 3, true);
    for (const auto& w : words) {
        auto a = E::word(cal.alphabet, w);
        for (int h = 0; h < 4; ++h) {
            EXPECT_EQ(act.act(h, free_d(a)), free_d(act.act(h, a))) << word_string(*cal.alphabet, w);
            for (int g = 0; g < 4; ++g)
                EXPECT_EQ(rs->normal_form(act.act(hw({h, g}), a)), rs->normal_form(act.act(h, act.act(g, a))));
        }
    }
}

TEST(Hopf, DiscAlgebraCovariance) {
    auto act = disc_action<Scalar>(disc_rs()->alphabet());
    auto rel = disc_presentation(q).relations;
    // the relation ideal is killed by the normal form, so every h . rel must be too
    auto r = covariance_check<Scalar>(act, rel, normal_form_membership(*disc_rs()), "disc relations", 4);
    EXPECT_TRUE(r.all_members());
    EXPECT_EQ(r.entries.size(), rel.size() * 4);
}

TEST(Hopf, DiscCalculusCovariance) {
    const auto& cal = disc_cal();
    auto act = disc_action<Scalar>(cal.alphabet);
    auto om = std::make_shared<const UniversalForms<Scalar>>(cal.base_rs);
    auto r = covariance_check<Scalar>(act, cal.ideal_generators,
                                      form_ideal_membership<Scalar>(om, cal.ideal_generators, 4, 3), "disc calculus",
                                      4);
    EXPECT_TRUE(r.all_members());
    EXPECT_EQ(r.entries.size(), 16u);
    // and the confluent calculus agrees
    auto rs = std::make_shared<RewriteSystem<Scalar>>(cal.rs);
    auto r2 = covariance_check<Scalar>(act, cal.ideal_generators, normal_form_membership(*rs), "disc calculus nf", 4);
    EXPECT_TRUE(r2.all_members());
}

TEST(Hopf, SphereAlgebraIdealOfPi1Kernel) {
    const auto& sc = sphere_cal();
    auto A = sc.sphere->alphabet();
    auto act = sphere_action<Scalar>(A, q, q);
    auto f1 = E::gen(A, "f1"), f0 = E::gen(A, "f0"), fm = E::gen(A, "fm1");
    auto k = f1 * fm - f0;
    EXPECT_EQ(sc.sphere->normal_form(act.act(HopfE, k)), sc.sphere->normal_form(-s * (f1 * k)));
    auto r = covariance_check<Scalar>(act, {k, E(A, Scalar(1)) - f0}, span_membership(*sc.sphere, {k}, 4), "ker pi1",
                                      4);
    // k generates ker pi1; 1 - f0 does not lie in it
    for (const auto& e : r.entries)
        if (e.generator == 0) EXPECT_EQ(e.verdict, Membership::member) << e.h;
    bool some_outside = false;
    for (const auto& e : r.entries)
        if (e.generator == 1 && e.verdict != Membership::member) some_outside = true;
    EXPECT_TRUE(some_outside);
}

TEST(Hopf, SphereIntertwining) {
    const auto& sc = sphere_cal();
    auto sa = sphere_action<Scalar>(sc.alphabet, q, q);
    auto ax = disc_action<Scalar>(sc.disc_x->alphabet(), "x");
    auto ay = disc_action<Scalar>(sc.disc_y->alphabet(), "y");
    auto i1 = intertwining_check(sc.pi1, sa, ax);
    auto i2 = intertwining_check(sc.pi2, sa, ay);
    EXPECT_EQ(i1.size(), 4u * 6);
    for (const auto& e : i1) EXPECT_TRUE(e.ok) << e.map << ' ' << e.h << ' ' << e.letter;
    for (const auto& e : i2) EXPECT_TRUE(e.ok) << e.map << ' ' << e.h << ' ' << e.letter;
    // pi2(E . f0) = 0
    auto f0 = E::gen(sc.alphabet, "f0");
    EXPECT_TRUE(sc.pi2.apply(sa.act(HopfE, f0)).is_zero());
}

// With the wrong q-power in the sphere table the projections stop intertwining.
TEST(Hopf, IntertwiningDetectsWrongTable) {
    const auto& sc = sphere_cal();
    auto A = sc.alphabet;
    auto f1 = E::gen(A, "f1"), f0 = E::gen(A, "f0"), fm = E::gen(A, "fm1");
    auto t = detail::disc_table(A, "f1", "fm1");
    std::array<E, 4> t0{s * (f1 - f1 * f0), Scalar::q_pow4(1) * (fm - f0 * fm), f0, f0};
    auto bad = ModuleAction<Scalar>("bad", A, {t[0], t0, t[1]});
    auto ax = disc_action<Scalar>(sc.disc_x->alphabet(), "x");
    bool fail = false;
    for (const auto& e : intertwining_check(sc.pi1, bad, ax)) fail |= !e.ok;
    EXPECT_TRUE(fail);
}

TEST(Hopf, SphereCalculusGeneratorsAtDegreeFour) {
    const auto& sc = sphere_cal();
    auto sa = sphere_action<Scalar>(sc.alphabet, q, q);
    // the images stay in J = ker pi1 cap ker pi2 for the generators that lie in J
    std::vector<E> inJ, outJ;
    for (size_t i = 0; i < sc.generators.size(); ++i) (sc.is_zero(sc.generators[i]) ? inJ : outJ).push_back(sc.generators[i]);
    EXPECT_EQ(inJ.size(), 9u);
    EXPECT_EQ(outJ.size(), 3u);
    auto exact = [&](const E& e) { return sc.is_zero(e) ? Membership::member : Membership::not_member; };
    auto r = covariance_check<Scalar>(sa, inJ, exact, "J", 4);
    EXPECT_TRUE(r.all_members());
    // K scales each monomial, so K . g is a multiple of g
    for (const auto& g : sc.generators) {
        auto kg = sa.act(HopfK, g);
        auto f = sc.forms->from_free(kg), fg = sc.forms->from_free(g);
        ASSERT_FALSE(fg.empty());
        const auto& [k0, c0] = *fg.begin();
        Scalar ratio = f.at(k0) / c0;
        EXPECT_EQ(kg, g.scaled(ratio));
    }
}
