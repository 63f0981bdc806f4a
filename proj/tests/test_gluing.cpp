#include <ncglue/fdrandom.hpp>
#include <ncglue/gluing.hpp>

#include <gtest/gtest.h>

using namespace ncglue;

namespace {

using E = Element<Scalar>;

const SphereGluing& sphere() {
    static SphereGluing g = build_sphere_gluing(Scalar::p(), Scalar::q());
    return g;
}

CoveringDatum counterexample2_datum(FiniteDimAlgebra& A) {
    auto rs = orient_presentation(counterexample2_presentation());
    A = FiniteDimAlgebra::from_rewrite(rs);
    auto Al = rs.alphabet();
    QVec x = A.coords(E::gen(Al, "x"), rs), y = A.coords(E::gen(Al, "y"), rs), xmy = x;
    axpy(xmy, mpq_class(-1), y);
    return covering_datum(A, {A.ideal({x}), A.ideal({y}), A.ideal({xmy})});
}

// Functions on {a, b} and on {b, c}, glued over the point b.
FdGluingDatum three_points() {
    FdGluingDatum d;
    d.B = {point_algebra(2), point_algebra(2)};
    d.Bij[{0, 1}] = point_algebra(1);
    LinearMap to_b1, to_b2;
    to_b1.src_dim = to_b2.src_dim = 2;
    to_b1.img = {QVec{}, QVec{{0, mpq_class(1)}}};
    to_b2.img = {QVec{{0, mpq_class(1)}}, QVec{}};
    d.pi[{0, 1}] = to_b1;
    d.pi[{1, 0}] = to_b2;
    return d;
}

} // namespace

TEST(Gluing, SphereTupleMembership) {
    const auto& g = sphere();
    auto A1 = g.disc_p->alphabet(), A2 = g.disc_q->alphabet();
    auto x = E::gen(A1, "x"), xs = E::gen(A1, "x*"), y = E::gen(A2, "y");
    EXPECT_FALSE(glued_tuple_membership(g.datum, {x, y}).has_value());
    EXPECT_FALSE(glued_tuple_membership(g.datum, {x * xs, E::unit(A2)}).has_value());
    auto bad = glued_tuple_membership(g.datum, {x, E(A2)});
    ASSERT_TRUE(bad.has_value());
    EXPECT_EQ(*bad, (std::pair<int, int>{0, 1}));
}

TEST(Gluing, SphereMaps) {
    const auto& g = sphere();
    auto S = g.sphere->alphabet();
    auto f0 = E::gen(S, "f0");
    auto A1 = g.disc_p->alphabet(), A2 = g.disc_q->alphabet();
    EXPECT_EQ(g.pi1.apply(f0), E::gen(A1, "x") * E::gen(A1, "x*"));
    EXPECT_EQ(g.pi1.apply(E::gen(S, "f1")), E::gen(A1, "x"));
    EXPECT_EQ(g.pi2.apply(f0), E::unit(A2));
    EXPECT_EQ(g.pi2.apply(E::gen(S, "f1")), E::gen(A2, "y"));
    EXPECT_EQ(g.pi2.apply(f0 * f0), E::unit(A2));
}

// The tuples f~ are glued elements and satisfy the sphere relations.
TEST(Gluing, FTuplesSatisfyRelations) {
    const auto& g = sphere();
    for (const auto& t : g.f_tilde) EXPECT_FALSE(glued_tuple_membership(g.datum, t).has_value());
    std::vector<std::shared_ptr<const RewriteSystem<Scalar>>> comps = {g.disc_p, g.disc_q};
    for (int c = 0; c < 2; ++c) {
        // substitute f1, f0, fm1 by the c-th components
        AlgebraMorphism<Scalar> sub("component", g.sphere, comps[c],
                                    {g.f_tilde[1][c], g.f_tilde[0][c], g.f_tilde[2][c]}, false);
        for (const auto& r : sphere_presentation(g.p, g.q).relations) EXPECT_TRUE(sub.apply(r).is_zero());
    }
}

TEST(Gluing, SphereKernelAndSurjectivity) {
    const auto& g = sphere();
    EXPECT_EQ(g.kernel(4).dim(), 0u);
    for (int D = 1; D <= 4; ++D) {
        auto r = g.surjectivity(D);
        EXPECT_TRUE(r.contained) << D;
        EXPECT_GT(r.glued_dim, 0u);
    }
}

TEST(Gluing, ThreePoints) {
    auto d = three_points();
    auto g = build_gluing(d);
    EXPECT_EQ(g.alg.dim(), 3u);
    EXPECT_TRUE(g.alg.is_associative());
    auto r = canonical_covering_of_gluing(d);
    EXPECT_TRUE(r.is_covering);
    EXPECT_TRUE(r.complete);
    EXPECT_TRUE(r.kernel_images_ok);
}

// The counterexample data glued back together is the completion (dim 7),
// and the kernels of the projections cover it completely.
TEST(Gluing, Counterexample2Reassembled) {
    FiniteDimAlgebra A;
    auto c = counterexample2_datum(A);
    auto g = build_gluing(c.datum);
    EXPECT_EQ(g.alg.dim(), 7u);
    EXPECT_TRUE(g.alg.is_associative());
    auto r = canonical_covering_of_gluing(c.datum);
    EXPECT_TRUE(r.is_covering);
    EXPECT_TRUE(r.complete);
    EXPECT_TRUE(r.kernel_images_ok);
    EXPECT_EQ(r.dim_gluing, 7u);
}

TEST(Gluing, CompletionDataSatisfyLiftConditions) {
    FiniteDimAlgebra A;
    auto c = counterexample2_datum(A);
    auto cond = check_lift_conditions(c.datum);
    EXPECT_TRUE(cond.pishit1) << cond.failing;
    EXPECT_TRUE(cond.pishit) << cond.failing;
}

TEST(Gluing, LiftCounterexample2) {
    FiniteDimAlgebra A;
    auto c = counterexample2_datum(A);
    for (int i = 0; i < 3; ++i)
        for (size_t b = 0; b < c.datum.B[i].dim(); ++b) {
            auto res = lift_local_section(c.datum, i, c.datum.B[i].basis_vec((int)b));
            ASSERT_TRUE(res.tuple.has_value()) << res.failed_stage;
            EXPECT_FALSE(glued_tuple_membership(c.datum, *res.tuple).has_value());
            EXPECT_EQ((*res.tuple)[i], c.datum.B[i].basis_vec((int)b));
        }
}

TEST(Gluing, LiftZero) {
    FiniteDimAlgebra A;
    auto c = counterexample2_datum(A);
    auto res = lift_local_section(c.datum, 0, QVec{});
    ASSERT_TRUE(res.tuple.has_value());
    for (const auto& v : *res.tuple) EXPECT_TRUE(v.empty());
}

TEST(Gluing, RandomCoveringData) {
    std::mt19937 rng(17);
    int found = 0;
    for (int t = 0; t < 300 && found < 40; ++t) {
        auto A = random_fd_algebra(rng);
        int n = 2 + (t % 2);
        auto J = random_covering(A, n, rng, 50);
        if (!J) continue;
        ++found;
        auto c = covering_datum(A, *J);
        auto cond = check_lift_conditions(c.datum);
        EXPECT_TRUE(cond.pishit1 && cond.pishit) << cond.failing;
        for (int i = 0; i < n; ++i) {
            auto f = random_qvec(c.datum.B[i], rng, 1);
            auto res = lift_local_section(c.datum, i, f);
            if (n == 2) EXPECT_TRUE(res.tuple.has_value()) << res.failed_stage;
            if (res.tuple) {
                EXPECT_FALSE(glued_tuple_membership(c.datum, *res.tuple).has_value());
                EXPECT_EQ((*res.tuple)[i], f);
            }
        }
        auto r = canonical_covering_of_gluing(c.datum);
        EXPECT_TRUE(r.complete);
        EXPECT_TRUE(r.kernel_images_ok);
    }
    EXPECT_GE(found, 30);
}

TEST(Gluing, MorphismChecks) {
    FiniteDimAlgebra A;
    auto c = counterexample2_datum(A);
    const auto& d = c.datum;
    std::vector<LinearMap> id;
    for (const auto& b : d.B) id.push_back(LinearMap::identity(b.dim()));
    std::map<std::pair<int, int>, LinearMap> idij;
    for (const auto& [k, b] : d.Bij) idij[k] = LinearMap::identity(b.dim());
    EXPECT_TRUE(glued_morphism_check(d, d, id, idij).ok);

    auto g = build_gluing(d);
    auto m = completion_morphism(d, g);
    EXPECT_TRUE(glued_morphism_check(m.source.datum, d, m.phi, m.phi_ij).ok);

    auto broken = idij;
    broken[{0, 1}].img[0] = QVec{};
    auto r = glued_morphism_check(d, d, id, broken);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.witness.empty());
}
