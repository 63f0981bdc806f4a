#include <ncglue/rep.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ncglue;

namespace {

using E = Element<Scalar>;

const double pi = std::numbers::pi;

E sgen(const TruncatedRepresentation& r, const std::string& n) { return E::gen(r.presentation.alphabet, n); }

} // namespace

TEST(Rep, DiscExamples) {
    auto r = build_representation(RepKind::disc, {0.5, 0.5, 0}, 8);
    EXPECT_NEAR(std::abs(r["x"](1, 0) - std::sqrt(0.5)), 0, 1e-15);
    EXPECT_EQ(r["x"].col(0).cwiseAbs().sum(), std::sqrt(0.5));
    EXPECT_EQ(r["x*"].col(0).cwiseAbs().sum(), 0.0);
    EXPECT_EQ(r.window_end, 6);
    EXPECT_EQ(star_defect(r), 0.0);
}

TEST(Rep, SphereExamples) {
    auto r1 = build_representation(RepKind::sphere1, {0.5, 0.7, 0}, 8);
    EXPECT_EQ(r1["f0"](0, 0), cplx(0));
    EXPECT_NEAR(r1["f0"](1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(r1["f0"](3, 3).real(), 1 - 0.125, 1e-15);
    // re4 has words of length 3
    EXPECT_EQ(r1.window_end, 5);
    auto r2 = build_representation(RepKind::sphere2, {0.5, 0.7, 0}, 8);
    EXPECT_TRUE(r2["f0"].isIdentity());
    EXPECT_NEAR(r2["f1"](1, 0).real(), std::sqrt(0.3), 1e-15);
    auto pt = build_representation(RepKind::circle_point, {0.5, 0.5, 0}, 8);
    EXPECT_EQ(pt.N, 1);
    EXPECT_EQ(pt["f1"](0, 0), cplx(1));
}

TEST(Rep, InvalidParameters) {
    EXPECT_THROW(build_representation(RepKind::disc, {0.5, 1.0, 0}, 8), InvalidParameters);
    EXPECT_THROW(build_representation(RepKind::sphere1, {0.0, 0.5, 0}, 8), InvalidParameters);
    EXPECT_THROW(build_representation(RepKind::disc, {0.5, 0.5, 0}, 3), InvalidParameters);
    EXPECT_THROW(build_representation(RepKind::circle_point, {0.5, 0.5, 2 * pi}, 8), InvalidParameters);
    EXPECT_THROW(rep_kind_from_string("torus"), InvalidParameters);
}

TEST(Rep, EvaluateElement) {
    auto r1 = build_representation(RepKind::sphere1, {0.3, 0.7, 0}, 16);
    auto one = E(r1.presentation.alphabet, Scalar(1));
    EXPECT_TRUE(evaluate_element_matrix(one, r1).isIdentity());
    auto f1 = sgen(r1, "f1"), f0 = sgen(r1, "f0"), fm = sgen(r1, "fm1");
    EXPECT_LE(r1.interior(evaluate_element_matrix(f1 * fm - f0, r1)).cwiseAbs().maxCoeff(), 1e-15);
    auto r2 = build_representation(RepKind::sphere2, {0.3, 0.7, 0}, 16);
    EXPECT_TRUE(evaluate_element_matrix(f0, r2).isIdentity());
    // symbolic coefficients are evaluated at the representation parameters
    auto m = evaluate_element_matrix(E(r1.presentation.alphabet, Scalar::p() - Scalar::q()), r1);
    EXPECT_NEAR(m(0, 0).real(), -0.4, 1e-14);
    auto d = build_representation(RepKind::disc, {0.5, 0.5, 0}, 8);
    auto dx = E::gen(d.presentation.alphabet, "x");
    EXPECT_THROW(evaluate_element_matrix(dx, r1), IncompatibleAlgebra);
}

TEST(Rep, Residuals) {
    auto d = build_representation(RepKind::disc, {0.5, 0.5, 0}, 64);
    EXPECT_LE(relation_residuals(d.presentation, d).max, 1e-12);
    auto r1 = build_representation(RepKind::sphere1, {0.3, 0.7, 0}, 64);
    EXPECT_LE(relation_residuals(r1.presentation, r1).max, 1e-12);
    auto th = build_representation(RepKind::circle_point, {0.3, 0.7, pi / 3}, 64);
    EXPECT_LE(relation_residuals(th.presentation, th).max, 1e-15);
    // The truncation is visible outside the window.
    auto full = evaluate_element_matrix(d.presentation.relations[0], d);
    EXPECT_GT(full.cwiseAbs().maxCoeff(), 0.1);
    // rho_1 is not a representation for the wrong parameter
    auto wrong = r1;
    wrong.params.p = 0.5;
    EXPECT_GT(relation_residuals(wrong.presentation, wrong).max, 1e-3);
}

TEST(Rep, ResidualGrid) {
    auto pts = residual_grid({RepKind::disc, RepKind::sphere1, RepKind::sphere2, RepKind::circle_point,
                              RepKind::disc_point, RepKind::circle},
                             {0.3, 0.5, 0.7}, {0.0, pi / 3, pi}, 64);
    EXPECT_EQ(pts.size(), 3u * 9 + 3 * 3);
    for (const auto& p : pts) {
        EXPECT_LE(p.residual, 1e-12) << to_string(p.kind) << ' ' << p.params.p << ' ' << p.params.q;
        EXPECT_LE(p.star, 1e-15);
    }
}

TEST(Rep, NormalFormsEvaluateAlike) {
    auto rs = orient_presentation(sphere_presentation(Scalar::p(), Scalar::q()));
    auto r1 = build_representation(RepKind::sphere1, {0.3, 0.7, 0}, 32);
    auto r2 = build_representation(RepKind::sphere2, {0.3, 0.7, 0}, 32);
    auto A = rs.alphabet();
    std::mt19937 rng(5);
    for (int t = 0; t < 40; ++t) {
        Word w(1 + rng() % 4);
        for (auto& l : w) l = (Letter)(rng() % 3);
        auto e = E::word(A, w);
        auto n = rs.normal_form(e);
        for (const auto* r : {&r1, &r2}) {
            int cols = r->N - 4;
            double diff = (evaluate_element_matrix(e, *r) - evaluate_element_matrix(n, *r)).leftCols(cols).cwiseAbs().maxCoeff();
            EXPECT_LE(diff, 1e-12) << e.to_string();
        }
    }
}

TEST(Rep, Spectra) {
    auto r1 = build_representation(RepKind::sphere1, {0.5, 0.7, 0}, 32);
    auto s1 = spectral_report(r1);
    EXPECT_NEAR(s1.rows[1].radius, 0.625, 1e-14);
    EXPECT_NEAR(s1.rows[1].f0, 0.5, 1e-14);
    EXPECT_LE(s1.max_error, 1e-12);
    EXPECT_LE(s1.offdiag, 1e-14);
    auto r2 = build_representation(RepKind::sphere2, {0.7, 0.5, 0}, 32);
    auto s2 = spectral_report(r2);
    EXPECT_NEAR(s2.rows[0].radius, 0.25, 1e-14);
    EXPECT_NEAR(s2.rows[0].f0, 1.0, 1e-14);
    EXPECT_LE(s2.offdiag, 1e-14);
    auto th = spectral_report(build_representation(RepKind::circle_point, {0.5, 0.5, 1.0}, 4));
    ASSERT_EQ(th.rows.size(), 1u);
    EXPECT_NEAR(th.rows[0].radius, 1.0, 1e-15);
    EXPECT_NE(s1.csv().find("i,f0,f0_expected"), std::string::npos);
    EXPECT_THROW(spectral_report(build_representation(RepKind::disc, {0.5, 0.5, 0}, 8)), std::invalid_argument);
}

TEST(Rep, FPlusMinusAreSelfAdjoint) {
    auto r1 = build_representation(RepKind::sphere1, {0.3, 0.5, 0}, 16);
    EXPECT_LE((f_plus(r1) - f_plus(r1).adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((f_minus(r1) - f_minus(r1).adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    auto th = build_representation(RepKind::circle_point, {0.5, 0.5, pi / 3}, 4);
    EXPECT_NEAR(f_plus(th)(0, 0).real(), 0.5, 1e-15);
    // i(e^{it} - e^{-it})/2 = -sin t; the radius does not see the sign
    EXPECT_NEAR(f_minus(th)(0, 0).real(), -std::sin(pi / 3), 1e-15);
}

TEST(Rep, KernelDecomposition) {
    for (double t : {0.3, 0.5, 0.7}) {
        auto k1 = kernel_decomposition(build_representation(RepKind::sphere1, {t, 0.5, 0}, 24));
        EXPECT_GT(k1.min_singular_one_minus_f0, 0.0);
        EXPECT_LE(k1.norm_f1fm1_minus_f0, 1e-15);
        auto k2 = kernel_decomposition(build_representation(RepKind::sphere2, {0.5, t, 0}, 24));
        EXPECT_EQ(k2.norm_one_minus_f0, 0.0);
    }
}

TEST(Rep, FaithfulnessExamples) {
    auto A = sphere_presentation(Scalar::p(), Scalar::q()).alphabet;
    auto f1 = E::gen(A, "f1"), fm = E::gen(A, "fm1"), f0 = E::gen(A, "f0");
    auto r = faithfulness_probe(f1 * fm, 16);
    EXPECT_TRUE(r.ok);
    EXPECT_TRUE(r.basis_form);
    ASSERT_EQ(r.b.size(), 1u);
    EXPECT_NEAR(std::abs(r.b.at({1, 1}) - 1.0), 0, 1e-12);
    EXPECT_TRUE(r.a.empty());

    auto z = faithfulness_probe(E(A), 16);
    EXPECT_TRUE(z.ok);
    EXPECT_TRUE(z.a.empty() && z.b.empty());

    // not in basis form: f0 f0 still expands and round-trips
    auto s = faithfulness_probe(f0 * f0, 16);
    EXPECT_FALSE(s.basis_form);
    EXPECT_LE(s.roundtrip_residual, 1e-9);
    EXPECT_THROW(faithfulness_probe(f1 * f1 * f1 * fm * fm * fm, 8), std::invalid_argument);
}

TEST(Rep, FaithfulnessRandom) {
    auto A = sphere_presentation(Scalar::p(), Scalar::q()).alphabet;
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int t = 0; t < 10; ++t) {
        E e(A);
        for (int k = 0; k <= 3; ++k)
            for (int l = 0; k + l <= 3; ++l)
                for (bool z : {false, true}) {
                    if (z && k + l == 3) continue;
                    int c = coef(rng);
                    if (c) e.add_term(detail::sphere_basis_word(*A, k, z, l), Scalar(mpq_class(c, 1 + rng() % 3)));
                }
        auto r = faithfulness_probe(e, 48);
        EXPECT_TRUE(r.ok) << e.to_string() << ' ' << r.coefficient_error << ' ' << r.roundtrip_residual;
    }
}

TEST(Rep, ClassicalCircle) {
    auto d = build_representation(RepKind::disc, {0.5, 0.5, 0}, 64);
    auto c = classical_circle_check(d, {0.0, pi / 3, pi});
    EXPECT_TRUE(c.ok);
    EXPECT_NEAR(c.sqrt_lambda_N, 1.0, 1e-9);
    EXPECT_NEAR(c.norm_x, std::sqrt(1 - std::pow(0.5, 63)), 1e-12);
    auto pt = build_representation(RepKind::disc_point, {0.5, 0.5, pi}, 1);
    EXPECT_NEAR(pt["x"](0, 0).real(), -1.0, 1e-15);
    EXPECT_NEAR(pt["x*"](0, 0).real(), -1.0, 1e-15);
    // the norm approaches 1 from below as N grows
    double prev = 0;
    for (int N : {4, 8, 16, 32}) {
        auto cc = classical_circle_check(build_representation(RepKind::disc, {0.5, 0.7, 0}, N), {0.0});
        EXPECT_TRUE(cc.ok);
        EXPECT_GT(cc.norm_x, prev);
        EXPECT_LE(cc.norm_x, 1.0);
        prev = cc.norm_x;
    }
}
