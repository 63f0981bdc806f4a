#include <ncglue/scalar.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ncglue;

namespace {

Scalar random_scalar(std::mt19937& rng, bool allow_den = true) {
    std::uniform_int_distribution<int> c(-3, 3), e(0, 4), n(1, 3);
    auto poly = [&] {
        Poly p;
        int terms = n(rng);
        for (int i = 0; i < terms; ++i) p = p + Poly::monomial({e(rng), e(rng)}, c(rng));
        return p;
    };
    Poly num = poly();
    if (!allow_den) return Scalar(num);
    Poly den = poly();
    while (den.is_zero()) den = poly();
    return Scalar(num, den);
}

} // namespace

TEST(Scalar, SimplifyExamples) {
    Scalar q = Scalar::q(), p = Scalar::p();
    EXPECT_EQ((Scalar(1) - q * q) / (Scalar(1) - q), Scalar(1) + q);
    EXPECT_EQ((p - q) + (Scalar(1) - p), Scalar(1) - q);
    EXPECT_EQ(Scalar::s().pow(4), q);
    EXPECT_EQ(scalar_simplify(Scalar(1) + q), Scalar(1) + q);
}

TEST(Scalar, ZeroDenominatorIsMalformed) {
    EXPECT_THROW(Scalar(Poly(1), Poly(0)), MalformedScalar);
    EXPECT_THROW(Scalar().inverse(), MalformedScalar);
}

TEST(Scalar, EvaluateExamples) {
    Scalar q = Scalar::q();
    EXPECT_NEAR((Scalar(1) - q).evaluate(0.5).real(), 0.5, 1e-15);
    EXPECT_NEAR((-Scalar::s()).evaluate(0.0625).real(), -0.5, 1e-15);
    Scalar half = Scalar::q_pow4(2) + Scalar::q_pow4(-2);
    EXPECT_NEAR(half.evaluate(0.25).real(), 2.5, 1e-14);
}

TEST(Scalar, EvaluationErrorAtPole) {
    Scalar q = Scalar::q();
    Scalar f = Scalar(1) / (q - Scalar(mpq_class(1, 2)));
    EXPECT_THROW(f.evaluate(0.5), EvaluationError);
}

TEST(Scalar, Rendering) {
    Scalar q = Scalar::q();
    EXPECT_EQ((Scalar(1) - q).to_string(), "1 - q");
    EXPECT_EQ(Scalar::s().to_string(), "q^(1/4)");
    EXPECT_EQ(q.inverse().to_string(), "q^(-1)");
    EXPECT_EQ(Scalar::q_pow4(5).to_string(), "q^(5/4)");
    EXPECT_EQ(Scalar(mpq_class(-1, 2)).to_string(), "-1/2");
}

TEST(Scalar, FieldAxiomsOnRandomValues) {
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), Scalar(1));
        EXPECT_EQ(a - a, Scalar());
        EXPECT_EQ(scalar_simplify(a), a);
    }
}

TEST(Scalar, EvaluateIsRingHomomorphism) {
    std::mt19937 rng(11);
    for (int i = 0; i < 60; ++i) {
        Scalar a = random_scalar(rng), b = random_scalar(rng);
        double s = 0.7, r = 0.83;
        try {
            auto ab = (a * b).evaluate_sr(s, r);
            auto prod = a.evaluate_sr(s, r) * b.evaluate_sr(s, r);
            EXPECT_NEAR(ab.real(), prod.real(), 1e-12 * std::max(1.0, std::abs(prod)));
            auto sum = (a + b).evaluate_sr(s, r);
            EXPECT_NEAR(sum.real(), (a.evaluate_sr(s, r) + b.evaluate_sr(s, r)).real(),
                        1e-12 * std::max(1.0, std::abs(sum)));
        } catch (const EvaluationError&) {
        }
    }
}

TEST(Scalar, SpecializeAgreesWithRationalArithmetic) {
    std::mt19937 rng(3);
    RationalPoint pt{mpq_class(1, 2), mpq_class(2, 3)};
    for (int i = 0; i < 40; ++i) {
        Scalar a = random_scalar(rng), b = random_scalar(rng);
        try {
            mpq_class x = (a * b + a).specialize(pt);
            mpq_class y = a.specialize(pt) * b.specialize(pt) + a.specialize(pt);
            EXPECT_EQ(x, y);
        } catch (const EvaluationError&) {
        }
    }
}
