#pragma once

// The presentations used throughout: quantum discs, the glued sphere, the
// circle, and the two noncomplete-covering examples.

#include "rewrite.hpp"

namespace ncglue {

namespace detail {
inline Element<Scalar> g(const AlphabetPtr& A, const std::string& n) { return Element<Scalar>::gen(A, n); }
inline Element<Scalar> c(const AlphabetPtr& A, const Scalar& s) { return Element<Scalar>(A, s); }
} // namespace detail

// x* x - q x x* = (1 - q) 1 on generators named `x`, `x*`.
inline Presentation disc_presentation(const Scalar& q, const std::string& x = "x", bool with_differentials = false) {
    auto A = Alphabet::make({{x, x + "*"}, {x + "*", x}}, with_differentials);
    using detail::g, detail::c;
    auto X = g(A, x), Xs = g(A, x + "*");
    return Presentation("disc_" + x, A, {Xs * X - q * (X * Xs) - c(A, Scalar(1) - q)});
}

// Sphere relations with letter order f1 < f0 < fm1.
inline Presentation sphere_presentation(const Scalar& p, const Scalar& q, bool with_differentials = false) {
    auto A = Alphabet::make({{"f1", "fm1"}, {"f0", "f0"}, {"fm1", "f1"}}, with_differentials);
    using detail::g, detail::c;
    auto f1 = g(A, "f1"), f0 = g(A, "f0"), fm = g(A, "fm1");
    auto one = c(A, Scalar(1));
    std::vector<Element<Scalar>> rels = {
        fm * f1 - q * (f1 * fm) - (p - q) * f0 - c(A, Scalar(1) - p),
        f0 * f1 - p * (f1 * f0) - (Scalar(1) - p) * f1,
        fm * f0 - p * (f0 * fm) - (Scalar(1) - p) * fm,
        (one - f0) * (f1 * fm - f0),
    };
    return Presentation("sphere", A, rels);
}

inline Presentation circle_presentation(const std::string& a = "a", bool with_differentials = false) {
    auto A = Alphabet::make({{a, a + "*"}, {a + "*", a}}, with_differentials);
    using detail::g, detail::c;
    auto X = g(A, a), Xs = g(A, a + "*");
    auto one = c(A, Scalar(1));
    return Presentation("circle", A, {X * Xs - one, Xs * X - one});
}

// Commutative polynomials in x, y modulo monomials of degree >= 3.
inline Presentation counterexample2_presentation() {
    auto A = Alphabet::make({{"x", "x"}, {"y", "y"}});
    using detail::g;
    auto x = g(A, "x"), y = g(A, "y");
    return Presentation("counterexample2", A, {y * x - x * y, x * x * x, x * x * y, x * y * y, y * y * y});
}

// C<x,y,z> with all mixed products zero, optionally truncated by
// x^2 = y^2 = z^2 = 0.
inline Presentation counterexample1_presentation(bool truncated = true) {
    auto A = Alphabet::make({{"x", "x"}, {"y", "y"}, {"z", "z"}});
    using detail::g;
    auto x = g(A, "x"), y = g(A, "y"), z = g(A, "z");
    std::vector<Element<Scalar>> rels = {x * y, y * x, x * z, z * x, y * z, z * y};
    if (truncated)
        for (const auto& e : {x * x, y * y, z * z}) rels.push_back(e);
    return Presentation(truncated ? "counterexample1" : "counterexample1_full", A, rels);
}

} // namespace ncglue
