#pragma once

// Random finite-dimensional algebras and ideal coverings for property sweeps.

#include "presets.hpp"
#include "quotient.hpp"

#include <random>

namespace ncglue {

// C[x,y] modulo monomials of degree >= d.
inline FiniteDimAlgebra truncated_polynomial_algebra(int d) {
    auto A = Alphabet::make({{"x", "x"}, {"y", "y"}});
    auto x = Element<Scalar>::gen(A, "x"), y = Element<Scalar>::gen(A, "y");
    std::vector<Element<Scalar>> rels{y * x - x * y};
    for (int i = 0; i <= d; ++i) {
        Element<Scalar> m = Element<Scalar>::unit(A);
        for (int k = 0; k < i; ++k) m = m * x;
        for (int k = i; k < d; ++k) m = m * y;
        rels.push_back(m);
    }
    return FiniteDimAlgebra::from_rewrite(orient_presentation(Presentation("poly", A, rels, false)));
}

// C<x,y> modulo words of length >= 3.
inline FiniteDimAlgebra truncated_free_algebra() {
    auto A = Alphabet::make({{"x", "x"}, {"y", "y"}});
    std::vector<Element<Scalar>> rels;
    for (int m = 0; m < 8; ++m) {
        Word w;
        for (int b = 0; b < 3; ++b) w.push_back((Letter)((m >> b) & 1));
        rels.push_back(Element<Scalar>::word(A, w));
    }
    return FiniteDimAlgebra::from_rewrite(orient_presentation(Presentation("free3", A, rels, false)));
}

// Functions on n points.
inline FiniteDimAlgebra point_algebra(int n) {
    std::vector<std::string> labels;
    std::vector<std::vector<QVec>> t(n, std::vector<QVec>(n));
    for (int i = 0; i < n; ++i) {
        labels.push_back("e" + std::to_string(i + 1));
        t[i][i] = QVec{{i, mpq_class(1)}};
    }
    return FiniteDimAlgebra(labels, t);
}

inline FiniteDimAlgebra direct_sum(const FiniteDimAlgebra& a, const FiniteDimAlgebra& b) {
    int na = (int)a.dim(), nb = (int)b.dim();
    std::vector<std::string> labels;
    for (int i = 0; i < na; ++i) labels.push_back("(" + a.label(i) + ",0)");
    for (int i = 0; i < nb; ++i) labels.push_back("(0," + b.label(i) + ")");
    std::vector<std::vector<QVec>> t(na + nb, std::vector<QVec>(na + nb));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j) t[i][j] = a.product_of_basis(i, j);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            for (const auto& [k, c] : b.product_of_basis(i, j)) t[na + i][na + j].emplace(na + k, c);
    return FiniteDimAlgebra(labels, t);
}

inline FiniteDimAlgebra random_fd_algebra(std::mt19937& rng) {
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
    case 0: return truncated_polynomial_algebra(std::uniform_int_distribution<int>(2, 4)(rng));
    case 1: return truncated_free_algebra();
    case 2: return point_algebra(std::uniform_int_distribution<int>(2, 4)(rng));
    case 3: return direct_sum(truncated_polynomial_algebra(3), point_algebra(1));
    default: return direct_sum(truncated_polynomial_algebra(2), truncated_polynomial_algebra(2));
    }
}

inline QVec random_qvec(const FiniteDimAlgebra& A, std::mt19937& rng, int density = 2) {
    std::uniform_int_distribution<int> coef(-2, 2), pick(0, density);
    QVec v;
    for (size_t i = 0; i < A.dim(); ++i)
        if (pick(rng) == 0) {
            int c = coef(rng);
            if (c) v.emplace((int)i, mpq_class(c));
        }
    return v;
}

// n proper ideals, each generated by one or two random elements, with zero
// intersection. Returns nothing if no covering turned up.
inline std::optional<std::vector<QSpan>> random_covering(const FiniteDimAlgebra& A, int n, std::mt19937& rng,
                                                         int attempts = 200) {
    for (int a = 0; a < attempts; ++a) {
        std::vector<QSpan> J;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            std::vector<QVec> gens{random_qvec(A, rng)};
            if (std::uniform_int_distribution<int>(0, 1)(rng)) gens.push_back(random_qvec(A, rng));
            J.push_back(A.ideal(gens));
            ok = J.back().dim() < A.dim();
        }
        if (!ok) continue;
        std::vector<const QSpan*> ptrs;
        for (const auto& j : J) ptrs.push_back(&j);
        if (span_intersection_all(ptrs).dim() == 0) return J;
    }
    return std::nullopt;
}

} // namespace ncglue
