#pragma once

// Truncated Fock-space representations of the disc and sphere algebras,
// evaluated numerically with dense complex matrices.

#include "presets.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <future>
#include <numbers>
#include <optional>
#include <sstream>

namespace ncglue {

using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

struct InvalidParameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// disc: pi_q on x, x*.  sphere1 / sphere2: rho_1 (weights from p) and rho_2
// (weights from q, f0 = 1).  circle_point: the one-dimensional sphere
// representation rho_theta.  disc_point and circle: x -> e^{i theta} and
// a -> e^{i theta}.
enum class RepKind { disc, sphere1, sphere2, circle_point, disc_point, circle };

inline std::string to_string(RepKind k) {
    switch (k) {
    case RepKind::disc: return "disc";
    case RepKind::sphere1: return "sphere1";
    case RepKind::sphere2: return "sphere2";
    case RepKind::circle_point: return "circle_point";
    case RepKind::disc_point: return "disc_point";
    case RepKind::circle: return "circle";
    }
    return "?";
}

inline RepKind rep_kind_from_string(const std::string& s) {
    for (auto k : {RepKind::disc, RepKind::sphere1, RepKind::sphere2, RepKind::circle_point, RepKind::disc_point,
                   RepKind::circle})
        if (to_string(k) == s) return k;
    throw InvalidParameters("unknown representation kind " + s);
}

struct RepParams {
    double p = 0.5, q = 0.5, theta = 0.0;
};

struct TruncatedRepresentation {
    RepKind kind = RepKind::disc;
    int N = 0;
    RepParams params;
    Presentation presentation;
    std::map<std::string, CMat> gens;
    int window_end = 0; // interior rows and columns are [0, window_end]

    bool is_sphere() const {
        return kind == RepKind::sphere1 || kind == RepKind::sphere2 || kind == RepKind::circle_point;
    }
    const CMat& operator[](const std::string& g) const {
        auto it = gens.find(g);
        if (it == gens.end()) throw IncompatibleAlgebra("representation has no generator " + g);
        return it->second;
    }
    int window_size() const { return window_end + 1; }
    CMat interior(const CMat& m) const { return m.topLeftCorner(window_size(), window_size()); }
};

namespace detail {

// 1 - t^i
inline double lambda(double t, int i) { return 1.0 - std::pow(t, i); }

// Weighted raising operator e_i -> sqrt(lambda_{i+1}) e_{i+1}, e_{N-1} -> 0.
inline CMat raising(double t, int N) {
    CMat m = CMat::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) m(i + 1, i) = std::sqrt(lambda(t, i + 1));
    return m;
}

inline void check_unit_interval(double t, const char* name) {
    if (!(t > 0.0 && t < 1.0)) throw InvalidParameters(std::string(name) + " must lie in (0, 1)");
}

inline int max_relation_length(const Presentation& P) {
    int w = 1;
    for (const auto& r : P.relations) w = std::max(w, r.max_length());
    return w;
}

inline cplx to_complex(const Scalar& c, const RepParams& prm) { return c.evaluate(prm.q, prm.p); }
inline cplx to_complex(const mpq_class& c, const RepParams&) { return {c.get_d(), 0.0}; }

} // namespace detail

inline TruncatedRepresentation build_representation(RepKind kind, const RepParams& prm, int N) {
    if (!(prm.theta >= 0.0 && prm.theta < 2 * std::numbers::pi)) throw InvalidParameters("theta must lie in [0, 2pi)");
    TruncatedRepresentation r;
    r.kind = kind;
    r.params = prm;
    auto point = [&](std::initializer_list<std::pair<const char*, cplx>> vals) {
        r.N = 1;
        for (const auto& [g, v] : vals) r.gens[g] = CMat::Constant(1, 1, v);
        r.window_end = 0;
    };
    cplx u = std::polar(1.0, prm.theta);
    switch (kind) {
    case RepKind::disc: {
        detail::check_unit_interval(prm.q, "q");
        r.presentation = disc_presentation(Scalar::q());
        CMat x = detail::raising(prm.q, N);
        r.gens["x"] = x;
        r.gens["x*"] = x.adjoint();
        break;
    }
    case RepKind::sphere1:
    case RepKind::sphere2: {
        detail::check_unit_interval(prm.p, "p");
        detail::check_unit_interval(prm.q, "q");
        r.presentation = sphere_presentation(Scalar::p(), Scalar::q());
        double t = kind == RepKind::sphere1 ? prm.p : prm.q;
        CMat f1 = detail::raising(t, N);
        r.gens["f1"] = f1;
        r.gens["fm1"] = f1.adjoint();
        if (kind == RepKind::sphere1) {
            CMat f0 = CMat::Zero(N, N);
            for (int i = 0; i < N; ++i) f0(i, i) = detail::lambda(t, i);
            r.gens["f0"] = f0;
        } else {
            r.gens["f0"] = CMat::Identity(N, N);
        }
        break;
    }
    case RepKind::circle_point:
        r.presentation = sphere_presentation(Scalar::p(), Scalar::q());
        point({{"f1", u}, {"f0", 1.0}, {"fm1", std::conj(u)}});
        return r;
    case RepKind::disc_point:
        r.presentation = disc_presentation(Scalar::q());
        point({{"x", u}, {"x*", std::conj(u)}});
        return r;
    case RepKind::circle:
        r.presentation = circle_presentation();
        point({{"a", u}, {"a*", std::conj(u)}});
        return r;
    }
    if (N < 4) throw InvalidParameters("truncation size must be at least 4");
    r.N = N;
    r.window_end = N - 1 - (detail::max_relation_length(r.presentation) - 1);
    return r;
}

// Largest |M - M'^*| over generator pairs related by the star.
inline double star_defect(const TruncatedRepresentation& r) {
    const auto& A = *r.presentation.alphabet;
    double worst = 0;
    for (int g = 0; g < A.base_size(); ++g) {
        const auto& m = r[A[g].name];
        const auto& ms = r[A[A[g].star].name];
        worst = std::max(worst, (m.adjoint() - ms).cwiseAbs().maxCoeff());
    }
    return worst;
}

template <class K>
CMat evaluate_element_matrix(const Element<K>& e, const TruncatedRepresentation& r) {
    CMat out = CMat::Zero(r.N, r.N);
    if (!e.alphabet()) return out;
    const auto& A = *e.alphabet();
    std::vector<const CMat*> mats(A.size(), nullptr);
    const auto& terms = e.terms();
    for (const auto& [w, c] : terms) {
        CMat m = CMat::Identity(r.N, r.N);
        for (Letter l : w) {
            if (A[l].degree != 0) throw std::invalid_argument("cannot evaluate forms of positive degree");
            if (!mats[l]) mats[l] = &r[A[l].name];
            m = m * *mats[l];
        }
        out += detail::to_complex(c, r.params) * m;
    }
    return out;
}

struct ResidualReport {
    std::vector<double> per_relation;
    double max = 0;
};

inline ResidualReport relation_residuals(const Presentation& P, const TruncatedRepresentation& r) {
    ResidualReport rep;
    for (const auto& rel : P.relations) {
        double v = r.interior(evaluate_element_matrix(rel, r)).cwiseAbs().maxCoeff();
        rep.per_relation.push_back(v);
        rep.max = std::max(rep.max, v);
    }
    return rep;
}

struct GridPoint {
    RepKind kind;
    RepParams params;
    double residual = 0, star = 0;
};

// Builds every (kind, p, q, theta) combination and scans residuals in parallel.
inline std::vector<GridPoint> residual_grid(const std::vector<RepKind>& kinds, const std::vector<double>& ts,
                                            const std::vector<double>& thetas, int N) {
    std::vector<GridPoint> pts;
    for (auto k : kinds) {
        bool point = k == RepKind::circle_point || k == RepKind::disc_point || k == RepKind::circle;
        for (double p : ts)
            for (double q : ts)
                if (point) {
                    if (p != ts.front() || q != ts.front()) continue;
                    for (double th : thetas) pts.push_back({k, {p, q, th}});
                } else {
                    pts.push_back({k, {p, q, 0.0}});
                }
    }
    std::vector<std::future<void>> jobs;
    for (auto& pt : pts)
        jobs.push_back(std::async(std::launch::async, [&pt, N] {
            auto r = build_representation(pt.kind, pt.params, N);
            pt.residual = relation_residuals(r.presentation, r).max;
            pt.star = star_defect(r);
        }));
    for (auto& j : jobs) j.get();
    return pts;
}

struct SpectrumRow {
    int i = 0;
    double f0 = 0, f0_expected = 0, radius = 0, radius_expected = 0;
};

struct SpectralReport {
    RepKind kind;
    std::vector<SpectrumRow> rows;
    double max_error = 0;
    double offdiag = 0; // largest off-diagonal entry of rho(f+^2 + f-^2) on the window

    std::string csv() const {
        std::ostringstream os;
        os.precision(15);
        os << "i,f0,f0_expected,radius,radius_expected\n";
        for (const auto& r : rows)
            os << r.i << ',' << r.f0 << ',' << r.f0_expected << ',' << r.radius << ',' << r.radius_expected << '\n';
        return os.str();
    }
};

// f+ = (f1 + fm1)/2, f- = i(f1 - fm1)/2.
inline CMat f_plus(const TruncatedRepresentation& r) { return 0.5 * (r["f1"] + r["fm1"]); }
inline CMat f_minus(const TruncatedRepresentation& r) { return cplx(0, 0.5) * (r["f1"] - r["fm1"]); }

inline SpectralReport spectral_report(const TruncatedRepresentation& r) {
    if (!r.is_sphere()) throw std::invalid_argument("spectral report needs a sphere representation");
    SpectralReport rep;
    rep.kind = r.kind;
    CMat fp = f_plus(r), fm = f_minus(r);
    CMat rad = r.interior(fp * fp + fm * fm);
    CMat f0 = r.interior(r["f0"]);
    CMat off = rad;
    off.diagonal().setZero();
    rep.offdiag = off.size() ? off.cwiseAbs().maxCoeff() : 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> es0(f0), esr(rad);
    std::vector<double> exp0, expr;
    double t = r.kind == RepKind::sphere1 ? r.params.p : r.params.q;
    for (int i = 0; i < r.window_size(); ++i) {
        switch (r.kind) {
        case RepKind::sphere1: exp0.push_back(detail::lambda(t, i)); break;
        default: exp0.push_back(1.0);
        }
        expr.push_back(r.kind == RepKind::circle_point ? 1.0 : 1.0 - 0.5 * (std::pow(t, i) + std::pow(t, i + 1)));
    }
    // The matrices are diagonal in e_i; eigenvalues are matched to rows
    // after sorting both sides.
    auto sorted = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    auto s0 = sorted(exp0), sr = sorted(expr);
    for (int i = 0; i < r.window_size(); ++i) {
        rep.max_error = std::max(rep.max_error, std::abs(es0.eigenvalues()(i) - s0[i]));
        rep.max_error = std::max(rep.max_error, std::abs(esr.eigenvalues()(i) - sr[i]));
        SpectrumRow row;
        row.i = i;
        row.f0 = f0(i, i).real();
        row.radius = rad(i, i).real();
        row.f0_expected = exp0[i];
        row.radius_expected = expr[i];
        rep.max_error = std::max({rep.max_error, std::abs(row.f0 - row.f0_expected),
                                  std::abs(row.radius - row.radius_expected)});
        rep.rows.push_back(row);
    }
    return rep;
}

// (1 - rho(f0)) and rho(f1 fm1 - f0) on the window.
struct KernelDecomposition {
    double min_singular_one_minus_f0 = 0; // > 0 means ker(1 - rho(f0)) is trivial
    double norm_one_minus_f0 = 0;         // 0 means the kernel is everything
    double norm_f1fm1_minus_f0 = 0;
};

inline KernelDecomposition kernel_decomposition(const TruncatedRepresentation& r) {
    KernelDecomposition k;
    CMat one_f0 = r.interior(CMat::Identity(r.N, r.N) - r["f0"]);
    CMat c = r.interior(r["f1"] * r["fm1"] - r["f0"]);
    Eigen::JacobiSVD<CMat> svd(one_f0);
    k.min_singular_one_minus_f0 = svd.singularValues().minCoeff();
    k.norm_one_minus_f0 = one_f0.cwiseAbs().maxCoeff();
    k.norm_f1fm1_minus_f0 = c.cwiseAbs().maxCoeff();
    return k;
}

struct FaithfulnessReport {
    std::map<std::pair<int, int>, cplx> a, b; // f1^k f0 fm1^l and f1^k fm1^l
    bool basis_form = false;
    double coefficient_error = 0; // against the input, when it is in basis form
    double roundtrip_residual = 0;
    bool ok = false;
};

namespace detail {

// Word f1^k [f0] fm1^l in the sphere alphabet.
inline Word sphere_basis_word(const Alphabet& A, int k, bool f0, int l) {
    Word w(k, (Letter)A.at("f1"));
    if (f0) w.push_back((Letter)A.at("f0"));
    w.insert(w.end(), l, (Letter)A.at("fm1"));
    return w;
}

// (k, with_f0, l) when w has the basis shape.
inline std::optional<std::tuple<int, bool, int>> sphere_basis_shape(const Alphabet& A, const Word& w) {
    int f1 = A.at("f1"), f0 = A.at("f0"), fm = A.at("fm1");
    size_t i = 0;
    int k = 0, l = 0;
    bool z = false;
    while (i < w.size() && w[i] == f1) ++k, ++i;
    if (i < w.size() && w[i] == f0) z = true, ++i;
    while (i < w.size() && w[i] == fm) ++l, ++i;
    if (i != w.size()) return std::nullopt;
    return std::tuple{k, z, l};
}

} // namespace detail

// Recovers the coefficients of e in the basis f1^k f0 fm1^l, f1^k fm1^l from
// rho_1(e) and rho_2(e) acting on e_0, e_1, ...: column l of rho_1 sees only
// the b_{k,l} (f0 e_0 = 0), and rho_2 then gives a_{k,l} + b_{k,l}.
template <class K>
FaithfulnessReport faithfulness_probe(const Element<K>& e, int N, RepParams prm = {0.3, 0.7, 0.0}) {
    FaithfulnessReport rep;
    auto r1 = build_representation(RepKind::sphere1, prm, N);
    auto r2 = build_representation(RepKind::sphere2, prm, N);
    int deg = e.alphabet() ? std::max(0, e.max_length()) : 0;
    if (N < 2 * deg + 4) throw std::invalid_argument("truncation too small for the element degree");
    auto S = r1.presentation.alphabet;
    CMat m1 = evaluate_element_matrix(e, r1), m2 = evaluate_element_matrix(e, r2);
    auto basis_mat = [&](const TruncatedRepresentation& r, int k, bool f0, int l) {
        return evaluate_element_matrix(Element<mpq_class>::word(S, detail::sphere_basis_word(*S, k, f0, l)), r);
    };
    auto prod = [](double t, int n) {
        double v = 1;
        for (int i = 1; i <= n; ++i) v *= detail::lambda(t, i);
        return std::sqrt(v);
    };
    const double tiny = 1e-13;
    for (int l = 0; l <= deg; ++l) {
        for (int k = 0; k <= deg; ++k) {
            cplx b = m1(k, l) / (prod(prm.p, l) * prod(prm.p, k));
            if (std::abs(b) > tiny) rep.b[{k, l}] = b;
        }
        for (const auto& [kl, b] : rep.b)
            if (kl.second == l) {
                m1 -= b * basis_mat(r1, kl.first, false, l);
                m2 -= b * basis_mat(r2, kl.first, false, l);
            }
        for (int k = 0; k <= deg; ++k) {
            cplx a = m2(k, l) / (prod(prm.q, l) * prod(prm.q, k));
            if (std::abs(a) > tiny) {
                rep.a[{k, l}] = a;
                m1 -= a * basis_mat(r1, k, true, l);
                m2 -= a * basis_mat(r2, k, true, l);
            }
        }
    }
    // Whatever is left on the exact columns is the round-trip error.
    int cols = N - deg;
    rep.roundtrip_residual = std::max(m1.leftCols(cols).cwiseAbs().maxCoeff(), m2.leftCols(cols).cwiseAbs().maxCoeff());

    rep.basis_form = true;
    std::map<std::tuple<int, bool, int>, cplx> input;
    if (e.alphabet()) {
        const auto& terms = e.terms();
        for (const auto& [w, c] : terms) {
            auto sh = detail::sphere_basis_shape(*e.alphabet(), w);
            if (!sh) {
                rep.basis_form = false;
                break;
            }
            input[*sh] = detail::to_complex(c, prm);
        }
    }
    if (rep.basis_form) {
        auto err = [&](const std::map<std::pair<int, int>, cplx>& got, bool f0) {
            for (const auto& [kl, v] : got) {
                auto it = input.find({kl.first, f0, kl.second});
                rep.coefficient_error =
                    std::max(rep.coefficient_error, std::abs(v - (it == input.end() ? cplx(0) : it->second)));
            }
            for (const auto& [sh, v] : input)
                if (std::get<1>(sh) == f0 && !got.count({std::get<0>(sh), std::get<2>(sh)}))
                    rep.coefficient_error = std::max(rep.coefficient_error, std::abs(v));
        };
        err(rep.a, true);
        err(rep.b, false);
    }
    rep.ok = rep.roundtrip_residual <= 1e-9 && rep.coefficient_error <= 1e-9;
    return rep;
}

struct CircleCheck {
    double q = 0;
    int N = 0;
    double generator_mismatch = 0; // rho_theta o phi_q against the disc point representation
    double telescoping_sum = 0;    // sum_{i<N} (sqrt(lambda_{i+1}) - sqrt(lambda_i))
    double sqrt_lambda_N = 0;
    double shift_expansion_error = 0; // pi_q(x) against S sum_k c_k S^k S*^k
    double norm_x = 0, norm_expected = 0;
    double tail_weight = 0; // 1 - sqrt(lambda_N), the weight of S - pi_q(x) at the top
    bool ok = false;
};

inline CircleCheck classical_circle_check(const TruncatedRepresentation& r, const std::vector<double>& thetas) {
    if (r.kind != RepKind::disc) throw std::invalid_argument("classical circle check needs the disc representation");
    CircleCheck c;
    c.q = r.params.q;
    c.N = r.N;
    for (double th : thetas) {
        RepParams prm = r.params;
        prm.theta = th;
        auto circ = build_representation(RepKind::circle, prm, 1);
        auto pt = build_representation(RepKind::disc_point, prm, 1);
        // phi_q: x -> a, x* -> a*
        for (auto [dn, cn] : {std::pair{"x", "a"}, std::pair{"x*", "a*"}})
            c.generator_mismatch = std::max(c.generator_mismatch, std::abs(circ[cn](0, 0) - pt[dn](0, 0)));
    }
    auto sq = [&](int i) { return std::sqrt(detail::lambda(c.q, i)); };
    for (int i = 0; i < r.N; ++i) c.telescoping_sum += sq(i + 1) - sq(i);
    c.sqrt_lambda_N = sq(r.N);
    c.tail_weight = 1.0 - c.sqrt_lambda_N;

    int N = r.N;
    CMat S = CMat::Zero(N, N);
    for (int i = 0; i + 1 < N; ++i) S(i + 1, i) = 1.0;
    CMat sum = CMat::Zero(N, N), Sk = CMat::Identity(N, N);
    for (int k = 0; k < N; ++k) {
        sum += (sq(k + 1) - sq(k)) * (Sk * Sk.adjoint());
        Sk = Sk * S;
    }
    c.shift_expansion_error = (r["x"] - S * sum).cwiseAbs().maxCoeff();

    Eigen::JacobiSVD<CMat> svd(r["x"]);
    c.norm_x = svd.singularValues()(0);
    c.norm_expected = sq(N - 1);
    c.ok = c.generator_mismatch <= 1e-12 && std::abs(c.telescoping_sum - c.sqrt_lambda_N) <= 1e-12 &&
           c.shift_expansion_error <= 1e-12 && std::abs(c.norm_x - c.norm_expected) <= 1e-12 && c.norm_x <= 1.0;
    return c;
}

} // namespace ncglue
