#pragma once

// Gluings (fibered products) along surjections: finite-dimensional data with
// exact linear algebra, and the sphere glued from two discs over the circle.

#include "presets.hpp"
#include "quotient.hpp"

namespace ncglue {

// Linear map between coordinate spaces over Q, given on basis vectors.
struct LinearMap {
    size_t src_dim = 0;
    std::vector<QVec> img;

    static LinearMap identity(size_t n) {
        LinearMap m;
        m.src_dim = n;
        for (size_t i = 0; i < n; ++i) m.img.push_back(QVec{{(int)i, mpq_class(1)}});
        return m;
    }
    QVec apply(const QVec& v) const {
        QVec out;
        for (const auto& [i, c] : v) axpy(out, c, img[i]);
        return out;
    }
    QSpan kernel() const {
        QSpan k;
        for (auto& combo : kernel_combos(img)) {
            QVec v;
            for (const auto& [i, c] : combo) v.emplace(i, c);
            k.insert(v);
        }
        return k;
    }
    QSpan image(const QSpan& s) const {
        QSpan out;
        for (const auto& v : s.rows()) out.insert(apply(v));
        return out;
    }
    QSpan image() const { return span_of(img); }
    LinearMap then(const LinearMap& g) const {
        LinearMap m;
        m.src_dim = src_dim;
        for (const auto& v : img) m.img.push_back(g.apply(v));
        return m;
    }
};

// Some x with L x - t in W, if one exists.
inline std::optional<QVec> preimage_modulo(const LinearMap& L, const QVec& t, const QSpan& W = QSpan()) {
    Eliminator<int, mpq_class> el;
    int n = (int)L.src_dim;
    for (int i = 0; i < n; ++i) el.add(L.img[i], i);
    for (size_t j = 0; j < W.rows().size(); ++j) el.add(W.rows()[j], n + (int)j);
    auto combo = el.express(t);
    if (!combo) return std::nullopt;
    QVec x;
    for (const auto& [id, c] : *combo)
        if (id < n) x.emplace(id, c);
    return x;
}

// A/J with coordinates on the non-pivot basis indices of J.
struct QuotientAlgebra {
    FiniteDimAlgebra alg;
    QSpan J;
    std::vector<int> free; // quotient index -> ambient index
    std::map<int, int> index;

    QuotientAlgebra() = default;
    QuotientAlgebra(const FiniteDimAlgebra& A, QSpan ideal) : J(std::move(ideal)) {
        std::vector<std::string> labels;
        for (size_t b = 0; b < A.dim(); ++b)
            if (!J.is_pivot((int)b)) {
                index[(int)b] = (int)free.size();
                free.push_back((int)b);
                labels.push_back(A.label((int)b));
            }
        size_t n = free.size();
        std::vector<std::vector<QVec>> t(n, std::vector<QVec>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) t[i][j] = project(A.mul(A.basis_vec(free[i]), A.basis_vec(free[j])));
        int unit = -1;
        if (A.unit() >= 0 && !J.is_pivot(A.unit())) unit = index.at(A.unit());
        alg = FiniteDimAlgebra(labels, t, unit);
    }
    QVec project(const QVec& a) const {
        QVec out;
        for (const auto& [k, c] : J.reduce(a)) out.emplace(index.at(k), c);
        return out;
    }
    QVec lift(const QVec& v) const {
        QVec out;
        for (const auto& [k, c] : v) out.emplace(free[k], c);
        return out;
    }
    // canonical map onto a further quotient
    LinearMap map_to(const QuotientAlgebra& o) const {
        LinearMap m;
        m.src_dim = free.size();
        for (size_t i = 0; i < free.size(); ++i) m.img.push_back(o.project(QVec{{free[i], mpq_class(1)}}));
        return m;
    }
};

// Finite-dimensional gluing datum: algebras B_i, interfaces B_ij (i < j) and
// surjections pi^i_j : B_i -> B_ij.
struct FdGluingDatum {
    std::vector<FiniteDimAlgebra> B;
    std::map<std::pair<int, int>, FiniteDimAlgebra> Bij;
    std::map<std::pair<int, int>, LinearMap> pi; // (i, j) -> pi^i_j, i != j

    size_t size() const { return B.size(); }
    const FiniteDimAlgebra& interface(int i, int j) const { return Bij.at({std::min(i, j), std::max(i, j)}); }
    LinearMap map(int i, int j) const { return i == j ? LinearMap::identity(B[i].dim()) : pi.at({i, j}); }
};

using Tuple = std::vector<QVec>;

// First offending pair (i, j), or nothing when the tuple is compatible.
inline std::optional<std::pair<int, int>> glued_tuple_membership(const FdGluingDatum& d, const Tuple& t) {
    for (int i = 0; i < (int)d.size(); ++i)
        for (int j = i + 1; j < (int)d.size(); ++j)
            if (d.map(i, j).apply(t[i]) != d.map(j, i).apply(t[j])) return std::pair{i, j};
    return std::nullopt;
}

// Covering-completion datum of a covering: B_i = A/J_i, B_ij = A/(J_i + J_j).
struct CoveringDatum {
    FdGluingDatum datum;
    std::vector<QuotientAlgebra> quotients;
};

inline CoveringDatum covering_datum(const FiniteDimAlgebra& A, const std::vector<QSpan>& J) {
    CoveringDatum c;
    int n = (int)J.size();
    for (const auto& j : J) {
        c.quotients.emplace_back(A, j);
        c.datum.B.push_back(c.quotients.back().alg);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            QuotientAlgebra qij(A, subspace_sum(J[i], J[j]));
            c.datum.Bij[{i, j}] = qij.alg;
            c.datum.pi[{i, j}] = c.quotients[i].map_to(qij);
            c.datum.pi[{j, i}] = c.quotients[j].map_to(qij);
        }
    return c;
}

// The gluing as an algebra: compatible tuples with componentwise product.
struct GluedAlgebra {
    FiniteDimAlgebra alg;
    std::vector<Tuple> basis;
    std::vector<LinearMap> p; // projections onto the B_i

    Tuple tuple_of(const QVec& v) const {
        Tuple t(basis.empty() ? 0 : basis[0].size());
        for (const auto& [b, c] : v)
            for (size_t i = 0; i < t.size(); ++i) axpy(t[i], c, basis[b][i]);
        return t;
    }
};

namespace detail {
inline SVec<std::pair<int, int>, mpq_class> flatten(const Tuple& t) {
    SVec<std::pair<int, int>, mpq_class> f;
    for (size_t i = 0; i < t.size(); ++i)
        for (const auto& [k, c] : t[i]) f.emplace(std::pair<int, int>{(int)i, k}, c);
    return f;
}
} // namespace detail

inline GluedAlgebra build_gluing(const FdGluingDatum& d) {
    using Key = std::pair<int, int>; // (pair index, coordinate)
    int n = (int)d.size();
    std::vector<std::pair<int, int>> vars; // (component, basis index)
    for (int i = 0; i < n; ++i)
        for (size_t b = 0; b < d.B[i].dim(); ++b) vars.push_back({i, (int)b});
    Eliminator<Key, mpq_class> el;
    GluedAlgebra g;
    for (size_t v = 0; v < vars.size(); ++v) {
        auto [i, b] = vars[v];
        SVec<Key, mpq_class> img;
        int pair = 0;
        for (int a = 0; a < n; ++a)
            for (int c = a + 1; c < n; ++c, ++pair) {
                if (a != i && c != i) continue;
                mpq_class sign = a == i ? 1 : -1;
                LinearMap m = d.map(i, a == i ? c : a);
                for (const auto& [k, x] : m.img[b]) img.emplace(Key{pair, k}, mpq_class(sign * x));
            }
        if (auto combo = el.add(img, (int)v)) {
            Tuple t(n);
            for (const auto& [id, c] : *combo) t[vars[id].first].emplace(vars[id].second, c);
            g.basis.push_back(t);
        }
    }
    size_t m = g.basis.size();
    Eliminator<std::pair<int, int>, mpq_class> coords;
    for (size_t b = 0; b < m; ++b) coords.add(detail::flatten(g.basis[b]), (int)b);
    auto express = [&](const Tuple& t) {
        auto combo = coords.express(detail::flatten(t));
        if (!combo) throw std::logic_error("gluing is not closed under products");
        QVec v;
        for (const auto& [id, c] : *combo) v.emplace(id, c);
        return v;
    };
    std::vector<std::vector<QVec>> table(m, std::vector<QVec>(m));
    for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b) {
            Tuple t(n);
            for (int i = 0; i < n; ++i) t[i] = d.B[i].mul(g.basis[a][i], g.basis[b][i]);
            table[a][b] = express(t);
        }
    std::vector<std::string> labels;
    for (size_t b = 0; b < m; ++b) labels.push_back("g" + std::to_string(b + 1));
    g.alg = FiniteDimAlgebra(labels, table);
    for (int i = 0; i < n; ++i) {
        LinearMap p;
        p.src_dim = m;
        for (size_t b = 0; b < m; ++b) p.img.push_back(g.basis[b][i]);
        g.p.push_back(p);
    }
    return g;
}

struct CanonicalCoveringReport {
    bool is_covering = false;
    bool complete = false;
    bool kernel_images_ok = false; // p_j(ker p_i) inside ker pi^j_i
    size_t dim_gluing = 0;
    CompletionReport completion;
};

inline CanonicalCoveringReport canonical_covering_of_gluing(const FdGluingDatum& d) {
    CanonicalCoveringReport r;
    auto g = build_gluing(d);
    r.dim_gluing = g.alg.dim();
    std::vector<QSpan> ker;
    for (const auto& p : g.p) ker.push_back(p.kernel());
    std::vector<const QSpan*> ptrs;
    for (const auto& k : ker) ptrs.push_back(&k);
    r.is_covering = span_intersection_all(ptrs).dim() == 0;
    if (r.is_covering) {
        r.completion = covering_completion_check(g.alg, ker);
        r.complete = r.completion.complete;
    }
    r.kernel_images_ok = true;
    int n = (int)d.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            auto kj = d.map(j, i).kernel();
            auto im = g.p[j].image(ker[i]);
            for (const auto& v : im.rows()) r.kernel_images_ok = r.kernel_images_ok && kj.contains(v);
        }
    return r;
}

struct LiftConditions {
    bool pishit1 = true, pishit = true;
    std::string failing; // first failing identity
};

// Conditions of the surjectivity proposition, as exact identities.
inline LiftConditions check_lift_conditions(const FdGluingDatum& d) {
    LiftConditions c;
    int n = (int)d.size();
    auto K = [&](int i, int j) { return d.map(i, j).kernel(); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                auto a = d.map(i, j).image(K(i, k));
                auto b = d.map(j, i).image(K(j, k));
                if (!subspace_eq(a, b) && c.pishit1) {
                    c.pishit1 = false;
                    c.failing = "pi^" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "(ker pi^" +
                                std::to_string(i + 1) + "_" + std::to_string(k + 1) + ") differs";
                }
            }
    if (!c.pishit1) {
        c.pishit = false;
        return c;
    }
    // phi^k_ij : B_j/(ker pi^j_i + ker pi^j_k) -> B_i/(ker pi^i_j + ker pi^i_k)
    auto phi = [&](int k, int i, int j, const QVec& f) -> std::optional<QVec> {
        QVec t = d.map(j, i).apply(f);
        return preimage_modulo(d.map(i, j), t, d.map(i, j).image(K(i, k)));
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                QSpan target = subspace_sum(K(i, j), K(i, k));
                for (size_t b = 0; b < d.B[k].dim(); ++b) {
                    QVec e = d.B[k].basis_vec((int)b);
                    auto u = phi(j, i, k, e);
                    auto w = phi(i, j, k, e);
                    std::optional<QVec> v = w ? phi(k, i, j, *w) : std::nullopt;
                    bool ok = u && v;
                    if (ok) {
                        QVec diff = *u;
                        axpy(diff, mpq_class(-1), *v);
                        ok = target.contains(diff);
                    }
                    if (!ok) {
                        c.pishit = false;
                        c.failing = "phi^" + std::to_string(j + 1) + "_" + std::to_string(i + 1) + std::to_string(k + 1) +
                                    " differs from the composite on basis vector " + std::to_string(b + 1) + " of B_" +
                                    std::to_string(k + 1);
                        return c;
                    }
                }
            }
    return c;
}

struct ConditionsViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LiftResult {
    std::optional<Tuple> tuple;
    LiftConditions conditions;
    std::string failed_stage; // set when a correction step has no solution
};

// The inductive correction from the surjectivity proof, starting from
// component i. The preimage r~ is the first echelon solution.
inline LiftResult lift_local_section(const FdGluingDatum& d, int i, const QVec& f, bool require_conditions = true) {
    LiftResult res;
    res.conditions = check_lift_conditions(d);
    if (require_conditions && !(res.conditions.pishit1 && res.conditions.pishit))
        throw ConditionsViolated(res.conditions.failing);
    int n = (int)d.size();
    std::vector<int> order{i};
    for (int k = 0; k < n; ++k)
        if (k != i) order.push_back(k);
    Tuple t(n);
    t[i] = f;
    for (int s = 1; s < n; ++s) {
        int k = order[s];
        auto first = preimage_modulo(d.map(k, order[0]), d.map(order[0], k).apply(f));
        if (!first) {
            res.failed_stage = "no preimage in B_" + std::to_string(k + 1) + " under pi^" + std::to_string(k + 1) + "_" +
                               std::to_string(order[0] + 1);
            return res;
        }
        QVec fk = *first;
        for (int a = 1; a < s; ++a) {
            int ia = order[a];
            QVec r = d.map(k, ia).apply(fk);
            axpy(r, mpq_class(-1), d.map(ia, k).apply(t[ia]));
            // r~ in the meet of ker pi^k_j over earlier j, mapping to r
            std::vector<QSpan> ks;
            for (int b = 0; b < a; ++b) ks.push_back(d.map(k, order[b]).kernel());
            std::vector<const QSpan*> ptrs;
            for (const auto& x : ks) ptrs.push_back(&x);
            QSpan W = span_intersection_all(ptrs);
            LinearMap L;
            L.src_dim = W.dim();
            for (const auto& w : W.rows()) L.img.push_back(d.map(k, ia).apply(w));
            auto sol = preimage_modulo(L, r);
            if (!sol) {
                res.failed_stage = "correction of component " + std::to_string(k + 1) + " against component " +
                                   std::to_string(ia + 1);
                return res;
            }
            QVec rt;
            for (const auto& [idx, c] : *sol) axpy(rt, c, W.rows()[idx]);
            axpy(fk, mpq_class(-1), rt);
        }
        t[k] = fk;
    }
    if (glued_tuple_membership(d, t)) throw std::logic_error("lift produced an incompatible tuple");
    res.tuple = t;
    return res;
}

struct GluedMorphismReport {
    bool ok = true;
    std::string witness;
};

// Lemma check: phi_ij o eta^i_j = pi^i_j o phi_i on basis vectors, then the
// images of the source gluing basis are compatible in the target.
inline GluedMorphismReport glued_morphism_check(const FdGluingDatum& src, const FdGluingDatum& tgt,
                                                const std::vector<LinearMap>& phi,
                                                const std::map<std::pair<int, int>, LinearMap>& phi_ij) {
    GluedMorphismReport r;
    int n = (int)src.size();
    for (int i = 0; i < n && r.ok; ++i)
        for (int j = 0; j < n && r.ok; ++j) {
            if (i == j) continue;
            const auto& pij = phi_ij.at({std::min(i, j), std::max(i, j)});
            for (size_t b = 0; b < src.B[i].dim(); ++b) {
                QVec e = src.B[i].basis_vec((int)b);
                if (pij.apply(src.map(i, j).apply(e)) != tgt.map(i, j).apply(phi[i].apply(e))) {
                    r.ok = false;
                    r.witness = "basis vector " + src.B[i].label((int)b) + " of component " + std::to_string(i + 1) +
                                " at interface (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                    break;
                }
            }
        }
    if (!r.ok) return r;
    auto g = build_gluing(src);
    for (const auto& t : g.basis) {
        Tuple img(n);
        for (int i = 0; i < n; ++i) img[i] = phi[i].apply(t[i]);
        if (auto bad = glued_tuple_membership(tgt, img)) {
            r.ok = false;
            r.witness = "image tuple incompatible at (" + std::to_string(bad->first + 1) + "," +
                        std::to_string(bad->second + 1) + ")";
            return r;
        }
    }
    return r;
}

// The maps phi_i : B/ker p_i -> B_i and phi_ij of the completeness proof for
// a gluing B, as a glued morphism from the completion datum of (ker p_i).
struct CompletionMorphism {
    CoveringDatum source;
    std::vector<LinearMap> phi;
    std::map<std::pair<int, int>, LinearMap> phi_ij;
};

inline CompletionMorphism completion_morphism(const FdGluingDatum& d, const GluedAlgebra& g) {
    CompletionMorphism m;
    int n = (int)d.size();
    std::vector<QSpan> ker;
    for (const auto& p : g.p) ker.push_back(p.kernel());
    m.source = covering_datum(g.alg, ker);
    for (int i = 0; i < n; ++i) {
        const auto& q = m.source.quotients[i];
        LinearMap L;
        L.src_dim = q.free.size();
        for (int b : q.free) L.img.push_back(g.p[i].img[b]);
        m.phi.push_back(L);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            QuotientAlgebra qij(g.alg, subspace_sum(ker[i], ker[j]));
            LinearMap L;
            L.src_dim = qij.free.size();
            for (int b : qij.free) L.img.push_back(d.map(i, j).apply(g.p[i].img[b]));
            m.phi_ij[{i, j}] = L;
        }
    return m;
}

// ---------------------------------------------------------------------------
// Gluings of presented algebras, handled through truncations.

struct PresentedGluingDatum {
    using RS = RewriteSystem<Scalar>;
    std::vector<std::shared_ptr<const RS>> B;
    std::map<std::pair<int, int>, AlgebraMorphism<Scalar>> pi; // (i, j) -> pi^i_j

    std::optional<std::pair<int, int>> membership(const std::vector<Element<Scalar>>& t) const {
        for (int i = 0; i < (int)B.size(); ++i)
            for (int j = i + 1; j < (int)B.size(); ++j)
                if (pi.at({i, j}).apply(t[i]) != pi.at({j, i}).apply(t[j])) return std::pair{i, j};
        return std::nullopt;
    }
};

inline std::optional<std::pair<int, int>> glued_tuple_membership(const PresentedGluingDatum& d,
                                                                 const std::vector<Element<Scalar>>& t) {
    return d.membership(t);
}

struct SurjectivityReport {
    size_t glued_dim = 0;     // compatible pairs of disc degree <= D
    size_t image_dim = 0;     // span of images of sphere words of degree <= D
    bool contained = false;   // glued slice inside the image
};

struct SphereGluing {
    using RS = RewriteSystem<Scalar>;
    Scalar p, q;
    std::shared_ptr<const RS> sphere, disc_p, disc_q, circle;
    AlgebraMorphism<Scalar> pi1, pi2, phi_p, phi_q;
    PresentedGluingDatum datum;
    // images of f0, f1, fm1 as glued tuples
    std::vector<std::vector<Element<Scalar>>> f_tilde;

    std::vector<Element<Scalar>> image(const Element<Scalar>& e) const { return {pi1.apply(e), pi2.apply(e)}; }

    FilteredSubspace<Scalar> kernel(int D) const { return morphism_kernel_intersection<Scalar>({&pi1, &pi2}, D); }

    SurjectivityReport surjectivity(int D) const {
        using Key = std::pair<int, Word>;
        SurjectivityReport r;
        auto bp = enumerate_filtered_basis(*disc_p, D), bq = enumerate_filtered_basis(*disc_q, D);
        Eliminator<Word, Scalar> el;
        std::vector<SVec<Key, Scalar>> glued;
        int np = (int)bp.size();
        for (int i = 0; i < np + (int)bq.size(); ++i) {
            bool left = i < np;
            const Word& w = left ? bp[i] : bq[i - np];
            auto img = left ? phi_p.apply_word(w) : -phi_q.apply_word(w);
            SVec<Word, Scalar> v(img.terms().begin(), img.terms().end());
            if (auto combo = el.add(v, i)) {
                SVec<Key, Scalar> t;
                for (const auto& [id, c] : *combo) t.emplace(Key{id < np ? 0 : 1, id < np ? bp[id] : bq[id - np]}, c);
                glued.push_back(t);
            }
        }
        r.glued_dim = glued.size();
        SparseSpan<Key, Scalar> imgs;
        for (const auto& w : enumerate_filtered_basis(*sphere, D)) {
            SVec<Key, Scalar> t;
            auto a = pi1.apply_word(w), b = pi2.apply_word(w);
            for (const auto& [u, c] : a.terms()) t.emplace(Key{0, u}, c);
            for (const auto& [u, c] : b.terms()) t.emplace(Key{1, u}, c);
            imgs.insert(t);
        }
        r.image_dim = imgs.dim();
        r.contained = true;
        for (const auto& t : glued) r.contained = r.contained && imgs.contains(t);
        return r;
    }
};

inline SphereGluing build_sphere_gluing(const Scalar& p, const Scalar& q) {
    using E = Element<Scalar>;
    using RS = RewriteSystem<Scalar>;
    SphereGluing g;
    g.p = p;
    g.q = q;
    g.sphere = std::make_shared<const RS>(orient_presentation(sphere_presentation(p, q)));
    g.disc_p = std::make_shared<const RS>(orient_presentation(disc_presentation(p, "x")));
    g.disc_q = std::make_shared<const RS>(orient_presentation(disc_presentation(q, "y")));
    g.circle = std::make_shared<const RS>(orient_presentation(circle_presentation("a")));
    auto A1 = g.disc_p->alphabet(), A2 = g.disc_q->alphabet(), C = g.circle->alphabet();
    auto x = E::gen(A1, "x"), xs = E::gen(A1, "x*"), y = E::gen(A2, "y"), ys = E::gen(A2, "y*");
    auto a = E::gen(C, "a"), as = E::gen(C, "a*");
    // sphere letters are f1, f0, fm1
    g.pi1 = AlgebraMorphism<Scalar>("pi1", g.sphere, g.disc_p, {x, x * xs, xs});
    g.pi2 = AlgebraMorphism<Scalar>("pi2", g.sphere, g.disc_q, {y, E::unit(A2), ys});
    g.phi_p = AlgebraMorphism<Scalar>("phi_p", g.disc_p, g.circle, {a, as});
    g.phi_q = AlgebraMorphism<Scalar>("phi_q", g.disc_q, g.circle, {a, as});
    g.datum.B = {g.disc_p, g.disc_q};
    g.datum.pi.emplace(std::pair{0, 1}, g.phi_p);
    g.datum.pi.emplace(std::pair{1, 0}, g.phi_q);
    g.f_tilde = {{x * xs, E::unit(A2)}, {x, y}, {xs, ys}};
    return g;
}

} // namespace ncglue
