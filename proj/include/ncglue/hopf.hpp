#pragma once

// U_{q^{1/2}}(sl2) and its module-algebra actions on the disc and sphere
// algebras and their calculi. The action is stored on generators only and
// extended to words through the coproduct.

#include "dga.hpp"

#include <array>
#include <functional>
#include <future>

namespace ncglue {

struct MissingAction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum HopfGen : int { HopfE = 0, HopfF = 1, HopfK = 2, HopfKi = 3 };

struct TensorTerm {
    Scalar c;
    Word left, right; // words in the Hopf generators
};

struct HopfAlgebraSpec {
    AlphabetPtr alphabet; // E, F, K, Ki
    std::vector<std::string> relation_names;
    std::vector<Element<Scalar>> relations; // "= 0"
    std::vector<int> relation_group;        // the displayed line a relation belongs to
    std::array<std::vector<TensorTerm>, 4> coproduct;
    std::array<Scalar, 4> counit;
    std::array<Element<Scalar>, 4> antipode;

    Element<Scalar> gen(int h) const { return Element<Scalar>::word(alphabet, Word{(Letter)h}); }
    Element<Scalar> one() const { return Element<Scalar>::unit(alphabet); }
};

inline const HopfAlgebraSpec& uq_sl2() {
    static const HopfAlgebraSpec H = [] {
        HopfAlgebraSpec h;
        h.alphabet = Alphabet::make({{"E", "E"}, {"F", "F"}, {"K", "K"}, {"Ki", "Ki"}});
        auto E = h.gen(HopfE), F = h.gen(HopfF), K = h.gen(HopfK), Ki = h.gen(HopfKi), one = h.one();
        Scalar q = Scalar::q(), qi = q.inverse();
        // q^{1/2} - q^{-1/2} = s^2 - s^-2
        Scalar den = Scalar::q_pow4(2) - Scalar::q_pow4(-2);
        auto add = [&](std::string n, Element<Scalar> r, int g) {
            h.relation_names.push_back(std::move(n));
            h.relations.push_back(std::move(r));
            h.relation_group.push_back(g);
        };
        add("K Ki = 1", K * Ki - one, 0);
        add("Ki K = 1", Ki * K - one, 0);
        add("K E = q E K", K * E - q * (E * K), 1);
        add("Ki E = q^-1 E Ki", Ki * E - qi * (E * Ki), 1);
        add("K F = q^-1 F K", K * F - qi * (F * K), 2);
        add("Ki F = q F Ki", Ki * F - q * (F * Ki), 2);
        add("EF - FE = (K - Ki)/(q^1/2 - q^-1/2)", E * F - F * E - den.inverse() * (K - Ki), 3);
        auto w = [](std::initializer_list<int> l) {
            Word v;
            for (int x : l) v.push_back((Letter)x);
            return v;
        };
        h.coproduct[HopfE] = {{Scalar(1), w({HopfE}), w({})}, {Scalar(1), w({HopfK}), w({HopfE})}};
        h.coproduct[HopfF] = {{Scalar(1), w({HopfF}), w({HopfKi})}, {Scalar(1), w({}), w({HopfF})}};
        h.coproduct[HopfK] = {{Scalar(1), w({HopfK}), w({HopfK})}};
        h.coproduct[HopfKi] = {{Scalar(1), w({HopfKi}), w({HopfKi})}};
        h.counit = {Scalar(0), Scalar(0), Scalar(1), Scalar(1)};
        h.antipode = {-(Ki * E), -(F * K), Ki, K};
        return h;
    }();
    return H;
}

// Coassociativity and the counit law on generators, as identities between
// tensors of Hopf words (exact, no relations needed).
struct HopfStructureReport {
    bool coassociative = true, counit = true;
    std::vector<std::string> failures;
    bool ok() const { return coassociative && counit; }
};

inline HopfStructureReport hopf_structure_check(const HopfAlgebraSpec& H) {
    HopfStructureReport rep;
    using T2 = std::map<std::pair<Word, Word>, Scalar>;
    using T3 = std::map<std::array<Word, 3>, Scalar>;
    // coproduct of a word: multiplicative extension
    std::function<T2(const Word&)> delta = [&](const Word& u) {
        T2 out;
        if (u.empty()) {
            out[{Word{}, Word{}}] = Scalar(1);
            return out;
        }
        T2 rest = delta(Word(u.begin() + 1, u.end()));
        for (const auto& t : H.coproduct[u[0]])
            for (const auto& [lr, c] : rest) {
                auto& v = out[{concat(t.left, lr.first), concat(t.right, lr.second)}];
                v += t.c * c;
            }
        return out;
    };
    auto clean = [](auto& m) {
        for (auto it = m.begin(); it != m.end();) it = it->second.is_zero() ? m.erase(it) : std::next(it);
    };
    auto eps = [&](const Word& u) {
        Scalar v(1);
        for (Letter l : u) v *= H.counit[l];
        return v;
    };
    const auto& A = *H.alphabet;
    for (int h = 0; h < 4; ++h) {
        T3 lhs, rhs;
        for (const auto& t : H.coproduct[h]) {
            for (const auto& [lr, c] : delta(t.left)) lhs[{lr.first, lr.second, t.right}] += t.c * c;
            for (const auto& [lr, c] : delta(t.right)) rhs[{t.left, lr.first, lr.second}] += t.c * c;
        }
        clean(lhs);
        clean(rhs);
        if (lhs != rhs) {
            rep.coassociative = false;
            rep.failures.push_back("coassociativity at " + A[h].name);
        }
        std::map<Word, Scalar> l1, r1;
        for (const auto& t : H.coproduct[h]) {
            l1[t.right] += eps(t.left) * t.c;
            r1[t.left] += eps(t.right) * t.c;
        }
        clean(l1);
        clean(r1);
        std::map<Word, Scalar> id{{Word{(Letter)h}, Scalar(1)}};
        if (l1 != id || r1 != id) {
            rep.counit = false;
            rep.failures.push_back("counit law at " + A[h].name);
        }
    }
    return rep;
}

// m (S x id) Delta(h), as an element of the free algebra on the Hopf letters.
inline Element<Scalar> antipode_contraction(const HopfAlgebraSpec& H, int h) {
    Element<Scalar> out(H.alphabet);
    for (const auto& t : H.coproduct[h]) {
        Element<Scalar> s = H.one();
        for (auto it = t.left.rbegin(); it != t.left.rend(); ++it) s = s * H.antipode[*it];
        out += (s * Element<Scalar>::word(H.alphabet, t.right)).scaled(t.c);
    }
    return out;
}

// Action on the free algebra over A (base letters, and d-letters when A has
// differentials) determined by the images of the base generators.
template <class K = Scalar>
class ModuleAction {
public:
    ModuleAction() = default;
    // table[g][h] = h . g over A, for every base letter g
    ModuleAction(std::string name, AlphabetPtr A, const std::vector<std::array<Element<Scalar>, 4>>& table,
                 const RationalPoint* pt = nullptr, const HopfAlgebraSpec& H = uq_sl2())
        : name_(std::move(name)), A_(std::move(A)), H_(&H) {
        if (pt) pt_ = *pt, has_pt_ = true;
        if ((int)table.size() != A_->base_size()) throw MissingAction("action " + name_ + " needs every generator");
        for (const auto& row : table) {
            std::array<Element<K>, 4> r;
            for (int h = 0; h < 4; ++h) {
                if (!row[h].alphabet()) throw MissingAction("action " + name_ + " has an empty table entry");
                r[h] = specialize<K>(rebase(row[h], A_), point());
            }
            table_.push_back(std::move(r));
        }
        for (int h = 0; h < 4; ++h) counit_[h] = Field<K>::from_scalar(H.counit[h], point());
        for (int h = 0; h < 4; ++h)
            for (const auto& t : H.coproduct[h]) coproduct_[h].push_back({Field<K>::from_scalar(t.c, point()), t.left, t.right});
    }

    const std::string& name() const { return name_; }
    const AlphabetPtr& alphabet() const { return A_; }
    const HopfAlgebraSpec& hopf() const { return *H_; }
    const RationalPoint* point() const { return has_pt_ ? &pt_ : nullptr; }
    K scalar(const Scalar& c) const { return Field<K>::from_scalar(c, point()); }

    // h . l for a single Hopf letter and a single algebra letter; h . dg = d(h . g).
    Element<K> act_letter(int h, Letter l) const {
        const auto& g = (*A_)[l];
        if (g.base < 0) return table_.at(l)[h];
        return free_d(table_.at(g.base)[h]);
    }

    // u . w for a Hopf word u (rightmost letter acts first) and an algebra word w.
    Element<K> act_word(const Word& u, const Word& w) const {
        if (u.empty()) return Element<K>::word(A_, w);
        std::lock_guard<std::recursive_mutex> lk(*mu_);
        return act_word_locked(u, w);
    }
    Element<K> act(const Word& u, const Element<K>& a) const {
        Element<K> out(A_);
        const auto& terms = a.terms();
        for (const auto& [w, c] : terms) out += act_word(u, w).scaled(c);
        return out;
    }
    Element<K> act(int h, const Element<K>& a) const { return act(Word{(Letter)h}, a); }
    Element<K> act(const Element<Scalar>& u, const Element<K>& a) const {
        Element<K> out(A_);
        const auto& terms = u.terms();
        for (const auto& [w, c] : terms) out += act(w, a).scaled(scalar(c));
        return out;
    }

private:
    struct KTerm {
        K c;
        Word left, right;
    };
    std::string name_;
    AlphabetPtr A_;
    const HopfAlgebraSpec* H_ = nullptr;
    RationalPoint pt_;
    bool has_pt_ = false;
    std::vector<std::array<Element<K>, 4>> table_;
    std::array<K, 4> counit_;
    std::array<std::vector<KTerm>, 4> coproduct_;
    std::shared_ptr<std::recursive_mutex> mu_ = std::make_shared<std::recursive_mutex>();
    mutable std::map<std::pair<Word, Word>, Element<K>> cache_;

    Element<K> act_word_locked(const Word& u, const Word& w) const {
        if (u.empty()) return Element<K>::word(A_, w);
        auto key = std::pair{u, w};
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Element<K> out(A_);
        if (u.size() > 1) {
            // (h u') . w = h . (u' . w)
            Word head{u[0]}, tail(u.begin() + 1, u.end());
            Element<K> inner = act_word_locked(tail, w);
            const auto& terms = inner.terms();
            for (const auto& [v, c] : terms) out += act_word_locked(head, v).scaled(c);
        } else if (w.empty()) {
            out = Element<K>(A_, counit_[u[0]]);
        } else {
            Word rest(w.begin() + 1, w.end());
            for (const auto& t : coproduct_[u[0]]) {
                Element<K> a = act_word_on_letter(t.left, w[0]);
                if (a.is_zero()) continue;
                Element<K> b = act_word_locked(t.right, rest);
                out += (a * b).scaled(t.c);
            }
        }
        return cache_.emplace(key, std::move(out)).first->second;
    }
    Element<K> act_word_on_letter(const Word& u, Letter l) const {
        if (u.empty()) return Element<K>::word(A_, Word{l});
        if (u.size() == 1) return act_letter(u[0], l);
        return act_word_locked(u, Word{l});
    }
};

namespace detail {

// Action table of the disc on generators named x, x* (s = q^{1/4}).
inline std::array<std::array<Element<Scalar>, 4>, 2> disc_table(const AlphabetPtr& A, const std::string& x,
                                                                 const std::string& xs) {
    auto X = g(A, x), Xs = g(A, xs), one = c(A, Scalar(1));
    Scalar q = Scalar::q();
    std::array<Element<Scalar>, 4> tx, txs;
    tx[HopfK] = q * X;
    tx[HopfKi] = q.inverse() * X;
    tx[HopfF] = Scalar::q_pow4(1) * one;
    tx[HopfE] = -Scalar::q_pow4(1) * (X * X);
    txs[HopfK] = q.inverse() * Xs;
    txs[HopfKi] = q * Xs;
    txs[HopfF] = -Scalar::q_pow4(5) * (Xs * Xs);
    txs[HopfE] = Scalar::q_pow4(-3) * one;
    return {tx, txs};
}

} // namespace detail

// The action on a disc algebra (or its free differential algebra) with
// generators x, x*.
template <class K = Scalar>
ModuleAction<K> disc_action(const AlphabetPtr& A, const std::string& x = "x", const RationalPoint* pt = nullptr) {
    std::vector<std::array<Element<Scalar>, 4>> table(A->base_size());
    auto t = detail::disc_table(A, x, x + "*");
    table.at(A->at(x)) = t[0];
    table.at(A->at(x + "*")) = t[1];
    return ModuleAction<K>("disc_" + x, A, table, pt);
}

// The action on the sphere; only defined for p = q.
template <class K = Scalar>
ModuleAction<K> sphere_action(const AlphabetPtr& A, const Scalar& p, const Scalar& q, const RationalPoint* pt = nullptr) {
    if (p != q) throw std::invalid_argument("the sphere action needs p = q");
    if (q != Scalar::q()) throw std::invalid_argument("the sphere action is written for the formal parameter q");
    std::vector<std::array<Element<Scalar>, 4>> table(A->base_size());
    auto t = detail::disc_table(A, "f1", "fm1");
    table.at(A->at("f1")) = t[0];
    table.at(A->at("fm1")) = t[1];
    auto f1 = detail::g(A, "f1"), f0 = detail::g(A, "f0"), fm = detail::g(A, "fm1");
    std::array<Element<Scalar>, 4> t0;
    t0[HopfK] = f0;
    t0[HopfKi] = f0;
    t0[HopfF] = Scalar::q_pow4(5) * (fm - f0 * fm);
    t0[HopfE] = Scalar::q_pow4(1) * (f1 - f1 * f0);
    table.at(A->at("f0")) = t0;
    return ModuleAction<K>("sphere", A, table, pt);
}

// ---------------------------------------------------------------------------
// Module axioms: every Hopf relation acts as zero on every basis word, the
// unit and counit laws hold, and m(S x id)Delta(h) acts as eps(h).

struct ModuleAxiomReport {
    std::string algebra;
    int D = 0;
    std::vector<std::string> relations; // Hopf relations, then the unit and antipode rows
    std::vector<std::string> words;
    std::vector<std::vector<char>> pass; // relations x words
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    size_t checks() const { return relations.size() * words.size(); }
};

template <class K>
ModuleAxiomReport module_axiom_check(const ModuleAction<K>& act, const std::vector<Word>& words,
                                     const std::function<bool(const Element<K>&)>& is_zero, std::string algebra,
                                     int D) {
    const auto& H = act.hopf();
    ModuleAxiomReport rep;
    rep.algebra = std::move(algebra);
    rep.D = D;
    std::vector<Element<Scalar>> rows = H.relations;
    rep.relations = H.relation_names;
    // 1 . a = a
    rows.push_back(H.one());
    rep.relations.push_back("1 . a = a");
    for (int h = 0; h < 4; ++h) {
        rows.push_back(antipode_contraction(H, h) - H.counit[h] * H.one());
        rep.relations.push_back("m(S x id)Delta(" + (*H.alphabet)[h].name + ") = eps");
    }
    const auto& A = *act.alphabet();
    for (const auto& w : words) rep.words.push_back(w.empty() ? "1" : word_string(A, w));
    rep.pass.assign(rows.size(), std::vector<char>(words.size(), 0));
    std::vector<std::future<void>> jobs;
    unsigned nt = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    for (unsigned t = 0; t < nt; ++t)
        jobs.push_back(std::async(std::launch::async, [&, t] {
            for (size_t j = t; j < words.size(); j += nt) {
                auto a = Element<K>::word(act.alphabet(), words[j]);
                for (size_t i = 0; i < rows.size(); ++i) {
                    Element<K> v = act.act(rows[i], a);
                    if (i == H.relations.size()) v -= a;
                    rep.pass[i][j] = is_zero(v);
                }
            }
        }));
    for (auto& j : jobs) j.get();
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < words.size(); ++j)
            if (!rep.pass[i][j]) rep.failures.push_back(rep.relations[i] + " on " + rep.words[j]);
    // h . 1 = eps(h) 1
    for (int h = 0; h < 4; ++h) {
        auto v = act.act(h, Element<K>::unit(act.alphabet()));
        if (v != Element<K>(act.alphabet(), act.scalar(H.counit[h])))
            rep.failures.push_back((*H.alphabet)[h].name + " . 1 != eps");
    }
    return rep;
}

template <class K>
ModuleAxiomReport module_axiom_check(const ModuleAction<K>& act, const RewriteSystem<K>& rs, int D,
                                     bool base_only = true) {
    return module_axiom_check<K>(
        act, enumerate_filtered_basis(rs, D, base_only),
        [&rs](const Element<K>& e) { return rs.normal_form(e).is_zero(); }, act.name(), D);
}

// ---------------------------------------------------------------------------
// Covariance of an ideal: h . g lies in the ideal for every generator g and
// every h in {E, F, K, Ki}.

enum class Membership { member, inconclusive, not_member };

inline std::string to_string(Membership m) {
    switch (m) {
    case Membership::member: return "member";
    case Membership::inconclusive: return "inconclusive";
    case Membership::not_member: return "not-member";
    }
    return "?";
}

struct CovarianceEntry {
    std::string h;
    size_t generator = 0;
    Membership verdict = Membership::inconclusive;
    std::string image;
};

struct IntertwiningEntry {
    std::string map, h, letter;
    bool ok = false;
};

struct CovarianceReport {
    std::string ideal;
    int D = 0;
    std::vector<CovarianceEntry> entries;
    std::vector<IntertwiningEntry> intertwining;
    bool all_members() const {
        for (const auto& e : entries)
            if (e.verdict != Membership::member) return false;
        return true;
    }
    bool any_not_member() const {
        for (const auto& e : entries)
            if (e.verdict == Membership::not_member) return true;
        return false;
    }
    bool intertwines() const {
        for (const auto& e : intertwining)
            if (!e.ok) return false;
        return true;
    }
    bool ok() const { return all_members() && intertwines(); }
};

template <class K>
CovarianceReport covariance_check(const ModuleAction<K>& act, const std::vector<Element<K>>& gens,
                                  const std::function<Membership(const Element<K>&)>& member, std::string ideal, int D) {
    CovarianceReport rep;
    rep.ideal = std::move(ideal);
    rep.D = D;
    const auto& H = act.hopf();
    for (size_t i = 0; i < gens.size(); ++i)
        for (int h = 0; h < 4; ++h) {
            auto v = act.act(h, rebase(gens[i], act.alphabet()));
            CovarianceEntry e;
            e.h = (*H.alphabet)[h].name;
            e.generator = i;
            e.verdict = member(v);
            rep.entries.push_back(std::move(e));
        }
    return rep;
}

// pi(h . l) = h . pi(l) on every letter of the source (d-letters included).
template <class K>
std::vector<IntertwiningEntry> intertwining_check(const CalculusMorphism<K>& pi, const ModuleAction<K>& src,
                                                  const ModuleAction<K>& tgt) {
    std::vector<IntertwiningEntry> out;
    const auto& A = *pi.source_alphabet();
    for (int h = 0; h < 4; ++h)
        for (int l = 0; l < A.size(); ++l) {
            auto lhs = pi.apply(rebase(src.act_letter(h, (Letter)l), pi.source_alphabet()));
            auto img = rebase(pi.apply_word(Word{(Letter)l}), tgt.alphabet());
            auto rhs = pi.target().normal_form(rebase(tgt.act(h, img), pi.target().alphabet()));
            out.push_back({pi.name(), (*src.hopf().alphabet)[h].name, A[l].name, lhs == rhs});
        }
    return out;
}

// Membership through a confluent rewriting system whose relations contain the ideal.
template <class K>
std::function<Membership(const Element<K>&)> normal_form_membership(const RewriteSystem<K>& rs) {
    return [&rs](const Element<K>& e) {
        return rs.normal_form(rebase(e, rs.alphabet())).is_zero() ? Membership::member : Membership::not_member;
    };
}

// Membership in the truncated span of the two-sided ideal of gens inside rs.
template <class K>
std::function<Membership(const Element<K>&)> span_membership(const RewriteSystem<K>& rs,
                                                              const std::vector<Element<K>>& gens, int D,
                                                              int slack = 2) {
    auto span = std::make_shared<FilteredSubspace<K>>(ideal_truncation_span(rs, gens, D, slack));
    return [&rs, span](const Element<K>& e) {
        auto n = rs.normal_form(rebase(e, rs.alphabet()));
        if (n.is_zero() || span->contains(n)) return Membership::member;
        return Membership::inconclusive;
    };
}

// Membership in the differential ideal span of gens inside universal forms;
// `exact_outside` (optional) certifies non-membership when it rejects.
template <class K>
std::function<Membership(const Element<K>&)>
form_ideal_membership(std::shared_ptr<const UniversalForms<K>> om, const std::vector<Element<K>>& gens, int D,
                      int maxdeg, std::function<bool(const Element<K>&)> exact_outside = {}, int slack = 2) {
    std::vector<Form<K>> fg;
    for (const auto& g : gens) fg.push_back(om->from_free(rebase(g, om->differential_alphabet())));
    auto span = std::make_shared<GradedFormSpace<K>>(differential_ideal_span(*om, fg, D, maxdeg, slack));
    return [om, span, exact_outside, D](const Element<K>& e) {
        auto f = om->from_free(rebase(e, om->differential_alphabet()));
        if (f.empty()) return Membership::member;
        if (max_filtered_degree(f) <= D && span->contains(f)) return Membership::member;
        if (exact_outside && exact_outside(e)) return Membership::not_member;
        return Membership::inconclusive;
    };
}

} // namespace ncglue
