#pragma once

// Differential calculi over presented algebras: the free Leibniz
// differential, presented calculi, truncated universal forms, calculus
// morphisms, adapted kernels, differential ideal spans, interface ideals
// and the left-module projections P1, P2 for the disc calculus.

#include "presets.hpp"
#include "quotient.hpp"

#include <deque>
#include <type_traits>

namespace ncglue {

struct NotDifferentiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FormDegreeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline AlphabetPtr differential_alphabet(const AlphabetPtr& A) { return Alphabet::make(A->base_pairs(), true); }
inline AlphabetPtr base_alphabet(const AlphabetPtr& A) { return Alphabet::make(A->base_pairs(), false); }

// Copies terms to another alphabet with the same letter indices.
template <class K>
Element<K> rebase(const Element<K>& e, const AlphabetPtr& A) {
    Element<K> out(A);
    for (const auto& [w, c] : e.terms()) {
        for (Letter l : w)
            if (l >= A->size()) throw IncompatibleAlgebra("letter outside the target alphabet");
        out.add_term(w, c);
    }
    return out;
}

// d on the free algebra: d(g) = d-letter of g, d(d-letter) = 0, graded Leibniz.
template <class K>
Element<K> free_d(const Element<K>& e) {
    const auto& A = e.alphabet();
    if (!A || !A->has_differentials()) throw std::invalid_argument("free_d needs an alphabet with differentials");
    Element<K> out(A);
    for (const auto& [w, c] : e.terms()) {
        int deg = 0;
        for (size_t i = 0; i < w.size(); ++i) {
            int dl = A->d_of(w[i]);
            if (dl >= 0) {
                Word v = w;
                v[i] = (Letter)dl;
                out.add_term(v, deg % 2 ? K(-c) : c);
            }
            deg += (*A)[w[i]].degree;
        }
    }
    return out;
}

// A calculus Omega(B)/J presented by the relations of B and generators of J
// in positive form degree. `relations` is closed under star and d.
struct DGAPresentation {
    std::string name;
    AlphabetPtr alphabet; // with differentials
    std::vector<Element<Scalar>> base_relations;
    std::vector<Element<Scalar>> ideal_generators;
    std::vector<Element<Scalar>> relations;
    int maxdeg = 3;
    RewriteSystem<Scalar> rs;
    std::shared_ptr<const RewriteSystem<Scalar>> base_rs;
};

inline DGAPresentation make_calculus(std::string name, const Presentation& base, std::vector<Element<Scalar>> extra,
                                     int maxdeg = 3) {
    if (!base.alphabet->has_differentials())
        throw std::invalid_argument("calculus presentation needs an alphabet with differentials");
    DGAPresentation c;
    c.name = std::move(name);
    c.alphabet = base.alphabet;
    c.base_relations = base.relations;
    c.ideal_generators = extra;
    c.maxdeg = maxdeg;
    std::vector<Element<Scalar>> rels = base.relations;
    for (const auto& e : extra) rels.push_back(e);
    for (const auto& e : extra) rels.push_back(e.star());
    size_t n0 = rels.size();
    for (size_t i = 0; i < n0; ++i) rels.push_back(free_d(rels[i]));
    c.relations = rels;
    c.rs = orient_presentation(Presentation(c.name, c.alphabet, rels, false));
    auto BA = base_alphabet(c.alphabet);
    std::vector<Element<Scalar>> brels;
    for (const auto& r : base.relations) brels.push_back(rebase(r, BA));
    c.base_rs = std::make_shared<RewriteSystem<Scalar>>(orient_presentation(Presentation(base.name, BA, brels, false)));
    return c;
}

namespace detail {
inline Element<Scalar> dg(const AlphabetPtr& A, const std::string& n) { return g(A, "d(" + n + ")"); }
} // namespace detail

// Disc calculus: x dx = q^-1 dx x, x* dx* = q dx* x*, x dx* = q^-1 dx* x, x* dx = q dx x*.
inline DGAPresentation disc_calculus(const Scalar& q, const std::string& x = "x") {
    auto base = disc_presentation(q, x, true);
    const auto& A = base.alphabet;
    using detail::g, detail::dg;
    std::string xs = x + "*";
    auto X = g(A, x), Xs = g(A, xs), dX = dg(A, x), dXs = dg(A, xs);
    Scalar qi = q.inverse();
    return make_calculus("calculus_" + x, base,
                         {X * dX - qi * (dX * X), Xs * dXs - q * (dXs * Xs), X * dXs - qi * (dXs * X),
                          Xs * dX - q * (dX * Xs)});
}

// Circle calculus with da = da* = 0.
inline DGAPresentation circle_trivial_calculus(const std::string& a = "a") {
    auto base = circle_presentation(a, true);
    const auto& A = base.alphabet;
    return make_calculus("calculus_" + a + "_trivial", base,
                         {detail::dg(A, a), detail::dg(A, a + "*")});
}

// Generators of the sphere calculus ideal for p = q: four pairs in form
// degree 1 followed by four elements in form degree 2.
inline std::vector<Element<Scalar>> sphere_calculus_generators(const Scalar& q, const AlphabetPtr& A) {
    using detail::g, detail::dg, detail::c;
    auto f1 = g(A, "f1"), f0 = g(A, "f0"), fm = g(A, "fm1");
    auto df1 = dg(A, "f1"), df0 = dg(A, "f0"), dfm = dg(A, "fm1");
    auto one = c(A, Scalar(1));
    Scalar qi = q.inverse(), omq = Scalar(1) - q;
    auto k = f1 * fm - f0;
    return {f1 * df1 - qi * (df1 * f1),
            fm * dfm - q * (dfm * fm),
            f1 * dfm - qi * (dfm * f1),
            fm * df1 - q * (df1 * fm),
            f0 * df1 - df1 * f0,
            f0 * dfm - dfm * f0,
            df0 * k,
            k * df0,
            omq * (df0 * dfm) - q * (fm * df0 * df0),
            omq * (df1 * df0) - q * (f1 * df0 * df0),
            (one - f0) * (omq * (df1 * dfm) - df0 * df0),
            k * df0 * df0};
}

// ---------------------------------------------------------------------------
// Universal forms. The key (u; w1, ..., wn) stands for u d(w1) ... d(wn) with
// u a canonical word and every wi a nonempty canonical word; these form a
// left module basis of Omega^n(B).

using FormKey = std::vector<Word>;

inline int filtered_degree(const FormKey& k) {
    int d = 0;
    for (const auto& w : k) d += (int)w.size();
    return d;
}
inline int form_degree(const FormKey& k) { return (int)k.size() - 1; }

// Higher filtered degree first, so a span meets a filtered slice in exactly
// the rows whose pivot lies in the slice.
struct FormKeyOrder {
    bool operator()(const FormKey& a, const FormKey& b) const {
        int da = filtered_degree(a), db = filtered_degree(b);
        if (da != db) return da > db;
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

template <class K>
using Form = SVec<FormKey, K, FormKeyOrder>;
template <class K>
using FormSpan = SparseSpan<FormKey, K, FormKeyOrder>;

template <class K>
int max_filtered_degree(const Form<K>& f) {
    return f.empty() ? 0 : filtered_degree(f.begin()->first);
}
template <class K>
int max_form_degree(const Form<K>& f) {
    int m = 0;
    for (const auto& [k, c] : f) m = std::max(m, form_degree(k));
    return m;
}
template <class K>
Form<K> form_part(const Form<K>& f, int n) {
    Form<K> out;
    for (const auto& [k, c] : f)
        if (form_degree(k) == n) out.emplace(k, c);
    return out;
}

template <class K = Scalar>
class UniversalForms {
public:
    using RS = RewriteSystem<K>;

    explicit UniversalForms(std::shared_ptr<const RS> B)
        : B_(std::move(B)), dA_(ncglue::differential_alphabet(B_->alphabet())) {}

    const RS& base() const { return *B_; }
    const std::shared_ptr<const RS>& base_ptr() const { return B_; }
    const AlphabetPtr& differential_alphabet() const { return dA_; }
    int letters() const { return B_->alphabet()->base_size(); }

    Form<K> one() const { return Form<K>{{FormKey{Word{}}, Field<K>::one()}}; }
    Form<K> key(const FormKey& k, const K& c = Field<K>::one()) const { return Form<K>{{k, c}}; }

    Form<K> algebra_element(const Element<K>& a) const {
        Form<K> out;
        auto n = B_->normal_form(rebase(a, B_->alphabet()));
        for (const auto& [w, c] : n.terms()) add(out, FormKey{w}, c);
        return out;
    }

    Form<K> d(const Form<K>& f) const {
        Form<K> out;
        for (const auto& [k, c] : f) {
            if (k[0].empty()) continue;
            FormKey n{Word{}};
            n.insert(n.end(), k.begin(), k.end());
            add(out, n, c);
        }
        return out;
    }

    Form<K> mul(const Form<K>& f, const Form<K>& g) const {
        std::lock_guard<std::mutex> lk(*mu_);
        Form<K> out;
        for (const auto& [k2, c2] : g) {
            Form<K> t = mul_form_word(f, k2[0]);
            for (const auto& [k, c] : t) {
                FormKey n = k;
                n.insert(n.end(), k2.begin() + 1, k2.end());
                add(out, n, K(c * c2));
            }
        }
        return out;
    }

    Form<K> left_mul(const Element<K>& a, const Form<K>& f) const {
        Form<K> out;
        Element<K> an = rebase(a, B_->alphabet());
        for (const auto& [k, c] : f) {
            auto v = B_->normal_form(an * Element<K>::word(B_->alphabet(), k[0]));
            for (const auto& [w, e] : v.terms()) {
                FormKey n = k;
                n[0] = w;
                add(out, n, K(c * e));
            }
        }
        return out;
    }

    Form<K> right_mul_letter(const Form<K>& f, Letter l) const {
        std::lock_guard<std::mutex> lk(*mu_);
        return mul_form_letter(f, l);
    }
    // f d(l)
    Form<K> right_mul_d_letter(const Form<K>& f, Letter l) const {
        std::lock_guard<std::mutex> lk(*mu_);
        return append_d(f, l);
    }

    // Free differential element (letters and d-letters) as a universal form.
    Form<K> from_free(const Element<K>& e) const {
        std::lock_guard<std::mutex> lk(*mu_);
        int nb = letters();
        Form<K> out;
        for (const auto& [w, c] : e.terms()) {
            Form<K> f = key(FormKey{Word{}}, c);
            for (Letter l : w) {
                if (l < nb) f = mul_form_letter(f, l);
                else if ((*e.alphabet())[l].base >= 0) f = append_d(f, (Letter)(*e.alphabet())[l].base);
                else throw std::invalid_argument("letter is neither a generator nor a differential");
            }
            axpy(out, Field<K>::one(), f);
        }
        return out;
    }

    // u d(w1) ... d(wn) expanded by the free Leibniz rule.
    Element<K> to_free(const FormKey& k) const {
        Element<K> e = Element<K>::word(dA_, k[0]);
        for (size_t i = 1; i < k.size(); ++i) e = e * free_d(Element<K>::word(dA_, k[i]));
        return e;
    }
    Element<K> to_free(const Form<K>& f) const {
        Element<K> out(dA_);
        for (const auto& [k, c] : f) out += to_free(k).scaled(c);
        return out;
    }

    // All keys of form degree n and filtered degree <= D.
    std::vector<FormKey> keys(int D, int n) const {
        auto words = enumerate_filtered_basis(*B_, D);
        std::vector<FormKey> out;
        FormKey cur;
        std::function<void(int, int)> rec = [&](int left, int i) {
            if (i == n + 1) {
                out.push_back(cur);
                return;
            }
            for (const auto& w : words) {
                if ((int)w.size() > left) break;
                if (i > 0 && w.empty()) continue;
                cur.push_back(w);
                rec(left - (int)w.size(), i + 1);
                cur.pop_back();
            }
        };
        rec(D, 0);
        std::sort(out.begin(), out.end(), FormKeyOrder{});
        return out;
    }

    std::string key_string(const FormKey& k) const {
        const auto& A = *B_->alphabet();
        std::string s = k[0].empty() ? "" : word_string(A, k[0]);
        for (size_t i = 1; i < k.size(); ++i) {
            if (!s.empty()) s += ' ';
            s += "d(" + word_string(A, k[i]) + ")";
        }
        return s.empty() ? "1" : s;
    }
    std::string str(const Form<K>& f) const {
        if (f.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [k, c] : f) {
            std::string cs = Field<K>::str(c);
            bool plain = cs.find(' ') == std::string::npos && cs.find('/') == std::string::npos;
            bool neg = plain && cs[0] == '-';
            if (neg) cs = cs.substr(1);
            std::string body = cs == "1" ? key_string(k) : (plain ? cs : "(" + cs + ")") + " " + key_string(k);
            out += first ? (neg ? "-" : "") + body : (neg ? " - " : " + ") + body;
            first = false;
        }
        return out;
    }

    static void add(Form<K>& f, const FormKey& k, const K& c) {
        if (Field<K>::is_zero(c)) return;
        auto it = f.find(k);
        if (it == f.end()) {
            f.emplace(k, c);
            return;
        }
        it->second += c;
        if (Field<K>::is_zero(it->second)) f.erase(it);
    }

private:
    std::shared_ptr<const RS> B_;
    AlphabetPtr dA_;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    mutable std::map<std::pair<FormKey, Letter>, Form<K>> cache_;

    // f d(l), with d(l) = d(nf l)
    Form<K> append_d(const Form<K>& f, Letter l) const {
        auto v = B_->normal_form_word(Word{l});
        Form<K> out;
        for (const auto& [w, e] : v.terms()) {
            if (w.empty()) continue;
            for (const auto& [k, c] : f) {
                FormKey n = k;
                n.push_back(w);
                add(out, n, K(c * e));
            }
        }
        return out;
    }

    Form<K> mul_form_letter(const Form<K>& f, Letter l) const {
        Form<K> out;
        for (const auto& [k, c] : f) axpy(out, c, mul_key_letter(k, l));
        return out;
    }
    Form<K> mul_form_word(const Form<K>& f, const Word& w) const {
        Form<K> g = f;
        for (Letter l : w) g = mul_form_letter(g, l);
        return g;
    }

    // (u; w1..wn) b = (u; w1..w(n-1), wn b) - ((u; w1..w(n-1)) wn) d(b)
    const Form<K>& mul_key_letter(const FormKey& k, Letter l) const {
        auto ck = std::make_pair(k, l);
        auto it = cache_.find(ck);
        if (it != cache_.end()) return it->second;
        Form<K> out;
        if (k.size() == 1) {
            auto n = B_->normal_form_word(concat(k[0], Word{l}));
            for (const auto& [v, c] : n.terms()) add(out, FormKey{v}, c);
        } else {
            FormKey head(k.begin(), k.end() - 1);
            auto n = B_->normal_form_word(concat(k.back(), Word{l}));
            for (const auto& [v, c] : n.terms()) {
                if (v.empty()) continue;
                FormKey n = head;
                n.push_back(v);
                add(out, n, c);
            }
            Form<K> t = append_d(mul_form_word(key(head), k.back()), l);
            axpy(out, K(-Field<K>::one()), t);
        }
        return cache_.emplace(ck, std::move(out)).first->second;
    }
};

// Graded subspace of universal forms, one span per form degree, cut to
// filtered degree <= D.
template <class K>
struct GradedFormSpace {
    int D = 0;
    std::vector<FormSpan<K>> by_degree;

    size_t dim(int n) const { return n < (int)by_degree.size() ? by_degree[n].dim() : 0; }
    bool contains(const Form<K>& f) const {
        for (int n = 0; n <= max_form_degree(f); ++n) {
            auto part = form_part(f, n);
            if (part.empty()) continue;
            if (n >= (int)by_degree.size() || !by_degree[n].contains(part)) return false;
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// Calculus morphisms: a morphism on generators extended by dg -> d(image g),
// landing in a presented target calculus.

template <class K = Scalar>
class CalculusMorphism {
public:
    using RS = RewriteSystem<K>;
    CalculusMorphism() = default;
    // images of the source generators, written over the target alphabet
    CalculusMorphism(std::string name, AlphabetPtr src, std::shared_ptr<const RS> tgt, std::vector<Element<K>> images)
        : name_(std::move(name)), src_(std::move(src)), tgt_(std::move(tgt)) {
        if ((int)images.size() != src_->base_size())
            throw MorphismError("calculus morphism " + name_ + " needs one image per generator");
        for (auto& e : images) img_.push_back(tgt_->normal_form(rebase(e, tgt_->alphabet())));
    }

    const std::string& name() const { return name_; }
    const AlphabetPtr& source_alphabet() const { return src_; }
    const RS& target() const { return *tgt_; }
    const std::shared_ptr<const RS>& target_ptr() const { return tgt_; }

    Element<K> apply_word(const Word& w) const {
        std::lock_guard<std::mutex> lk(*mu_);
        return word_image(w);
    }
    Element<K> apply(const Element<K>& e) const {
        Element<K> out(tgt_->alphabet());
        for (const auto& [w, c] : e.terms()) out += apply_word(w).scaled(c);
        return out;
    }

    // Image of a universal form key u d(w1) ... d(wn).
    Element<K> apply_key(const FormKey& k) const {
        std::lock_guard<std::mutex> lk(*mu_);
        auto it = key_cache_.find(k);
        if (it != key_cache_.end()) return it->second;
        Element<K> e = word_image(k[0]);
        for (size_t i = 1; i < k.size() && !e.is_zero(); ++i) e = tgt_->normal_form(e * d_image(k[i]));
        return key_cache_.emplace(k, e).first->second;
    }
    Element<K> apply_form(const Form<K>& f) const {
        Element<K> out(tgt_->alphabet());
        for (const auto& [k, c] : f) out += apply_key(k).scaled(c);
        return out;
    }

    // Throws with a witness if some relation is not sent to zero.
    void check_relations(const std::vector<Element<K>>& rels) const {
        for (const auto& r : rels) {
            auto v = apply(r);
            if (!v.is_zero())
                throw NotDifferentiable("morphism " + name_ + " sends " + r.to_string() + " to " + v.to_string());
        }
    }

private:
    std::string name_;
    AlphabetPtr src_;
    std::shared_ptr<const RS> tgt_;
    std::vector<Element<K>> img_;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    mutable std::map<Word, Element<K>> cache_, dcache_;
    mutable std::map<FormKey, Element<K>> key_cache_;

    Element<K> letter_image(Letter l) const {
        const auto& g = (*src_)[l];
        if (g.base < 0) return img_[l];
        return tgt_->normal_form(free_d(img_[g.base]));
    }
    const Element<K>& word_image(const Word& w) const {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        Element<K> v = w.empty() ? Element<K>::unit(tgt_->alphabet()) : letter_image(w[0]);
        if (w.size() > 1) v = tgt_->normal_form(v * word_image(Word(w.begin() + 1, w.end())));
        return cache_.emplace(w, std::move(v)).first->second;
    }
    // d of the image of a base word (the base letters share indices)
    const Element<K>& d_image(const Word& w) const {
        auto it = dcache_.find(w);
        if (it != dcache_.end()) return it->second;
        Element<K> v = tgt_->normal_form(free_d(word_image(w)));
        return dcache_.emplace(w, std::move(v)).first->second;
    }
};

// Extension of an algebra morphism to forms with values in a presented
// calculus; checks that the source relations survive.
template <class K>
CalculusMorphism<K> extend_morphism_to_forms(const AlgebraMorphism<K>& m,
                                             std::type_identity_t<std::shared_ptr<const RewriteSystem<K>>> target,
                                             const std::vector<Element<K>>& source_relations = {}) {
    std::vector<Element<K>> imgs;
    for (int l = 0; l < m.source()->alphabet()->base_size(); ++l) imgs.push_back(m.image_of(l));
    CalculusMorphism<K> cm(m.name(), ncglue::differential_alphabet(m.source()->alphabet()), std::move(target), imgs);
    std::vector<Element<K>> rels;
    for (const auto& r : rule_relations(*m.source())) rels.push_back(rebase(r, cm.source_alphabet()));
    for (const auto& r : source_relations) rels.push_back(rebase(r, cm.source_alphabet()));
    cm.check_relations(rels);
    return cm;
}

// Kernel of Omega -> prod_i Gamma_i on each form degree n <= maxdeg, filtered degree <= D.
template <class K>
GradedFormSpace<K> adapted_calculus_kernel(const UniversalForms<K>& om,
                                           const std::vector<const CalculusMorphism<K>*>& maps, int D, int maxdeg) {
    GradedFormSpace<K> out;
    out.D = D;
    out.by_degree.resize(maxdeg + 1);
    using Key = std::pair<int, Word>;
    for (int n = 0; n <= maxdeg; ++n) {
        auto keys = om.keys(D, n);
        Eliminator<Key, K> el;
        for (size_t i = 0; i < keys.size(); ++i) {
            SVec<Key, K> v;
            for (size_t m = 0; m < maps.size(); ++m) {
                auto img = maps[m]->apply_key(keys[i]);
                for (const auto& [w, c] : img.terms()) v.emplace(Key{(int)m, w}, c);
            }
            if (auto combo = el.add(v, (int)i)) {
                Form<K> f;
                for (const auto& [id, c] : *combo) f.emplace(keys[id], c);
                out.by_degree[n].insert(f);
            }
        }
    }
    return out;
}

template <class K>
bool kernel_is_d_stable(const UniversalForms<K>& om, const GradedFormSpace<K>& ker) {
    for (size_t n = 0; n + 1 < ker.by_degree.size(); ++n)
        for (const auto& v : ker.by_degree[n].rows())
            if (!ker.by_degree[n + 1].contains(om.d(v))) return false;
    return true;
}

template <class K>
Form<K> form_star(const UniversalForms<K>& om, const Form<K>& f) {
    return om.from_free(om.to_free(f).star());
}

// Span, in filtered degree <= D, of the differential ideal generated by
// gens: the two-sided ideal generated by gens and their differentials,
// explored by multiplying with letters and d-letters while the filtered
// degree stays <= D + slack. A lower bound for the true slice.
template <class K>
GradedFormSpace<K> differential_ideal_span(const UniversalForms<K>& om, const std::vector<Form<K>>& gens, int D,
                                           int maxdeg, int slack = 2) {
    int L = D + slack;
    FormSpan<K> span;
    std::deque<Form<K>> queue;
    auto offer = [&](const Form<K>& f) {
        if (f.empty() || max_filtered_degree(f) > L || max_form_degree(f) > maxdeg) return;
        if (span.insert(f)) queue.push_back(f);
    };
    for (const auto& g : gens) {
        offer(g);
        offer(om.d(g));
    }
    int nl = om.letters();
    std::vector<Form<K>> left_d;
    for (int l = 0; l < nl; ++l) left_d.push_back(om.key(FormKey{Word{}, Word{(Letter)l}}));
    while (!queue.empty()) {
        Form<K> f = std::move(queue.front());
        queue.pop_front();
        int fd = max_filtered_degree(f), fn = max_form_degree(f);
        if (fd + 1 > L) continue;
        for (int l = 0; l < nl; ++l) {
            Element<K> a = Element<K>::word(om.base().alphabet(), Word{(Letter)l});
            offer(om.left_mul(a, f));
            offer(om.right_mul_letter(f, (Letter)l));
            if (fn + 1 <= maxdeg) {
                offer(om.mul(left_d[l], f));
                offer(om.right_mul_d_letter(f, (Letter)l));
            }
        }
    }
    GradedFormSpace<K> out;
    out.D = D;
    out.by_degree.resize(maxdeg + 1);
    for (const auto& v : span.rows()) {
        const auto& pk = v.begin()->first;
        if (filtered_degree(pk) <= D) out.by_degree[form_degree(pk)].insert(v);
    }
    return out;
}

struct IdealComparison {
    int form_degree = 0;
    size_t ideal_dim = 0, kernel_dim = 0;
    bool contained = false; // ideal slice inside the kernel slice
    bool equal() const { return contained && ideal_dim == kernel_dim; }
};

template <class K>
std::vector<IdealComparison> verify_relation_ideal_equality(const UniversalForms<K>& om,
                                                            const std::vector<Form<K>>& claimed,
                                                            const GradedFormSpace<K>& kernel, int D, int maxdeg,
                                                            int slack = 2, int from_degree = 1) {
    auto I = differential_ideal_span(om, claimed, D, maxdeg, slack);
    std::vector<IdealComparison> out;
    for (int n = from_degree; n <= maxdeg; ++n) {
        IdealComparison c;
        c.form_degree = n;
        c.ideal_dim = I.dim(n);
        c.kernel_dim = kernel.dim(n);
        c.contained = true;
        if (n < (int)I.by_degree.size())
            for (const auto& v : I.by_degree[n].rows())
                if (n >= (int)kernel.by_degree.size() || !kernel.by_degree[n].contains(v)) c.contained = false;
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// The sphere calculus for p = q, handled through its two disc images.

template <class K = Scalar>
struct SphereCalculus {
    Scalar q;
    std::shared_ptr<const RewriteSystem<K>> sphere; // base algebra
    AlphabetPtr alphabet;                           // sphere letters and differentials
    std::shared_ptr<const RewriteSystem<K>> disc_x, disc_y; // calculi
    std::shared_ptr<UniversalForms<K>> forms;
    CalculusMorphism<K> pi1, pi2;
    std::vector<Element<K>> generators; // ideal generators over `alphabet`

    bool is_zero(const Element<K>& e) const { return pi1.apply(e).is_zero() && pi2.apply(e).is_zero(); }
    bool equal(const Element<K>& a, const Element<K>& b) const { return is_zero(a - b); }
    bool form_is_zero(const Form<K>& f) const {
        return pi1.apply_form(f).is_zero() && pi2.apply_form(f).is_zero();
    }
    std::vector<const CalculusMorphism<K>*> maps() const { return {&pi1, &pi2}; }
};

template <class K = Scalar>
SphereCalculus<K> build_sphere_calculus(const RationalPoint* pt = nullptr) {
    Scalar q = Scalar::q();
    SphereCalculus<K> sc;
    sc.q = q;
    auto sp = sphere_presentation(q, q, true);
    sc.alphabet = sp.alphabet;
    auto BA = base_alphabet(sp.alphabet);
    std::vector<Element<Scalar>> brels;
    for (const auto& r : sp.relations) brels.push_back(rebase(r, BA));
    auto srs = orient_presentation(Presentation("sphere", BA, brels, false));
    sc.sphere = std::make_shared<RewriteSystem<K>>(srs.template specialize<K>(pt));
    auto cx = disc_calculus(q, "x"), cy = disc_calculus(q, "y");
    sc.disc_x = std::make_shared<RewriteSystem<K>>(cx.rs.template specialize<K>(pt));
    sc.disc_y = std::make_shared<RewriteSystem<K>>(cy.rs.template specialize<K>(pt));
    sc.forms = std::make_shared<UniversalForms<K>>(sc.sphere);
    const auto& X = cx.alphabet;
    const auto& Y = cy.alphabet;
    using E = Element<K>;
    auto x = E::gen(X, "x"), xs = E::gen(X, "x*"), y = E::gen(Y, "y"), ys = E::gen(Y, "y*");
    sc.pi1 = CalculusMorphism<K>("pi1", sc.alphabet, sc.disc_x, {x, x * xs, xs});
    sc.pi2 = CalculusMorphism<K>("pi2", sc.alphabet, sc.disc_y, {y, E::unit(Y), ys});
    for (const auto& g : sphere_calculus_generators(q, sc.alphabet)) sc.generators.push_back(specialize<K>(g, pt));
    return sc;
}

// ---------------------------------------------------------------------------
// Interface calculus: the differential ideal of the interface algebra
// generated by the images of the local calculus ideals.

struct CalculusSide {
    DGAPresentation calculus;
    std::vector<Element<Scalar>> images; // of the local generators, over the interface base alphabet
};

struct GluedDegree {
    int n = 0;
    size_t glued = 0, direct_sum = 0;
};

struct InterfaceReport {
    size_t ideal_dim1 = 0, ideal_dim2 = 0;
    std::vector<std::pair<std::string, bool>> certified; // differentials of generators in the span
    std::vector<GluedDegree> degrees;
    bool trivial() const {
        for (const auto& [n, ok] : certified)
            if (!ok) return false;
        return true;
    }
    bool direct_sum() const {
        for (const auto& g : degrees)
            if (g.glued != g.direct_sum) return false;
        return true;
    }
};

// Substitutes local generators by their interface images (and d-letters by
// the differentials of those images) and reads the result as a form.
inline Form<Scalar> side_to_interface(const UniversalForms<Scalar>& om, const CalculusSide& side,
                                      const Element<Scalar>& e) {
    const auto& dA = om.differential_alphabet();
    const auto& SA = *side.calculus.alphabet;
    std::vector<Element<Scalar>> img, dimg;
    for (const auto& im : side.images) {
        img.push_back(rebase(im, dA));
        dimg.push_back(free_d(img.back()));
    }
    Element<Scalar> out(dA);
    for (const auto& [w, c] : e.terms()) {
        Element<Scalar> t(dA, c);
        for (Letter l : w) t = t * (SA[l].base >= 0 ? dimg[SA[l].base] : img[l]);
        out += t;
    }
    return om.from_free(out);
}

inline InterfaceReport interface_calculus(std::shared_ptr<const RewriteSystem<Scalar>> interface_base,
                                          const std::vector<CalculusSide>& sides, int D, int slack = 2) {
    UniversalForms<Scalar> om(interface_base);
    std::vector<Form<Scalar>> gens;
    for (const auto& s : sides)
        for (const auto& g : s.calculus.ideal_generators) gens.push_back(side_to_interface(om, s, g));
    auto J = differential_ideal_span(om, gens, D, 2, slack);
    InterfaceReport rep;
    rep.ideal_dim1 = J.dim(1);
    rep.ideal_dim2 = J.dim(2);
    const auto& BA = *interface_base->alphabet();
    for (int l = 0; l < BA.base_size(); ++l)
        rep.certified.push_back({"d(" + BA[l].name + ")", J.contains(om.key(FormKey{Word{}, Word{(Letter)l}}))});
    // glued forms: pairs of local basis elements agreeing modulo J
    for (int n = 1; n <= 2; ++n) {
        GluedDegree gd;
        gd.n = n;
        Eliminator<FormKey, Scalar, FormKeyOrder> el;
        int id = 0;
        for (size_t si = 0; si < sides.size(); ++si) {
            const auto& cal = sides[si].calculus;
            for (const auto& w : enumerate_filtered_basis(cal.rs, D, false)) {
                if (form_degree(*cal.alphabet, w) != n) continue;
                ++gd.direct_sum;
                Form<Scalar> f = side_to_interface(om, sides[si], Element<Scalar>::word(cal.alphabet, w));
                if (si > 0) f = scaled(f, Scalar(-1));
                if (n < (int)J.by_degree.size()) f = J.by_degree[n].reduce(f);
                if (el.add(f, id++)) ++gd.glued;
            }
        }
        rep.degrees.push_back(gd);
    }
    return rep;
}

// Disc calculi with parameters p and q glued over the circle a.
inline InterfaceReport disc_interface_calculus(const Scalar& p, const Scalar& q, int D, int slack = 2) {
    auto circ = circle_presentation("a");
    auto crs = std::make_shared<RewriteSystem<Scalar>>(orient_presentation(circ));
    const auto& CA = circ.alphabet;
    auto a = Element<Scalar>::gen(CA, "a"), as = Element<Scalar>::gen(CA, "a*");
    std::vector<CalculusSide> sides = {{disc_calculus(p, "x"), {a, as}}, {disc_calculus(q, "y"), {a, as}}};
    return interface_calculus(crs, sides, D, slack);
}

// ---------------------------------------------------------------------------
// Left-module projections onto {a dx + b dx*} and {a dx dx*} over the disc.

namespace detail {
// (k, l) for the canonical disc word x^k x*^l
inline std::pair<int, int> disc_exponents(const Word& w) {
    int k = 0, l = 0;
    for (Letter c : w) {
        if (c == 0 && l == 0) ++k;
        else if (c == 1) ++l;
        else throw std::invalid_argument("not a canonical disc word");
    }
    return {k, l};
}
inline Word disc_word(const std::vector<std::pair<int, int>>& parts) {
    Word w;
    for (auto [letter, n] : parts)
        for (int i = 0; i < n; ++i) w.push_back((Letter)letter);
    return w;
}
} // namespace detail

// which = 1: P1 on 1-forms; which = 2: P2 on 2-forms. The result is written
// over the disc calculus alphabet as (coefficient words) dx, dx*, dx dx*.
template <class K>
Element<K> appendix_projection(int which, const UniversalForms<K>& om, const Form<K>& f, const K& q) {
    const auto& dA = om.differential_alphabet();
    const auto& B = om.base();
    Letter dx = (Letter)dA->d_of(0), dxs = (Letter)dA->d_of(1);
    auto qp = [&](int e) {
        K r = Field<K>::one();
        K b = e >= 0 ? q : K(Field<K>::one() / q);
        for (int i = 0; i < std::abs(e); ++i) r *= b;
        return r;
    };
    Element<K> out(dA);
    auto emit = [&](const Word& u, const Word& coeff_word, const K& c, const Word& tail) {
        if (Field<K>::is_zero(c)) return;
        auto v = B.normal_form_word(concat(u, coeff_word));
        for (const auto& [w, e] : v.terms()) out.add_term(concat(w, tail), K(c * e));
    };
    for (const auto& [k, c] : f) {
        if (form_degree(k) != which)
            throw FormDegreeError("P" + std::to_string(which) + " needs a form of degree " + std::to_string(which));
        if (which == 1) {
            auto [a, b] = detail::disc_exponents(k[1]);
            K s1 = Field<K>::zero(), s2 = Field<K>::zero();
            for (int i = 0; i < a; ++i) s1 += qp(i - b);
            for (int i = 0; i < b; ++i) s2 += qp(-i);
            if (a > 0) emit(k[0], detail::disc_word({{0, a - 1}, {1, b}}), K(c * s1), Word{dx});
            if (b > 0) emit(k[0], detail::disc_word({{0, a}, {1, b - 1}}), K(c * s2), Word{dxs});
        } else if (which == 2) {
            auto [m, n] = detail::disc_exponents(k[1]);
            auto [kk, l] = detail::disc_exponents(k[2]);
            K s1 = Field<K>::zero(), s2 = Field<K>::zero();
            for (int i = 0; i < m; ++i)
                for (int s = 0; s < l; ++s) s1 += qp(kk - l + i - n + 1 - s);
            for (int i = 0; i < n; ++i)
                for (int s = 0; s < kk; ++s) s2 -= qp(kk - l - i + s - l);
            if (m > 0 && l > 0)
                emit(k[0], detail::disc_word({{0, m - 1}, {1, n}, {0, kk}, {1, l - 1}}), K(c * s1), Word{dx, dxs});
            if (n > 0 && kk > 0)
                emit(k[0], detail::disc_word({{0, m}, {1, n - 1}, {0, kk - 1}, {1, l}}), K(c * s2), Word{dx, dxs});
        } else {
            throw FormDegreeError("only P1 and P2 exist");
        }
    }
    return out;
}

struct ModuleBasisReport {
    bool p1_kills_generators = false;     // generators times basis words
    bool p2_kills_degree_two = false;     // g w d(v), d(v) g w, d(g) w
    bool derived_relations = false;       // dx dx, dx* dx*, dx* dx + q dx dx*
    bool degree_three_empty = false;
    size_t checked1 = 0, checked2 = 0;
    std::string failure;
    bool ok() const { return p1_kills_generators && p2_kills_degree_two && derived_relations && degree_three_empty; }
};

// Over the disc calculus: P1, P2 vanish on the ideal generators and their
// closure up to degree D, and the degree-3 part vanishes.
inline ModuleBasisReport module_basis_check(const DGAPresentation& cal, int D) {
    ModuleBasisReport rep;
    UniversalForms<Scalar> om(cal.base_rs);
    const auto& dA = om.differential_alphabet();
    Scalar q = Scalar::q();
    // the disc parameter is read off the defining relation x* x -> q x x* + (1 - q)
    for (const auto& r : cal.base_rs->rules())
        if (r.lhs == Word{1, 0}) q = r.rhs.coeff(Word{0, 1});
    auto words = enumerate_filtered_basis(*cal.base_rs, D);
    std::vector<Form<Scalar>> gens;
    for (const auto& g : cal.ideal_generators) gens.push_back(om.from_free(rebase(g, dA)));
    rep.p1_kills_generators = true;
    for (const auto& g : gens)
        for (const auto& w : words) {
            Form<Scalar> gw = om.mul(g, om.key(FormKey{w}));
            ++rep.checked1;
            auto v = appendix_projection(1, om, gw, q);
            if (!v.is_zero()) {
                rep.p1_kills_generators = false;
                rep.failure = "P1(" + om.str(g) + " * " + word_string(*om.base().alphabet(), w) + ") = " + v.to_string();
            }
        }
    rep.p2_kills_degree_two = true;
    auto check2 = [&](const Form<Scalar>& f, const std::string& what) {
        ++rep.checked2;
        auto v = appendix_projection(2, om, f, q);
        if (!v.is_zero()) {
            rep.p2_kills_degree_two = false;
            rep.failure = "P2(" + what + ") = " + v.to_string();
        }
    };
    for (const auto& g : gens) {
        for (const auto& w : words) {
            Form<Scalar> gw = om.mul(g, om.key(FormKey{w}));
            check2(om.mul(om.d(g), om.key(FormKey{w})), "d(g) w");
            for (const auto& v : words) {
                if (v.empty()) continue;
                Form<Scalar> dv = om.key(FormKey{Word{}, v});
                check2(om.mul(gw, dv), "g w d(v)");
                check2(om.mul(dv, gw), "d(v) g w");
            }
        }
    }
    using E = Element<Scalar>;
    auto dx = E::word(dA, Word{(Letter)dA->d_of(0)}), dxs = E::word(dA, Word{(Letter)dA->d_of(1)});
    auto nf = [&](const E& e) { return cal.rs.normal_form(rebase(e, cal.alphabet)); };
    rep.derived_relations =
        nf(dx * dx).is_zero() && nf(dxs * dxs).is_zero() && nf(dxs * dx + q * (dx * dxs)).is_zero();
    rep.degree_three_empty = true;
    for (const auto& w : enumerate_filtered_basis(cal.rs, D, false))
        if (form_degree(*cal.alphabet, w) >= 3) rep.degree_three_empty = false;
    return rep;
}

} // namespace ncglue
