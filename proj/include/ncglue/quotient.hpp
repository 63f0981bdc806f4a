#pragma once

// Truncated exact linear algebra over presented algebras, morphisms and
// their kernels, and finite-dimensional algebras with ideal families.

#include "linalg.hpp"
#include "rewrite.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ncglue {

// Longer words first, so a span meets the slice of words of length <= D in
// exactly the rows whose pivot has length <= D.
struct SliceOrder {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    }
};

template <class K>
using WordVec = SVec<Word, K, SliceOrder>;

template <class K>
WordVec<K> to_vec(const Element<K>& e) {
    WordVec<K> v;
    for (const auto& [w, c] : e.terms()) v.emplace(w, c);
    return v;
}
template <class K>
Element<K> from_vec(const AlphabetPtr& A, const WordVec<K>& v) {
    Element<K> e(A);
    for (const auto& [w, c] : v) e.add_term(w, c);
    return e;
}

// Exact span of elements supported on words of length <= D, in reduced
// echelon form.
template <class K = Scalar>
class FilteredSubspace {
public:
    FilteredSubspace() = default;
    FilteredSubspace(AlphabetPtr A, int D) : A_(std::move(A)), D_(D) {}

    int degree_bound() const { return D_; }
    const AlphabetPtr& alphabet() const { return A_; }
    size_t dim() const { return span_.dim(); }
    bool insert(const Element<K>& e) { return span_.insert(to_vec(e)); }
    bool contains(const Element<K>& e) const { return span_.contains(to_vec(e)); }
    Element<K> reduce(const Element<K>& e) const { return from_vec(A_, span_.reduce(to_vec(e))); }
    std::vector<Element<K>> basis() const {
        std::vector<Element<K>> out;
        for (const auto& v : span_.rref()) out.push_back(from_vec(A_, v));
        return out;
    }
    const SparseSpan<Word, K, SliceOrder>& span() const { return span_; }

    bool operator<=(const FilteredSubspace& o) const { return subspace_le(span_, o.span_); }
    bool operator==(const FilteredSubspace& o) const { return subspace_eq(span_, o.span_); }

    static FilteredSubspace from_span(AlphabetPtr A, int D, const SparseSpan<Word, K, SliceOrder>& s) {
        FilteredSubspace f(std::move(A), D);
        for (const auto& v : s.rows())
            if (v.begin()->first.size() <= (size_t)D) f.span_.insert(v);
        return f;
    }

private:
    AlphabetPtr A_;
    int D_ = 0;
    SparseSpan<Word, K, SliceOrder> span_;
};

// All canonical words of length <= L (all letters of the alphabet).
template <class K>
std::vector<Word> canonical_words(const RewriteSystem<K>& rs, int L) {
    return enumerate_filtered_basis(rs, L, false);
}

// Span of nf(m g m') over canonical words m, m' with |m| + |g| + |m'| <= D + slack,
// cut down to the slice of length <= D. Membership in it is a certificate;
// non-membership is inconclusive.
template <class K>
FilteredSubspace<K> ideal_truncation_span(const RewriteSystem<K>& rs, const std::vector<Element<K>>& gens, int D,
                                          int slack = 2) {
    SparseSpan<Word, K, SliceOrder> span;
    int L = D + slack;
    auto words = canonical_words(rs, L);
    for (const auto& g0 : gens) {
        Element<K> g = rs.normal_form(g0);
        if (g.is_zero()) continue;
        int gl = g0.max_length();
        for (const auto& m : words) {
            if ((int)m.size() + gl > L) break;
            Element<K> mg = rs.normal_form(Element<K>::word(rs.alphabet(), m) * g);
            for (const auto& n : words) {
                if ((int)(m.size() + n.size()) + gl > L) break;
                span.insert(to_vec(rs.normal_form(mg * Element<K>::word(rs.alphabet(), n))));
            }
        }
    }
    return FilteredSubspace<K>::from_span(rs.alphabet(), D, span);
}

// Free-algebra words tagged canonical or not; non-canonical words come first
// so they become pivots.
struct TaggedWord {
    bool canonical;
    Word w;
};
struct NonCanonicalFirst {
    bool operator()(const TaggedWord& a, const TaggedWord& b) const {
        if (a.canonical != b.canonical) return !a.canonical;
        return SliceOrder{}(a.w, b.w);
    }
};

// Independent normal form: reduce e modulo the free-algebra span of
// m * rel * m' (all words, total length <= L). Used to cross-check rewriting.
template <class K>
class LinearNormalForm {
public:
    LinearNormalForm(const RewriteSystem<K>& rs, const std::vector<Element<K>>& relations, int L) : rs_(&rs) {
        const auto& A = rs.alphabet();
        int nl = A->size();
        std::vector<Word> words{Word{}};
        for (size_t i = 0; i < words.size(); ++i)
            if ((int)words[i].size() < L)
                for (int l = 0; l < nl; ++l) {
                    Word w = words[i];
                    w.push_back((Letter)l);
                    words.push_back(w);
                }
        for (const auto& r : relations) {
            int rl = r.max_length();
            for (const auto& m : words) {
                if ((int)m.size() + rl > L) continue;
                Element<K> mr = Element<K>::word(A, m) * r;
                for (const auto& n : words) {
                    if ((int)(m.size() + n.size()) + rl > L) continue;
                    span_.insert(convert(mr * Element<K>::word(A, n)));
                }
            }
        }
    }
    Element<K> normal_form(const Element<K>& e) const {
        Element<K> out(rs_->alphabet());
        for (const auto& [k, c] : span_.reduce(convert(e))) out.add_term(k.w, c);
        return out;
    }
    size_t dim() const { return span_.dim(); }

private:
    using Vec = SVec<TaggedWord, K, NonCanonicalFirst>;
    const RewriteSystem<K>* rs_;
    SparseSpan<TaggedWord, K, NonCanonicalFirst> span_;
    Vec convert(const Element<K>& e) const {
        Vec v;
        for (const auto& [w, c] : e.terms()) v.emplace(TaggedWord{rs_->is_canonical(w), w}, c);
        return v;
    }
};

// Rule relations lhs - rhs; they generate the same ideal as the presentation.
template <class K>
std::vector<Element<K>> rule_relations(const RewriteSystem<K>& rs) {
    std::vector<Element<K>> out;
    for (const auto& r : rs.rules()) out.push_back(Element<K>::word(rs.alphabet(), r.lhs) - r.rhs);
    return out;
}

struct MorphismError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Algebra morphism given on generators; images are reduced in the target.
template <class K = Scalar>
class AlgebraMorphism {
public:
    using RS = RewriteSystem<K>;
    AlgebraMorphism() = default;
    AlgebraMorphism(std::string name, std::shared_ptr<const RS> src, std::shared_ptr<const RS> tgt,
                    std::vector<Element<K>> images, bool check = true)
        : name_(std::move(name)), src_(std::move(src)), tgt_(std::move(tgt)), img_(std::move(images)) {
        if ((int)img_.size() != src_->alphabet()->size())
            throw MorphismError("morphism " + name_ + " needs one image per source generator");
        if (check)
            for (const auto& r : rule_relations(*src_)) {
                auto v = apply(r);
                if (!v.is_zero())
                    throw MorphismError("morphism " + name_ + " does not annihilate relation " + r.to_string() +
                                        " (image " + v.to_string() + ")");
            }
    }

    const std::string& name() const { return name_; }
    const std::shared_ptr<const RS>& source() const { return src_; }
    const std::shared_ptr<const RS>& target() const { return tgt_; }
    const Element<K>& image_of(int letter) const { return img_[letter]; }

    Element<K> apply_word(const Word& w) const {
        std::lock_guard<std::mutex> g(*mu_);
        return word_image(w);
    }
    Element<K> apply(const Element<K>& e) const {
        Element<K> out(tgt_->alphabet());
        for (const auto& [w, c] : e.terms()) out += apply_word(w).scaled(c);
        return out;
    }

private:
    std::string name_;
    std::shared_ptr<const RS> src_, tgt_;
    std::vector<Element<K>> img_;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    mutable std::map<Word, Element<K>> cache_;

    const Element<K>& word_image(const Word& w) const {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        Element<K> v = w.empty() ? Element<K>::unit(tgt_->alphabet()) : tgt_->normal_form(img_[w[0]]);
        if (w.size() > 1) v = tgt_->normal_form(v * word_image(Word(w.begin() + 1, w.end())));
        return cache_.emplace(w, std::move(v)).first->second;
    }
};

// Kernel of e -> (f_1(e), ..., f_m(e)) on the source slice of length <= D.
template <class K>
FilteredSubspace<K> morphism_kernel_intersection(const std::vector<const AlgebraMorphism<K>*>& maps, int D) {
    if (maps.empty()) throw std::invalid_argument("no morphisms given");
    const auto& src = *maps[0]->source();
    auto basis = enumerate_filtered_basis(src, D);
    using Key = std::pair<int, Word>;
    Eliminator<Key, K> el;
    FilteredSubspace<K> out(src.alphabet(), D);
    for (size_t i = 0; i < basis.size(); ++i) {
        SVec<Key, K> v;
        for (size_t m = 0; m < maps.size(); ++m) {
            auto img = maps[m]->apply_word(basis[i]);
            for (const auto& [w, c] : img.terms()) v.emplace(Key{(int)m, w}, c);
        }
        if (auto combo = el.add(v, (int)i)) {
            Element<K> e(src.alphabet());
            for (const auto& [id, c] : *combo) e.add_term(basis[id], c);
            out.insert(e);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Finite-dimensional algebras over Q.

using QVec = SVec<int, mpq_class, std::less<int>>;
using QSpan = SparseSpan<int, mpq_class, std::less<int>>;

class FiniteDimAlgebra {
public:
    FiniteDimAlgebra() = default;
    FiniteDimAlgebra(std::vector<std::string> labels, std::vector<std::vector<QVec>> table, int unit = -1)
        : labels_(std::move(labels)), table_(std::move(table)), unit_(unit) {}

    // Basis = canonical words; requires the canonical words to be finite.
    template <class K>
    static FiniteDimAlgebra from_rewrite(const RewriteSystem<K>& rs, const RationalPoint* pt = nullptr,
                                         int max_len = 32) {
        auto words = enumerate_filtered_basis(rs, max_len, false);
        int top = 0;
        for (const auto& w : words) top = std::max(top, (int)w.size());
        if (top >= max_len) throw std::invalid_argument("presentation is not finite-dimensional up to the bound");
        std::map<Word, int> index;
        std::vector<std::string> labels;
        for (size_t i = 0; i < words.size(); ++i) {
            index[words[i]] = (int)i;
            labels.push_back(word_string(*rs.alphabet(), words[i]));
        }
        size_t n = words.size();
        std::vector<std::vector<QVec>> t(n, std::vector<QVec>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                auto e = rs.normal_form_word(concat(words[i], words[j]));
                for (const auto& [w, c] : e.terms()) t[i][j].emplace(index.at(w), Field<mpq_class>::from_scalar(Scalar(c), pt));
            }
        FiniteDimAlgebra A(labels, t, index.at(Word{}));
        A.words_ = words;
        A.alphabet_ = rs.alphabet();
        return A;
    }

    size_t dim() const { return table_.size(); }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<std::string>& labels() const { return labels_; }
    int unit() const { return unit_; }
    const QVec& product_of_basis(int i, int j) const { return table_[i][j]; }
    const AlphabetPtr& alphabet() const { return alphabet_; }

    QVec mul(const QVec& a, const QVec& b) const {
        QVec out;
        for (const auto& [i, x] : a)
            for (const auto& [j, y] : b) axpy(out, mpq_class(x * y), table_[i][j]);
        return out;
    }
    QVec basis_vec(int i) const { return QVec{{i, mpq_class(1)}}; }

    // coordinates of a free-algebra element written in this algebra's words
    template <class K>
    QVec coords(const Element<K>& e, const RewriteSystem<K>& rs, const RationalPoint* pt = nullptr) const {
        QVec v;
        auto n = rs.normal_form(e);
        for (const auto& [w, c] : n.terms()) {
            auto it = std::find(words_.begin(), words_.end(), w);
            if (it == words_.end()) throw std::invalid_argument("word outside the algebra basis");
            axpy(v, Field<mpq_class>::from_scalar(Scalar(c), pt), QVec{{(int)(it - words_.begin()), mpq_class(1)}});
        }
        return v;
    }

    std::string vec_string(const QVec& v) const {
        if (v.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [i, c] : v) {
            mpq_class a = abs(c);
            std::string body = labels_[i] == "1" ? a.get_str() : (a == 1 ? labels_[i] : a.get_str() + " " + labels_[i]);
            s += first ? (c < 0 ? "-" : "") + body : (c < 0 ? " - " : " + ") + body;
            first = false;
        }
        return s;
    }

    bool is_associative() const {
        size_t n = dim();
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    if (mul(mul(basis_vec(i), basis_vec(j)), basis_vec(k)) != mul(basis_vec(i), mul(basis_vec(j), basis_vec(k))))
                        return false;
        return true;
    }

    // Two-sided ideal generated by gens.
    QSpan ideal(const std::vector<QVec>& gens) const {
        QSpan s;
        std::vector<QVec> todo;
        for (const auto& g : gens)
            if (s.insert(g)) todo.push_back(g);
        while (!todo.empty()) {
            QVec v = todo.back();
            todo.pop_back();
            for (size_t i = 0; i < dim(); ++i)
                for (const QVec& w : {mul(basis_vec(i), v), mul(v, basis_vec(i))})
                    if (s.insert(w)) todo.push_back(w);
        }
        return s;
    }
    bool is_ideal(const QSpan& J) const {
        for (const auto& v : J.rows())
            for (size_t i = 0; i < dim(); ++i)
                if (!J.contains(mul(basis_vec(i), v)) || !J.contains(mul(v, basis_vec(i)))) return false;
        return true;
    }

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<QVec>> table_;
    int unit_ = -1;
    std::vector<Word> words_;
    AlphabetPtr alphabet_;
};

inline QSpan span_intersection_all(const std::vector<const QSpan*>& spans) {
    QSpan acc = *spans.at(0);
    for (size_t i = 1; i < spans.size(); ++i) acc = subspace_intersection(acc, *spans[i]);
    return acc;
}

struct NotACovering : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Covering completion: tuples in (+)_i A/J_i whose images in A/(J_i+J_j)
// agree for all pairs. Quotient classes are represented by reduced vectors.
struct CompletionReport {
    bool is_covering = false;
    bool complete = false;
    size_t dim_A = 0, dim_intersection = 0, dim_completion = 0, dim_image = 0;
    std::vector<QVec> witness; // one representative per ideal
};

class CoveringCompletion {
public:
    CoveringCompletion(const FiniteDimAlgebra& A, std::vector<QSpan> ideals) : A_(&A), J_(std::move(ideals)) {
        size_t n = J_.size();
        S_.assign(n, std::vector<QSpan>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) S_[i][j] = subspace_sum(J_[i], J_[j]);
        // free coordinates of A/J_i: non-pivot basis indices
        for (size_t i = 0; i < n; ++i) {
            std::vector<int> free;
            for (size_t b = 0; b < A.dim(); ++b)
                if (!J_[i].is_pivot((int)b)) free.push_back((int)b);
            free_.push_back(free);
        }
        for (size_t i = 0; i < n; ++i)
            for (int b : free_[i]) var_.push_back({(int)i, b});
        // compatibility constraints
        using Key = std::pair<int, int>;
        Eliminator<Key, mpq_class> el;
        for (size_t v = 0; v < var_.size(); ++v) {
            auto [i, b] = var_[v];
            SVec<Key, mpq_class> img;
            int pair = 0;
            for (size_t a = 0; a < n; ++a)
                for (size_t c = a + 1; c < n; ++c, ++pair) {
                    if ((int)a != i && (int)c != i) continue;
                    mpq_class sign = (int)a == i ? 1 : -1;
                    for (const auto& [k, x] : S_[a][c].reduce(A.basis_vec(b))) img.emplace(Key{pair, k}, mpq_class(sign * x));
                }
            if (auto combo = el.add(img, (int)v)) completion_basis_.push_back(to_tuple(*combo));
        }
    }

    size_t dim() const { return completion_basis_.size(); }
    const std::vector<std::vector<QVec>>& basis() const { return completion_basis_; }
    const QSpan& ideal(int i) const { return J_[i]; }
    size_t size() const { return J_.size(); }
    const QSpan& pair_sum(int i, int j) const { return S_[i][j]; }

    std::vector<QVec> K(const QVec& a) const {
        std::vector<QVec> t;
        for (const auto& J : J_) t.push_back(J.reduce(a));
        return t;
    }
    std::vector<QVec> normalize(const std::vector<QVec>& t) const {
        std::vector<QVec> out;
        for (size_t i = 0; i < t.size(); ++i) out.push_back(J_[i].reduce(t[i]));
        return out;
    }
    bool is_compatible(const std::vector<QVec>& t) const {
        for (size_t i = 0; i < t.size(); ++i)
            for (size_t j = i + 1; j < t.size(); ++j) {
                QVec d = t[i];
                axpy(d, mpq_class(-1), t[j]);
                if (!S_[i][j].contains(d)) return false;
            }
        return true;
    }
    // Solves b - t_i in J_i for all i.
    std::optional<QVec> preimage(const std::vector<QVec>& t) const {
        using Key = std::pair<int, int>;
        Eliminator<Key, mpq_class> el;
        for (size_t b = 0; b < A_->dim(); ++b) el.add(flatten(K(A_->basis_vec((int)b))), (int)b);
        auto combo = el.express(flatten(normalize(t)));
        if (!combo) return std::nullopt;
        QVec v;
        for (const auto& [id, c] : *combo) v.emplace(id, c);
        return v;
    }

    CompletionReport report() const {
        CompletionReport r;
        r.dim_A = A_->dim();
        std::vector<const QSpan*> ptrs;
        for (const auto& J : J_) ptrs.push_back(&J);
        r.dim_intersection = span_intersection_all(ptrs).dim();
        r.is_covering = r.dim_intersection == 0;
        r.dim_completion = dim();
        r.dim_image = r.dim_A - r.dim_intersection;
        r.complete = r.dim_completion == r.dim_image;
        if (!r.complete) {
            using Key = std::pair<int, int>;
            SparseSpan<Key, mpq_class> img;
            for (size_t b = 0; b < A_->dim(); ++b) img.insert(flatten(K(A_->basis_vec((int)b))));
            for (const auto& t : completion_basis_)
                if (!img.contains(flatten(t))) {
                    r.witness = t;
                    break;
                }
        }
        return r;
    }

private:
    const FiniteDimAlgebra* A_;
    std::vector<QSpan> J_;
    std::vector<std::vector<QSpan>> S_;
    std::vector<std::vector<int>> free_;
    std::vector<std::pair<int, int>> var_;
    std::vector<std::vector<QVec>> completion_basis_;

    std::vector<QVec> to_tuple(const std::map<int, mpq_class>& combo) const {
        std::vector<QVec> t(J_.size());
        for (const auto& [v, c] : combo) t[var_[v].first].emplace(var_[v].second, c);
        return t;
    }
    static SVec<std::pair<int, int>, mpq_class> flatten(const std::vector<QVec>& t) {
        SVec<std::pair<int, int>, mpq_class> f;
        for (size_t i = 0; i < t.size(); ++i)
            for (const auto& [k, c] : t[i]) f.emplace(std::pair<int, int>{(int)i, k}, c);
        return f;
    }
};

inline CompletionReport covering_completion_check(const FiniteDimAlgebra& A, const std::vector<QSpan>& ideals) {
    CoveringCompletion cc(A, ideals);
    auto r = cc.report();
    if (!r.is_covering) throw NotACovering("ideals intersect in a subspace of dimension " + std::to_string(r.dim_intersection));
    return r;
}

struct LatticeIdentity {
    std::string name;
    size_t lhs_dim = 0, rhs_dim = 0;
    bool holds = false;
};

struct LatticeReport {
    std::vector<LatticeIdentity> prop_a; // one entry per ordering and k >= 3
    std::vector<LatticeIdentity> prop_b; // one entry per k
    bool prop_a_some_ordering = false;   // sufficient condition met for some ordering
    bool prop_b_all = false;             // necessary condition
    bool complete = false;
    bool is_covering = false;
    // three ideals only: complete <=> one identity <=> all identities
    bool three_ideal_equivalence = true;
};

namespace detail {

inline std::string ideal_list(const std::vector<int>& ix) {
    std::string s;
    for (size_t i = 0; i < ix.size(); ++i) s += (i ? "," : "") + std::to_string(ix[i] + 1);
    return s;
}

inline LatticeIdentity distributive_identity(const std::vector<QSpan>& J, const std::vector<int>& others, int k,
                                             const std::string& tag) {
    std::vector<QSpan> sums;
    std::vector<const QSpan*> sp, ip;
    for (int i : others) sums.push_back(subspace_sum(J[i], J[k]));
    for (auto& s : sums) sp.push_back(&s);
    for (int i : others) ip.push_back(&J[i]);
    QSpan lhs = span_intersection_all(sp);
    QSpan rhs = subspace_sum(span_intersection_all(ip), J[k]);
    LatticeIdentity id;
    id.name = tag + ": meet over {" + ideal_list(others) + "} of (J_i + J_" + std::to_string(k + 1) +
              ") vs (meet of J_i) + J_" + std::to_string(k + 1);
    id.lhs_dim = lhs.dim();
    id.rhs_dim = rhs.dim();
    id.holds = subspace_eq(lhs, rhs);
    return id;
}

} // namespace detail

inline LatticeReport lattice_condition_check(const FiniteDimAlgebra& A, const std::vector<QSpan>& J) {
    LatticeReport r;
    int n = (int)J.size();
    CoveringCompletion cc(A, J);
    auto comp = cc.report();
    r.complete = comp.complete;
    r.is_covering = comp.is_covering;
    // necessary condition, every k
    r.prop_b_all = true;
    for (int k = 0; k < n; ++k) {
        std::vector<int> others;
        for (int i = 0; i < n; ++i)
            if (i != k) others.push_back(i);
        auto id = detail::distributive_identity(J, others, k, "B");
        r.prop_b_all = r.prop_b_all && id.holds;
        r.prop_b.push_back(id);
    }
    // sufficient condition for each ordering; k < 3 is automatic
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool all = true;
        for (int k = 2; k < n; ++k) {
            std::vector<int> before(perm.begin(), perm.begin() + k);
            auto id = detail::distributive_identity(J, before, perm[k], "A");
            all = all && id.holds;
            r.prop_a.push_back(id);
        }
        r.prop_a_some_ordering = r.prop_a_some_ordering || all;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (n == 3) {
        bool one = false, every = true;
        for (const auto& id : r.prop_b) {
            one = one || id.holds;
            every = every && id.holds;
        }
        r.three_ideal_equivalence = (r.complete == one) && (one == every);
    }
    return r;
}

} // namespace ncglue
