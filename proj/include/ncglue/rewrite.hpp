#pragma once

// Oriented rewriting for presented algebras: orientation, normal forms,
// critical-pair confluence evidence and basis enumeration.

#include "freealg.hpp"

#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncglue {

struct OrientationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReductionBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WordHash {
    size_t operator()(const Word& w) const {
        size_t h = w.size();
        for (Letter l : w) h = h * 1000003u ^ l;
        return h;
    }
};

struct Presentation {
    std::string name;
    AlphabetPtr alphabet;
    std::vector<Element<Scalar>> relations; // each relation reads "= 0"
    bool star_closed = true;

    Presentation() = default;
    Presentation(std::string n, AlphabetPtr A, std::vector<Element<Scalar>> rels, bool close_star = true)
        : name(std::move(n)), alphabet(std::move(A)), relations(std::move(rels)), star_closed(close_star) {
        if (close_star) {
            size_t n0 = relations.size();
            for (size_t i = 0; i < n0; ++i) relations.push_back(relations[i].star());
        }
    }
};

enum class Strategy { DegLex, TwoPhase };

// Multiplicity of the most frequent letter; used to pick leading words.
inline int max_multiplicity(const Word& w) {
    std::unordered_map<Letter, int> c;
    int m = 0;
    for (Letter l : w) m = std::max(m, ++c[l]);
    return m;
}

// Orientation order: higher letter multiplicity first, then degree-lex.
struct OrientLess {
    bool operator()(const Word& a, const Word& b) const {
        int ma = max_multiplicity(a), mb = max_multiplicity(b);
        if (ma != mb) return ma < mb;
        return DegLex{}(a, b);
    }
};

template <class K = Scalar>
class RewriteSystem {
public:
    struct Rule {
        Word lhs;
        Element<K> rhs;
        int phase = 1;
    };

    RewriteSystem() = default;
    RewriteSystem(AlphabetPtr A, Strategy st = Strategy::TwoPhase) : A_(std::move(A)), strategy_(st) {}

    const AlphabetPtr& alphabet() const { return A_; }
    const std::vector<Rule>& rules() const { return rules_; }
    Strategy strategy() const { return strategy_; }
    void set_budget(long b) { budget_ = b; }
    long budget() const { return budget_; }

    void add_rule(Word lhs, Element<K> rhs, int phase) {
        if (rhs.terms().count(lhs)) throw OrientationError("rule right side contains its left side");
        if (index_.count(lhs)) return;
        max_lhs_ = std::max(max_lhs_, lhs.size());
        index_.emplace(lhs, rules_.size());
        rules_.push_back({std::move(lhs), std::move(rhs), phase});
        std::lock_guard<std::mutex> g(*mu_);
        cache_.clear();
    }

    bool is_canonical(const Word& w) const {
        for (size_t i = 0; i < w.size(); ++i)
            for (size_t L = 1; L <= max_lhs_ && i + L <= w.size(); ++L)
                if (index_.count(Word(w.begin() + i, w.begin() + i + L))) return false;
        return true;
    }

    Element<K> normal_form(const Element<K>& e) const {
        std::lock_guard<std::mutex> g(*mu_);
        steps_ = 0;
        Element<K> out(A_);
        for (const auto& [w, c] : e.terms()) {
            const Element<K>& n = nf_word(w);
            for (const auto& [v, d] : n.terms()) out.add_term(v, K(c * d));
        }
        return out;
    }
    Element<K> normal_form_word(const Word& w) const {
        std::lock_guard<std::mutex> g(*mu_);
        steps_ = 0;
        return nf_word(w);
    }
    // normal form of the product of two elements
    Element<K> mul(const Element<K>& a, const Element<K>& b) const { return normal_form(a * b); }

    template <class K2>
    RewriteSystem<K2> specialize(const RationalPoint* pt) const {
        RewriteSystem<K2> rs(A_, strategy_);
        rs.set_budget(budget_);
        for (const auto& r : rules_) rs.add_rule(r.lhs, ncglue::specialize<K2>(r.rhs, pt), r.phase);
        return rs;
    }

    std::string rule_string(const Rule& r) const { return word_string(*A_, r.lhs) + " -> " + r.rhs.to_string(); }

private:
    AlphabetPtr A_;
    Strategy strategy_ = Strategy::TwoPhase;
    std::vector<Rule> rules_;
    std::unordered_map<Word, size_t, WordHash> index_;
    size_t max_lhs_ = 0;
    long budget_ = 1000000;
    std::shared_ptr<std::mutex> mu_ = std::make_shared<std::mutex>();
    mutable std::unordered_map<Word, Element<K>, WordHash> cache_;
    mutable long steps_ = 0;

    // leftmost redex among rules of the given phase: (position, rule index)
    std::pair<long, long> find_redex(const Word& w, int phase) const {
        for (size_t i = 0; i < w.size(); ++i)
            for (size_t L = 1; L <= max_lhs_ && i + L <= w.size(); ++L) {
                auto it = index_.find(Word(w.begin() + i, w.begin() + i + L));
                if (it != index_.end() && rules_[it->second].phase == phase) return {(long)i, (long)it->second};
            }
        return {-1, -1};
    }

    const Element<K>& nf_word(const Word& w) const {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        auto [pos, ri] = find_redex(w, 1);
        if (pos < 0) std::tie(pos, ri) = find_redex(w, 2);
        Element<K> out(A_);
        if (pos < 0) {
            out.add_term(w, Field<K>::one());
        } else {
            if (++steps_ > budget_) throw ReductionBudgetExceeded("reduction step budget exceeded");
            const Rule& r = rules_[ri];
            Word pre(w.begin(), w.begin() + pos);
            Word suf(w.begin() + pos + r.lhs.size(), w.end());
            for (const auto& [v, c] : r.rhs.terms()) {
                Word nw = concat(concat(pre, v), suf);
                const Element<K>& sub = nf_word(nw);
                for (const auto& [u, d] : sub.terms()) out.add_term(u, K(c * d));
            }
        }
        return cache_.emplace(w, std::move(out)).first->second;
    }
};

// Reduce each relation by the rules found so far and orient it by its
// leading word under OrientLess. Rules whose right side is degree-lex
// smaller run in phase 1; the others (such as f0 f0 on the sphere) in phase 2.
inline RewriteSystem<Scalar> orient_presentation(const Presentation& p, Strategy st = Strategy::TwoPhase) {
    RewriteSystem<Scalar> rs(p.alphabet, st);
    for (const auto& rel : p.relations) {
        Element<Scalar> r = rs.normal_form(rel);
        if (r.is_zero()) continue;
        Word lead;
        bool first = true;
        for (const auto& [w, c] : r.terms())
            if (first || OrientLess{}(lead, w)) {
                lead = w;
                first = false;
            }
        if (lead.empty()) throw OrientationError("relation reduces to a nonzero scalar: " + rel.to_string());
        Scalar c = r.coeff(lead);
        Element<Scalar> rhs(p.alphabet);
        int phase = 1;
        for (const auto& [w, d] : r.terms()) {
            if (w == lead) continue;
            rhs.add_term(w, -d / c);
            if (!DegLex{}(w, lead)) phase = 2;
        }
        if (phase == 2 && st == Strategy::DegLex)
            throw OrientationError("relation has no degree-lex leading word: " + rel.to_string());
        rs.add_rule(lead, rhs, phase);
    }
    return rs;
}

template <class K>
Element<K> normal_form(const Element<K>& e, const RewriteSystem<K>& rs) {
    return rs.normal_form(e);
}

template <class K>
struct ConfluenceFailure {
    Word word;
    Element<K> left, right;
};

template <class K>
struct ConfluenceReport {
    int overlaps_checked = 0;
    std::vector<ConfluenceFailure<K>> failures;
    bool confluent() const { return failures.empty(); }
};

// All critical pairs (proper overlaps and inclusions) of total length <= D.
template <class K>
ConfluenceReport<K> confluence_check(const RewriteSystem<K>& rs, int D) {
    ConfluenceReport<K> rep;
    const auto& R = rs.rules();
    const auto& A = rs.alphabet();
    auto apply_at = [&](const Word& w, size_t pos, const typename RewriteSystem<K>::Rule& r) {
        Word pre(w.begin(), w.begin() + pos);
        Word suf(w.begin() + pos + r.lhs.size(), w.end());
        Element<K> e(A);
        for (const auto& [v, c] : r.rhs.terms()) e.add_term(concat(concat(pre, v), suf), c);
        return rs.normal_form(e);
    };
    auto check = [&](const Word& w, size_t pa, const auto& ra, size_t pb, const auto& rb) {
        ++rep.overlaps_checked;
        auto l = apply_at(w, pa, ra);
        auto r = apply_at(w, pb, rb);
        if (!(l == r)) rep.failures.push_back({w, l, r});
    };
    for (size_t a = 0; a < R.size(); ++a)
        for (size_t b = 0; b < R.size(); ++b) {
            const Word& la = R[a].lhs;
            const Word& lb = R[b].lhs;
            for (size_t ov = 1; ov < la.size() && ov < lb.size(); ++ov) {
                if (!std::equal(la.end() - ov, la.end(), lb.begin())) continue;
                Word w = concat(la, Word(lb.begin() + ov, lb.end()));
                if ((int)w.size() > D) continue;
                check(w, 0, R[a], la.size() - ov, R[b]);
            }
            if (a != b && lb.size() < la.size() && (int)la.size() <= D)
                for (size_t i = 0; i + lb.size() <= la.size(); ++i)
                    if (std::equal(lb.begin(), lb.end(), la.begin() + i)) check(la, 0, R[a], i, R[b]);
        }
    return rep;
}

// Irreducible words of length <= D over the degree-0 letters (or all letters),
// in degree-lex order.
template <class K>
std::vector<Word> enumerate_filtered_basis(const RewriteSystem<K>& rs, int D, bool base_letters_only = true) {
    const auto& A = *rs.alphabet();
    int nl = base_letters_only ? A.base_size() : A.size();
    std::vector<Word> out{Word{}};
    std::vector<Word> frontier{Word{}};
    for (int len = 1; len <= D; ++len) {
        std::vector<Word> next;
        for (const auto& w : frontier)
            for (int l = 0; l < nl; ++l) {
                Word v = w;
                v.push_back((Letter)l);
                if (rs.is_canonical(v)) next.push_back(std::move(v));
            }
        std::sort(next.begin(), next.end());
        for (const auto& w : next) out.push_back(w);
        frontier = std::move(next);
    }
    return out;
}

} // namespace ncglue
