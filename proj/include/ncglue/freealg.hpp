#pragma once

// Words and linear combinations in a free *-algebra on named generators.
// Differential letters d(x) are ordinary letters of form degree 1.

#include "scalar.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncglue {

struct IncompatibleAlgebra : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Generator {
    std::string name;
    int degree = 0;
    int star = -1;
    int base = -1; // for d-letters: the generator being differentiated
};

class Alphabet {
public:
    // pairs (name, star name); a self-adjoint generator names itself.
    static std::shared_ptr<const Alphabet> make(const std::vector<std::pair<std::string, std::string>>& gens,
                                                bool with_differentials = false) {
        auto a = std::make_shared<Alphabet>();
        for (const auto& [n, s] : gens) a->add(n, 0);
        for (size_t i = 0; i < gens.size(); ++i) {
            auto it = a->index_.find(gens[i].second);
            if (it == a->index_.end()) throw std::invalid_argument("unknown star partner " + gens[i].second);
            a->gens_[i].star = it->second;
        }
        for (size_t i = 0; i < gens.size(); ++i)
            if (a->gens_[a->gens_[i].star].star != (int)i)
                throw std::invalid_argument("star is not an involution at " + gens[i].first);
        if (with_differentials) {
            size_t n = gens.size();
            for (size_t i = 0; i < n; ++i) {
                int k = a->add("d(" + gens[i].first + ")", 1);
                a->gens_[k].base = (int)i;
            }
            for (size_t i = 0; i < n; ++i) a->gens_[n + i].star = (int)n + a->gens_[i].star;
        }
        return a;
    }

    int size() const { return (int)gens_.size(); }
    const Generator& operator[](int i) const { return gens_[i]; }
    int find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? -1 : it->second;
    }
    int at(const std::string& name) const {
        int i = find(name);
        if (i < 0) throw std::invalid_argument("unknown generator " + name);
        return i;
    }
    bool has_differentials() const { return n_base_ < (int)gens_.size(); }
    int base_size() const { return n_base_; }
    // index of d(g), or -1
    int d_of(int g) const {
        if (!has_differentials() || g >= n_base_) return -1;
        return n_base_ + g;
    }

    bool same_as(const Alphabet& o) const {
        if (this == &o) return true;
        if (gens_.size() != o.gens_.size()) return false;
        for (size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name != o.gens_[i].name || gens_[i].degree != o.gens_[i].degree ||
                gens_[i].star != o.gens_[i].star)
                return false;
        return true;
    }

    std::vector<std::pair<std::string, std::string>> base_pairs() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (int i = 0; i < n_base_; ++i) out.push_back({gens_[i].name, gens_[gens_[i].star].name});
        return out;
    }

private:
    std::vector<Generator> gens_;
    std::unordered_map<std::string, int> index_;
    int n_base_ = 0;

    int add(const std::string& name, int degree) {
        if (index_.count(name)) throw std::invalid_argument("duplicate generator " + name);
        int k = (int)gens_.size();
        gens_.push_back({name, degree, -1, -1});
        index_[name] = k;
        if (degree == 0) n_base_ = k + 1;
        return k;
    }
};

using AlphabetPtr = std::shared_ptr<const Alphabet>;

using Letter = std::uint16_t;
using Word = std::vector<Letter>;

// Length first, then lexicographic by generator index.
struct DegLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

inline Word concat(const Word& a, const Word& b) {
    Word w;
    w.reserve(a.size() + b.size());
    w.insert(w.end(), a.begin(), a.end());
    w.insert(w.end(), b.begin(), b.end());
    return w;
}

inline int form_degree(const Alphabet& A, const Word& w) {
    int d = 0;
    for (Letter l : w) d += A[l].degree;
    return d;
}

inline std::string word_string(const Alphabet& A, const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += A[w[i]].name;
    }
    return s;
}

template <class K = Scalar>
class Element {
public:
    using F = Field<K>;
    using Terms = std::map<Word, K, DegLex>;

    Element() = default;
    explicit Element(AlphabetPtr A) : A_(std::move(A)) {}
    Element(AlphabetPtr A, const K& c) : A_(std::move(A)) {
        if (!F::is_zero(c)) t_[Word{}] = c;
    }

    static Element unit(AlphabetPtr A) { return Element(std::move(A), F::one()); }
    static Element word(AlphabetPtr A, Word w, const K& c = Field<K>::one()) {
        Element e(std::move(A));
        if (!F::is_zero(c)) e.t_[std::move(w)] = c;
        return e;
    }
    static Element gen(AlphabetPtr A, const std::string& name) {
        int i = A->at(name);
        return word(std::move(A), Word{(Letter)i});
    }

    const AlphabetPtr& alphabet() const { return A_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    K coeff(const Word& w) const {
        auto it = t_.find(w);
        return it == t_.end() ? F::zero() : it->second;
    }

    void add_term(const Word& w, const K& c) {
        if (F::is_zero(c)) return;
        auto it = t_.find(w);
        if (it == t_.end()) {
            t_.emplace(w, c);
            return;
        }
        it->second += c;
        if (F::is_zero(it->second)) t_.erase(it);
    }

    Element& operator+=(const Element& o) {
        check(o);
        if (!A_) A_ = o.A_;
        for (const auto& [w, c] : o.t_) add_term(w, c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        check(o);
        if (!A_) A_ = o.A_;
        for (const auto& [w, c] : o.t_) add_term(w, -c);
        return *this;
    }
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    Element operator-() const {
        Element e = *this;
        for (auto& [w, c] : e.t_) c = -c;
        return e;
    }
    Element scaled(const K& k) const {
        Element e(A_);
        if (F::is_zero(k)) return e;
        for (const auto& [w, c] : t_) e.t_.emplace(w, c * k);
        return e;
    }
    friend Element operator*(const K& k, const Element& e) { return e.scaled(k); }

    // Concatenation product in the free algebra.
    friend Element operator*(const Element& a, const Element& b) {
        a.check(b);
        Element e(a.A_ ? a.A_ : b.A_);
        for (const auto& [wa, ca] : a.t_)
            for (const auto& [wb, cb] : b.t_) e.add_term(concat(wa, wb), ca * cb);
        return e;
    }

    friend bool operator==(const Element& a, const Element& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

    // Graded antimultiplicative involution fixing scalars; on form degree m the
    // sign (-1)^{m(m-1)/2} comes from reversing m odd letters.
    Element star() const {
        Element e(A_);
        for (const auto& [w, c] : t_) {
            Word v(w.rbegin(), w.rend());
            int m = 0;
            for (auto& l : v) {
                m += (*A_)[l].degree;
                l = (Letter)(*A_)[l].star;
            }
            e.add_term(v, ((m * (m - 1) / 2) % 2) ? K(-c) : c);
        }
        return e;
    }

    // Homogeneous component of the given form degree.
    Element form_part(int n) const {
        Element e(A_);
        for (const auto& [w, c] : t_)
            if (form_degree(*A_, w) == n) e.t_.emplace(w, c);
        return e;
    }
    int max_length() const {
        int m = 0;
        for (const auto& [w, c] : t_) m = std::max(m, (int)w.size());
        return m;
    }
    int max_form_degree() const {
        int m = 0;
        for (const auto& [w, c] : t_) m = std::max(m, form_degree(*A_, w));
        return m;
    }

    template <class K2, class Fn>
    Element<K2> map_coeffs(Fn f) const {
        Element<K2> e(A_);
        for (const auto& [w, c] : t_) e.add_term(w, f(c));
        return e;
    }

    std::string to_string() const {
        if (t_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [w, c] : t_) {
            std::string cs = F::str(c);
            auto has_op = [](const std::string& x) {
                return x.find(" + ") != std::string::npos || x.find(" - ") != std::string::npos;
            };
            bool neg = !cs.empty() && cs[0] == '-' && !has_op(cs);
            if (neg) cs = cs.substr(1);
            bool compound = has_op(cs) || cs.find(")/(") != std::string::npos;
            std::string ws = w.empty() ? "" : word_string(*A_, w);
            std::string body;
            if (ws.empty()) body = compound ? "(" + cs + ")" : cs;
            else if (cs == "1") body = ws;
            else body = (compound ? "(" + cs + ")" : cs) + " " + ws;
            if (first) out += (neg ? "-" : "") + body;
            else out += (neg ? " - " : " + ") + body;
            first = false;
        }
        return out;
    }

private:
    AlphabetPtr A_;
    Terms t_;

    void check(const Element& o) const {
        if (A_ && o.A_ && !A_->same_as(*o.A_)) throw IncompatibleAlgebra("elements over different alphabets");
    }
};

template <class K>
std::ostream& operator<<(std::ostream& os, const Element<K>& e) {
    return os << e.to_string();
}

template <class K>
Element<K> multiply_elements(const Element<K>& a, const Element<K>& b) {
    return a * b;
}
template <class K>
Element<K> star_element(const Element<K>& a) {
    return a.star();
}

template <class K>
Element<K> specialize(const Element<Scalar>& e, const RationalPoint* pt) {
    return e.template map_coeffs<K>([&](const Scalar& c) { return Field<K>::from_scalar(c, pt); });
}

} // namespace ncglue
