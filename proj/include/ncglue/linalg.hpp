#pragma once

// Exact sparse linear algebra: semi-echelon spans keyed by arbitrary ordered
// keys, with tracked eliminations for kernels and linear solves.

#include "scalar.hpp"

#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace ncglue {

template <class Key, class K, class Order = std::less<Key>>
using SVec = std::map<Key, K, Order>;

template <class Key, class K, class Order>
void axpy(SVec<Key, K, Order>& y, const K& a, const SVec<Key, K, Order>& x) {
    if (Field<K>::is_zero(a)) return;
    for (const auto& [k, c] : x) {
        auto it = y.find(k);
        if (it == y.end()) {
            y.emplace(k, K(a * c));
            continue;
        }
        it->second += a * c;
        if (Field<K>::is_zero(it->second)) y.erase(it);
    }
}

template <class Key, class K, class Order>
SVec<Key, K, Order> scaled(const SVec<Key, K, Order>& x, const K& a) {
    SVec<Key, K, Order> y;
    if (Field<K>::is_zero(a)) return y;
    for (const auto& [k, c] : x) y.emplace(k, K(c * a));
    return y;
}

// Span of sparse vectors in semi-echelon form. The pivot of a row is its
// first key under Order, so Order decides which coordinates get eliminated
// first.
template <class Key, class K, class Order = std::less<Key>>
class SparseSpan {
public:
    using Vec = SVec<Key, K, Order>;

    Vec reduce(Vec v) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto p = pivot_.find(it->first);
            if (p == pivot_.end()) {
                ++it;
                continue;
            }
            Key k = it->first;
            K c = it->second;
            axpy(v, K(-c), rows_[p->second]);
            it = v.upper_bound(k);
        }
        return v;
    }

    // Returns true when v was independent of the current span.
    bool insert(const Vec& v) {
        Vec r = reduce(v);
        if (r.empty()) return false;
        K lead = r.begin()->second;
        if (!(lead == Field<K>::one())) r = scaled(r, K(Field<K>::one() / lead));
        pivot_.emplace(r.begin()->first, rows_.size());
        rows_.push_back(std::move(r));
        return true;
    }

    bool contains(const Vec& v) const { return reduce(v).empty(); }
    size_t dim() const { return rows_.size(); }
    const std::vector<Vec>& rows() const { return rows_; }
    bool is_pivot(const Key& k) const { return pivot_.count(k) > 0; }

    // Fully reduced echelon basis; unique for a given Order.
    std::vector<Vec> rref() const {
        std::vector<size_t> order;
        for (const auto& [k, i] : pivot_) order.push_back(i);
        std::vector<Vec> out;
        // process from the last pivot backwards so later rows are already clean
        std::vector<Vec> clean(rows_.size());
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            Vec v = rows_[*it];
            Key pk = v.begin()->first;
            auto jt = std::next(v.begin());
            while (jt != v.end()) {
                auto p = pivot_.find(jt->first);
                if (p == pivot_.end()) {
                    ++jt;
                    continue;
                }
                Key k = jt->first;
                K c = jt->second;
                axpy(v, K(-c), clean[p->second]);
                jt = v.upper_bound(k);
            }
            (void)pk;
            clean[*it] = std::move(v);
        }
        for (size_t i : order) out.push_back(clean[i]);
        return out;
    }

private:
    std::vector<Vec> rows_;
    std::map<Key, size_t, Order> pivot_;
};

// Gaussian elimination that remembers which inputs each row came from.
template <class Key, class K, class Order = std::less<Key>>
class Eliminator {
public:
    using Vec = SVec<Key, K, Order>;
    using Combo = std::map<int, K>;

    // Adds image v with label id. Returns a kernel combination if v depends
    // on the earlier images.
    std::optional<Combo> add(const Vec& v, int id) {
        Combo combo;
        combo.emplace(id, Field<K>::one());
        Vec r = reduce(v, combo);
        if (r.empty()) return combo;
        K lead = r.begin()->second;
        if (!(lead == Field<K>::one())) {
            K inv = Field<K>::one() / lead;
            r = scaled(r, inv);
            combo = scaled(combo, inv);
        }
        pivot_.emplace(r.begin()->first, rows_.size());
        rows_.push_back(std::move(r));
        combos_.push_back(std::move(combo));
        return std::nullopt;
    }

    // Combination c with sum_i c_i image_i = target, if one exists.
    std::optional<Combo> express(const Vec& target) const {
        Combo combo;
        Vec r = reduce(target, combo);
        if (!r.empty()) return std::nullopt;
        for (auto& [k, c] : combo) c = -c;
        return combo;
    }

    size_t rank() const { return rows_.size(); }

private:
    std::vector<Vec> rows_;
    std::vector<Combo> combos_;
    std::map<Key, size_t, Order> pivot_;

    Vec reduce(Vec v, Combo& combo) const {
        auto it = v.begin();
        while (it != v.end()) {
            auto p = pivot_.find(it->first);
            if (p == pivot_.end()) {
                ++it;
                continue;
            }
            Key k = it->first;
            K c = it->second;
            axpy(v, K(-c), rows_[p->second]);
            axpy(combo, K(-c), combos_[p->second]);
            it = v.upper_bound(k);
        }
        return v;
    }
};

// Kernel of the linear map sending source i to images[i].
template <class Key, class K, class Order>
std::vector<std::map<int, K>> kernel_combos(const std::vector<SVec<Key, K, Order>>& images) {
    Eliminator<Key, K, Order> el;
    std::vector<std::map<int, K>> out;
    for (size_t i = 0; i < images.size(); ++i)
        if (auto c = el.add(images[i], (int)i)) out.push_back(std::move(*c));
    return out;
}

template <class Key, class K, class Order>
SparseSpan<Key, K, Order> span_of(const std::vector<SVec<Key, K, Order>>& vs) {
    SparseSpan<Key, K, Order> s;
    for (const auto& v : vs) s.insert(v);
    return s;
}

template <class Key, class K, class Order>
SparseSpan<Key, K, Order> subspace_sum(const SparseSpan<Key, K, Order>& a, const SparseSpan<Key, K, Order>& b) {
    SparseSpan<Key, K, Order> s = a;
    for (const auto& v : b.rows()) s.insert(v);
    return s;
}

template <class Key, class K, class Order>
SparseSpan<Key, K, Order> subspace_intersection(const SparseSpan<Key, K, Order>& a,
                                                const SparseSpan<Key, K, Order>& b) {
    Eliminator<Key, K, Order> el;
    const auto& ra = a.rows();
    const auto& rb = b.rows();
    SparseSpan<Key, K, Order> out;
    for (size_t i = 0; i < ra.size(); ++i) el.add(ra[i], (int)i);
    for (size_t j = 0; j < rb.size(); ++j) {
        auto c = el.add(rb[j], (int)(ra.size() + j));
        if (!c) continue;
        SVec<Key, K, Order> v;
        for (const auto& [id, coef] : *c)
            if (id < (int)ra.size()) axpy(v, coef, ra[id]);
        out.insert(v);
    }
    return out;
}

template <class Key, class K, class Order>
bool subspace_le(const SparseSpan<Key, K, Order>& a, const SparseSpan<Key, K, Order>& b) {
    for (const auto& v : a.rows())
        if (!b.contains(v)) return false;
    return true;
}

template <class Key, class K, class Order>
bool subspace_eq(const SparseSpan<Key, K, Order>& a, const SparseSpan<Key, K, Order>& b) {
    return a.dim() == b.dim() && subspace_le(a, b);
}

} // namespace ncglue
