#pragma once

// Exact coefficient field: rational functions over Q in s and r, with the
// convention q = s^4 and p = r^4.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncglue {

struct MalformedScalar : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Mono = std::array<int, 2>; // exponents of (s, r)

// Graded order: total degree first, then the s exponent.
struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const {
        int da = a[0] + a[1], db = b[0] + b[1];
        if (da != db) return da < db;
        return a[0] < b[0];
    }
};

namespace detail {

// Dense univariate polynomial over Q, index = degree.
using UPoly = std::vector<mpq_class>;

inline void trim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline UPoly uadd(const UPoly& a, const UPoly& b) {
    UPoly c(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    trim(c);
    return c;
}

inline UPoly usub(const UPoly& a, const UPoly& b) {
    UPoly c(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    trim(c);
    return c;
}

inline UPoly umul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    trim(c);
    return c;
}

inline std::pair<UPoly, UPoly> udivmod(UPoly a, const UPoly& b) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    UPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    while (!a.empty() && a.size() >= b.size()) {
        size_t shift = a.size() - b.size();
        mpq_class c = a.back() / b.back();
        q[shift] = c;
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

inline UPoly umonic(UPoly a) {
    if (a.empty()) return a;
    mpq_class lc = a.back();
    for (auto& c : a) c /= lc;
    return a;
}

// Scale to coprime integer coefficients with positive leading coefficient.
inline UPoly uint_primitive(UPoly a) {
    trim(a);
    if (a.empty()) return a;
    mpz_class l = 1, g = 0;
    for (const auto& c : a)
        if (c != 0) l = lcm(l, mpz_class(c.get_den()));
    for (auto& c : a) {
        c *= l;
        if (c != 0) g = gcd(g, mpz_class(c.get_num()));
    }
    if (a.back() < 0) g = -g;
    for (auto& c : a) c /= g;
    return a;
}

// Pseudo-remainder; stays in Z[s] for integer inputs.
inline UPoly uprem(UPoly a, const UPoly& b) {
    const mpq_class& lb = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        size_t shift = a.size() - b.size();
        mpq_class la = a.back();
        for (auto& c : a) c *= lb;
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] -= la * b[j];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline UPoly ugcd(UPoly a, UPoly b) {
    a = uint_primitive(std::move(a));
    b = uint_primitive(std::move(b));
    if (a.empty()) return umonic(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        UPoly r = uint_primitive(uprem(a, b));
        a = std::move(b);
        b = std::move(r);
    }
    return umonic(a);
}

// Polynomial in r with coefficients in Q[s]; index = r degree.
using RPoly = std::vector<UPoly>;

inline void rtrim(RPoly& a) {
    while (!a.empty() && a.back().empty()) a.pop_back();
}

inline UPoly rcontent(const RPoly& a) {
    UPoly g;
    for (const auto& c : a) {
        if (c.empty()) continue;
        g = g.empty() ? umonic(c) : ugcd(g, c);
        if (g.size() == 1) break;
    }
    return g;
}

inline RPoly rdiv_coeffs(const RPoly& a, const UPoly& c) {
    RPoly out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty()) continue;
        auto [q, rem] = udivmod(a[i], c);
        if (!rem.empty()) throw std::logic_error("inexact coefficient division");
        out[i] = std::move(q);
    }
    return out;
}

// Primitive part with integer coefficients.
inline RPoly rprimitive(const RPoly& a) {
    UPoly c = rcontent(a);
    if (c.empty()) return a;
    RPoly out = rdiv_coeffs(a, c);
    mpz_class l = 1, g = 0;
    for (const auto& u : out)
        for (const auto& x : u)
            if (x != 0) l = lcm(l, mpz_class(x.get_den()));
    for (auto& u : out)
        for (auto& x : u) {
            x *= l;
            if (x != 0) g = gcd(g, mpz_class(x.get_num()));
        }
    if (g != 0 && g != 1)
        for (auto& u : out)
            for (auto& x : u) x /= g;
    return out;
}

// Pseudo-remainder of a by b in (Q[s])[r].
inline RPoly rprem(RPoly a, const RPoly& b) {
    const UPoly& lb = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        size_t shift = a.size() - b.size();
        UPoly la = a.back();
        for (auto& c : a) c = umul(c, lb);
        for (size_t j = 0; j < b.size(); ++j) a[shift + j] = usub(a[shift + j], umul(la, b[j]));
        a.pop_back();
        rtrim(a);
    }
    return a;
}

inline RPoly rgcd(RPoly a, RPoly b) {
    rtrim(a);
    rtrim(b);
    if (a.empty()) return b;
    if (b.empty()) return a;
    UPoly c = ugcd(rcontent(a), rcontent(b));
    a = rprimitive(a);
    b = rprimitive(b);
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        RPoly r = rprem(a, b);
        a = std::move(b);
        b = r.empty() ? r : rprimitive(r);
    }
    for (auto& x : a) x = umul(x, c);
    return a;
}

} // namespace detail

class Poly {
public:
    using Terms = std::map<Mono, mpq_class, MonoLess>;

    Poly() = default;
    Poly(long c) {
        if (c != 0) t_[{0, 0}] = c;
    }
    Poly(const mpq_class& c) {
        if (c != 0) t_[{0, 0}] = c;
    }
    static Poly monomial(Mono m, const mpq_class& c = 1) {
        Poly p;
        if (c != 0) p.t_[m] = c;
        return p;
    }

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_one() const { return t_.size() == 1 && t_.begin()->first == Mono{0, 0} && t_.begin()->second == 1; }
    bool is_monomial() const { return t_.size() == 1; }
    bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == Mono{0, 0}); }
    const mpq_class& lead_coeff() const { return t_.rbegin()->second; }
    Mono lead_mono() const { return t_.rbegin()->first; }
    mpq_class constant_term() const {
        auto it = t_.find({0, 0});
        return it == t_.end() ? mpq_class(0) : it->second;
    }

    // Smallest exponent of each variable over all terms.
    Mono min_exponents() const {
        Mono m{1 << 30, 1 << 30};
        for (const auto& [k, c] : t_) {
            m[0] = std::min(m[0], k[0]);
            m[1] = std::min(m[1], k[1]);
        }
        return m;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.t_ == b.t_; }

    Poly operator-() const {
        Poly p = *this;
        for (auto& [k, c] : p.t_) c = -c;
        return p;
    }
    Poly& operator+=(const Poly& o) {
        for (const auto& [k, c] : o.t_) {
            auto& slot = t_[k];
            slot += c;
            if (slot == 0) t_.erase(k);
        }
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [k, c] : o.t_) {
            auto& slot = t_[k];
            slot -= c;
            if (slot == 0) t_.erase(k);
        }
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly p;
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_) {
                Mono k{ka[0] + kb[0], ka[1] + kb[1]};
                auto& slot = p.t_[k];
                slot += ca * cb;
                if (slot == 0) p.t_.erase(k);
            }
        return p;
    }
    Poly scaled(const mpq_class& c) const {
        if (c == 0) return {};
        Poly p = *this;
        for (auto& [k, v] : p.t_) v *= c;
        return p;
    }
    Poly shifted_down(Mono m) const {
        Poly p;
        for (const auto& [k, c] : t_) p.t_[{k[0] - m[0], k[1] - m[1]}] = c;
        return p;
    }

    template <class T>
    T eval_as(const T& s, const T& r) const {
        T acc = 0;
        for (const auto& [k, c] : t_) {
            T term = T(c.get_d());
            for (int i = 0; i < k[0]; ++i) term *= s;
            for (int i = 0; i < k[1]; ++i) term *= r;
            acc += term;
        }
        return acc;
    }
    double abs_sum(double s, double r) const {
        double acc = 0;
        for (const auto& [k, c] : t_) acc += std::abs(c.get_d() * std::pow(s, k[0]) * std::pow(r, k[1]));
        return acc;
    }
    mpq_class eval_exact(const mpq_class& s, const mpq_class& r) const {
        mpq_class acc = 0;
        for (const auto& [k, c] : t_) {
            mpq_class term = c;
            for (int i = 0; i < k[0]; ++i) term *= s;
            for (int i = 0; i < k[1]; ++i) term *= r;
            acc += term;
        }
        return acc;
    }

    detail::RPoly to_rpoly() const {
        detail::RPoly a;
        for (const auto& [k, c] : t_) {
            if ((int)a.size() <= k[1]) a.resize(k[1] + 1);
            auto& u = a[k[1]];
            if ((int)u.size() <= k[0]) u.resize(k[0] + 1, 0);
            u[k[0]] += c;
        }
        for (auto& u : a) detail::trim(u);
        detail::rtrim(a);
        return a;
    }
    static Poly from_rpoly(const detail::RPoly& a) {
        Poly p;
        for (size_t j = 0; j < a.size(); ++j)
            for (size_t i = 0; i < a[j].size(); ++i)
                if (a[j][i] != 0) p.t_[{(int)i, (int)j}] = a[j][i];
        return p;
    }

private:
    Terms t_;
};

inline Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() || b.is_constant()) return Poly(1);
    if (a.is_monomial() || b.is_monomial()) {
        Mono ma = a.min_exponents(), mb = b.min_exponents();
        return Poly::monomial({std::min(ma[0], mb[0]), std::min(ma[1], mb[1])});
    }
    // Pull out monomial content first; it keeps the PRS small.
    Mono ma = a.min_exponents(), mb = b.min_exponents();
    Mono m{std::min(ma[0], mb[0]), std::min(ma[1], mb[1])};
    auto g = detail::rgcd(a.shifted_down(ma).to_rpoly(), b.shifted_down(mb).to_rpoly());
    return Poly::from_rpoly(g) * Poly::monomial(m);
}

// Exact division; throws if b does not divide a.
inline Poly poly_div_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    if (b.is_monomial()) {
        Mono m = b.lead_mono();
        mpq_class c = b.lead_coeff();
        Poly out;
        for (const auto& [k, v] : a.terms()) {
            if (k[0] < m[0] || k[1] < m[1]) throw std::logic_error("inexact monomial division");
            out += Poly::monomial({k[0] - m[0], k[1] - m[1]}, v / c);
        }
        return out;
    }
    auto A = a.to_rpoly();
    auto B = b.to_rpoly();
    detail::RPoly Q;
    if (A.size() >= B.size()) Q.resize(A.size() - B.size() + 1);
    while (!A.empty() && A.size() >= B.size()) {
        size_t shift = A.size() - B.size();
        auto [c, rem] = detail::udivmod(A.back(), B.back());
        if (!rem.empty()) throw std::logic_error("inexact polynomial division");
        Q[shift] = c;
        for (size_t j = 0; j < B.size(); ++j) A[shift + j] = detail::usub(A[shift + j], detail::umul(c, B[j]));
        A.pop_back();
        detail::rtrim(A);
    }
    if (!A.empty()) throw std::logic_error("inexact polynomial division");
    return Poly::from_rpoly(Q);
}

struct RationalPoint {
    mpq_class s = 1, r = 1;
};

class Scalar {
public:
    Scalar() : num_(0), den_(1) {}
    Scalar(long c) : num_(c), den_(1) {}
    Scalar(const mpq_class& c) : num_(c), den_(1) {}
    Scalar(Poly n) : num_(std::move(n)), den_(1) {}
    Scalar(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    static Scalar s() { return Scalar(Poly::monomial({1, 0})); }
    static Scalar r() { return Scalar(Poly::monomial({0, 1})); }
    static Scalar q() { return Scalar(Poly::monomial({4, 0})); }
    static Scalar p() { return Scalar(Poly::monomial({0, 4})); }
    // q^(k/4) and p^(k/4), k may be negative.
    static Scalar q_pow4(int k) {
        return k >= 0 ? Scalar(Poly::monomial({k, 0})) : Scalar(Poly(1), Poly::monomial({-k, 0}));
    }
    static Scalar p_pow4(int k) {
        return k >= 0 ? Scalar(Poly::monomial({0, k})) : Scalar(Poly(1), Poly::monomial({0, -k}));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    mpq_class rational_value() const { return num_.constant_term() / den_.constant_term(); }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar operator-() const {
        Scalar x = *this;
        x.num_ = -x.num_;
        return x;
    }
    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) {
            if (a.den_.is_one()) return raw(a.num_ + b.num_, a.den_);
            return Scalar(a.num_ + b.num_, a.den_);
        }
        if (b.den_.is_one()) return raw(a.num_ + b.num_ * a.den_, a.den_);
        if (a.den_.is_one()) return raw(a.num_ * b.den_ + b.num_, b.den_);
        return Scalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_zero() || b.is_zero()) return Scalar();
        if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ * b.num_, Poly(1));
        if (a.is_rational()) return raw(b.num_.scaled(a.rational_value()), b.den_);
        if (b.is_rational()) return raw(a.num_.scaled(b.rational_value()), a.den_);
        Poly g1 = poly_gcd(a.num_, b.den_);
        Poly g2 = poly_gcd(b.num_, a.den_);
        Poly n = poly_div_exact(a.num_, g1) * poly_div_exact(b.num_, g2);
        Poly d = poly_div_exact(a.den_, g2) * poly_div_exact(b.den_, g1);
        return monic_den(std::move(n), std::move(d));
    }
    Scalar inverse() const {
        if (is_zero()) throw MalformedScalar("inverse of zero scalar");
        return monic_den(den_, num_);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar pow(int k) const {
        if (k < 0) return inverse().pow(-k);
        Scalar acc(1), base = *this;
        while (k) {
            if (k & 1) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }

    // Value at real s, r (so q = s^4, p = r^4).
    std::complex<double> evaluate_sr(double s, double r) const {
        double d = den_.eval_as<double>(s, r);
        double scale = den_.abs_sum(s, r);
        if (d == 0.0 || std::abs(d) <= 1e-13 * scale) throw EvaluationError("denominator vanishes at evaluation point");
        return {num_.eval_as<double>(s, r) / d, 0.0};
    }
    std::complex<double> evaluate(double q, double p = 1.0) const {
        if (!(q > 0) || !(p > 0)) throw EvaluationError("parameters must be positive");
        return evaluate_sr(std::pow(q, 0.25), std::pow(p, 0.25));
    }
    mpq_class specialize(const RationalPoint& pt) const {
        mpq_class d = den_.eval_exact(pt.s, pt.r);
        if (d == 0) throw EvaluationError("denominator vanishes at specialization point");
        return num_.eval_exact(pt.s, pt.r) / d;
    }

    std::string to_string() const;

private:
    Poly num_, den_;

    static Scalar raw(Poly n, Poly d) {
        Scalar x;
        x.num_ = std::move(n);
        x.den_ = std::move(d);
        if (x.num_.is_zero()) x.den_ = Poly(1);
        return x;
    }
    static Scalar monic_den(Poly n, Poly d) {
        if (d.is_zero()) throw MalformedScalar("zero denominator");
        if (n.is_zero()) return Scalar();
        mpq_class lc = d.lead_coeff();
        if (lc != 1) {
            mpq_class inv = 1 / lc;
            n = n.scaled(inv);
            d = d.scaled(inv);
        }
        return raw(std::move(n), std::move(d));
    }
    void normalize() {
        if (den_.is_zero()) throw MalformedScalar("zero denominator");
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        Poly g = poly_gcd(num_, den_);
        if (!g.is_constant()) {
            num_ = poly_div_exact(num_, g);
            den_ = poly_div_exact(den_, g);
        }
        *this = monic_den(std::move(num_), std::move(den_));
    }
};

// Canonical re-normalization; a no-op on values built through the public API.
inline Scalar scalar_simplify(const Scalar& a) { return Scalar(a.num(), a.den()); }

namespace detail {

inline std::string q_power(const char* name, int k) {
    // k counts quarter powers
    if (k == 0) return "";
    int g = std::gcd(std::abs(k), 4);
    int n = k / g, d = 4 / g;
    std::string s = name;
    if (d == 1 && n == 1) return s;
    if (d == 1 && n > 0) return s + "^" + std::to_string(n);
    if (d == 1) return s + "^(" + std::to_string(n) + ")";
    return s + "^(" + std::to_string(n) + "/" + std::to_string(d) + ")";
}

inline std::string mono_string(const Mono& m) {
    std::string a = q_power("q", m[0]);
    std::string b = q_power("p", m[1]);
    if (a.empty()) return b;
    if (b.empty()) return a;
    return a + " " + b;
}

inline std::string rational_string(const mpq_class& c) { return c.get_str(); }

// Terms in ascending order, juxtaposition for coefficient times monomial.
inline std::string poly_string(const Poly& p, Mono shift = {0, 0}) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : p.terms()) {
        Mono m{k[0] - shift[0], k[1] - shift[1]};
        mpq_class a = abs(c);
        bool neg = c < 0;
        std::string ms = mono_string(m);
        std::string body;
        if (ms.empty()) body = rational_string(a);
        else if (a == 1) body = ms;
        else body = rational_string(a) + " " + ms;
        if (first) out += (neg ? "-" : "") + body;
        else out += (neg ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

} // namespace detail

inline std::string Scalar::to_string() const {
    if (den_.is_one()) return detail::poly_string(num_);
    if (den_.is_monomial()) {
        // fold a monomial denominator into negative exponents
        Mono m = den_.lead_mono();
        Poly n = num_.scaled(1 / den_.lead_coeff());
        return detail::poly_string(n, m);
    }
    std::string n = detail::poly_string(num_);
    std::string d = detail::poly_string(den_);
    if (num_.terms().size() > 1) n = "(" + n + ")";
    return n + "/(" + d + ")";
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& a) { return os << a.to_string(); }

// Field adapters so the rest of the library can run over either exact
// rational functions or plain rationals (a specialization of the parameters).
template <class K>
struct Field;

template <>
struct Field<Scalar> {
    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static bool is_zero(const Scalar& a) { return a.is_zero(); }
    static std::string str(const Scalar& a) { return a.to_string(); }
    static Scalar from_scalar(const Scalar& a, const RationalPoint*) { return a; }
};

template <>
struct Field<mpq_class> {
    static mpq_class zero() { return 0; }
    static mpq_class one() { return 1; }
    static bool is_zero(const mpq_class& a) { return a == 0; }
    static std::string str(const mpq_class& a) { return a.get_str(); }
    static mpq_class from_scalar(const Scalar& a, const RationalPoint* pt) {
        if (a.is_rational()) return a.rational_value();
        if (!pt) throw EvaluationError("symbolic scalar needs a specialization point");
        return a.specialize(*pt);
    }
};

using Rational = mpq_class;

} // namespace ncglue
