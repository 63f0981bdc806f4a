#pragma once

// The .alg presentation format.
//
//   [meta]        name = sphere
//   [params]      q in (0,1)   |   q = 1/2
//   [generators]  f1 degree 0 star fm1      (plus an optional `differentials` line)
//   [relations]   re1: fm1 f1 - q f1 fm1 - (p - q) f0 - (1 - p)
//   [ideals]      J1: x, x - y
//   [morphisms]   pi1 -> disc_p.alg : f1 = x, f0 = x x*, fm1 = x*
//   [action]      E . x = -q^(1/4) x x
//
// Expressions: + and -, juxtaposition or * for products, / by scalars, ^ with
// integer exponents (and quarter exponents on p, q), parentheses, d(...).
// s and r stand for q^(1/4) and p^(1/4).

#include "dga.hpp"
#include "hopf.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace ncglue {

struct ParseError : std::runtime_error {
    enum class Kind { syntax, unknown_generator, star_mismatch, file };
    Kind kind;
    int line, column, token;
    std::string message;

    ParseError(Kind k, std::string msg, int line = 0, int column = 0, int token = 0)
        : std::runtime_error(render(msg, line, column, token)), kind(k), line(line), column(column), token(token),
          message(std::move(msg)) {}

private:
    static std::string render(const std::string& msg, int line, int column, int token) {
        std::string s;
        if (line > 0) s += "line " + std::to_string(line) + ", ";
        if (column > 0) s += "column " + std::to_string(column) + ", ";
        if (token > 0) s += "token " + std::to_string(token) + ", ";
        return s.empty() ? msg : s.substr(0, s.size() - 2) + ": " + msg;
    }
};

struct ParamDecl {
    std::string name; // p or q
    bool formal = true;
    mpq_class lo = 0, hi = 1; // open range for a formal parameter
    mpq_class value = 0;
};

struct GeneratorDecl {
    std::string name;
    int degree = 0;
    std::string star;
};

struct RelationDecl {
    std::string label;
    Element<Scalar> value;
};

struct IdealDecl {
    std::string name;
    std::vector<Element<Scalar>> generators;
};

struct MorphismDecl {
    std::string name, target;
    std::vector<std::pair<std::string, std::string>> images; // generator, expression text
    int line = 0;
    std::vector<Element<Scalar>> resolved; // per base generator, after loading the target
};

struct ActionEntry {
    std::string h, generator;
    Element<Scalar> value;
};

// ---------------------------------------------------------------------------
// Expressions.

class ExpressionParser {
public:
    ExpressionParser(AlphabetPtr A, std::vector<ParamDecl> params) : A_(std::move(A)), params_(std::move(params)) {}

    Element<Scalar> parse(const std::string& text, int line = 0, int col0 = 1) {
        line_ = line;
        col0_ = col0;
        tokenize(text);
        pos_ = 0;
        auto v = expr();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return v;
    }

private:
    struct Tok {
        enum Kind { Num, Ident, Op, End } kind;
        std::string text;
        int col;
    };
    // param: 0 q, 1 p, 2 s, 3 r; -1 otherwise
    struct Val {
        Element<Scalar> e;
        int param = -1;
    };

    AlphabetPtr A_;
    std::vector<ParamDecl> params_;
    std::vector<Tok> toks_;
    size_t pos_ = 0;
    int line_ = 0, col0_ = 1;

    [[noreturn]] void fail(const std::string& msg, ParseError::Kind k = ParseError::Kind::syntax) const {
        const auto& t = toks_[std::min(pos_, toks_.size() - 1)];
        throw ParseError(k, msg, line_, t.col, (int)std::min(pos_, toks_.size() - 1) + 1);
    }

    void tokenize(const std::string& s) {
        toks_.clear();
        size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            int col = col0_ + (int)i;
            if (std::isspace((unsigned char)c)) {
                ++i;
            } else if (std::isdigit((unsigned char)c)) {
                size_t j = i;
                while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
                toks_.push_back({Tok::Num, s.substr(i, j - i), col});
                i = j;
            } else if (std::isalpha((unsigned char)c) || c == '_') {
                size_t j = i;
                while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
                std::string id = s.substr(i, j - i);
                // x* is one token when it names a generator
                while (j < s.size() && s[j] == '*' && A_->find(id + "*") >= 0) {
                    id += "*";
                    ++j;
                }
                toks_.push_back({Tok::Ident, id, col});
                i = j;
            } else if (std::string("+-*/^()").find(c) != std::string::npos) {
                toks_.push_back({Tok::Op, std::string(1, c), col});
                ++i;
            } else {
                throw ParseError(ParseError::Kind::syntax, std::string("unexpected character '") + c + "'", line_, col,
                                 (int)toks_.size() + 1);
            }
        }
        toks_.push_back({Tok::End, "end of input", col0_ + (int)s.size()});
    }

    const Tok& peek() const { return toks_[pos_]; }
    bool is_op(const char* op) const { return peek().kind == Tok::Op && peek().text == op; }
    Element<Scalar> constant(const Scalar& c) const { return Element<Scalar>(A_, c); }

    static std::optional<Scalar> as_scalar(const Element<Scalar>& e) {
        if (e.is_zero()) return Scalar();
        if (e.terms().size() == 1 && e.terms().begin()->first.empty()) return e.terms().begin()->second;
        return std::nullopt;
    }

    Element<Scalar> expr() {
        bool neg = false;
        if (is_op("+") || is_op("-")) {
            neg = peek().text == "-";
            ++pos_;
        }
        Element<Scalar> acc = term().e;
        if (neg) acc = -acc;
        while (is_op("+") || is_op("-")) {
            bool minus = peek().text == "-";
            ++pos_;
            auto t = term().e;
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    bool starts_operand() const {
        return peek().kind == Tok::Num || peek().kind == Tok::Ident || is_op("(");
    }

    Val term() {
        Val acc = power();
        for (;;) {
            if (is_op("*")) {
                ++pos_;
                acc = {acc.e * power().e};
            } else if (is_op("/")) {
                size_t at = ++pos_;
                auto d = as_scalar(power().e);
                if (!d || d->is_zero()) {
                    pos_ = at;
                    fail(d ? "division by zero" : "division by a non-scalar");
                }
                acc = {acc.e.scaled(d->inverse())};
            } else if (starts_operand()) {
                acc = {acc.e * power().e};
            } else {
                return acc;
            }
        }
    }

    Val power() {
        Val base = atom();
        if (!is_op("^")) return base;
        ++pos_;
        mpq_class ex = exponent();
        if (base.param >= 0) {
            const auto& pd = param_decl(base.param);
            if (!pd.formal) {
                if (ex.get_den() != 1) fail("fractional power of a numeric parameter");
                return {constant(Scalar(pd.value).pow((int)ex.get_num().get_si()))};
            }
            mpq_class quarters = ex * (base.param < 2 ? 4 : 1);
            if (quarters.get_den() != 1) fail("exponent is not a multiple of 1/4");
            int k = (int)quarters.get_num().get_si();
            return {constant(base.param % 2 == 0 ? Scalar::q_pow4(k) : Scalar::p_pow4(k))};
        }
        if (ex.get_den() != 1) fail("fractional power of a non-parameter");
        int k = (int)ex.get_num().get_si();
        if (k < 0) {
            auto c = as_scalar(base.e);
            if (!c || c->is_zero()) fail("negative power of a non-scalar");
            return {constant(c->pow(k))};
        }
        Element<Scalar> out = Element<Scalar>::unit(A_);
        for (int i = 0; i < k; ++i) out = out * base.e;
        return {out};
    }

    mpq_class exponent() {
        auto integer = [&]() -> mpq_class {
            bool neg = false;
            if (is_op("-")) {
                neg = true;
                ++pos_;
            }
            if (peek().kind != Tok::Num) fail("expected an integer exponent");
            mpq_class v(peek().text);
            ++pos_;
            return neg ? mpq_class(-v) : v;
        };
        if (!is_op("(")) return integer();
        ++pos_;
        mpq_class v = integer();
        if (is_op("/")) {
            ++pos_;
            mpq_class d = integer();
            if (d == 0) fail("zero denominator in exponent");
            v /= d;
        }
        if (!is_op(")")) fail("expected ')'");
        ++pos_;
        return v;
    }

    const ParamDecl& param_decl(int which) const {
        std::string n = which % 2 == 0 ? "q" : "p";
        for (const auto& p : params_)
            if (p.name == n) return p;
        fail("parameter " + n + " is not declared", ParseError::Kind::unknown_generator);
    }

    Val atom() {
        const Tok& t = peek();
        if (t.kind == Tok::Num) {
            ++pos_;
            return {constant(Scalar(mpq_class(t.text)))};
        }
        if (is_op("(")) {
            ++pos_;
            auto v = expr();
            if (!is_op(")")) fail("expected ')'");
            ++pos_;
            return {v};
        }
        if (t.kind != Tok::Ident) fail(t.kind == Tok::End ? "expected an operand" : "unexpected '" + t.text + "'");
        int g = A_->find(t.text);
        if (g >= 0) {
            ++pos_;
            return {Element<Scalar>::word(A_, Word{(Letter)g})};
        }
        if (t.text == "d" && pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::Op && toks_[pos_ + 1].text == "(") {
            if (!A_->has_differentials()) fail("differentials are not declared");
            pos_ += 2;
            auto v = expr();
            if (!is_op(")")) fail("expected ')'");
            ++pos_;
            return {free_d(v)};
        }
        static const std::map<std::string, int> names = {{"q", 0}, {"p", 1}, {"s", 2}, {"r", 3}};
        auto it = names.find(t.text);
        if (it != names.end()) {
            const auto& pd = param_decl(it->second);
            ++pos_;
            if (!pd.formal) {
                if (it->second >= 2) fail(t.text + " needs a formal parameter");
                return {constant(Scalar(pd.value)), it->second};
            }
            Scalar v = it->second == 0 ? Scalar::q() : it->second == 1 ? Scalar::p() : it->second == 2 ? Scalar::s() : Scalar::r();
            return {constant(v), it->second};
        }
        fail("unknown generator '" + t.text + "'", ParseError::Kind::unknown_generator);
    }
};

inline Element<Scalar> parse_expression(const std::string& text, const AlphabetPtr& A,
                                        const std::vector<ParamDecl>& params = {}) {
    return ExpressionParser(A, params).parse(text);
}

// ---------------------------------------------------------------------------
// Files.

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// top-level comma split, keeping the column of each piece
inline std::vector<std::pair<std::string, int>> split_commas(const std::string& s, int col0) {
    std::vector<std::pair<std::string, int>> out;
    int depth = 0;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i < s.size() && s[i] == '(') ++depth;
        if (i < s.size() && s[i] == ')') --depth;
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            out.push_back({s.substr(start, i - start), col0 + (int)start});
            start = i + 1;
        }
    }
    return out;
}

struct Line {
    int number;
    std::string text;
};

inline bool is_name(const std::string& s) { return std::regex_match(s, std::regex("[A-Za-z_][A-Za-z0-9_]*\\**")); }

} // namespace detail

struct PresentationFile {
    std::string name;
    bool star_closed = true;
    std::vector<ParamDecl> params;
    std::vector<GeneratorDecl> generators; // base generators only
    bool differentials = false;
    AlphabetPtr alphabet;
    std::vector<RelationDecl> relations;
    std::vector<IdealDecl> ideals;
    std::vector<MorphismDecl> morphisms;
    std::vector<ActionEntry> action;

    std::vector<Element<Scalar>> relation_values() const {
        std::vector<Element<Scalar>> out;
        for (const auto& r : relations) out.push_back(r.value);
        return out;
    }
    Presentation presentation() const { return Presentation(name, alphabet, relation_values(), star_closed); }

    // Degree-0 relations define the algebra, the others generate the calculus ideal.
    DGAPresentation calculus(int maxdeg = 3) const {
        if (!differentials) throw std::invalid_argument(name + " declares no differentials");
        std::vector<Element<Scalar>> base, extra;
        for (const auto& r : relations) (r.value.max_form_degree() == 0 ? base : extra).push_back(r.value);
        return make_calculus(name, Presentation(name, alphabet, base, star_closed), extra, maxdeg);
    }

    const IdealDecl& ideal(const std::string& n) const {
        for (const auto& i : ideals)
            if (i.name == n) return i;
        throw std::invalid_argument(this->name + " has no ideal " + n);
    }
    const MorphismDecl& morphism(const std::string& n) const {
        for (const auto& m : morphisms)
            if (m.name == n) return m;
        throw std::invalid_argument(this->name + " has no morphism " + n);
    }
    const ParamDecl* param(const std::string& n) const {
        for (const auto& p : params)
            if (p.name == n) return &p;
        return nullptr;
    }

    // table[g][h] for every base generator g; throws MissingAction on gaps
    std::vector<std::array<Element<Scalar>, 4>> action_table() const {
        if (action.empty()) throw MissingAction(name + " has no action section");
        static const std::map<std::string, int> hs = {{"E", HopfE}, {"F", HopfF}, {"K", HopfK}, {"Ki", HopfKi}};
        std::vector<std::array<Element<Scalar>, 4>> t(alphabet->base_size());
        for (const auto& a : action) t[alphabet->at(a.generator)][hs.at(a.h)] = a.value;
        for (int g = 0; g < alphabet->base_size(); ++g)
            for (const auto& [hn, h] : hs)
                if (!t[g][h].alphabet())
                    throw MissingAction(name + ": no entry for " + hn + " . " + (*alphabet)[g].name);
        return t;
    }
    template <class K = Scalar>
    ModuleAction<K> module_action(const AlphabetPtr& over = nullptr, const RationalPoint* pt = nullptr) const {
        auto t = action_table();
        return ModuleAction<K>(name, over ? over : alphabet, t, pt);
    }
};

inline PresentationFile parse_presentation(const std::string& text) {
    using Kind = ParseError::Kind;
    PresentationFile f;
    std::map<std::string, std::vector<detail::Line>> sections;
    std::map<std::string, int> section_line;
    static const std::set<std::string> known = {"meta", "params", "generators", "relations", "ideals", "morphisms", "action"};
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string t = detail::trim(raw);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ParseError(Kind::syntax, "unterminated section header", ln, 1);
            current = detail::trim(t.substr(1, t.size() - 2));
            if (!known.count(current)) throw ParseError(Kind::syntax, "unknown section [" + current + "]", ln, 1);
            if (section_line.count(current)) throw ParseError(Kind::syntax, "duplicate section [" + current + "]", ln, 1);
            section_line[current] = ln;
            sections[current];
            continue;
        }
        if (current.empty()) throw ParseError(Kind::syntax, "content before the first section", ln, 1);
        sections[current].push_back({ln, raw});
    }
    std::smatch m;

    for (const auto& l : sections["meta"]) {
        if (!std::regex_match(l.text, m, std::regex("\\s*(\\w+)\\s*=\\s*(\\S+)\\s*")))
            throw ParseError(Kind::syntax, "expected key = value", l.number, 1);
        if (m[1] == "name") f.name = m[2];
        else if (m[1] == "star_closed") {
            if (m[2] != "true" && m[2] != "false") throw ParseError(Kind::syntax, "star_closed is true or false", l.number, (int)m.position(2) + 1);
            f.star_closed = m[2] == "true";
        } else
            throw ParseError(Kind::syntax, "unknown key " + m[1].str(), l.number, (int)m.position(1) + 1);
    }

    static const std::regex frac("-?\\d+(/\\d+)?");
    for (const auto& l : sections["params"]) {
        ParamDecl p;
        if (std::regex_match(l.text, m, std::regex("\\s*(\\w+)\\s+in\\s+\\(\\s*(\\S+?)\\s*,\\s*(\\S+?)\\s*\\)\\s*"))) {
            p.name = m[1];
            std::string a = m[2], b = m[3];
            if (!std::regex_match(a, frac) || !std::regex_match(b, frac))
                throw ParseError(Kind::syntax, "range bounds must be rationals", l.number, (int)m.position(2) + 1);
            p.lo = mpq_class(a);
            p.hi = mpq_class(b);
            p.lo.canonicalize();
            p.hi.canonicalize();
            if (p.lo >= p.hi) throw ParseError(Kind::syntax, "empty range", l.number, (int)m.position(2) + 1);
        } else if (std::regex_match(l.text, m, std::regex("\\s*(\\w+)\\s*=\\s*(\\S+)\\s*"))) {
            p.name = m[1];
            std::string v = m[2];
            if (!std::regex_match(v, frac)) throw ParseError(Kind::syntax, "value must be a rational", l.number, (int)m.position(2) + 1);
            p.formal = false;
            p.value = mpq_class(v);
            p.value.canonicalize();
        } else {
            throw ParseError(Kind::syntax, "expected `name in (a,b)` or `name = value`", l.number, 1);
        }
        if (p.name != "p" && p.name != "q")
            throw ParseError(Kind::syntax, "parameters are named p or q", l.number, (int)m.position(1) + 1);
        if (f.param(p.name)) throw ParseError(Kind::syntax, "duplicate parameter " + p.name, l.number, (int)m.position(1) + 1);
        f.params.push_back(p);
    }

    // generators
    std::vector<std::pair<GeneratorDecl, detail::Line>> dgens;
    std::map<std::string, int> gen_line;
    for (const auto& l : sections["generators"]) {
        if (std::regex_match(l.text, std::regex("\\s*differentials\\s*"))) {
            f.differentials = true;
            continue;
        }
        if (!std::regex_match(l.text, m, std::regex("\\s*(\\S+)(?:\\s+degree\\s+(\\d+))?\\s+star\\s+(\\S+)\\s*")))
            throw ParseError(Kind::syntax, "expected `name degree n star partner`", l.number, 1);
        GeneratorDecl g{m[1], m[2].matched ? std::stoi(m[2]) : 0, m[3]};
        if (g.degree > 1) throw ParseError(Kind::syntax, "generators have degree 0 or 1", l.number, (int)m.position(2) + 1);
        if (g.degree == 0) {
            if (!detail::is_name(g.name) || g.name == "d")
                throw ParseError(Kind::syntax, "bad generator name " + g.name, l.number, (int)m.position(1) + 1);
            if (gen_line.count(g.name)) throw ParseError(Kind::syntax, "duplicate generator " + g.name, l.number, (int)m.position(1) + 1);
            gen_line[g.name] = l.number;
            f.generators.push_back(g);
        } else {
            dgens.push_back({g, l});
        }
    }
    if (f.generators.empty()) throw ParseError(Kind::syntax, "no generators declared", section_line.count("generators") ? section_line["generators"] : 0, 1);
    std::map<std::string, std::string> star;
    for (const auto& g : f.generators) star[g.name] = g.star;
    for (const auto& g : f.generators) {
        if (!star.count(g.star))
            throw ParseError(Kind::unknown_generator, "unknown generator '" + g.star + "' as star of " + g.name, gen_line[g.name], 1);
        if (star[g.star] != g.name)
            throw ParseError(Kind::star_mismatch,
                             "star mismatch: " + g.name + "* = " + g.star + " but " + g.star + "* = " + star[g.star],
                             gen_line[g.name], 1);
    }
    if (!dgens.empty()) {
        f.differentials = true;
        std::set<std::string> seen;
        for (const auto& [g, l] : dgens) {
            if (!std::regex_match(g.name, m, std::regex("d\\((.+)\\)")) || !star.count(m[1]))
                throw ParseError(Kind::unknown_generator, "degree-1 generator " + g.name + " is not d of a generator", l.number, 1);
            if (g.star != "d(" + star[m[1]] + ")")
                throw ParseError(Kind::star_mismatch, "star mismatch: " + g.name + "* must be d(" + star[m[1]] + ")", l.number, 1);
            seen.insert(m[1]);
        }
        if (seen.size() != f.generators.size())
            throw ParseError(Kind::syntax, "differentials must be declared for every generator", dgens.front().second.number, 1);
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& g : f.generators) pairs.push_back({g.name, g.star});
    f.alphabet = Alphabet::make(pairs, f.differentials);
    if (f.name.empty()) f.name = "presentation";

    ExpressionParser ep(f.alphabet, f.params);
    auto label_split = [](const std::string& s) -> std::pair<std::string, size_t> {
        std::smatch mm;
        if (std::regex_search(s, mm, std::regex("^\\s*([A-Za-z_]\\w*)\\s*:")) ) return {mm[1], (size_t)mm.length(0)};
        return {"", 0};
    };
    for (const auto& l : sections["relations"]) {
        auto [label, off] = label_split(l.text);
        std::string body = l.text.substr(off);
        auto eq = body.find('=');
        Element<Scalar> v;
        if (eq == std::string::npos) {
            v = ep.parse(body, l.number, (int)off + 1);
        } else {
            auto lhs = ep.parse(body.substr(0, eq), l.number, (int)off + 1);
            v = lhs - ep.parse(body.substr(eq + 1), l.number, (int)(off + eq) + 2);
        }
        f.relations.push_back({label, v});
    }
    for (const auto& l : sections["ideals"]) {
        auto [label, off] = label_split(l.text);
        if (label.empty()) throw ParseError(Kind::syntax, "expected `name: generators`", l.number, 1);
        IdealDecl I{label, {}};
        for (const auto& [piece, col] : detail::split_commas(l.text.substr(off), (int)off + 1))
            I.generators.push_back(ep.parse(piece, l.number, col));
        f.ideals.push_back(I);
    }
    for (const auto& l : sections["morphisms"]) {
        if (!std::regex_match(l.text, m, std::regex("\\s*(\\w+)\\s*->\\s*(\\S+)\\s*:(.*)")))
            throw ParseError(Kind::syntax, "expected `name -> target.alg : g = expr, ...`", l.number, 1);
        MorphismDecl md{m[1], m[2], {}, l.number, {}};
        int off = (int)m.position(3);
        std::string rest = m[3];
        for (const auto& [piece, col] : detail::split_commas(rest, off + 1)) {
            auto eq = piece.find('=');
            if (eq == std::string::npos) throw ParseError(Kind::syntax, "expected `generator = expression`", l.number, col);
            std::string g = detail::trim(piece.substr(0, eq));
            if (f.alphabet->find(g) < 0 || g.rfind("d(", 0) == 0)
                throw ParseError(Kind::unknown_generator, "unknown generator '" + g + "'", l.number, col);
            md.images.push_back({g, detail::trim(piece.substr(eq + 1))});
        }
        f.morphisms.push_back(md);
    }
    for (const auto& l : sections["action"]) {
        if (!std::regex_match(l.text, m, std::regex("\\s*(E|F|K|Ki)\\s*\\.\\s*(\\S+)\\s*=(.*)")))
            throw ParseError(Kind::syntax, "expected `E|F|K|Ki . generator = expression`", l.number, 1);
        std::string g = m[2];
        int gi = f.alphabet->find(g);
        if (gi < 0 || gi >= f.alphabet->base_size())
            throw ParseError(Kind::unknown_generator, "unknown generator '" + g + "'", l.number, (int)m.position(2) + 1);
        for (const auto& a : f.action)
            if (a.h == m[1] && a.generator == g)
                throw ParseError(Kind::syntax, "duplicate action entry", l.number, 1);
        f.action.push_back({m[1], g, ep.parse(m[3], l.number, (int)m.position(3) + 1)});
    }
    return f;
}

namespace detail {
inline std::string param_string(const ParamDecl& p) {
    if (!p.formal) return p.name + " = " + p.value.get_str();
    return p.name + " in (" + p.lo.get_str() + "," + p.hi.get_str() + ")";
}
} // namespace detail

// Canonical text: sections in a fixed order, expressions in normal rendering.
inline std::string print_presentation(const PresentationFile& f) {
    std::ostringstream os;
    os << "[meta]\nname = " << f.name << "\n";
    if (!f.star_closed) os << "star_closed = false\n";
    if (!f.params.empty()) {
        os << "\n[params]\n";
        for (const auto& p : f.params) os << detail::param_string(p) << "\n";
    }
    os << "\n[generators]\n";
    for (const auto& g : f.generators) os << g.name << " degree " << g.degree << " star " << g.star << "\n";
    if (f.differentials) os << "differentials\n";
    if (!f.relations.empty()) {
        os << "\n[relations]\n";
        for (const auto& r : f.relations) os << (r.label.empty() ? "" : r.label + ": ") << r.value.to_string() << "\n";
    }
    if (!f.ideals.empty()) {
        os << "\n[ideals]\n";
        for (const auto& I : f.ideals) {
            os << I.name << ":";
            for (size_t i = 0; i < I.generators.size(); ++i) os << (i ? ", " : " ") << I.generators[i].to_string();
            os << "\n";
        }
    }
    if (!f.morphisms.empty()) {
        os << "\n[morphisms]\n";
        for (const auto& md : f.morphisms) {
            os << md.name << " -> " << md.target << " :";
            for (size_t i = 0; i < md.images.size(); ++i)
                os << (i ? ", " : " ") << md.images[i].first << " = " << md.images[i].second;
            os << "\n";
        }
    }
    if (!f.action.empty()) {
        os << "\n[action]\n";
        for (const auto& a : f.action) os << a.h << " . " << a.generator << " = " << a.value.to_string() << "\n";
    }
    return os.str();
}

// A file together with the files its morphisms point to.
struct LoadedPresentation {
    std::filesystem::path path;
    PresentationFile file;
    std::map<std::string, std::shared_ptr<const LoadedPresentation>> targets; // by morphism name

    const LoadedPresentation& target(const std::string& morphism) const {
        auto it = targets.find(morphism);
        if (it == targets.end()) throw std::invalid_argument(file.name + " has no morphism " + morphism);
        return *it->second;
    }
};

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(ParseError::Kind::file, "cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace detail {
inline std::shared_ptr<const LoadedPresentation> load_presentation(const std::filesystem::path& path, int depth) {
    if (depth > 8) throw ParseError(ParseError::Kind::file, "morphism targets nest too deeply at " + path.string());
    auto lp = std::make_shared<LoadedPresentation>();
    lp->path = path;
    try {
        lp->file = parse_presentation(read_text_file(path));
    } catch (const ParseError& e) {
        if (e.kind == ParseError::Kind::file) throw;
        throw ParseError(e.kind, path.filename().string() + ": " + e.message, e.line, e.column, e.token);
    }
    auto& f = lp->file;
    for (auto& md : f.morphisms) {
        auto tgt = load_presentation(path.parent_path() / md.target, depth + 1);
        const auto& tf = tgt->file;
        md.resolved.assign(f.alphabet->base_size(), Element<Scalar>());
        ExpressionParser ep(tf.alphabet, tf.params);
        for (const auto& [g, text] : md.images) {
            int gi = f.alphabet->at(g);
            if (md.resolved[gi].alphabet())
                throw ParseError(ParseError::Kind::syntax, path.filename().string() + ": morphism " + md.name + " assigns " + g + " twice", md.line);
            try {
                md.resolved[gi] = ep.parse(text);
            } catch (const ParseError& e) {
                throw ParseError(e.kind, path.filename().string() + ": morphism " + md.name + ", image of " + g + ": " + e.message,
                                 md.line, 0, e.token);
            }
        }
        for (int g = 0; g < f.alphabet->base_size(); ++g)
            if (!md.resolved[g].alphabet())
                throw ParseError(ParseError::Kind::syntax,
                                 path.filename().string() + ": morphism " + md.name + " has no image for " + (*f.alphabet)[g].name, md.line);
        lp->targets[md.name] = tgt;
    }
    return lp;
}
} // namespace detail

inline std::shared_ptr<const LoadedPresentation> load_presentation(const std::filesystem::path& path) {
    return detail::load_presentation(path, 0);
}

// Bundled fixtures live in NCGLUE_DATA_DIR unless the environment says otherwise.
inline std::filesystem::path data_path(const std::string& file) {
    std::filesystem::path p(file);
    if (p.has_parent_path() || std::filesystem::exists(p)) return p;
    if (const char* dir = std::getenv("NCGLUE_DATA")) return std::filesystem::path(dir) / p;
#ifdef NCGLUE_DATA_DIR
    return std::filesystem::path(NCGLUE_DATA_DIR) / p;
#else
    return p;
#endif
}

} // namespace ncglue
