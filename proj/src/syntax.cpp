#include "gfcalc/syntax.hpp"

#include "gfcalc/gsf.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <string>

namespace gfcalc {

namespace {

enum class Tok { number, ident, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
                    i = j;
                    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                }
            }
            out.push_back({Tok::number, std::string(s.substr(start, i - start)), start});
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            out.push_back({Tok::ident, std::string(s.substr(start, i - start)), start});
        } else if (std::string_view("+-*/^(),;[]").find(c) != std::string_view::npos) {
            out.push_back({Tok::punct, std::string(1, c), start});
            ++i;
        } else {
            throw Error(ErrorCode::parse_error, "unexpected character '" + std::string(1, c) + "' at " + std::to_string(i));
        }
    }
    out.push_back({Tok::end, "", s.size()});
    return out;
}

struct Node {
    enum class Kind { num, x, rho, add, sub, mul, div, neg, pow, call, pw } kind = Kind::num;
    Rational value;  // number, or exponent of pow
    std::string name;
    std::vector<Node> kids;
    std::vector<Rational> breaks;
};

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

    Node expr() {
        Node lhs = term();
        while (is("+") || is("-")) {
            const bool plus = next().text == "+";
            Node n{plus ? Node::Kind::add : Node::Kind::sub, {}, {}, {lhs, term()}, {}};
            lhs = std::move(n);
        }
        return lhs;
    }

    bool is(const char* p) const { return toks_[i_].kind == Tok::punct && toks_[i_].text == p; }
    bool is_ident(const char* p) const { return toks_[i_].kind == Tok::ident && toks_[i_].text == p; }
    bool at_end() const { return toks_[i_].kind == Tok::end; }
    std::size_t mark() const { return i_; }
    void reset(std::size_t m) { i_ = m; }

    const Token& next() { return toks_[i_++]; }
    void expect(const char* p) {
        if (!is(p)) fail(std::string("expected '") + p + "'");
        ++i_;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const auto& t = toks_[i_];
        throw Error(ErrorCode::parse_error,
                    what + " at " + std::to_string(t.pos) + (t.text.empty() ? " (end of input)" : " near '" + t.text + "'"));
    }

    Rational number() {
        if (toks_[i_].kind != Tok::number) fail("expected a number");
        return parse_rational(next().text);
    }

    // ["-"] number ["/" number]
    Rational signed_rational(bool allow_slash = true) {
        bool neg = false;
        if (is("-")) {
            next();
            neg = true;
        }
        Rational q = number();
        if (allow_slash && is("/")) {
            next();
            const Rational d = number();
            if (sgn(d) == 0) fail("division by zero");
            q /= d;
        }
        return neg ? Rational(-q) : q;
    }

private:
    Node term() {
        Node lhs = unary();
        while (is("*") || is("/")) {
            const bool mul = next().text == "*";
            Node n{mul ? Node::Kind::mul : Node::Kind::div, {}, {}, {lhs, unary()}, {}};
            lhs = std::move(n);
        }
        return lhs;
    }

    Node unary() {
        if (is("-")) {
            next();
            return Node{Node::Kind::neg, {}, {}, {unary()}, {}};
        }
        if (is("+")) {
            next();
            return unary();
        }
        return power();
    }

    Node power() {
        Node base = atom();
        if (!is("^")) return base;
        next();
        Rational e;
        if (is("(")) {
            next();
            e = signed_rational();
            expect(")");
        } else {
            e = signed_rational(false);
        }
        return Node{Node::Kind::pow, e, {}, {base}, {}};
    }

    Node atom() {
        const Token& t = toks_[i_];
        if (t.kind == Tok::number) return Node{Node::Kind::num, number(), {}, {}, {}};
        if (is("(")) {
            next();
            Node e = expr();
            expect(")");
            return e;
        }
        if (t.kind != Tok::ident) fail("expected an operand");
        const std::string name = next().text;
        if (name == "x" || name == "x1") return Node{Node::Kind::x, {}, {}, {}, {}};
        if (name == "rho") return Node{Node::Kind::rho, {}, {}, {}, {}};
        if (name == "ramp" || name == "abs") {
            Node arg{Node::Kind::x, {}, {}, {}, {}};
            if (is("(")) {
                next();
                arg = expr();
                expect(")");
            }
            return Node{Node::Kind::call, {}, name, {arg}, {}};
        }
        if (name == "sin" || name == "cos" || name == "exp" || name == "bump") {
            expect("(");
            Node arg = expr();
            expect(")");
            return Node{Node::Kind::call, {}, name, {arg}, {}};
        }
        if (name == "pw") {
            Node n{Node::Kind::pw, {}, {}, {}, {}};
            expect("[");
            n.breaks.push_back(signed_rational());
            while (is(",")) {
                next();
                n.breaks.push_back(signed_rational());
            }
            expect("]");
            expect("(");
            n.kids.push_back(expr());
            while (is(";")) {
                next();
                n.kids.push_back(expr());
            }
            expect(")");
            return n;
        }
        --i_;
        fail("unknown name '" + name + "'");
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

std::optional<Rational> fold(const Node& n) {
    using K = Node::Kind;
    switch (n.kind) {
    case K::num: return n.value;
    case K::neg: {
        auto a = fold(n.kids[0]);
        if (!a) return std::nullopt;
        return Rational(-*a);
    }
    case K::add:
    case K::sub:
    case K::mul:
    case K::div: {
        auto a = fold(n.kids[0]);
        auto b = fold(n.kids[1]);
        if (!a || !b) return std::nullopt;
        if (n.kind == K::add) return Rational(*a + *b);
        if (n.kind == K::sub) return Rational(*a - *b);
        if (n.kind == K::mul) return Rational(*a * *b);
        if (sgn(*b) == 0) throw Error(ErrorCode::parse_error, "division by zero");
        return Rational(*a / *b);
    }
    case K::pow: {
        auto a = fold(n.kids[0]);
        if (!a || n.value.get_den() != 1 || !n.value.get_num().fits_slong_p()) return std::nullopt;
        const long e = n.value.get_num().get_si();
        if (e < 0 && sgn(*a) == 0) throw Error(ErrorCode::parse_error, "division by zero");
        return rational_pow(*a, static_cast<int>(e));
    }
    default: return std::nullopt;
    }
}

unsigned natural_exponent(const Rational& e) {
    if (e.get_den() != 1 || sgn(e) < 0 || !e.get_num().fits_uint_p())
        throw Error(ErrorCode::parse_error, "exponent " + to_string(e) + " must be a natural number here");
    return static_cast<unsigned>(e.get_num().get_ui());
}

PiecewisePoly to_pp(const Node& n, const Interval& dom) {
    using K = Node::Kind;
    if (auto c = fold(n)) return PiecewisePoly::polynomial(dom, Poly::constant(1, *c));
    switch (n.kind) {
    case K::x: return PiecewisePoly::polynomial(dom, Poly::variable(1, 0));
    case K::rho: throw Error(ErrorCode::parse_error, "rho is not allowed in a piecewise polynomial");
    case K::neg: return -to_pp(n.kids[0], dom);
    case K::add: return to_pp(n.kids[0], dom) + to_pp(n.kids[1], dom);
    case K::sub: return to_pp(n.kids[0], dom) - to_pp(n.kids[1], dom);
    case K::mul: return to_pp(n.kids[0], dom) * to_pp(n.kids[1], dom);
    case K::div: {
        auto d = fold(n.kids[1]);
        if (!d) throw Error(ErrorCode::parse_error, "division is only by constants");
        if (sgn(*d) == 0) throw Error(ErrorCode::parse_error, "division by zero");
        return to_pp(n.kids[0], dom).scaled(1 / *d);
    }
    case K::pow: {
        const unsigned e = natural_exponent(n.value);
        const PiecewisePoly b = to_pp(n.kids[0], dom);
        PiecewisePoly r = PiecewisePoly::polynomial(dom, Poly::constant(1, Rational(1)));
        for (unsigned i = 0; i < e; ++i) r = r * b;
        return r;
    }
    case K::call: {
        if (n.name != "ramp" && n.name != "abs")
            throw Error(ErrorCode::parse_error, n.name + " is not a piecewise polynomial");
        const PiecewisePoly arg = to_pp(n.kids[0], dom);
        if (!arg.is_single_cell() || arg.max_degree(0) > 1)
            throw Error(ErrorCode::parse_error, n.name + " needs an argument affine in x");
        const Poly& p = arg.cells()[0];
        const Rational a = p.coefficient(Exponents{1}), b = p.constant_term();
        const Poly neg_part = n.name == "ramp" ? Poly(1) : -p;
        if (sgn(a) == 0) return PiecewisePoly::polynomial(dom, sgn(b) >= 0 ? p : neg_part);
        const Rational root = -b / a;
        if (root <= dom.lo(0)) return PiecewisePoly::polynomial(dom, sgn(a) > 0 ? p : neg_part);
        if (root >= dom.hi(0)) return PiecewisePoly::polynomial(dom, sgn(a) > 0 ? neg_part : p);
        if (sgn(a) > 0) return PiecewisePoly(dom, {{root}}, {neg_part, p});
        return PiecewisePoly(dom, {{root}}, {p, neg_part});
    }
    case K::pw: {
        if (n.kids.size() != n.breaks.size() + 1)
            throw Error(ErrorCode::parse_error, "pw needs one more piece than breakpoints");
        std::vector<Poly> cells;
        for (const auto& k : n.kids) {
            const PiecewisePoly c = to_pp(k, dom);
            if (!c.is_single_cell()) throw Error(ErrorCode::parse_error, "pw pieces must be polynomials");
            cells.push_back(c.cells()[0]);
        }
        return PiecewisePoly(dom, {n.breaks}, std::move(cells));
    }
    default: break;
    }
    throw Error(ErrorCode::parse_error, "unsupported piecewise expression");
}

Expr to_expr(const Node& n) {
    using K = Node::Kind;
    if (auto c = fold(n)) return Expr(*c);
    switch (n.kind) {
    case K::x: return Expr::variable(0);
    case K::rho: return Expr::rho_power(Rational(1));
    case K::neg: return -to_expr(n.kids[0]);
    case K::add: return to_expr(n.kids[0]) + to_expr(n.kids[1]);
    case K::sub: return to_expr(n.kids[0]) - to_expr(n.kids[1]);
    case K::mul: return to_expr(n.kids[0]) * to_expr(n.kids[1]);
    case K::div: {
        // constants and monomials c * rho^q invert exactly
        const Expr d = to_expr(n.kids[1]);
        Rational c(1), q(0);
        auto absorb = [&](const Expr& f) {
            if (f.op() == ExprOp::constant) c *= f.value();
            else if (f.op() == ExprOp::rho_power) q += f.value();
            else throw Error(ErrorCode::parse_error, "division is only by constants and powers of rho");
        };
        if (d.op() == ExprOp::product)
            for (const auto& f : d.args()) absorb(f);
        else absorb(d);
        if (sgn(c) == 0) throw Error(ErrorCode::parse_error, "division by zero");
        return to_expr(n.kids[0]) * Expr(1 / c) * Expr::rho_power(-q);
    }
    case K::pow: {
        const Expr b = to_expr(n.kids[0]);
        if (b.op() == ExprOp::rho_power) return Expr::rho_power(b.value() * n.value);
        const unsigned e = natural_exponent(n.value);
        Expr r(1);
        for (unsigned i = 0; i < e; ++i) r = r * b;
        return r;
    }
    case K::call: {
        const Expr a = to_expr(n.kids[0]);
        if (n.name == "sin") return Expr::sin(a);
        if (n.name == "cos") return Expr::cos(a);
        if (n.name == "exp") return Expr::exp(a);
        if (n.name == "bump") return Expr::bump(kDefaultBumpExponent, a);
        throw Error(ErrorCode::parse_error, n.name + " is only available for distributions");
    }
    case K::pw: throw Error(ErrorCode::parse_error, "pw is only available for distributions");
    default: break;
    }
    throw Error(ErrorCode::parse_error, "unsupported expression");
}

void require_end(const Parser& p) {
    if (!p.at_end()) p.fail("trailing input");
}

}  // namespace

PiecewisePoly parse_piecewise(std::string_view text, const Interval& domain) {
    if (domain.dimension() != 1) throw Error(ErrorCode::invalid_argument, "the mini-syntax is one-dimensional");
    Parser p(text);
    const Node n = p.expr();
    require_end(p);
    return to_pp(n, domain);
}

FormalDistribution parse_distribution(std::string_view text) {
    Parser p(text);
    unsigned order = 0;
    const std::size_t start = p.mark();
    bool framed = false;
    Node body;
    if (p.is("(")) {
        try {
            p.next();
            p.expect("(");
            const Rational a = p.number();
            p.expect(")");
            p.expect(",");
            order = natural_exponent(a);
            body = p.expr();
            p.expect(")");
            framed = true;
        } catch (const Error&) {
            p.reset(start);
            order = 0;
        }
    }
    if (!framed) body = p.expr();
    Interval dom = Interval::unit(1);
    if (p.is_ident("on")) {
        p.next();
        p.expect("(");
        const Rational lo = p.signed_rational();
        p.expect(",");
        const Rational hi = p.signed_rational();
        p.expect(")");
        if (!(lo < hi)) throw Error(ErrorCode::parse_error, "empty domain");
        dom = Interval::from_bounds({lo}, {hi});
    }
    require_end(p);
    return FormalDistribution(MultiIndex{order}, to_pp(body, dom));
}

Expr parse_expr(std::string_view text) {
    Parser p(text);
    const Node n = p.expr();
    require_end(p);
    return to_expr(n);
}

GeneralizedNumber parse_number(std::string_view text, const Gauge& gauge) {
    const Expr e = parse_expr(text);
    if (e.arity() > 0) throw Error(ErrorCode::parse_error, "a generalized number cannot mention x");
    const SymbolicValue v = evaluate_symbolic(e, {});
    if (v.value) return GeneralizedNumber(*v.value, gauge);
    OpaqueNet net{[e, gauge](double eps) { return e.evaluate(std::vector<double>{}, gauge.rho(eps)); },
                  default_schedule(), e.to_string()};
    return GeneralizedNumber(std::move(net), gauge);
}

std::vector<Rational> parse_rational_list(std::string_view text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
        if (item.empty()) throw Error(ErrorCode::parse_error, "empty item in list");
        out.push_back(parse_rational(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace gfcalc
