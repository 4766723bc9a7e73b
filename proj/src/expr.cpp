#include "gfcalc/expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace gfcalc {

namespace {

using Node = Expr::Node;

std::shared_ptr<Node> make_node(ExprOp op) {
    auto n = std::make_shared<Node>();
    n->op = op;
    return n;
}

template <class T>
T eval_bump(const Poly& poly, T t) {
    if (!(std::abs(t) < 1)) return 0;
    T total = 0;
    for (const auto& [e, c] : poly.terms()) total += static_cast<T>(c.get_d()) * std::pow(t, static_cast<T>(e[0]));
    return total;
}

template <class T>
T eval_tree(const Expr& e, const std::vector<T>& x, T rho) {
    switch (e.op()) {
    case ExprOp::constant: return static_cast<T>(e.value().get_d());
    case ExprOp::variable:
        if (e.index() >= x.size()) throw Error(ErrorCode::invalid_argument, "point has too few coordinates");
        return x[e.index()];
    case ExprOp::rho_power: return std::pow(rho, static_cast<T>(e.value().get_d()));
    case ExprOp::sum: {
        T s = 0;
        for (const auto& a : e.args()) s += eval_tree(a, x, rho);
        return s;
    }
    case ExprOp::product: {
        T s = 1;
        for (const auto& a : e.args()) s *= eval_tree(a, x, rho);
        return s;
    }
    case ExprOp::sin: return std::sin(eval_tree(e.args()[0], x, rho));
    case ExprOp::cos: return std::cos(eval_tree(e.args()[0], x, rho));
    case ExprOp::exp: return std::exp(eval_tree(e.args()[0], x, rho));
    case ExprOp::bump: return eval_bump<T>(*e.bump_polynomial(), eval_tree(e.args()[0], x, rho));
    case ExprOp::piecewise: return e.net()->evaluate(std::vector<T>{eval_tree(e.args()[0], x, rho)}, rho);
    }
    return 0;
}

// Splits a term into rational coefficient and the remaining core.
std::pair<Rational, Expr> split_coefficient(const Expr& t) {
    if (t.is_constant()) return {t.value(), Expr(1)};
    if (t.op() == ExprOp::product && t.args().front().is_constant()) {
        std::vector<Expr> rest(t.args().begin() + 1, t.args().end());
        return {t.args().front().value(), rest.size() == 1 ? rest.front() : Expr::product(rest)};
    }
    return {Rational(1), t};
}

int cmp_rational(const Rational& a, const Rational& b) { return cmp(a, b) < 0 ? -1 : (cmp(a, b) > 0 ? 1 : 0); }

std::optional<int> sign_of(const GaugeExpr& g) {
    if (!g.terms().empty()) return sgn(g.leading_coeff());
    if (g.is_exact_zero()) return 0;
    return std::nullopt;
}

}  // namespace

const char* to_string(ExprOp op) {
    switch (op) {
    case ExprOp::constant: return "const";
    case ExprOp::variable: return "var";
    case ExprOp::rho_power: return "rho";
    case ExprOp::sum: return "+";
    case ExprOp::product: return "*";
    case ExprOp::sin: return "sin";
    case ExprOp::cos: return "cos";
    case ExprOp::exp: return "exp";
    case ExprOp::bump: return "bump";
    case ExprOp::piecewise: return "net";
    }
    return "?";
}

Expr::Expr() : Expr(Rational(0)) {}

Expr::Expr(int c) : Expr(Rational(c)) {}

Expr::Expr(const Rational& c) {
    auto n = make_node(ExprOp::constant);
    n->value = c;
    node_ = std::move(n);
}

Expr Expr::constant(const Rational& c) { return Expr(c); }

Expr Expr::variable(std::size_t k) {
    auto n = make_node(ExprOp::variable);
    n->index = k;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::rho_power(const Rational& q) {
    if (sgn(q) == 0) return Expr(1);
    auto n = make_node(ExprOp::rho_power);
    n->value = q;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    for (auto& t : terms) {
        if (t.op() == ExprOp::sum) flat.insert(flat.end(), t.args().begin(), t.args().end());
        else flat.push_back(std::move(t));
    }
    std::map<Expr, Rational> grouped;
    for (const auto& t : flat) {
        auto [c, core] = split_coefficient(t);
        if (sgn(c) == 0) continue;
        grouped[core] += c;
    }
    std::vector<Expr> out;
    for (const auto& [core, c] : grouped) {
        if (sgn(c) == 0) continue;
        if (core.is_constant()) out.push_back(Expr(c * core.value()));
        else if (c == 1) out.push_back(core);
        else out.push_back(Expr::product({Expr(c), core}));
    }
    if (out.empty()) return Expr(0);
    if (out.size() == 1) return out.front();
    std::sort(out.begin(), out.end());
    auto n = make_node(ExprOp::sum);
    n->args = std::move(out);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
    Rational c = 1;
    Rational q = 0;
    std::vector<Expr> rest;
    auto absorb = [&](const Expr& f, auto&& self) -> void {
        switch (f.op()) {
        case ExprOp::constant: c *= f.value(); break;
        case ExprOp::rho_power: q += f.value(); break;
        case ExprOp::product:
            for (const auto& g : f.args()) self(g, self);
            break;
        default: rest.push_back(f);
        }
    };
    for (const auto& f : factors) absorb(f, absorb);
    if (sgn(c) == 0) return Expr(0);
    if (rest.size() == 1 && rest[0].op() == ExprOp::sum && (c != 1 || sgn(q) != 0)) {
        std::vector<Expr> terms;
        for (const auto& t : rest[0].args()) terms.push_back(Expr::product({Expr(c), Expr::rho_power(q), t}));
        return Expr::sum(terms);
    }
    std::sort(rest.begin(), rest.end());
    std::vector<Expr> out;
    if (c != 1) out.push_back(Expr(c));
    if (sgn(q) != 0) out.push_back(Expr::rho_power(q));
    out.insert(out.end(), rest.begin(), rest.end());
    if (out.empty()) return Expr(1);
    if (out.size() == 1) return out.front();
    auto n = make_node(ExprOp::product);
    n->args = std::move(out);
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::sin(const Expr& a) {
    if (a.is_zero()) return Expr(0);
    auto n = make_node(ExprOp::sin);
    n->args = {a};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::cos(const Expr& a) {
    if (a.is_zero()) return Expr(1);
    auto n = make_node(ExprOp::cos);
    n->args = {a};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::exp(const Expr& a) {
    if (a.is_zero()) return Expr(1);
    auto n = make_node(ExprOp::exp);
    n->args = {a};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::bump(unsigned p, const Expr& a, unsigned k) {
    if (p == 0) throw Error(ErrorCode::invalid_argument, "bump exponent must be positive");
    if (k >= p) throw Error(ErrorCode::budget_exceeded, "bump derivative of order " + std::to_string(k) + " is not continuous");
    auto poly = std::make_shared<const Poly>(bump_poly(p, k));
    if (a.is_constant()) {
        const Rational& t = a.value();
        if (abs(t) >= 1) return Expr(0);
        return Expr(poly->evaluate({t}));
    }
    auto n = make_node(ExprOp::bump);
    n->p = p;
    n->k = k;
    n->bump_poly = std::move(poly);
    n->args = {a};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::piecewise(std::shared_ptr<const PiecewiseNet> net, const Expr& a) {
    if (!net || net->nvars() != 1) throw Error(ErrorCode::invalid_argument, "piecewise leaves need a univariate net");
    if (net->is_zero()) return Expr(0);
    if (net->pieces().size() == 1 && net->pieces()[0].poly.is_constant()) {
        const GaugeExpr c = net->pieces()[0].poly.constant_term();
        std::vector<Expr> terms;
        for (const auto& t : c.terms()) terms.push_back(Expr(t.coeff) * Expr::rho_power(t.exponent));
        if (c.is_exact()) return Expr::sum(terms);
    }
    auto n = make_node(ExprOp::piecewise);
    n->net = std::move(net);
    n->args = {a};
    return Expr(std::shared_ptr<const Node>(std::move(n)));
}

ExprOp Expr::op() const { return node_->op; }
const Rational& Expr::value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
unsigned Expr::bump_p() const { return node_->p; }
unsigned Expr::bump_k() const { return node_->k; }
const std::shared_ptr<const PiecewiseNet>& Expr::net() const { return node_->net; }
const std::shared_ptr<const Poly>& Expr::bump_polynomial() const { return node_->bump_poly; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::is_zero() const { return is_constant() && sgn(value()) == 0; }

std::size_t Expr::arity() const {
    if (op() == ExprOp::variable) return index() + 1;
    std::size_t n = 0;
    for (const auto& a : args()) n = std::max(n, a.arity());
    return n;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr Expr::operator-() const { return Expr::product({Expr(-1), *this}); }

Expr Expr::derivative(std::size_t k) const {
    switch (op()) {
    case ExprOp::constant:
    case ExprOp::rho_power: return Expr(0);
    case ExprOp::variable: return Expr(index() == k ? 1 : 0);
    case ExprOp::sum: {
        std::vector<Expr> terms;
        for (const auto& a : args()) terms.push_back(a.derivative(k));
        return Expr::sum(terms);
    }
    case ExprOp::product: {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < args().size(); ++i) {
            Expr d = args()[i].derivative(k);
            if (d.is_zero()) continue;
            std::vector<Expr> f = args();
            f[i] = d;
            terms.push_back(Expr::product(f));
        }
        return Expr::sum(terms);
    }
    default: break;
    }
    const Expr& a = args()[0];
    const Expr da = a.derivative(k);
    if (da.is_zero()) return Expr(0);
    switch (op()) {
    case ExprOp::sin: return Expr::cos(a) * da;
    case ExprOp::cos: return -(Expr::sin(a) * da);
    case ExprOp::exp: return *this * da;
    case ExprOp::bump: return Expr::bump(bump_p(), a, bump_k() + 1) * da;
    case ExprOp::piecewise:
        return Expr::piecewise(std::make_shared<const PiecewiseNet>(net()->derivative(0)), a) * da;
    default: break;
    }
    return Expr(0);
}

Expr Expr::derivative(const MultiIndex& alpha) const {
    Expr r = *this;
    for (std::size_t k = 0; k < alpha.size(); ++k)
        for (unsigned i = 0; i < alpha[k]; ++i) r = r.derivative(k);
    return r;
}

Expr Expr::substitute(std::size_t k, const Expr& e) const {
    switch (op()) {
    case ExprOp::constant:
    case ExprOp::rho_power: return *this;
    case ExprOp::variable: return index() == k ? e : *this;
    case ExprOp::sum:
    case ExprOp::product: {
        std::vector<Expr> a;
        for (const auto& t : args()) a.push_back(t.substitute(k, e));
        return op() == ExprOp::sum ? Expr::sum(a) : Expr::product(a);
    }
    case ExprOp::sin: return Expr::sin(args()[0].substitute(k, e));
    case ExprOp::cos: return Expr::cos(args()[0].substitute(k, e));
    case ExprOp::exp: return Expr::exp(args()[0].substitute(k, e));
    case ExprOp::bump: return Expr::bump(bump_p(), args()[0].substitute(k, e), bump_k());
    case ExprOp::piecewise: return Expr::piecewise(net(), args()[0].substitute(k, e));
    }
    return *this;
}

std::optional<int> Expr::budget() const {
    std::optional<int> b;
    auto take = [&](std::optional<int> v) {
        if (v && (!b || *v < *b)) b = v;
    };
    if (op() == ExprOp::bump) take(std::max(0, static_cast<int>(bump_p()) - 2 - static_cast<int>(bump_k())));
    if (op() == ExprOp::piecewise) take(net()->smoothness());
    for (const auto& a : args()) take(a.budget());
    return b;
}

double Expr::evaluate(const std::vector<double>& x, double rho) const { return eval_tree<double>(*this, x, rho); }

long double Expr::evaluate(const std::vector<long double>& x, long double rho) const {
    return eval_tree<long double>(*this, x, rho);
}

int compare(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return 0;
    if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
    switch (a.op()) {
    case ExprOp::constant:
    case ExprOp::rho_power: return cmp_rational(a.value(), b.value());
    case ExprOp::variable: return a.index() == b.index() ? 0 : (a.index() < b.index() ? -1 : 1);
    case ExprOp::bump:
        if (a.bump_p() != b.bump_p()) return a.bump_p() < b.bump_p() ? -1 : 1;
        if (a.bump_k() != b.bump_k()) return a.bump_k() < b.bump_k() ? -1 : 1;
        break;
    case ExprOp::piecewise:
        if (int c = a.net()->key().compare(b.net()->key()); c != 0) return c < 0 ? -1 : 1;
        break;
    default: break;
    }
    const auto& x = a.args();
    const auto& y = b.args();
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (int c = compare(x[i], y[i]); c != 0) return c;
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    return 0;
}

std::string Expr::to_string() const {
    switch (op()) {
    case ExprOp::constant: {
        std::string s = gfcalc::to_string(value());
        return sgn(value()) < 0 || value().get_den() != 1 ? "(" + s + ")" : s;
    }
    case ExprOp::variable: return "x" + std::to_string(index() + 1);
    case ExprOp::rho_power: return "rho^(" + gfcalc::to_string(value()) + ")";
    case ExprOp::sum: {
        std::string s = "(";
        for (std::size_t i = 0; i < args().size(); ++i) s += (i ? " + " : "") + args()[i].to_string();
        return s + ")";
    }
    case ExprOp::product: {
        std::string s;
        for (std::size_t i = 0; i < args().size(); ++i) s += (i ? "*" : "") + args()[i].to_string();
        return s;
    }
    case ExprOp::sin:
    case ExprOp::cos:
    case ExprOp::exp: return std::string(gfcalc::to_string(op())) + "(" + args()[0].to_string() + ")";
    case ExprOp::bump: {
        std::string s = "bump" + std::to_string(bump_p());
        if (bump_k() > 0) s += "_d" + std::to_string(bump_k());
        return s + "(" + args()[0].to_string() + ")";
    }
    case ExprOp::piecewise: return "net" + std::to_string(net()->pieces().size()) + "(" + args()[0].to_string() + ")";
    }
    return "?";
}

SymbolicValue evaluate_symbolic(const Expr& e, const std::vector<GaugeExpr>& x) {
    SymbolicValue r;
    auto closed = [&](GaugeExpr g) {
        r.value = std::move(g);
        r.moderate = true;
        return r;
    };
    switch (e.op()) {
    case ExprOp::constant: return closed(GaugeExpr(e.value()));
    case ExprOp::variable:
        if (e.index() >= x.size()) throw Error(ErrorCode::invalid_argument, "point has too few coordinates");
        return closed(x[e.index()]);
    case ExprOp::rho_power: return closed(GaugeExpr::rho_power(e.value()));
    case ExprOp::sum:
    case ExprOp::product: {
        const bool is_sum = e.op() == ExprOp::sum;
        std::vector<SymbolicValue> parts;
        for (const auto& a : e.args()) parts.push_back(evaluate_symbolic(a, x));
        const bool all_closed = std::all_of(parts.begin(), parts.end(), [](const SymbolicValue& v) { return v.value.has_value(); });
        const bool all_moderate = std::all_of(parts.begin(), parts.end(), [](const SymbolicValue& v) { return v.moderate; });
        if (all_closed) {
            GaugeExpr acc = is_sum ? GaugeExpr(0) : GaugeExpr(1);
            for (const auto& v : parts) acc = is_sum ? acc + *v.value : acc * *v.value;
            return closed(acc);
        }
        if (!is_sum && all_moderate) {
            for (const auto& v : parts)
                if (v.value && v.value->is_exact_zero()) return closed(GaugeExpr(0));
        }
        r.moderate = all_moderate;
        if (is_sum && all_moderate) return r;
        // One factor of unbounded growth times closed nonzero factors keeps unbounded growth.
        std::size_t growth = 0;
        bool others_closed_nonzero = true;
        for (const auto& v : parts) {
            if (v.infinite_growth) ++growth;
            else if (!v.value || v.value->is_zero()) others_closed_nonzero = false;
        }
        r.infinite_growth = growth == 1 && others_closed_nonzero;
        return r;
    }
    default: break;
    }
    const SymbolicValue a = evaluate_symbolic(e.args()[0], x);
    switch (e.op()) {
    case ExprOp::sin:
    case ExprOp::cos:
        if (a.value && a.value->is_exact_zero()) return closed(GaugeExpr(e.op() == ExprOp::sin ? 0 : 1));
        r.moderate = true;
        return r;
    case ExprOp::exp: {
        if (!a.value) return r;
        const GaugeExpr& g = *a.value;
        if (g.is_exact_zero()) return closed(GaugeExpr(1));
        auto lead = g.leading_exponent();
        if (!lead) {
            r.moderate = g.truncation() && sgn(*g.truncation()) >= 0;
            return r;
        }
        if (sgn(*lead) < 0) {
            if (sgn(g.leading_coeff()) < 0) return closed(GaugeExpr(0));
            r.infinite_growth = true;
            return r;
        }
        r.moderate = true;
        return r;
    }
    case ExprOp::bump: {
        r.moderate = true;
        if (!a.value) return r;
        auto inside = sign_of(GaugeExpr(1) - *a.value * *a.value);
        if (!inside) return r;
        if (*inside <= 0) return closed(GaugeExpr(0));
        const NetPoly poly = e.bump_polynomial()->map_coefficients<GaugeExpr>([](const Rational& c) { return GaugeExpr(c); });
        return closed(poly.evaluate({*a.value}));
    }
    case ExprOp::piecewise: {
        if (!a.value) return r;
        auto v = e.net()->evaluate_symbolic({*a.value});
        if (v) return closed(*v);
        return r;
    }
    default: break;
    }
    return r;
}

std::optional<PiecewiseNet> to_piecewise_net(const Expr& e, std::size_t nvars) {
    switch (e.op()) {
    case ExprOp::constant: return PiecewiseNet::polynomial(nvars, NetPoly::constant(nvars, GaugeExpr(e.value())));
    case ExprOp::variable:
        if (e.index() >= nvars) return std::nullopt;
        return PiecewiseNet::polynomial(nvars, NetPoly::variable(nvars, e.index()));
    case ExprOp::rho_power:
        return PiecewiseNet::polynomial(nvars, NetPoly::constant(nvars, GaugeExpr::rho_power(e.value())));
    case ExprOp::sum:
    case ExprOp::product: {
        std::optional<PiecewiseNet> acc;
        for (const auto& a : e.args()) {
            auto n = to_piecewise_net(a, nvars);
            if (!n) return std::nullopt;
            if (!acc) acc = std::move(n);
            else acc = e.op() == ExprOp::sum ? *acc + *n : *acc * *n;
        }
        return acc;
    }
    case ExprOp::piecewise:
        if (nvars != 1 || e.args()[0].op() != ExprOp::variable || e.args()[0].index() != 0) return std::nullopt;
        return *e.net();
    default: return std::nullopt;
    }
}

}  // namespace gfcalc
