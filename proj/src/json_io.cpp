#include "gfcalc/json_io.hpp"

namespace gfcalc::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::parse_error, "json: " + what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
    return j.at(key);
}

void expect_type(const json& j, const char* type) {
    if (j.is_object() && j.contains("type") && j.at("type") != type)
        bad(std::string("expected type ") + type + ", got " + j.at("type").dump());
}

json encode_exponents(const Exponents& e, std::size_t n) {
    json a = json::array();
    for (std::size_t k = 0; k < n; ++k) a.push_back(e[k]);
    return a;
}

Exponents decode_exponents(const json& j) {
    if (!j.is_array() || j.size() > kMaxVars) bad("exponent list");
    Exponents e{};
    for (std::size_t k = 0; k < j.size(); ++k) e[k] = j[k].get<int>();
    return e;
}

json encode_break(const std::optional<NetBreak>& b) {
    if (!b) return nullptr;
    return json::array({encode(b->base), b->shift});
}

std::optional<NetBreak> decode_break(const json& j) {
    if (j.is_null()) return std::nullopt;
    if (!j.is_array() || j.size() != 2) bad("breakpoint");
    return NetBreak{decode_rational(j[0]), j[1].get<int>()};
}

}  // namespace

std::string type_of(const json& j) {
    if (j.is_object() && j.contains("type") && j.at("type").is_string()) return j.at("type").get<std::string>();
    return {};
}

json encode(const Rational& q) { return to_string(q); }

Rational decode_rational(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    bad("rational must be a string or an integer");
}

json encode(const MultiIndex& m) { return m.entries(); }

MultiIndex decode_multi_index(const json& j) {
    if (!j.is_array()) bad("multi-index must be an array");
    return MultiIndex(j.get<std::vector<unsigned>>());
}

json encode(const Interval& i) {
    json lo = json::array(), hi = json::array();
    for (std::size_t k = 0; k < i.dimension(); ++k) {
        lo.push_back(encode(i.lo(k)));
        hi.push_back(encode(i.hi(k)));
    }
    return {{"lo", lo}, {"hi", hi}};
}

Interval decode_interval(const json& j) {
    std::vector<Rational> lo, hi;
    for (const auto& x : field(j, "lo")) lo.push_back(decode_rational(x));
    for (const auto& x : field(j, "hi")) hi.push_back(decode_rational(x));
    if (lo.size() != hi.size() || lo.empty()) bad("interval bounds");
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (!(lo[k] < hi[k])) bad("empty interval");
    return Interval::from_bounds(lo, hi);
}

json encode(const Poly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back(json::array({encode_exponents(e, p.nvars()), encode(c)}));
    return {{"nvars", p.nvars()}, {"terms", terms}};
}

Poly decode_poly(const json& j) {
    Poly p(field(j, "nvars").get<std::size_t>());
    for (const auto& t : field(j, "terms")) {
        if (!t.is_array() || t.size() != 2) bad("polynomial term");
        p.add_term(decode_exponents(t[0]), decode_rational(t[1]));
    }
    return p;
}

json encode(const PiecewisePoly& f) {
    json breaks = json::array();
    for (const auto& axis : f.breaks()) {
        json a = json::array();
        for (const auto& b : axis) a.push_back(encode(b));
        breaks.push_back(a);
    }
    json cells = json::array();
    for (const auto& c : f.cells()) cells.push_back(encode(c));
    return {{"type", "piecewise"}, {"domain", encode(f.domain())}, {"breaks", breaks}, {"cells", cells}};
}

PiecewisePoly decode_piecewise(const json& j) {
    expect_type(j, "piecewise");
    const Interval dom = decode_interval(field(j, "domain"));
    std::vector<std::vector<Rational>> breaks;
    for (const auto& axis : field(j, "breaks")) {
        std::vector<Rational> a;
        for (const auto& b : axis) a.push_back(decode_rational(b));
        breaks.push_back(std::move(a));
    }
    std::vector<Poly> cells;
    for (const auto& c : field(j, "cells")) cells.push_back(decode_poly(c));
    return PiecewisePoly(dom, std::move(breaks), std::move(cells));
}

json encode(const FormalDistribution& t) {
    return {{"type", "distribution"}, {"order", encode(t.order())}, {"rep", encode(t.rep())}};
}

FormalDistribution decode_distribution(const json& j) {
    expect_type(j, "distribution");
    return FormalDistribution(decode_multi_index(field(j, "order")), decode_piecewise(field(j, "rep")));
}

json encode(const Gauge& g) {
    if (g.is_power()) return {{"type", "gauge"}, {"power", encode(g.exponent())}};
    json t = json::array();
    for (const auto& [e, r] : g.samples()) t.push_back(json::array({e, r}));
    return {{"type", "gauge"}, {"table", t}};
}

Gauge decode_gauge(const json& j) {
    expect_type(j, "gauge");
    if (j.contains("power")) return Gauge::power(decode_rational(j.at("power")));
    std::map<double, double> samples;
    for (const auto& row : field(j, "table")) samples.emplace(row.at(0).get<double>(), row.at(1).get<double>());
    return Gauge::table(std::move(samples));
}

json encode(const GaugeExpr& g) {
    json terms = json::array();
    for (const auto& t : g.terms()) terms.push_back(json::array({encode(t.coeff), encode(t.exponent)}));
    json out = {{"type", "series"}, {"terms", terms}};
    if (g.truncation()) out["trunc"] = encode(*g.truncation());
    return out;
}

GaugeExpr decode_gauge_expr(const json& j) {
    expect_type(j, "series");
    std::vector<GaugeTerm> terms;
    for (const auto& t : field(j, "terms")) {
        if (!t.is_array() || t.size() != 2) bad("series term");
        terms.push_back({decode_rational(t[0]), decode_rational(t[1])});
    }
    std::optional<Rational> trunc;
    if (j.contains("trunc")) trunc = decode_rational(j.at("trunc"));
    return GaugeExpr::from_terms(std::move(terms), trunc);
}

json encode(const GeneralizedNumber& x) {
    if (!x.is_symbolic()) throw Error(ErrorCode::invalid_argument, "opaque numbers have no JSON form: " + x.to_string());
    return {{"type", "number"}, {"value", encode(x.symbolic())}, {"gauge", encode(x.gauge())}};
}

GeneralizedNumber decode_number(const json& j, const Gauge& gauge) {
    if (type_of(j) == "series") return GeneralizedNumber(decode_gauge_expr(j), gauge);
    expect_type(j, "number");
    const Gauge g = j.contains("gauge") ? decode_gauge(j.at("gauge")) : gauge;
    return GeneralizedNumber(decode_gauge_expr(field(j, "value")), g);
}

json encode(const NetPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms()) terms.push_back(json::array({encode_exponents(e, p.nvars()), encode(c)}));
    return {{"nvars", p.nvars()}, {"terms", terms}};
}

NetPoly decode_net_poly(const json& j) {
    NetPoly p(field(j, "nvars").get<std::size_t>());
    for (const auto& t : field(j, "terms")) {
        if (!t.is_array() || t.size() != 2) bad("net polynomial term");
        p.add_term(decode_exponents(t[0]), decode_gauge_expr(t[1]));
    }
    return p;
}

json encode(const PiecewiseNet& n) {
    json pieces = json::array();
    for (const auto& piece : n.pieces())
        pieces.push_back({{"lo", encode_break(piece.lo)}, {"hi", encode_break(piece.hi)}, {"poly", encode(piece.poly)}});
    json out = {{"type", "net"}, {"nvars", n.nvars()}, {"pieces", pieces}};
    out["smoothness"] = n.smoothness() ? json(*n.smoothness()) : json(nullptr);
    return out;
}

PiecewiseNet decode_net(const json& j) {
    expect_type(j, "net");
    std::vector<NetPiece> pieces;
    for (const auto& p : field(j, "pieces"))
        pieces.push_back({decode_break(field(p, "lo")), decode_break(field(p, "hi")), decode_net_poly(field(p, "poly"))});
    std::optional<int> s;
    if (j.contains("smoothness") && !j.at("smoothness").is_null()) s = j.at("smoothness").get<int>();
    return PiecewiseNet(field(j, "nvars").get<std::size_t>(), std::move(pieces), s);
}

json encode(const Expr& e) {
    switch (e.op()) {
    case ExprOp::constant: return json::array({"const", encode(e.value())});
    case ExprOp::variable: return json::array({"var", e.index()});
    case ExprOp::rho_power: return json::array({"rho", encode(e.value())});
    case ExprOp::sum:
    case ExprOp::product: {
        json a = json::array({e.op() == ExprOp::sum ? "sum" : "prod"});
        for (const auto& x : e.args()) a.push_back(encode(x));
        return a;
    }
    case ExprOp::sin: return json::array({"sin", encode(e.args()[0])});
    case ExprOp::cos: return json::array({"cos", encode(e.args()[0])});
    case ExprOp::exp: return json::array({"exp", encode(e.args()[0])});
    case ExprOp::bump: return json::array({"bump", e.bump_p(), e.bump_k(), encode(e.args()[0])});
    case ExprOp::piecewise: return json::array({"pw", encode(*e.net()), encode(e.args()[0])});
    }
    throw Error(ErrorCode::invalid_argument, "unknown expression node");
}

Expr decode_expr(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_string()) bad("expression must be a prefix array");
    const std::string op = j[0].get<std::string>();
    auto arg = [&](std::size_t i) {
        if (j.size() <= i) bad("missing operand of " + op);
        return decode_expr(j[i]);
    };
    if (op == "const") return Expr::constant(decode_rational(j.at(1)));
    if (op == "var") return Expr::variable(j.at(1).get<std::size_t>());
    if (op == "rho") return Expr::rho_power(decode_rational(j.at(1)));
    if (op == "sum" || op == "prod") {
        std::vector<Expr> xs;
        for (std::size_t i = 1; i < j.size(); ++i) xs.push_back(decode_expr(j[i]));
        return op == "sum" ? Expr::sum(std::move(xs)) : Expr::product(std::move(xs));
    }
    if (op == "sin") return Expr::sin(arg(1));
    if (op == "cos") return Expr::cos(arg(1));
    if (op == "exp") return Expr::exp(arg(1));
    if (op == "bump") {
        if (j.size() != 4) bad("bump takes p, k and an argument");
        return Expr::bump(j[1].get<unsigned>(), arg(3), j[2].get<unsigned>());
    }
    if (op == "pw") {
        if (j.size() != 3) bad("pw takes a net and an argument");
        return Expr::piecewise(std::make_shared<const PiecewiseNet>(decode_net(j[1])), arg(2));
    }
    bad("unknown operator " + op);
}

json encode(const GeneralizedPoint& x) {
    json c = json::array();
    for (const auto& v : x.coords) {
        if (!v.is_symbolic()) throw Error(ErrorCode::invalid_argument, "opaque coordinates have no JSON form");
        c.push_back(encode(v.symbolic()));
    }
    return {{"type", "point"}, {"coords", c}};
}

GeneralizedPoint decode_point(const json& j, const Gauge& gauge) {
    expect_type(j, "point");
    std::vector<GaugeExpr> c;
    for (const auto& v : field(j, "coords")) c.push_back(decode_gauge_expr(v));
    return GeneralizedPoint::symbolic(c, gauge);
}

json encode(const GsfDomain& d) {
    switch (d.kind()) {
    case GsfDomain::Kind::everywhere: return {{"kind", "everywhere"}, {"dim", d.dimension()}};
    case GsfDomain::Kind::compactly_supported: return {{"kind", "compact"}, {"omega", encode(d.omega())}};
    case GsfDomain::Kind::balls: {
        json balls = json::array();
        for (const auto& b : d.ball_list()) {
            if (!b.radius.is_symbolic()) throw Error(ErrorCode::invalid_argument, "opaque radii have no JSON form");
            balls.push_back({{"center", encode(b.center)}, {"radius", encode(b.radius.symbolic())}});
        }
        return {{"kind", "balls"}, {"balls", balls}};
    }
    }
    throw Error(ErrorCode::invalid_argument, "unknown domain kind");
}

GsfDomain decode_domain(const json& j, const Gauge& gauge) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "everywhere") return GsfDomain::everywhere(field(j, "dim").get<std::size_t>());
    if (kind == "compact") return GsfDomain::compactly_supported(decode_interval(field(j, "omega")));
    if (kind == "balls") {
        std::vector<SharpBall> balls;
        for (const auto& b : field(j, "balls"))
            balls.push_back({decode_point(field(b, "center"), gauge),
                             GeneralizedNumber(decode_gauge_expr(field(b, "radius")), gauge)});
        return GsfDomain::balls(std::move(balls));
    }
    bad("unknown domain kind " + kind);
}

json encode(const GSFunction& f) {
    return {{"type", "gsf"},
            {"net", encode(f.net())},
            {"dim", f.dimension()},
            {"domain", encode(f.domain())},
            {"gauge", encode(f.gauge())}};
}

GSFunction decode_gsf(const json& j) {
    expect_type(j, "gsf");
    const Gauge g = j.contains("gauge") ? decode_gauge(j.at("gauge")) : Gauge();
    return GSFunction(decode_expr(field(j, "net")), field(j, "dim").get<std::size_t>(), decode_domain(field(j, "domain"), g), g);
}

json encode(const Classification& c) {
    json out = {{"class", to_string(c.cls)}, {"heuristic", c.heuristic}};
    if (c.heuristic) {
        out["slope"] = c.slope;
        out["residual"] = c.residual;
    }
    return out;
}

json encode(const Moderateness& m) {
    const char* kind = m.kind == Moderateness::Kind::yes ? "yes" : m.kind == Moderateness::Kind::no ? "no" : "undetermined";
    json out = {{"moderate", kind}, {"heuristic", m.heuristic}};
    if (m.kind == Moderateness::Kind::yes) out["n"] = m.n;
    return out;
}

json encode(const NegligibilityVerdict& v) {
    return {{"verdict", to_string(v.kind)}, {"method", to_string(v.method)}, {"detail", v.detail}};
}

json encode(const CheckReport& r) {
    json conds = json::array();
    for (const auto& c : r.conditions)
        conds.push_back({{"name", c.name}, {"passed", c.passed}, {"checks", c.checks}, {"violations", c.violations}});
    return {{"suite", r.suite}, {"passed", r.passed()}, {"conditions", conds}, {"notes", r.notes}};
}

json encode(const LawReport& r) {
    json v = json::array();
    for (const auto& x : r.violations) v.push_back({{"law", x.law}, {"detail", x.detail}});
    return {{"cases", r.cases}, {"passed", r.passed()}, {"checks", r.checks}, {"violations", v}};
}

json encode(const PhiReport& r) {
    return {{"passed", r.passed()},
            {"checks", r.checks},
            {"commutes", r.commutes},
            {"preserves_derivatives", r.preserves_derivatives},
            {"unique", r.unique},
            {"failures", r.failures}};
}

json encode(const PerturbationRecord& r) {
    return {{"point", r.point},
            {"alpha", encode(r.alpha)},
            {"exact", r.exact},
            {"agree", r.agree},
            {"gap_exponent", r.gap_exponent}};
}

}  // namespace gfcalc::io
