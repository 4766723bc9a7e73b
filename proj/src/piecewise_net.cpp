#include "gfcalc/piecewise_net.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gfcalc {

namespace {

// -1, 0, 1, or nullopt when a truncated series hides the sign.
std::optional<int> sign_of(const GaugeExpr& g) {
    if (!g.terms().empty()) return sgn(g.leading_coeff());
    if (g.is_exact_zero()) return 0;
    return std::nullopt;
}

// a <= b on keys with nullopt as -inf (lower side) or +inf (upper side).
bool lo_leq(const std::optional<NetBreak>& lo, const std::optional<NetBreak>& b) {
    if (!lo) return true;
    if (!b) return false;
    return !(*b < *lo);
}

bool leq_hi(const std::optional<NetBreak>& b, const std::optional<NetBreak>& hi) {
    if (!hi) return true;
    if (!b) return false;
    return !(*hi < *b);
}

template <class T>
T eval_poly(const NetPoly& p, const std::vector<T>& x, T rho) {
    T total = 0;
    for (const auto& [e, c] : p.terms()) {
        T term;
        if constexpr (std::is_same_v<T, double>) term = c.evaluate(rho);
        else term = c.evaluate_long(rho);
        for (std::size_t k = 0; k < p.nvars() && k < x.size(); ++k)
            if (e[k] != 0) term *= std::pow(x[k], static_cast<T>(e[k]));
        total += term;
    }
    return total;
}

std::optional<Rational> min_coeff_exponent(const NetPoly& p) {
    std::optional<Rational> best;
    for (const auto& [e, c] : p.terms()) {
        auto le = c.leading_exponent();
        if (!le) {
            if (c.truncation())
                throw Error(ErrorCode::undetermined, "truncated coefficient hides the leading exponent");
            continue;
        }
        if (!best || *le < *best) best = le;
    }
    return best;
}

NetPoly lift_to_net(const Poly& p) {
    return p.map_coefficients<GaugeExpr>([](const Rational& c) { return GaugeExpr(c); });
}

}  // namespace

bool operator<(const NetBreak& a, const NetBreak& b) {
    if (a.base != b.base) return a.base < b.base;
    return a.shift < b.shift;
}

bool operator==(const NetBreak& a, const NetBreak& b) { return a.base == b.base && a.shift == b.shift; }

GaugeExpr break_value(const NetBreak& b) {
    return GaugeExpr(b.base) + GaugeExpr::monomial(Rational(b.shift), Rational(1));
}

PiecewiseNet::PiecewiseNet(std::size_t nvars, std::vector<NetPiece> pieces, std::optional<int> smoothness)
    : nvars_(nvars), pieces_(std::move(pieces)), smoothness_(smoothness) {
    if (pieces_.empty()) throw Error(ErrorCode::invalid_argument, "net needs at least one piece");
    if (pieces_.front().lo || pieces_.back().hi)
        throw Error(ErrorCode::invalid_argument, "net pieces must cover the real line");
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        const auto& a = pieces_[i].hi;
        const auto& b = pieces_[i + 1].lo;
        if (!a || !b || !(*a == *b)) throw Error(ErrorCode::invalid_argument, "net pieces must be contiguous");
        if (pieces_[i].lo && !(*pieces_[i].lo < *a))
            throw Error(ErrorCode::invalid_argument, "net breakpoints must increase");
    }
    if (nvars_ != 1 && pieces_.size() != 1)
        throw Error(ErrorCode::invalid_argument, "multivariate nets have a single piece");
    if (smoothness_ && *smoothness_ < 0) smoothness_ = 0;
    build_key();
}

PiecewiseNet PiecewiseNet::polynomial(std::size_t nvars, const NetPoly& p) {
    return PiecewiseNet(nvars, {NetPiece{std::nullopt, std::nullopt, p.with_nvars(nvars)}}, std::nullopt);
}

void PiecewiseNet::build_key() {
    std::ostringstream os;
    os << "net" << nvars_ << "[";
    for (const auto& piece : pieces_) {
        if (piece.lo) os << to_string(piece.lo->base) << "+" << piece.lo->shift << "r";
        os << ":" << to_string(piece.poly) << ";";
    }
    os << "]";
    if (smoothness_) os << "s" << *smoothness_;
    key_ = os.str();
}

PiecewiseNet PiecewiseNet::raw_derivative(std::size_t k) const {
    std::vector<NetPiece> out = pieces_;
    for (auto& piece : out) piece.poly = piece.poly.derivative(k);
    std::optional<int> s = smoothness_;
    if (s) s = std::max(0, *s - 1);
    return PiecewiseNet(nvars_, std::move(out), s);
}

PiecewiseNet PiecewiseNet::derivative(std::size_t k) const {
    if (k >= nvars_) throw Error(ErrorCode::invalid_argument, "derivative variable out of range");
    if (smoothness_ && *smoothness_ <= 0)
        throw Error(ErrorCode::budget_exceeded, "derivative beyond the smoothness budget");
    return raw_derivative(k);
}

PiecewiseNet PiecewiseNet::with_smoothness(std::optional<int> s) const {
    return PiecewiseNet(nvars_, pieces_, s);
}

int PiecewiseNet::continuity_order(int cap) const {
    auto continuous = [](const PiecewiseNet& n) {
        for (std::size_t i = 0; i + 1 < n.pieces_.size(); ++i) {
            const GaugeExpr at = break_value(*n.pieces_[i].hi);
            if (!(n.pieces_[i].poly.evaluate({at}) == n.pieces_[i + 1].poly.evaluate({at}))) return false;
        }
        return true;
    };
    PiecewiseNet d = *this;
    int order = -1;
    while (order < cap && continuous(d)) {
        ++order;
        d = d.raw_derivative(0);
    }
    return order;
}

PiecewiseNet PiecewiseNet::merged(const PiecewiseNet& o, bool multiply) const {
    const std::size_t n = std::max(nvars_, o.nvars_);
    std::optional<int> s = smoothness_;
    if (o.smoothness_) s = s ? std::min(*s, *o.smoothness_) : o.smoothness_;
    auto combine = [&](const NetPoly& a, const NetPoly& b) { return multiply ? a * b : a + b; };
    if (pieces_.size() == 1 && o.pieces_.size() == 1)
        return PiecewiseNet(n, {NetPiece{std::nullopt, std::nullopt, combine(pieces_[0].poly, o.pieces_[0].poly)}}, s);
    if (n != 1) throw Error(ErrorCode::invalid_argument, "piecewise nets are univariate");
    std::vector<NetBreak> keys;
    for (const auto* net : {this, &o})
        for (std::size_t i = 1; i < net->pieces_.size(); ++i) keys.push_back(*net->pieces_[i].lo);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    auto find = [](const PiecewiseNet& net, const std::optional<NetBreak>& lo, const std::optional<NetBreak>& hi) {
        for (const auto& piece : net.pieces_)
            if (lo_leq(piece.lo, lo) && leq_hi(hi, piece.hi)) return &piece.poly;
        throw Error(ErrorCode::invalid_argument, "segment not covered by a net piece");
    };
    std::vector<NetPiece> out;
    for (std::size_t i = 0; i <= keys.size(); ++i) {
        std::optional<NetBreak> lo = i == 0 ? std::nullopt : std::optional<NetBreak>(keys[i - 1]);
        std::optional<NetBreak> hi = i == keys.size() ? std::nullopt : std::optional<NetBreak>(keys[i]);
        NetPoly poly = combine(*find(*this, lo, hi), *find(o, lo, hi));
        if (!out.empty() && out.back().poly == poly && out.back().poly.terms().size() == poly.terms().size()) {
            out.back().hi = hi;
            continue;
        }
        out.push_back(NetPiece{lo, hi, std::move(poly)});
    }
    return PiecewiseNet(1, std::move(out), s);
}

PiecewiseNet PiecewiseNet::operator+(const PiecewiseNet& o) const { return merged(o, false); }
PiecewiseNet PiecewiseNet::operator*(const PiecewiseNet& o) const { return merged(o, true); }

PiecewiseNet PiecewiseNet::scaled(const GaugeExpr& c) const {
    std::vector<NetPiece> out = pieces_;
    for (auto& piece : out) piece.poly = piece.poly.scaled(c);
    return PiecewiseNet(nvars_, std::move(out), smoothness_);
}

bool PiecewiseNet::is_zero() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const NetPiece& p) { return p.poly.is_zero(); });
}

std::size_t PiecewiseNet::locate(const std::vector<double>& x, double rho) const {
    if (pieces_.size() == 1) return 0;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        const NetBreak& b = *pieces_[i].hi;
        if (x[0] <= b.base.get_d() + b.shift * rho) return i;
    }
    return pieces_.size() - 1;
}

double PiecewiseNet::evaluate(const std::vector<double>& x, double rho) const {
    return eval_poly<double>(pieces_[locate(x, rho)].poly, x, rho);
}

long double PiecewiseNet::evaluate(const std::vector<long double>& x, long double rho) const {
    std::vector<double> xd(x.begin(), x.end());
    return eval_poly<long double>(pieces_[locate(xd, static_cast<double>(rho))].poly, x, rho);
}

std::optional<Rational> PiecewiseNet::evaluate_exact(const Rational& x, const Rational& rho) const {
    if (nvars_ != 1) throw Error(ErrorCode::invalid_argument, "exact evaluation of a multivariate net");
    if (auto lim = rho_limit(); lim && rho >= *lim)
        throw Error(ErrorCode::out_of_domain, "rho " + to_string(rho) + " is not below the net limit " + to_string(*lim));
    std::size_t idx = pieces_.size() - 1;
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
        const NetBreak& b = *pieces_[i].hi;
        if (x <= b.base + b.shift * rho) {
            idx = i;
            break;
        }
    }
    Rational total = 0;
    for (const auto& [e, c] : pieces_[idx].poly.terms()) {
        auto v = c.evaluate_exact(rho);
        if (!v) return std::nullopt;
        total += *v * rational_pow(x, e[0]);
    }
    return total;
}

std::optional<GaugeExpr> PiecewiseNet::evaluate_symbolic(const std::vector<GaugeExpr>& x) const {
    if (x.size() < nvars_) throw Error(ErrorCode::invalid_argument, "point dimension below net dimension");
    if (pieces_.size() == 1) return pieces_[0].poly.evaluate(x);
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& piece = pieces_[i];
        bool inside = true;
        if (piece.lo) {
            auto s = sign_of(x[0] - break_value(*piece.lo));
            if (!s) return std::nullopt;
            inside = *s >= 0;
        }
        if (inside && piece.hi) {
            auto s = sign_of(break_value(*piece.hi) - x[0]);
            if (!s) return std::nullopt;
            inside = *s >= 0;
        }
        if (inside) return piece.poly.evaluate(x);
    }
    return std::nullopt;
}

std::optional<Rational> PiecewiseNet::rho_limit() const {
    std::optional<Rational> lim;
    for (std::size_t i = 1; i + 1 < pieces_.size(); ++i) {
        const NetBreak& a = *pieces_[i].lo;
        const NetBreak& b = *pieces_[i].hi;
        if (a.base == b.base || a.shift <= b.shift) continue;
        Rational r = (b.base - a.base) / Rational(a.shift - b.shift);
        if (!lim || r < *lim) lim = r;
    }
    return lim;
}

std::optional<Rational> PiecewiseNet::sup_exponent(const Interval& k) const {
    if (k.dimension() != nvars_) throw Error(ErrorCode::domain_mismatch, "compact dimension differs from the net");
    if (pieces_.size() == 1) return min_coeff_exponent(pieces_[0].poly);
    const Rational klo = k.lo(0), khi = k.hi(0);
    std::optional<Rational> best;
    auto consider = [&](const std::optional<Rational>& e) {
        if (e && (!best || *e < *best)) best = e;
    };
    for (const auto& piece : pieces_) {
        const bool transition = piece.lo && piece.hi && piece.lo->base == piece.hi->base;
        if (!transition) {
            const bool meets_lo = !piece.hi || piece.hi->base > klo;
            const bool meets_hi = !piece.lo || piece.lo->base < khi;
            if (meets_lo && meets_hi) consider(min_coeff_exponent(piece.poly));
            continue;
        }
        const Rational& b = piece.lo->base;
        bool relevant = (b > klo && b < khi) || (b == klo && piece.hi->shift > 0) || (b == khi && piece.lo->shift < 0);
        if (!relevant) continue;
        NetPoly moving = NetPoly::constant(1, GaugeExpr(b)) +
                         NetPoly::variable(1, 0).scaled(GaugeExpr::rho_power(Rational(1)));
        consider(min_coeff_exponent(piece.poly.substitute(0, moving)));
    }
    return best;
}

GaugeExpr PiecewiseNet::pair(const PiecewisePoly& phi) const {
    if (nvars_ != 1 || phi.dimension() != 1) throw Error(ErrorCode::invalid_argument, "pairing needs 1-D objects");
    const auto nodes = phi.axis_nodes(0);
    GaugeExpr total;
    for (std::size_t c = 0; c + 1 < nodes.size(); ++c) {
        const NetBreak clo{nodes[c], 0}, chi{nodes[c + 1], 0};
        const NetPoly test = lift_to_net(phi.cells()[c]);
        for (const auto& piece : pieces_) {
            NetBreak lo = clo, hi = chi;
            if (piece.lo && lo < *piece.lo) lo = *piece.lo;
            if (piece.hi && *piece.hi < hi) hi = *piece.hi;
            if (!(lo < hi)) continue;
            const NetPoly prim = (piece.poly * test).antiderivative(0);
            total += prim.evaluate({break_value(hi)}) - prim.evaluate({break_value(lo)});
        }
    }
    return total;
}

Rational bump_constant(unsigned p) {
    Poly base = Poly::constant(1, Rational(1)) - Poly::variable(1, 0) * Poly::variable(1, 0);
    Poly pw = Poly::constant(1, Rational(1));
    for (unsigned i = 0; i < p; ++i) pw *= base;
    const Poly prim = pw.antiderivative(0);
    const Rational area = prim.evaluate({Rational(1)}) - prim.evaluate({Rational(-1)});
    return Rational(1) / area;
}

Poly bump_poly(unsigned p, unsigned k) {
    Poly base = Poly::constant(1, Rational(1)) - Poly::variable(1, 0) * Poly::variable(1, 0);
    Poly pw = Poly::constant(1, bump_constant(p));
    for (unsigned i = 0; i < p; ++i) pw *= base;
    for (unsigned i = 0; i < k; ++i) pw = pw.derivative(0);
    return pw;
}

PiecewiseNet mollify(const FormalDistribution& t, unsigned p) {
    if (t.dimension() != 1) throw Error(ErrorCode::invalid_argument, "mollification is implemented for n = 1");
    const unsigned k = t.order()[0];
    if (k > p)
        throw Error(ErrorCode::budget_exceeded,
                    "order " + std::to_string(k) + " exceeds the bump exponent " + std::to_string(p));
    const PiecewisePoly& rep = t.rep();
    const auto nodes = rep.axis_nodes(0);
    std::vector<Poly> ext;
    ext.push_back(Poly::constant(3, rep.evaluate({nodes.front()})));
    for (const auto& c : rep.cells()) ext.push_back(c.with_nvars(3));
    ext.push_back(Poly::constant(3, rep.evaluate({nodes.back()})));

    // Scratch variables: x = 0, sigma = 1, u = 2.
    Poly mu(3);
    const Poly bump = bump_poly(p, k);
    for (const auto& [e, c] : bump.terms()) mu.add_term(Exponents{0, 0, e[0], 0}, c);
    const Poly shifted_x = Poly::variable(3, 0) - Poly::variable(3, 1) * Poly::variable(3, 2);
    std::vector<Poly> prims;
    for (const auto& piece : ext) prims.push_back((piece.substitute(0, shifted_x) * mu).antiderivative(2));

    const Poly one = Poly::constant(3, Rational(1)), minus_one = Poly::constant(3, Rational(-1));
    auto to_net = [&](const Poly& q) {
        NetPoly out(1);
        for (const auto& [e, c] : q.terms())
            out.add_term(Exponents{e[0], 0, 0, 0}, GaugeExpr::monomial(c, Rational(e[1] - static_cast<int>(k))));
        return out;
    };

    std::vector<NetPiece> pieces;
    for (std::size_t j = 0; j < ext.size(); ++j) {
        std::optional<NetBreak> lo, hi;
        if (j > 0) lo = NetBreak{nodes[j - 1], 1};
        if (j < nodes.size()) hi = NetBreak{nodes[j], -1};
        const Poly inner = prims[j].substitute(2, one) - prims[j].substitute(2, minus_one);
        pieces.push_back(NetPiece{lo, hi, to_net(inner)});
        if (j < nodes.size()) {
            Poly ustar(3);
            ustar.add_term(Exponents{1, -1, 0, 0}, Rational(1));
            ustar.add_term(Exponents{0, -1, 0, 0}, -nodes[j]);
            const Poly& left = prims[j];
            const Poly& right = prims[j + 1];
            const Poly across = right.substitute(2, ustar) - right.substitute(2, minus_one) +
                                left.substitute(2, one) - left.substitute(2, ustar);
            pieces.push_back(NetPiece{NetBreak{nodes[j], -1}, NetBreak{nodes[j], 1}, to_net(across)});
        }
    }
    PiecewiseNet net(1, std::move(pieces), std::nullopt);
    const int cont = net.continuity_order(static_cast<int>(p) + 2);
    return net.with_smoothness(std::max(0, std::min(static_cast<int>(p) - 2, cont)));
}

std::string to_string(const NetPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.to_string() << ")";
        for (std::size_t k = 0; k < p.nvars(); ++k) {
            if (e[k] == 0) continue;
            os << "*x" << (p.nvars() == 1 ? std::string() : std::to_string(k + 1));
            if (e[k] != 1) os << "^" << e[k];
        }
    }
    return os.str();
}

std::string to_string(const PiecewiseNet& n) {
    std::ostringstream os;
    for (const auto& piece : n.pieces()) {
        auto bound = [](const std::optional<NetBreak>& b, const char* inf) {
            if (!b) return std::string(inf);
            std::string s = to_string(b->base);
            if (b->shift > 0) s += "+" + std::to_string(b->shift) + "rho";
            if (b->shift < 0) s += std::to_string(b->shift) + "rho";
            return s;
        };
        os << "[" << bound(piece.lo, "-inf") << ", " << bound(piece.hi, "inf") << "]: " << to_string(piece.poly) << "\n";
    }
    return os.str();
}

}  // namespace gfcalc
