#include "gfcalc/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gfcalc {

namespace {

std::optional<Rational> min_trunc(const std::optional<Rational>& a, const std::optional<Rational>& b) {
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

void require_same_gauge(const GeneralizedNumber& x, const GeneralizedNumber& y) {
    if (!(x.gauge() == y.gauge()))
        throw Error(ErrorCode::gauge_mismatch, "gauges differ: " + x.gauge().to_string() + " vs " + y.gauge().to_string());
}

// Effective order of smallness: leading exponent, or the truncation order if no terms are known.
std::optional<Rational> smallness(const GaugeExpr& g) {
    if (!g.terms().empty()) return g.terms().front().exponent;
    return g.truncation();
}

}  // namespace

Gauge Gauge::power(const Rational& p) {
    if (sgn(p) <= 0) throw Error(ErrorCode::invalid_argument, "gauge exponent must be positive");
    Gauge g;
    g.exponent_ = p;
    g.samples_.clear();
    return g;
}

Gauge Gauge::table(std::map<double, double> samples) {
    if (samples.size() < 2) throw Error(ErrorCode::invalid_argument, "gauge table needs at least two samples");
    double prev = 0;
    for (const auto& [eps, rho] : samples) {
        if (!(eps > 0) || !(rho > 0)) throw Error(ErrorCode::invalid_argument, "gauge samples must be positive");
        if (rho <= prev) throw Error(ErrorCode::invalid_argument, "gauge samples must decrease as eps decreases");
        prev = rho;
    }
    Gauge g;
    g.exponent_ = 0;
    g.samples_ = std::move(samples);
    return g;
}

double Gauge::rho(double eps) const {
    if (is_power()) return std::pow(eps, exponent_.get_d());
    auto hi = samples_.lower_bound(eps);
    if (hi != samples_.end() && hi->first == eps) return hi->second;
    auto lo = hi;
    if (hi == samples_.begin()) {
        lo = hi;
        ++hi;
    } else if (hi == samples_.end()) {
        hi = std::prev(samples_.end());
        lo = std::prev(hi);
    } else {
        lo = std::prev(hi);
    }
    const double t = (std::log(eps) - std::log(lo->first)) / (std::log(hi->first) - std::log(lo->first));
    return std::exp(std::log(lo->second) + t * (std::log(hi->second) - std::log(lo->second)));
}

std::optional<Rational> Gauge::rho_exact(const Rational& eps) const {
    if (!is_power() || exponent_.get_den() != 1) return std::nullopt;
    return rational_pow(eps, static_cast<int>(exponent_.get_num().get_si()));
}

std::string Gauge::to_string() const {
    if (is_power()) return "eps^" + exponent_.get_str();
    return "table(" + std::to_string(samples_.size()) + " samples)";
}

GaugeExpr::GaugeExpr(int c) : GaugeExpr(Rational(c)) {}

GaugeExpr::GaugeExpr(const Rational& c) {
    if (sgn(c) != 0) terms_.push_back({c, Rational(0)});
}

GaugeExpr GaugeExpr::monomial(const Rational& coeff, const Rational& exponent) {
    GaugeExpr g;
    if (sgn(coeff) != 0) g.terms_.push_back({coeff, exponent});
    return g;
}

GaugeExpr GaugeExpr::from_terms(std::vector<GaugeTerm> terms, std::optional<Rational> trunc) {
    std::sort(terms.begin(), terms.end(), [](const GaugeTerm& a, const GaugeTerm& b) { return a.exponent < b.exponent; });
    GaugeExpr g;
    g.trunc_ = trunc;
    for (auto& t : terms) {
        if (trunc && t.exponent >= *trunc) continue;
        if (!g.terms_.empty() && g.terms_.back().exponent == t.exponent) g.terms_.back().coeff += t.coeff;
        else g.terms_.push_back(std::move(t));
        if (sgn(g.terms_.back().coeff) == 0) g.terms_.pop_back();
    }
    return g;
}

GaugeExpr GaugeExpr::truncated_zero(const Rational& order) {
    GaugeExpr g;
    g.trunc_ = order;
    return g;
}

std::optional<Rational> GaugeExpr::leading_exponent() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.front().exponent;
}

Rational GaugeExpr::leading_coeff() const { return terms_.empty() ? Rational(0) : terms_.front().coeff; }

GaugeExpr GaugeExpr::truncated(const Rational& order) const {
    return from_terms(terms_, min_trunc(trunc_, order));
}

GaugeExpr GaugeExpr::operator-() const {
    GaugeExpr g = *this;
    for (auto& t : g.terms_) t.coeff = -t.coeff;
    return g;
}

GaugeExpr operator+(const GaugeExpr& a, const GaugeExpr& b) {
    GaugeExpr g;
    g.trunc_ = min_trunc(a.trunc_, b.trunc_);
    std::size_t i = 0, j = 0;
    auto push = [&](const Rational& c, const Rational& e) {
        if (g.trunc_ && e >= *g.trunc_) return;
        if (sgn(c) != 0) g.terms_.push_back({c, e});
    };
    while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exponent < b.terms_[j].exponent)) {
            push(a.terms_[i].coeff, a.terms_[i].exponent);
            ++i;
        } else if (i == a.terms_.size() || b.terms_[j].exponent < a.terms_[i].exponent) {
            push(b.terms_[j].coeff, b.terms_[j].exponent);
            ++j;
        } else {
            push(a.terms_[i].coeff + b.terms_[j].coeff, a.terms_[i].exponent);
            ++i;
            ++j;
        }
    }
    return g;
}

GaugeExpr operator-(const GaugeExpr& a, const GaugeExpr& b) { return a + (-b); }

GaugeExpr operator*(const GaugeExpr& a, const GaugeExpr& b) {
    if (a.is_exact_zero() || b.is_exact_zero()) return GaugeExpr();
    // Error terms: O(rho^ta) * b and a * O(rho^tb).
    std::optional<Rational> trunc;
    if (a.trunc_) trunc = min_trunc(trunc, *a.trunc_ + *smallness(b));
    if (b.trunc_) trunc = min_trunc(trunc, *b.trunc_ + *smallness(a));
    std::vector<GaugeTerm> terms;
    terms.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) terms.push_back({x.coeff * y.coeff, x.exponent + y.exponent});
    return GaugeExpr::from_terms(std::move(terms), trunc);
}

GaugeExpr operator*(const GaugeExpr& a, const Rational& c) {
    if (sgn(c) == 0) return GaugeExpr();
    GaugeExpr g = a;
    for (auto& t : g.terms_) t.coeff *= c;
    return g;
}

bool GaugeExpr::identical(const GaugeExpr& o) const {
    if (trunc_ != o.trunc_ || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].exponent != o.terms_[i].exponent) return false;
    return true;
}

double GaugeExpr::evaluate(double rho) const {
    double s = 0;
    for (const auto& t : terms_) s += t.coeff.get_d() * std::pow(rho, t.exponent.get_d());
    return s;
}

long double GaugeExpr::evaluate_long(long double rho) const {
    long double s = 0;
    for (const auto& t : terms_)
        s += static_cast<long double>(t.coeff.get_d()) * std::pow(rho, static_cast<long double>(t.exponent.get_d()));
    return s;
}

std::optional<Rational> GaugeExpr::evaluate_exact(const Rational& rho) const {
    Rational s = 0;
    for (const auto& t : terms_) {
        if (t.exponent.get_den() != 1) return std::nullopt;
        s += t.coeff * rational_pow(rho, static_cast<int>(t.exponent.get_num().get_si()));
    }
    return s;
}

std::string GaugeExpr::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& t : terms_) {
        Rational mag = abs(t.coeff);
        if (first) out << (sgn(t.coeff) < 0 ? "-" : "");
        else out << (sgn(t.coeff) < 0 ? " - " : " + ");
        first = false;
        if (sgn(t.exponent) == 0) {
            out << mag.get_str();
            continue;
        }
        if (mag != 1) out << mag.get_str() << "*";
        out << "rho";
        if (t.exponent != 1) {
            if (t.exponent.get_den() == 1 && sgn(t.exponent) > 0) out << "^" << t.exponent.get_str();
            else out << "^(" << t.exponent.get_str() << ")";
        }
    }
    if (trunc_) {
        if (!first) out << " + ";
        out << "O(rho^(" << trunc_->get_str() << "))";
    } else if (first) {
        out << "0";
    }
    return out.str();
}

std::vector<double> default_schedule() {
    std::vector<double> s;
    for (int k = 4; k <= 20; ++k) s.push_back(std::ldexp(1.0, -k));
    return s;
}

const char* to_string(NumberClass c) {
    switch (c) {
    case NumberClass::zero: return "zero";
    case NumberClass::infinitesimal: return "infinitesimal";
    case NumberClass::finite_invertible: return "finite_invertible";
    case NumberClass::infinite: return "infinite";
    case NumberClass::undetermined: return "undetermined";
    }
    return "undetermined";
}

std::string Moderateness::to_string() const {
    std::string s;
    switch (kind) {
    case Kind::yes: s = "yes(" + std::to_string(n) + ")"; break;
    case Kind::no: s = "no"; break;
    case Kind::undetermined: s = "undetermined"; break;
    }
    return heuristic ? s + " [heuristic]" : s;
}

const GaugeExpr& GeneralizedNumber::symbolic() const {
    if (!is_symbolic()) throw Error(ErrorCode::undetermined, "value has an opaque body");
    return std::get<GaugeExpr>(body_);
}

const OpaqueNet& GeneralizedNumber::opaque() const { return std::get<OpaqueNet>(body_); }

double GeneralizedNumber::sample(double eps) const {
    if (is_symbolic()) return symbolic().evaluate(gauge_.rho(eps));
    return opaque().evaluator(eps);
}

std::string GeneralizedNumber::to_string() const {
    if (is_symbolic()) return symbolic().to_string();
    return "opaque(" + (opaque().label.empty() ? std::string("net") : opaque().label) + ")";
}

namespace {

GeneralizedNumber combine(const GeneralizedNumber& x, const GeneralizedNumber& y, char op) {
    require_same_gauge(x, y);
    if (x.is_symbolic() && y.is_symbolic()) {
        const auto& a = x.symbolic();
        const auto& b = y.symbolic();
        switch (op) {
        case '+': return {a + b, x.gauge()};
        case '-': return {a - b, x.gauge()};
        default: return {a * b, x.gauge()};
        }
    }
    OpaqueNet net;
    net.schedule = x.is_symbolic() ? y.opaque().schedule : x.opaque().schedule;
    net.label = "(" + x.to_string() + ")" + op + "(" + y.to_string() + ")";
    net.evaluator = [x, y, op](double eps) {
        const double a = x.sample(eps), b = y.sample(eps);
        return op == '+' ? a + b : op == '-' ? a - b : a * b;
    };
    return {std::move(net), x.gauge()};
}

}  // namespace

GeneralizedNumber gn_add(const GeneralizedNumber& x, const GeneralizedNumber& y) { return combine(x, y, '+'); }
GeneralizedNumber gn_sub(const GeneralizedNumber& x, const GeneralizedNumber& y) { return combine(x, y, '-'); }
GeneralizedNumber gn_mul(const GeneralizedNumber& x, const GeneralizedNumber& y) { return combine(x, y, '*'); }

OpaqueAnalysis analyze_samples(const std::vector<double>& y, const std::vector<double>& t) {
    OpaqueAnalysis a;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i)
        if (std::isnan(y[i]) || y[i] == std::numeric_limits<double>::infinity() || !std::isfinite(t[i]))
            a.finite_samples = false;
    if (!a.finite_samples || n < 4) return a;
    const std::size_t half = n / 2;
    auto bounded = [&](double N) {
        double head = -std::numeric_limits<double>::infinity(), tail = head;
        for (std::size_t i = 0; i < n; ++i) {
            const double g = y[i] + N * t[i];
            if (i < half) head = std::max(head, g);
            else tail = std::max(tail, g);
        }
        return tail <= head + kBoundSlackDecades || tail == -std::numeric_limits<double>::infinity();
    };
    for (unsigned N = 0; N <= kMaxModerateN; ++N)
        if (bounded(static_cast<double>(N))) {
            a.moderate_n = N;
            break;
        }
    a.negligible = true;
    for (unsigned N = 1; N <= kMaxModerateN; ++N)
        if (!bounded(-static_cast<double>(N))) {
            a.negligible = false;
            break;
        }
    if (a.negligible) return a;
    double st = 0, sy = 0, stt = 0, sty = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y[i])) continue;
        st += t[i];
        sy += y[i];
        stt += t[i] * t[i];
        sty += t[i] * y[i];
        ++m;
    }
    if (m < 3) {
        a.residual = std::numeric_limits<double>::infinity();
        return a;
    }
    const double denom = m * stt - st * st;
    a.slope = (m * sty - st * sy) / denom;
    const double icpt = (sy - a.slope * st) / m;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y[i])) continue;
        const double r = y[i] - (icpt + a.slope * t[i]);
        rss += r * r;
    }
    a.residual = std::sqrt(rss / m);
    return a;
}

OpaqueAnalysis analyze_opaque(const OpaqueNet& net, const Gauge& gauge) {
    const auto schedule = net.schedule.empty() ? default_schedule() : net.schedule;
    std::vector<double> y, t;
    for (double eps : schedule) {
        const double v = net.evaluator(eps);
        y.push_back(std::isfinite(v) ? std::log10(std::fabs(v)) : std::numeric_limits<double>::infinity());
        t.push_back(std::log10(gauge.rho(eps)));
    }
    return analyze_samples(y, t);
}

Classification gn_classify(const GeneralizedNumber& x) {
    Classification c;
    if (x.is_symbolic()) {
        const auto& g = x.symbolic();
        if (g.is_zero()) c.cls = NumberClass::zero;
        else if (sgn(g.terms().front().exponent) > 0) c.cls = NumberClass::infinitesimal;
        else if (sgn(g.terms().front().exponent) == 0) c.cls = NumberClass::finite_invertible;
        else c.cls = NumberClass::infinite;
        return c;
    }
    c.heuristic = true;
    const OpaqueAnalysis a = analyze_opaque(x.opaque(), x.gauge());
    c.slope = a.slope;
    c.residual = a.residual;
    if (!a.finite_samples || !a.moderate_n) c.cls = NumberClass::infinite;
    else if (a.negligible) c.cls = NumberClass::zero;
    else if (a.residual > kFitResidualDecades) c.cls = NumberClass::undetermined;
    else if (a.slope > kSlopeBand) c.cls = NumberClass::infinitesimal;
    else if (a.slope < -kSlopeBand) c.cls = NumberClass::infinite;
    else c.cls = NumberClass::finite_invertible;
    return c;
}

Moderateness gn_is_moderate(const GeneralizedNumber& x) {
    Moderateness m;
    if (x.is_symbolic()) {
        const auto& g = x.symbolic();
        m.kind = Moderateness::Kind::yes;
        if (!g.is_zero() && sgn(g.terms().front().exponent) < 0)
            m.n = static_cast<unsigned>(ceil(Rational(-g.terms().front().exponent)).get_num().get_ui());
        return m;
    }
    m.heuristic = true;
    const OpaqueAnalysis a = analyze_opaque(x.opaque(), x.gauge());
    if (!a.finite_samples || !a.moderate_n) {
        m.kind = Moderateness::Kind::no;
    } else {
        m.kind = Moderateness::Kind::yes;
        m.n = *a.moderate_n;
    }
    return m;
}

bool gn_is_negligible(const GeneralizedNumber& x) {
    if (x.is_symbolic()) return x.symbolic().is_zero();
    const OpaqueAnalysis a = analyze_opaque(x.opaque(), x.gauge());
    return a.finite_samples && a.negligible;
}

bool gn_leq(const GeneralizedNumber& x, const GeneralizedNumber& y) {
    require_same_gauge(x, y);
    if (!x.is_symbolic() || !y.is_symbolic())
        throw Error(ErrorCode::undetermined, "order comparison needs symbolic bodies");
    const GaugeExpr d = y.symbolic() - x.symbolic();
    return d.is_zero() || sgn(d.leading_coeff()) > 0;
}

bool gn_lt(const GeneralizedNumber& x, const GeneralizedNumber& y) {
    require_same_gauge(x, y);
    if (!x.is_symbolic() || !y.is_symbolic())
        throw Error(ErrorCode::undetermined, "order comparison needs symbolic bodies");
    const GaugeExpr d = y.symbolic() - x.symbolic();
    return !d.is_zero() && sgn(d.leading_coeff()) > 0;
}

GeneralizedNumber gn_abs(const GeneralizedNumber& x) {
    if (!x.is_symbolic()) {
        OpaqueNet net = x.opaque();
        auto f = net.evaluator;
        net.evaluator = [f](double eps) { return std::fabs(f(eps)); };
        net.label = "|" + net.label + "|";
        return {std::move(net), x.gauge()};
    }
    const auto& g = x.symbolic();
    return {sgn(g.leading_coeff()) < 0 ? -g : g, x.gauge()};
}

GeneralizedNumber gn_invert(const GeneralizedNumber& x, const Rational& order) {
    if (!x.is_symbolic()) {
        OpaqueNet net = x.opaque();
        auto f = net.evaluator;
        net.evaluator = [f](double eps) { return 1.0 / f(eps); };
        net.label = "1/(" + net.label + ")";
        return {std::move(net), x.gauge()};
    }
    const GaugeExpr& g = x.symbolic();
    if (g.is_zero()) throw Error(ErrorCode::not_invertible, "cannot invert zero");
    const Rational a = g.leading_coeff();
    const Rational e = *g.leading_exponent();
    const GaugeExpr head_inv = GaugeExpr::monomial(1 / a, -e);
    if (g.is_monomial()) return {head_inv, x.gauge()};
    const GaugeExpr u = g * head_inv - GaugeExpr(1);  // only positive exponents
    const GaugeExpr minus_u = -u;
    // Relative precision: x * y = 1 + O(rho^order).
    const Rational inner = order;
    GaugeExpr series(1);
    GaugeExpr power(1);
    while (true) {
        power = (power * minus_u).truncated(inner);
        series = series + power;
        if (power.is_zero()) break;
    }
    return {(series * head_inv).truncated(order - e), x.gauge()};
}

GeneralizedNumber gn_invert(const GeneralizedNumber& x) {
    if (x.is_symbolic() && !x.symbolic().is_monomial())
        throw Error(ErrorCode::invalid_argument, "inverting a non-monomial needs a truncation order");
    return gn_invert(x, Rational(0));
}

}  // namespace gfcalc
