#include "gfcalc/gsf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gfcalc {

namespace {

// Upper bound sup_K |u| <= C rho^exponent, or a qualitative class.
struct Growth {
    enum class Kind { zero, negligible, bounded, unbounded, unknown } kind = Kind::unknown;
    Rational exponent;
    bool exact = false;    // exponent is the true leading exponent (piecewise-polynomial trees)
    bool uniform = false;  // unbounded independently of x
};

unsigned moderate_n_for(const Rational& e) {
    if (sgn(e) >= 0) return 0;
    return static_cast<unsigned>(ceil(Rational(-e)).get_num().get_ui());
}

Growth growth_on(const Expr& e, const Interval& k) {
    Growth g;
    const std::size_t n = k.dimension();
    if (auto net = to_piecewise_net(e, n)) {
        try {
            auto s = net->sup_exponent(k);
            if (!s) {
                g.kind = Growth::Kind::zero;
            } else {
                g.kind = Growth::Kind::bounded;
                g.exponent = *s;
            }
            g.exact = true;
        } catch (const Error&) {
            g.kind = Growth::Kind::unknown;
        }
        return g;
    }
    switch (e.op()) {
    case ExprOp::sin:
    case ExprOp::cos:
    case ExprOp::bump:
        g.kind = Growth::Kind::bounded;
        g.exponent = 0;
        return g;
    case ExprOp::exp: {
        const Expr& a = e.args()[0];
        const Growth ga = growth_on(a, k);
        if (ga.kind == Growth::Kind::zero || ga.kind == Growth::Kind::negligible ||
            (ga.kind == Growth::Kind::bounded && sgn(ga.exponent) >= 0)) {
            g.kind = Growth::Kind::bounded;
            g.exponent = 0;
            return g;
        }
        auto net = to_piecewise_net(a, n);
        if (!net || net->pieces().size() != 1) return g;
        const NetPoly& p = net->pieces()[0].poly;
        std::optional<Rational> low;
        std::size_t attained = 0;
        bool at_constant = false;
        for (const auto& [ex, c] : p.terms()) {
            auto le = c.leading_exponent();
            if (!le) continue;
            if (!low || *le < *low) {
                low = le;
                attained = 1;
                at_constant = ex == Exponents{};
            } else if (*le == *low) {
                ++attained;
            }
        }
        if (!low || sgn(*low) >= 0 || attained != 1 || !at_constant) return g;
        if (sgn(p.constant_term().leading_coeff()) < 0) {
            g.kind = Growth::Kind::negligible;
        } else {
            g.kind = Growth::Kind::unbounded;
            g.uniform = p.is_constant();
        }
        return g;
    }
    case ExprOp::sum: {
        std::vector<Growth> parts;
        for (const auto& a : e.args()) parts.push_back(growth_on(a, k));
        std::size_t unbounded = 0;
        bool any_negligible = false, any_bounded = false;
        Rational low;
        for (const auto& p : parts) {
            switch (p.kind) {
            case Growth::Kind::unknown: return g;
            case Growth::Kind::unbounded: ++unbounded; break;
            case Growth::Kind::negligible: any_negligible = true; break;
            case Growth::Kind::bounded:
                if (!any_bounded || p.exponent < low) low = p.exponent;
                any_bounded = true;
                break;
            case Growth::Kind::zero: break;
            }
        }
        if (unbounded > 1) return g;
        if (unbounded == 1) {
            g.kind = Growth::Kind::unbounded;
            return g;
        }
        if (any_bounded) {
            g.kind = Growth::Kind::bounded;
            g.exponent = low;
        } else {
            g.kind = any_negligible ? Growth::Kind::negligible : Growth::Kind::zero;
        }
        return g;
    }
    case ExprOp::product: {
        std::vector<Growth> parts;
        for (const auto& a : e.args()) parts.push_back(growth_on(a, k));
        for (const auto& p : parts)
            if (p.kind == Growth::Kind::zero) {
                g.kind = Growth::Kind::zero;
                return g;
            }
        std::size_t unbounded = 0, negligible = 0;
        bool uniform = true, others_exact = true;
        Rational total = 0;
        for (const auto& p : parts) {
            switch (p.kind) {
            case Growth::Kind::unknown: return g;
            case Growth::Kind::unbounded:
                ++unbounded;
                uniform = uniform && p.uniform;
                break;
            case Growth::Kind::negligible: ++negligible; break;
            case Growth::Kind::bounded:
                total += p.exponent;
                others_exact = others_exact && p.exact;
                break;
            case Growth::Kind::zero: break;
            }
        }
        if (unbounded > 0) {
            if (unbounded == 1 && negligible == 0 && uniform && others_exact) g.kind = Growth::Kind::unbounded;
            return g;
        }
        if (negligible > 0) {
            g.kind = Growth::Kind::negligible;
            return g;
        }
        g.kind = Growth::Kind::bounded;
        g.exponent = total;
        return g;
    }
    default: return g;
    }
}

std::vector<std::vector<double>> sample_grid(const Interval& k) {
    const std::size_t n = k.dimension();
    const std::size_t per_axis = n == 1 ? 17 : (n == 2 ? 9 : 5);
    std::vector<std::vector<double>> axes(n);
    for (std::size_t a = 0; a < n; ++a) {
        const double lo = to_double(k.lo(a)), hi = to_double(k.hi(a));
        for (std::size_t i = 0; i < per_axis; ++i)
            axes[a].push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(per_axis - 1));
    }
    std::vector<std::vector<double>> pts{{}};
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<std::vector<double>> next;
        for (const auto& p : pts)
            for (double v : axes[a]) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        pts = std::move(next);
    }
    return pts;
}

// Sampled sup over the grid of |u| for each eps of the default schedule.
OpaqueAnalysis sampled_sup(const std::vector<Expr>& nets, const Interval& k, const Gauge& gauge) {
    const auto grid = sample_grid(k);
    std::vector<double> y, t;
    for (double eps : default_schedule()) {
        const double rho = gauge.rho(eps);
        double sup = 0;
        bool finite = true;
        for (const auto& u : nets)
            for (const auto& x : grid) {
                const double v = u.evaluate(x, rho);
                if (!std::isfinite(v)) finite = false;
                else sup = std::max(sup, std::fabs(v));
            }
        y.push_back(finite ? std::log10(sup) : std::numeric_limits<double>::infinity());
        t.push_back(std::log10(rho));
    }
    return analyze_samples(y, t);
}

void check_budget(const Expr& u, unsigned alpha_max) {
    if (auto b = u.budget(); b && static_cast<int>(alpha_max) > *b)
        throw Error(ErrorCode::budget_exceeded, "derivative order " + std::to_string(alpha_max) +
                                                    " exceeds the smoothness budget " + std::to_string(*b));
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

GeneralizedPoint GeneralizedPoint::symbolic(const std::vector<GaugeExpr>& coords, const Gauge& gauge) {
    GeneralizedPoint p;
    for (const auto& c : coords) p.coords.emplace_back(c, gauge);
    return p;
}

GeneralizedPoint GeneralizedPoint::standard(const std::vector<Rational>& coords, const Gauge& gauge) {
    std::vector<GaugeExpr> g(coords.begin(), coords.end());
    return symbolic(g, gauge);
}

bool GeneralizedPoint::is_symbolic() const {
    return std::all_of(coords.begin(), coords.end(), [](const GeneralizedNumber& c) { return c.is_symbolic(); });
}

std::vector<GaugeExpr> GeneralizedPoint::symbolic_coords() const {
    std::vector<GaugeExpr> out;
    for (const auto& c : coords) out.push_back(c.symbolic());
    return out;
}

std::string GeneralizedPoint::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? ", " : "") + coords[i].to_string();
    return s + ")";
}

GsfDomain GsfDomain::everywhere(std::size_t n) {
    GsfDomain d;
    d.dim_ = n;
    return d;
}

GsfDomain GsfDomain::balls(std::vector<SharpBall> balls) {
    if (balls.empty()) throw Error(ErrorCode::invalid_argument, "domain needs at least one ball");
    GsfDomain d;
    d.kind_ = Kind::balls;
    d.dim_ = balls.front().center.dimension();
    for (const auto& b : balls) {
        if (b.center.dimension() != d.dim_) throw Error(ErrorCode::domain_mismatch, "ball centers differ in dimension");
        const auto c = gn_classify(b.radius);
        if (c.cls == NumberClass::zero || !b.radius.is_symbolic() || sgn(b.radius.symbolic().leading_coeff()) <= 0)
            throw Error(ErrorCode::invalid_argument, "ball radius must be a positive invertible number");
    }
    d.balls_ = std::move(balls);
    return d;
}

GsfDomain GsfDomain::compactly_supported(const Interval& omega) {
    GsfDomain d;
    d.kind_ = Kind::compactly_supported;
    d.dim_ = omega.dimension();
    d.omega_ = omega;
    return d;
}

bool GsfDomain::contains(const GeneralizedPoint& x) const {
    if (x.dimension() != dim_) throw Error(ErrorCode::domain_mismatch, "point dimension differs from the domain");
    switch (kind_) {
    case Kind::everywhere: return true;
    case Kind::balls:
        for (const auto& b : balls_) {
            GeneralizedNumber s(GaugeExpr(0), b.radius.gauge());
            for (std::size_t i = 0; i < dim_; ++i) {
                const GeneralizedNumber d = gn_sub(x.coords[i], b.center.coords[i]);
                s = gn_add(s, gn_mul(d, d));
            }
            if (gn_lt(s, gn_mul(b.radius, b.radius))) return true;
        }
        return false;
    case Kind::compactly_supported:
        for (std::size_t i = 0; i < dim_; ++i) {
            if (!x.coords[i].is_symbolic())
                throw Error(ErrorCode::undetermined, "compact support of an opaque coordinate");
            const GaugeExpr& g = x.coords[i].symbolic();
            Rational st = 0;
            if (!g.terms().empty()) {
                const Rational lead = *g.leading_exponent();
                if (sgn(lead) < 0) return false;
                if (sgn(lead) == 0) st = g.leading_coeff();
            } else if (g.truncation() && sgn(*g.truncation()) <= 0) {
                throw Error(ErrorCode::undetermined, "standard part hidden by truncation");
            }
            if (!(st > omega_.lo(i) && st < omega_.hi(i))) return false;
        }
        return true;
    }
    return false;
}

bool GsfDomain::covers(const Interval& k) const {
    if (k.dimension() != dim_) return false;
    switch (kind_) {
    case Kind::everywhere: return true;
    case Kind::compactly_supported:
        for (std::size_t i = 0; i < dim_; ++i)
            if (!(k.lo(i) > omega_.lo(i) && k.hi(i) < omega_.hi(i))) return false;
        return true;
    case Kind::balls: {
        const Gauge gauge = balls_.front().radius.gauge();
        for (const auto& b : balls_) {
            bool all = true;
            for (std::size_t mask = 0; mask < (std::size_t{1} << dim_) && all; ++mask) {
                std::vector<Rational> corner;
                for (std::size_t i = 0; i < dim_; ++i) corner.push_back((mask >> i) & 1 ? k.hi(i) : k.lo(i));
                GsfDomain single = balls({b});
                all = single.contains(GeneralizedPoint::standard(corner, gauge));
            }
            if (all) return true;
        }
        return false;
    }
    }
    return false;
}

std::string GsfDomain::to_string() const {
    switch (kind_) {
    case Kind::everywhere: return "everywhere(" + std::to_string(dim_) + ")";
    case Kind::compactly_supported: return "compact(" + omega_.to_string() + ")";
    case Kind::balls: {
        std::string s;
        for (const auto& b : balls_) s += (s.empty() ? "" : " u ") + std::string("B(") + b.center.to_string() + ", " + b.radius.to_string() + ")";
        return s;
    }
    }
    return "?";
}

void Certificate::add(CertificateEntry e) {
    std::lock_guard lock(mu_);
    entries_.push_back(std::move(e));
}

void Certificate::add(PerturbationRecord r) {
    std::lock_guard lock(mu_);
    perturbations_.push_back(std::move(r));
}

void Certificate::add_point(const GeneralizedPoint& x, unsigned order) {
    std::lock_guard lock(mu_);
    points_.push_back(x);
    orders_.push_back(order);
}

std::vector<CertificateEntry> Certificate::entries() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::vector<PerturbationRecord> Certificate::perturbations() const {
    std::lock_guard lock(mu_);
    return perturbations_;
}

std::vector<GeneralizedPoint> Certificate::points() const {
    std::lock_guard lock(mu_);
    return points_;
}

std::optional<unsigned> Certificate::certified_order() const {
    std::lock_guard lock(mu_);
    if (orders_.empty()) return std::nullopt;
    return *std::min_element(orders_.begin(), orders_.end());
}

GSFunction::GSFunction(Expr net, std::size_t dim, GsfDomain domain, Gauge gauge)
    : net_(std::move(net)), dim_(dim), domain_(std::move(domain)), gauge_(std::move(gauge)),
      cert_(std::make_shared<Certificate>()) {
    if (domain_.dimension() != dim_) throw Error(ErrorCode::domain_mismatch, "domain dimension differs from the function");
    if (net_.arity() > dim_) throw Error(ErrorCode::invalid_argument, "net uses more variables than the dimension");
}

GeneralizedNumber evaluate_net(const Expr& net, const GeneralizedPoint& x, const Gauge& gauge) {
    if (x.is_symbolic()) {
        const SymbolicValue v = evaluate_symbolic(net, x.symbolic_coords());
        if (v.value) return GeneralizedNumber(*v.value, gauge);
    }
    OpaqueNet body;
    body.evaluator = [net, x, gauge](double eps) {
        std::vector<double> pt;
        for (const auto& c : x.coords) pt.push_back(c.sample(eps));
        return net.evaluate(pt, gauge.rho(eps));
    };
    body.schedule = default_schedule();
    body.label = net.to_string() + " at " + x.to_string();
    return GeneralizedNumber(std::move(body), gauge);
}

GeneralizedNumber gsf_eval(const GSFunction& f, const GeneralizedPoint& x) {
    if (!f.domain().contains(x))
        throw Error(ErrorCode::out_of_domain, "point " + x.to_string() + " is outside " + f.domain().to_string());
    GeneralizedNumber v = evaluate_net(f.net(), x, f.gauge());
    const Moderateness m = gn_is_moderate(v);
    f.certificate()->add(CertificateEntry{x.to_string(), MultiIndex(f.dimension()), m, "evaluation"});
    if (m.kind == Moderateness::Kind::no)
        throw Error(ErrorCode::non_moderate, "value at " + x.to_string() + " is not moderate: f_eps(x_eps) is not O(rho^-N)");
    return v;
}

bool gsf_certify(const GSFunction& f, const std::vector<GeneralizedPoint>& points, unsigned max_order) {
    check_budget(f.net(), max_order);
    const auto alphas = indices_of_total_order(f.dimension(), max_order);
    std::vector<Expr> nets;
    for (const auto& a : alphas) nets.push_back(f.net().derivative(a));
    bool all = true;
    for (const auto& x : points) {
        if (!f.domain().contains(x))
            throw Error(ErrorCode::out_of_domain, "point " + x.to_string() + " is outside " + f.domain().to_string());
        bool ok = true;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const Moderateness m = gn_is_moderate(evaluate_net(nets[i], x, f.gauge()));
            f.certificate()->add(CertificateEntry{x.to_string(), alphas[i], m, "certification"});
            ok = ok && m.kind == Moderateness::Kind::yes;
        }
        if (ok) f.certificate()->add_point(x, max_order);
        all = all && ok;
    }
    return all;
}

Expr canonical_perturbation(std::size_t dim, const Gauge& gauge) {
    Expr arg;
    for (std::size_t i = 0; i < dim; ++i) arg = arg + Expr::variable(i);
    const Rational q = gauge.is_power() ? Rational(Rational(1) / gauge.exponent()) : Rational(1);
    return Expr::exp(-Expr::rho_power(-q)) * Expr::sin(arg);
}

bool gn_agree(const GeneralizedNumber& a, const GeneralizedNumber& b) {
    if (a.is_symbolic() && b.is_symbolic()) return (a.symbolic() - b.symbolic()).is_zero();
    if (!(a.gauge() == b.gauge())) throw Error(ErrorCode::gauge_mismatch, "gauges differ");
    bool rounding = true;
    for (double eps : default_schedule()) {
        const double x = a.sample(eps), y = b.sample(eps);
        if (!std::isfinite(x) || !std::isfinite(y)) {
            rounding = false;
            break;
        }
        if (std::fabs(x - y) > 64 * std::numeric_limits<double>::epsilon() * (std::fabs(x) + std::fabs(y))) {
            rounding = false;
            break;
        }
    }
    return rounding || gn_is_negligible(gn_sub(a, b));
}

PerturbationRecord check_perturbation(const GSFunction& f, const MultiIndex& alpha, const GeneralizedPoint& x) {
    PerturbationRecord r;
    r.point = x.to_string();
    r.alpha = alpha;
    const Expr h = canonical_perturbation(f.dimension(), f.gauge());
    const Expr d_plain = f.net().derivative(alpha);
    const Expr d_pert = (f.net() + h).derivative(alpha);
    const GeneralizedNumber a = evaluate_net(d_pert, x, f.gauge());
    const GeneralizedNumber b = evaluate_net(d_plain, x, f.gauge());
    if (a.is_symbolic() && b.is_symbolic()) {
        r.exact = true;
        r.agree = a.symbolic().identical(b.symbolic());
        if (!r.agree) {
            auto le = (a.symbolic() - b.symbolic()).leading_exponent();
            r.gap_exponent = le ? to_double(*le) : std::numeric_limits<double>::infinity();
        } else {
            r.gap_exponent = std::numeric_limits<double>::infinity();
        }
        return r;
    }
    const GeneralizedNumber diff = evaluate_net(d_pert - d_plain, x, f.gauge());
    if (diff.is_symbolic()) {
        r.exact = diff.symbolic().is_exact_zero();
        r.agree = diff.symbolic().is_zero();
        r.gap_exponent = r.agree ? std::numeric_limits<double>::infinity() : to_double(*diff.symbolic().leading_exponent());
        return r;
    }
    const OpaqueAnalysis an = analyze_opaque(diff.opaque(), f.gauge());
    r.gap_exponent = an.negligible ? std::numeric_limits<double>::infinity() : an.slope;
    r.agree = an.finite_samples && (an.negligible || (an.residual <= kFitResidualDecades && an.slope >= 10));
    return r;
}

GSFunction gsf_derive(const GSFunction& f, const MultiIndex& alpha) {
    if (alpha.size() != f.dimension()) throw Error(ErrorCode::domain_mismatch, "multi-index length differs from the dimension");
    check_budget(f.net(), alpha.total());
    GSFunction g(f.net().derivative(alpha), f.dimension(), f.domain(), f.gauge());
    const auto points = f.certificate()->points();
    const auto order = f.certificate()->certified_order();
    for (const auto& x : points) g.certificate()->add(check_perturbation(f, alpha, x));
    if (order && *order >= alpha.total() && !points.empty()) {
        unsigned rest = *order - alpha.total();
        if (auto b = g.budget()) rest = std::min(rest, static_cast<unsigned>(std::max(0, *b)));
        gsf_certify(g, points, rest);
    }
    return g;
}

const char* to_string(VerdictMethod m) {
    switch (m) {
    case VerdictMethod::exact: return "exact";
    case VerdictMethod::bound: return "bound";
    case VerdictMethod::sampled: return "sampled";
    }
    return "?";
}

const char* to_string(NegligibilityVerdict::Kind k) {
    switch (k) {
    case NegligibilityVerdict::Kind::negligible: return "negligible";
    case NegligibilityVerdict::Kind::not_negligible: return "not_negligible";
    case NegligibilityVerdict::Kind::undetermined: return "undetermined";
    }
    return "?";
}

std::vector<OrderVerdict> net_is_moderate_on(const Expr& u, const Interval& k, unsigned alpha_max, const Gauge& gauge) {
    check_budget(u, alpha_max);
    std::vector<OrderVerdict> out;
    for (unsigned j = 0; j <= alpha_max; ++j) {
        OrderVerdict v;
        v.order = j;
        std::vector<Expr> unknown;
        bool all_exact = true, unbounded = false;
        unsigned n = 0;
        for (const auto& a : indices_of_total_order(k.dimension(), j)) {
            if (a.total() != j) continue;
            const Expr d = u.derivative(a);
            const Growth g = growth_on(d, k);
            switch (g.kind) {
            case Growth::Kind::unknown:
                unknown.push_back(d);
                all_exact = false;
                break;
            case Growth::Kind::unbounded: unbounded = true; break;
            case Growth::Kind::bounded:
                n = std::max(n, moderate_n_for(g.exponent));
                all_exact = all_exact && g.exact;
                break;
            case Growth::Kind::negligible: all_exact = false; break;
            case Growth::Kind::zero: break;
            }
        }
        if (unbounded) {
            v.moderate.kind = Moderateness::Kind::no;
            v.method = VerdictMethod::bound;
        } else if (unknown.empty()) {
            v.moderate.kind = Moderateness::Kind::yes;
            v.moderate.n = n;
            v.method = all_exact ? VerdictMethod::exact : VerdictMethod::bound;
        } else {
            const OpaqueAnalysis a = sampled_sup(unknown, k, gauge);
            v.method = VerdictMethod::sampled;
            v.moderate.heuristic = true;
            if (!a.finite_samples || !a.moderate_n) {
                v.moderate.kind = Moderateness::Kind::no;
            } else {
                v.moderate.kind = Moderateness::Kind::yes;
                v.moderate.n = std::max(n, *a.moderate_n);
            }
        }
        out.push_back(v);
    }
    return out;
}

NegligibilityVerdict net_is_negligible_on(const Expr& u, const Interval& k, unsigned alpha_max, const Gauge& gauge) {
    check_budget(u, alpha_max);
    NegligibilityVerdict v;
    std::vector<Expr> unknown;
    bool all_exact = true;
    for (const auto& a : indices_of_total_order(k.dimension(), alpha_max)) {
        const Expr d = u.derivative(a);
        const Growth g = growth_on(d, k);
        switch (g.kind) {
        case Growth::Kind::zero: break;
        case Growth::Kind::negligible: all_exact = false; break;
        case Growth::Kind::unbounded:
            v.kind = NegligibilityVerdict::Kind::not_negligible;
            v.method = VerdictMethod::bound;
            v.detail = "derivative " + a.to_string() + " is not moderate";
            return v;
        case Growth::Kind::bounded:
            if (g.exact) {
                v.kind = NegligibilityVerdict::Kind::not_negligible;
                v.method = VerdictMethod::exact;
                v.detail = "derivative " + a.to_string() + " has leading exponent " + to_string(g.exponent);
                return v;
            }
            unknown.push_back(d);
            break;
        case Growth::Kind::unknown: unknown.push_back(d); break;
        }
    }
    if (unknown.empty()) {
        v.kind = NegligibilityVerdict::Kind::negligible;
        v.method = all_exact ? VerdictMethod::exact : VerdictMethod::bound;
        return v;
    }
    v.method = VerdictMethod::sampled;
    const OpaqueAnalysis a = sampled_sup(unknown, k, gauge);
    if (!a.finite_samples) {
        v.kind = NegligibilityVerdict::Kind::not_negligible;
        v.detail = "non-finite samples";
    } else if (a.negligible) {
        v.kind = NegligibilityVerdict::Kind::negligible;
    } else if (a.residual <= kFitResidualDecades) {
        v.kind = NegligibilityVerdict::Kind::not_negligible;
        v.detail = "sampled sup slope " + format_double(a.slope);
    } else {
        v.kind = NegligibilityVerdict::Kind::undetermined;
        v.detail = "sampled sup does not fit a power of rho";
    }
    return v;
}

GSFunction embed_distribution(const FormalDistribution& t, unsigned p, const Gauge& gauge) {
    auto net = std::make_shared<const PiecewiseNet>(mollify(t, p));
    return GSFunction(Expr::piecewise(net, Expr::variable(0)), 1, GsfDomain::compactly_supported(t.domain()), gauge);
}

GaugeExpr gsf_pair(const GSFunction& f, const PiecewisePoly& phi) {
    auto net = to_piecewise_net(f.net(), 1);
    if (!net || f.dimension() != 1) throw Error(ErrorCode::invalid_argument, "pairing needs a univariate piecewise-polynomial net");
    return net->pair(phi);
}

NegligibilityVerdict colombeau_class_equal(const GSFunction& f, const GSFunction& g, const Interval& k, unsigned alpha_max) {
    if (!(f.gauge() == g.gauge())) throw Error(ErrorCode::gauge_mismatch, "functions use different gauges");
    if (f.dimension() != g.dimension() || k.dimension() != f.dimension())
        throw Error(ErrorCode::domain_mismatch, "dimensions differ");
    if (!f.domain().covers(k) || !g.domain().covers(k))
        throw Error(ErrorCode::domain_mismatch, "compact " + k.to_string() + " is not inside both domains");
    return net_is_negligible_on(f.net() - g.net(), k, alpha_max, f.gauge());
}

std::vector<RegularizationRow> regularization_rows(const GSFunction& f, const std::vector<Rational>& eps,
                                                   const Rational& lo, const Rational& hi, unsigned grid, bool exact) {
    if (f.dimension() != 1) throw Error(ErrorCode::invalid_argument, "regularization curves need n = 1");
    if (grid < 2) throw Error(ErrorCode::invalid_argument, "grid needs at least two points");
    std::optional<PiecewiseNet> net;
    if (exact) {
        net = to_piecewise_net(f.net(), 1);
        if (!net) throw Error(ErrorCode::invalid_argument, "exact curves need a piecewise-polynomial net");
    }
    std::vector<RegularizationRow> rows;
    for (const auto& e : eps) {
        std::optional<Rational> rho;
        if (exact) {
            rho = f.gauge().rho_exact(e);
            if (!rho) throw Error(ErrorCode::invalid_argument, "exact curves need an integral power gauge");
        }
        for (unsigned i = 0; i < grid; ++i) {
            const Rational x = lo + (hi - lo) * make_rational(i, grid - 1);
            RegularizationRow r;
            if (exact) {
                auto v = net->evaluate_exact(x, *rho);
                if (!v) throw Error(ErrorCode::invalid_argument, "net has non-integral rho exponents");
                r = {to_string(e), to_string(x), to_string(*v)};
            } else {
                const double xd = to_double(x);
                r = {format_double(to_double(e)), format_double(xd),
                     format_double(f.net().evaluate({xd}, f.gauge().rho(to_double(e))))};
            }
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

PhiReport gsf_universal_phi(const PhiCarrier& carrier, const std::vector<GeneralizedPoint>& samples, unsigned max_order,
                            const std::vector<PhiCandidate>& candidates) {
    PhiReport rep;
    for (std::size_t i = 0; i < carrier.size; ++i) {
        const auto pre = carrier.preimage(i);
        if (!pre) throw Error(ErrorCode::invalid_argument, "q-preimage missing for element " + std::to_string(i));
        const GSFunction& phi = *pre;
        for (const auto& x : samples) {
            const std::string where = "element " + std::to_string(i) + " at " + x.to_string();
            if (!phi.domain().contains(x)) {
                rep.failures.push_back(where + ": sample outside the domain");
                rep.commutes = false;
                continue;
            }
            const GeneralizedNumber v = gsf_eval(phi, x);
            ++rep.checks;
            if (!gn_agree(v, carrier.point_map(i, x))) {
                rep.commutes = false;
                rep.failures.push_back(where + ": phi(q(u)) differs from [u]_f");
            }
            for (const auto& alpha : indices_of_total_order(phi.dimension(), max_order)) {
                if (alpha.is_zero()) continue;
                ++rep.checks;
                const GeneralizedNumber d = evaluate_net(gsf_derive(phi, alpha).net(), x, phi.gauge());
                if (!gn_agree(d, carrier.derivative(i, alpha, x))) {
                    rep.preserves_derivatives = false;
                    rep.failures.push_back(where + ": derivative " + alpha.to_string() + " not preserved");
                }
            }
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                ++rep.checks;
                if (!gn_agree(v, candidates[c](i, x))) {
                    rep.unique = false;
                    rep.failures.push_back(where + ": candidate " + std::to_string(c) + " differs from phi");
                }
            }
        }
    }
    return rep;
}

}  // namespace gfcalc
