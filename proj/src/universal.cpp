#include "gfcalc/universal.hpp"

#include "gfcalc/sheaf.hpp"

#include <cmath>

namespace gfcalc {

bool CheckReport::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.passed; });
}

const ConditionResult* CheckReport::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

ReportBuilder::ReportBuilder(std::string suite) { report_.suite = std::move(suite); }

ConditionResult& ReportBuilder::slot(const std::string& condition) {
    auto it = index_.find(condition);
    if (it == index_.end()) {
        it = index_.emplace(condition, report_.conditions.size()).first;
        report_.conditions.push_back({condition, true, 0, {}});
    }
    return report_.conditions[it->second];
}

void ReportBuilder::declare(const std::string& condition) {
    std::lock_guard lock(mu_);
    slot(condition);
}

void ReportBuilder::pass(const std::string& condition) {
    std::lock_guard lock(mu_);
    ++slot(condition).checks;
}

void ReportBuilder::fail(const std::string& condition, std::string instance) {
    std::lock_guard lock(mu_);
    auto& c = slot(condition);
    ++c.checks;
    c.passed = false;
    c.violations.push_back(std::move(instance));
}

void ReportBuilder::record(const std::string& condition, bool ok, const std::function<std::string()>& instance) {
    if (ok) pass(condition);
    else fail(condition, instance());
}

void ReportBuilder::check(const std::string& condition, const std::function<bool()>& test,
                          const std::function<std::string()>& instance) {
    bool ok = false;
    std::string error;
    try {
        ok = test();
    } catch (const std::exception& e) {
        error = e.what();
    }
    if (ok) pass(condition);
    else fail(condition, error.empty() ? instance() : instance() + " (threw: " + error + ")");
}

void ReportBuilder::note(std::string n) {
    std::lock_guard lock(mu_);
    report_.notes.push_back(std::move(n));
}

CheckReport ReportBuilder::finish() {
    std::lock_guard lock(mu_);
    for (auto& c : report_.conditions) std::sort(c.violations.begin(), c.violations.end());
    return report_;
}

// ---- Q laws ------------------------------------------------------------------

namespace {

std::string set_string(const InfinityClass& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& a : s) {
        if (!first) out += ", ";
        out += to_string(a);
        first = false;
    }
    return out + "}";
}

std::string arrow_string(const SetMap& a) {
    std::string out = std::to_string(a.src) + " -> " + std::to_string(a.dst) + " {";
    bool first = true;
    for (const auto& [x, y] : a.map) {
        if (!first) out += ", ";
        out += to_string(x) + " |-> " + to_string(y);
        first = false;
    }
    return out + "}";
}

}  // namespace

bool q_holds(const SetMap& arrow, const QInstances& in) {
    if (arrow.src >= in.objects.size() || arrow.dst >= in.objects.size()) return false;
    const auto& src = in.objects[arrow.src];
    const auto& dst = in.objects[arrow.dst];
    if (arrow.map.size() != src.size()) return false;
    for (const auto& [x, y] : arrow.map)
        if (!src.count(x) || x != y || !dst.count(y)) return false;
    return true;
}

SetMap identity_arrow(std::size_t object, const QInstances& in) {
    SetMap id{object, object, {}};
    for (const auto& x : in.objects.at(object)) id.map.emplace(x, x);
    return id;
}

SetMap compose(const SetMap& g, const SetMap& f) {
    if (f.dst != g.src) throw Error(ErrorCode::domain_mismatch, "arrows are not composable");
    SetMap h{f.src, g.dst, {}};
    for (const auto& [x, y] : f.map) {
        auto it = g.map.find(y);
        if (it != g.map.end()) h.map.emplace(x, it->second);
    }
    return h;
}

CheckReport check_Q_laws(const QInstances& in) {
    ReportBuilder rb("q-laws");
    for (const char* c : {"identity", "composition", "unit_laws", "arrows"}) rb.declare(c);
    for (std::size_t o = 0; o < in.objects.size(); ++o)
        rb.record("identity", q_holds(identity_arrow(o, in), in),
                  [&] { return "object " + std::to_string(o) + " = " + set_string(in.objects[o]); });
    for (std::size_t i = 0; i < in.arrows.size(); ++i) {
        const auto& f = in.arrows[i];
        const bool q = q_holds(f, in);
        rb.record("arrows", q, [&] { return "arrow " + std::to_string(i) + " is not an inclusion: " + arrow_string(f); });
        if (f.src >= in.objects.size() || f.dst >= in.objects.size()) continue;
        const SetMap left = compose(identity_arrow(f.dst, in), f);
        const SetMap right = compose(f, identity_arrow(f.src, in));
        rb.record("unit_laws", left.map == f.map && right.map == f.map,
                  [&] { return "arrow " + std::to_string(i) + ": " + arrow_string(f); });
        if (!q) continue;
        for (std::size_t j = 0; j < in.arrows.size(); ++j) {
            const auto& g = in.arrows[j];
            if (g.src != f.dst || !q_holds(g, in)) continue;
            const SetMap h = compose(g, f);
            rb.record("composition", q_holds(h, in), [&] {
                return "arrows " + std::to_string(j) + " after " + std::to_string(i) + ": " + arrow_string(h);
            });
        }
    }
    rb.note(kFiniteBaseNote);
    return rb.finish();
}

// ---- sections ------------------------------------------------------------------

namespace {

constexpr unsigned kBreakLevel = 2;  // breakpoints on quarters of each section domain

std::uint64_t mix(std::uint64_t seed, std::uint64_t a) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<FormalDistribution> enumerate_sections(const PsiOptions& o) {
    if (o.stride == 0) throw Error(ErrorCode::invalid_argument, "stride must be positive");
    const auto intervals = BaseIndex::standard(1, o.level).enumerate();
    std::vector<FormalDistribution> out;
    std::size_t counter = 0;
    for (std::size_t i = 0; i < intervals.size(); ++i)
        for (unsigned a = 0; a <= o.alpha_cap; ++a, ++counter) {
            if (counter % o.stride != 0) continue;
            Rng rng(mix(o.seed, counter));
            auto f = random_pp_1d(rng, intervals[i], 2, o.d_cap, 0, kBreakLevel);
            out.emplace_back(MultiIndex{a}, std::move(f));
        }
    return out;
}

InvariantSamples invariant_samples(const PsiOptions& o) {
    InvariantSamples s;
    Rng rng(mix(o.seed, 0xfeed));
    const BaseIndex base = BaseIndex::standard(1, o.level);
    for (std::size_t i = 0; i < o.invariant_samples; ++i) {
        const Interval j = random_base_interval(rng, base, 2);
        s.c1.push_back(random_pp_1d(rng, j, 2, o.d_cap, 1, kBreakLevel));
        const auto m = static_cast<unsigned>(random_int(rng, 1, 3));
        s.p_m.emplace_back(PiecewisePoly::polynomial(j, random_poly(rng, 1, static_cast<int>(m) - 1)), m);
        s.continuous.push_back(random_pp_1d(rng, j, 2, o.d_cap, 0, kBreakLevel));
        s.sub.push_back(random_base_subinterval(rng, base, j, 1));
    }
    return s;
}

// ---- targets -----------------------------------------------------------------

SolutionTriple<FormalDistribution> identity_target(kernels::Exec exec) {
    SolutionTriple<FormalDistribution> t;
    t.name = "identity";
    t.j = [](const PiecewisePoly& f) { return fd_lambda(f); };
    t.delta = [](const FormalDistribution& s, std::size_t k) { return fd_derive(s, k); };
    t.equal = [exec](const FormalDistribution& a, const FormalDistribution& b) { return fd_equal(a, b, exec); };
    t.restrict = [](const FormalDistribution& s, const Interval& j) { return fd_restrict(s, j); };
    t.expected = [](const FormalDistribution& s) { return s; };
    return t;
}

SolutionTriple<ShiftedSection> shifted_target(unsigned shift, kernels::Exec exec) {
    auto relabel = [shift](const FormalDistribution& s) {
        return ShiftedSection{fd_raise(s, s.order() + MultiIndex(std::vector<unsigned>(s.dimension(), shift)))};
    };
    SolutionTriple<ShiftedSection> t;
    t.name = "shifted+" + std::to_string(shift);
    t.j = [relabel](const PiecewisePoly& f) { return relabel(fd_lambda(f)); };
    t.delta = [](const ShiftedSection& s, std::size_t k) { return ShiftedSection{fd_derive(s.stored, k)}; };
    t.equal = [exec](const ShiftedSection& a, const ShiftedSection& b) { return fd_equal(a.stored, b.stored, exec); };
    t.restrict = [](const ShiftedSection& s, const Interval& j) { return ShiftedSection{fd_restrict(s.stored, j)}; };
    t.expected = relabel;
    return t;
}

Interval inner_compact(const Interval& j) {
    std::vector<Rational> r;
    for (const auto& x : j.radii()) r.push_back(x / 2);
    return Interval(j.center(), std::move(r));
}

SolutionTriple<GSFunction> colombeau_target(const ColombeauTargetOptions& o) {
    SolutionTriple<GSFunction> t;
    t.name = "colombeau(p=" + std::to_string(o.p) + ")";
    t.j = [o](const PiecewisePoly& f) { return embed_distribution(fd_lambda(f), o.p, o.gauge); };
    t.delta = [](const GSFunction& s, std::size_t k) { return gsf_derive(s, MultiIndex::unit(s.dimension(), k)); };
    t.equal = [o](const GSFunction& a, const GSFunction& b) {
        const Interval k = inner_compact(a.domain().omega());
        unsigned orders = o.alpha_max;
        for (const auto& s : {a, b})
            if (auto budget = s.budget()) orders = std::min(orders, static_cast<unsigned>(std::max(0, *budget)));
        if (colombeau_class_equal(a, b, k, orders).kind != NegligibilityVerdict::Kind::negligible) return false;
        const auto ra = regularization_rows(a, o.eps, k.lo(0), k.hi(0), o.grid, true);
        const auto rb = regularization_rows(b, o.eps, k.lo(0), k.hi(0), o.grid, true);
        for (std::size_t i = 0; i < ra.size(); ++i)
            if (ra[i].value != rb[i].value) return false;
        return true;
    };
    t.restrict = [](const GSFunction& s, const Interval& j) {
        return GSFunction(s.net(), s.dimension(), GsfDomain::compactly_supported(j), s.gauge());
    };
    t.expected = [o](const FormalDistribution& s) { return embed_distribution(s, o.p, o.gauge); };
    return t;
}

// ---- tau instances -------------------------------------------------------------

TauInstance<Expr> colombeau_identity_instance(const Interval& k, std::vector<Expr> nets, std::vector<Expr> negligible) {
    TauInstance<Expr> in;
    in.name = "colombeau quotient";
    in.k = k;
    in.nets = std::move(nets);
    in.negligible = std::move(negligible);
    auto neg = [k, a = in.alpha_max](const Expr& u) {
        return net_is_negligible_on(u, k, a).kind == NegligibilityVerdict::Kind::negligible;
    };
    in.pi = [](const Expr& u) { return u; };
    in.in_kernel = neg;
    in.add = [](const Expr& a, const Expr& b) { return a + b; };
    in.mul = [](const Expr& a, const Expr& b) { return a * b; };
    in.equal = [neg](const Expr& a, const Expr& b) { return neg(a - b); };
    return in;
}

TauInstance<GeneralizedNumber> point_evaluation_instance(const Interval& k, std::vector<Expr> nets,
                                                         std::vector<Expr> negligible) {
    TauInstance<GeneralizedNumber> in;
    in.name = "evaluation at 0";
    in.k = k;
    in.nets = std::move(nets);
    in.negligible = std::move(negligible);
    const std::size_t n = k.dimension();
    in.pi = [n](const Expr& u) {
        return evaluate_net(u, GeneralizedPoint::standard(std::vector<Rational>(n, Rational(0))), Gauge());
    };
    in.in_kernel = [pi = in.pi](const Expr& u) { return gn_is_negligible(pi(u)); };
    in.add = [](const GeneralizedNumber& a, const GeneralizedNumber& b) { return gn_add(a, b); };
    in.mul = [](const GeneralizedNumber& a, const GeneralizedNumber& b) { return gn_mul(a, b); };
    in.equal = [](const GeneralizedNumber& a, const GeneralizedNumber& b) { return gn_agree(a, b); };
    return in;
}

// ---- ring conditions -------------------------------------------------------------

namespace {

GeneralizedNumber opaque(std::function<double(double)> f, std::string label, const Gauge& g) {
    return GeneralizedNumber(OpaqueNet{std::move(f), default_schedule(), std::move(label)}, g);
}

bool is_small(NumberClass c) { return c == NumberClass::zero || c == NumberClass::infinitesimal; }

}  // namespace

CheckReport check_quotient_ring_conditions(const RingCheckOptions& o) {
    ReportBuilder rb("ring");
    for (const char* c : {"ring_axioms", "trichotomy", "zero_is_infinitesimal", "rho_inverse",
                          "bounded_by_infinities", "infinities_determine"})
        rb.declare(c);
    const Gauge& gauge = o.gauge;
    std::vector<GaugeExpr> a(o.samples), b(o.samples), c(o.samples);
    Rng rng(mix(o.seed, 0x5eed));
    for (std::size_t i = 0; i < o.samples; ++i) {
        a[i] = random_gauge_expr(rng);
        b[i] = random_gauge_expr(rng);
        c[i] = random_gauge_expr(rng);
    }
    const GaugeExpr zero, one(1);
    kernels::failing_cases(
        o.samples,
        [&](std::size_t i) {
            const auto &x = a[i], &y = b[i], &z = c[i];
            auto triple = [&] { return "(" + x.to_string() + ", " + y.to_string() + ", " + z.to_string() + ")"; };
            const bool axioms = (x + y) + z == x + (y + z) && (x * y) * z == x * (y * z) && x + y == y + x &&
                                x * y == y * x && x * (y + z) == x * y + x * z && x + zero == x && x * one == x &&
                                x + (-x) == zero;
            rb.record("ring_axioms", axioms, triple);

            const GeneralizedNumber gx(x, gauge), g0(zero, gauge);
            rb.check(
                "trichotomy",
                [&] { return int(gn_lt(gx, g0)) + int(gn_is_negligible(gx)) + int(gn_lt(g0, gx)) == 1; },
                [&] { return x.to_string(); });

            // boundedness: |x| <= rho^(min(a0, 0) - 1), an infinity
            const Rational a0 = x.is_zero() ? Rational(0) : *x.leading_exponent();
            const GeneralizedNumber bound(GaugeExpr::rho_power(std::min(a0, Rational(0)) - 1), gauge);
            rb.check(
                "bounded_by_infinities",
                [&] { return gn_classify(bound).cls == NumberClass::infinite && gn_leq(gn_abs(gx), bound); },
                [&] { return x.to_string() + " above " + bound.to_string(); });

            // x - x through a different representative: x + exp(-1/rho) is the same class
            if (i % 20 == 0) {
                const GaugeExpr xc = x;
                const GeneralizedNumber rep = opaque(
                    [xc, gauge](double e) {
                        const double r = gauge.rho(e);
                        return xc.evaluate(r) - xc.evaluate(r) + std::exp(-1.0 / r) * std::sin(1.0 / e);
                    },
                    "(" + x.to_string() + ") - (" + x.to_string() + ") + exp(-1/rho) sin(1/eps)", gauge);
                rb.check(
                    "zero_is_infinitesimal",
                    [&] { return !gn_is_negligible(rep) || is_small(gn_classify(rep).cls); },
                    [&] { return rep.to_string(); });
                // a net below the infinity bound is moderate
                const GeneralizedNumber below = opaque(
                    [xc, gauge](double e) { return xc.evaluate(gauge.rho(e)) * std::sin(1.0 / e); },
                    "(" + x.to_string() + ") sin(1/eps)", gauge);
                rb.check(
                    "infinities_determine",
                    [&] {
                        const auto m = gn_is_moderate(below);
                        const auto n = gn_is_moderate(bound);
                        return m.kind == Moderateness::Kind::yes && m.n <= n.n;
                    },
                    [&] { return below.to_string() + " under " + bound.to_string(); });
            }
            return true;
        },
        o.exec);

    // symbolic representatives of zero
    for (const auto& z : {GaugeExpr(), GaugeExpr::rho_power(1) - GaugeExpr::rho_power(1)}) {
        const GeneralizedNumber gz(z, gauge);
        rb.record("zero_is_infinitesimal", is_small(gn_classify(gz).cls), [&] { return gz.to_string(); });
    }
    const std::vector<std::pair<std::function<double(double)>, std::string>> zeros = {
        {[gauge](double e) { return 5.0 * std::exp(-1.0 / gauge.rho(e)); }, "5 exp(-1/rho)"},
        {[gauge](double e) { return -std::exp(-2.0 / gauge.rho(e)); }, "-exp(-2/rho)"},
        {[gauge](double e) { return std::exp(-1.0 / gauge.rho(e)) * std::sin(1.0 / e); }, "exp(-1/rho) sin(1/eps)"},
    };
    for (const auto& [f, label] : zeros) {
        const auto rep = opaque(f, label, gauge);
        rb.check(
            "zero_is_infinitesimal", [&] { return gn_is_negligible(rep) && is_small(gn_classify(rep).cls); },
            [&] { return rep.to_string(); });
    }

    const GeneralizedNumber rinv(GaugeExpr::rho_power(-1), gauge);
    rb.check(
        "rho_inverse",
        [&] {
            const auto m = gn_is_moderate(rinv);
            return m.kind == Moderateness::Kind::yes && m.n == 1 && gn_classify(rinv).cls == NumberClass::infinite;
        },
        [&] { return rinv.to_string(); });

    // eps sin(1/eps) under rho^0 and rho^-2 sin(1/eps) under rho^-2
    struct Under {
        std::function<double(double)> f;
        std::string label;
        int bound;
    };
    const std::vector<Under> unders = {
        {[gauge](double e) { return gauge.rho(e) * std::sin(1.0 / e); }, "rho sin(1/eps)", 0},
        {[](double e) { return std::sin(1.0 / e); }, "sin(1/eps)", 0},
        {[gauge](double e) { return std::cos(1.0 / (e * e)) / (gauge.rho(e) * gauge.rho(e)); }, "rho^-2 cos(1/eps^2)",
         2},
    };
    for (const auto& u : unders) {
        const auto g = opaque(u.f, u.label, gauge);
        rb.check(
            "infinities_determine",
            [&] {
                for (double e : default_schedule())
                    if (std::fabs(u.f(e)) > std::pow(gauge.rho(e), -u.bound) * (1 + 1e-12)) return false;
                const auto m = gn_is_moderate(g);
                return m.kind == Moderateness::Kind::yes && m.n <= static_cast<unsigned>(u.bound);
            },
            [&] { return u.label + " under rho^-" + std::to_string(u.bound); });
    }
    rb.note(kFiniteBaseNote);
    return rb.finish();
}

}  // namespace gfcalc
