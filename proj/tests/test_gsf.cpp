#include "gfcalc/gsf.hpp"
#include "gfcalc/random_objects.hpp"

#include <doctest.h>

#include <cmath>

using namespace gfcalc;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
Interval iv(const Rational& a, const Rational& b) { return Interval::from_bounds({a}, {b}); }
Poly x1() { return Poly::variable(1, 0); }
Expr X() { return Expr::variable(0); }
Expr rho(long a, long b = 1) { return Expr::rho_power(q(a, b)); }
GaugeExpr r(long a, long b = 1) { return GaugeExpr::rho_power(q(a, b)); }

PiecewisePoly ramp_on(const Interval& d) { return PiecewisePoly(d, {{Rational(0)}}, {Poly(1), x1()}); }
FormalDistribution heaviside(const Interval& d) { return FormalDistribution(MultiIndex{1}, ramp_on(d)); }
FormalDistribution delta(const Interval& d) { return FormalDistribution(MultiIndex{2}, ramp_on(d)); }

GeneralizedPoint pt(const GaugeExpr& g) { return GeneralizedPoint::symbolic({g}); }

// integral_{-1}^{1} (1 - u^2)^p du = 2^(2p+1) (p!)^2 / (2p+1)!
Rational bump_area(unsigned p) {
    mpz_class num = 1, den = 1;
    for (unsigned i = 1; i <= p; ++i) num *= i * i;
    num *= mpz_class(1) << (2 * p + 1);
    for (unsigned i = 1; i <= 2 * p + 1; ++i) den *= i;
    Rational a(num, den);
    a.canonicalize();
    return a;
}

PiecewisePoly bump_test(const Interval& d, unsigned k) {
    Poly b = Poly::constant(1, Rational(1)) - x1() * x1();
    Poly p = Poly::constant(1, Rational(1));
    for (unsigned i = 0; i < k; ++i) p *= b;
    return PiecewisePoly::polynomial(d, p);
}

GSFunction everywhere(const Expr& e, std::size_t n = 1) { return GSFunction(e, n, GsfDomain::everywhere(n)); }

}  // namespace

TEST_CASE("bump normalization") {
    for (unsigned p : {1u, 2u, 5u, 8u}) CHECK(bump_constant(p) == Rational(1) / bump_area(p));
    CHECK(bump_constant(2) == q(15, 16));
    CHECK(bump_poly(2, 0).evaluate({Rational(0)}) == q(15, 16));
}

TEST_CASE("expression canonical form") {
    CHECK((X() + X()) == Expr(2) * X());
    CHECK((X() - X()).is_zero());
    CHECK((X() * rho(1) * rho(-1)) == X());
    CHECK((Expr::sin(X()) * X()) == (X() * Expr::sin(X())));
    CHECK(Expr::cos(Expr(0)) == Expr(1));
    CHECK(Expr::bump(2, Expr(q(3, 2))).is_zero());
    CHECK(Expr::bump(2, Expr(0)) == Expr(q(15, 16)));
    const Expr e = X() * X() * Expr::sin(X() * rho(-1));
    CHECK((e.derivative(0) - e.derivative(0)).is_zero());
    CHECK(e.arity() == 1);
    CHECK(Expr::variable(2).arity() == 3);
}

TEST_CASE("expression derivatives") {
    const Expr s = Expr::sin(X() * rho(-1));
    const Expr ds = s.derivative(0);
    CHECK(ds == rho(-1) * Expr::cos(X() * rho(-1)));
    for (double x : {0.1, 0.7})
        for (double h : {0.01, 0.3}) CHECK(ds.evaluate(std::vector<double>{x}, h) == doctest::Approx(std::cos(x / h) / h));
    const Expr b = Expr::bump(4, X());
    CHECK(b.budget() == 2);
    CHECK(b.derivative(0).budget() == 1);
    CHECK_THROWS_AS(Expr::bump(2, X(), 2), Error);
    // chain rule through exp against a difference quotient
    const Expr ex = Expr::exp(X() * X()) * X();
    const double x0 = 0.3, h = 1e-6;
    const double fd = (ex.evaluate(std::vector<double>{x0 + h}, 1.0) - ex.evaluate(std::vector<double>{x0 - h}, 1.0)) / (2 * h);
    CHECK(ex.derivative(0).evaluate(std::vector<double>{x0}, 1.0) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("symbolic evaluation at generalized points") {
    GSFunction f = everywhere(X() * X());
    const GeneralizedNumber v = gsf_eval(f, pt(r(-1)));
    REQUIRE(v.is_symbolic());
    CHECK(v.symbolic().identical(r(-2)));
    GSFunction df = gsf_derive(f, MultiIndex{1});
    const GeneralizedNumber dv = gsf_eval(df, pt(r(-1)));
    REQUIRE(dv.is_symbolic());
    CHECK(dv.symbolic().identical(GaugeExpr::monomial(2, -1)));
    GSFunction d0 = gsf_derive(f, MultiIndex{0});
    CHECK(d0.net() == f.net());
    // exp of a negatively infinite argument is negligible
    const SymbolicValue e = evaluate_symbolic(Expr::exp(-rho(-1)) * Expr::sin(X()), {GaugeExpr(q(1, 3))});
    REQUIRE(e.value);
    CHECK(e.value->is_exact_zero());
    // sin at a nonzero point stays opaque but bounded
    const SymbolicValue s = evaluate_symbolic(Expr::sin(X()), {GaugeExpr(1)});
    CHECK_FALSE(s.value);
    CHECK(s.moderate);
    const GeneralizedNumber o = gsf_eval(everywhere(Expr::sin(X())), pt(GaugeExpr(1)));
    CHECK_FALSE(o.is_symbolic());
    CHECK(o.sample(0.01) == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("non-moderate values are rejected") {
    GSFunction f = everywhere(Expr::exp(X()));
    CHECK_THROWS_AS(gsf_eval(f, pt(r(-1))), Error);
    try {
        gsf_eval(f, pt(r(-1)));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::non_moderate);
    }
    CHECK_NOTHROW(gsf_eval(f, pt(GaugeExpr(1))));
}

TEST_CASE("domains") {
    GsfDomain ball = GsfDomain::balls({SharpBall{pt(GaugeExpr(0)), GeneralizedNumber(r(1))}});
    CHECK(ball.contains(pt(r(2))));
    CHECK_FALSE(ball.contains(pt(GaugeExpr(q(1, 2)))));
    CHECK_FALSE(ball.contains(pt(r(1))));
    GsfDomain cs = GsfDomain::compactly_supported(iv(-1, 1));
    CHECK(cs.contains(pt(GaugeExpr(q(1, 2)) + r(1))));
    CHECK(cs.contains(pt(r(3))));
    CHECK_FALSE(cs.contains(pt(GaugeExpr(1))));
    CHECK_FALSE(cs.contains(pt(r(-1))));
    CHECK(cs.covers(iv(q(-1, 2), q(1, 2))));
    CHECK_FALSE(cs.covers(iv(-1, q(1, 2))));
    CHECK_THROWS_AS(GsfDomain::balls({SharpBall{pt(GaugeExpr(0)), GeneralizedNumber(GaugeExpr(0))}}), Error);
}

TEST_CASE("embedded delta") {
    const Interval d = iv(-2, 2);
    GSFunction f = embed_distribution(delta(d), 2);
    const GeneralizedNumber v0 = gsf_eval(f, pt(GaugeExpr(0)));
    REQUIRE(v0.is_symbolic());
    CHECK(v0.symbolic().identical(GaugeExpr::monomial(q(15, 16), -1)));
    const GeneralizedNumber v1 = gsf_eval(f, pt(GaugeExpr(1)));
    REQUIRE(v1.is_symbolic());
    CHECK(v1.symbolic().is_exact_zero());
    // inside the transition layer, value = C_p (1 - u^2)^p / rho at x = u rho
    const GeneralizedNumber vh = gsf_eval(f, pt(GaugeExpr::monomial(q(1, 2), 1)));
    CHECK(vh.symbolic().identical(GaugeExpr::monomial(q(15, 16) * q(9, 16), -1)));
    CHECK_THROWS_AS(gsf_eval(f, pt(GaugeExpr(2))), Error);
    for (unsigned p : {2u, 8u}) {
        GSFunction g = embed_distribution(delta(d), p);
        CHECK(gsf_eval(g, pt(GaugeExpr(0))).symbolic().identical(GaugeExpr::monomial(Rational(1) / bump_area(p), -1)));
    }
    CHECK(embed_distribution(delta(d), 8).budget() == 6);
    CHECK(embed_distribution(delta(d), 2).budget() == 0);
    CHECK_THROWS_AS(gsf_derive(embed_distribution(delta(d), 2), MultiIndex{1}), Error);
    CHECK_THROWS_AS(embed_distribution(FormalDistribution(MultiIndex{3}, ramp_on(d)), 2), Error);
}

TEST_CASE("embedded functions expand as f(x) + O(rho)") {
    Rng rng(7);
    const Interval d = iv(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const Poly f = random_poly(rng, 1, 5);
        const unsigned p = static_cast<unsigned>(random_int(rng, 2, 6));
        GSFunction g = embed_distribution(fd_lambda(PiecewisePoly::polynomial(d, f)), p);
        const Rational x = random_rational(rng, 3, 4) / 4;
        const GaugeExpr v = gsf_eval(g, pt(GaugeExpr(x))).symbolic();
        const GaugeExpr rest = v - GaugeExpr(f.evaluate({x}));
        CHECK((rest.is_zero() || sgn(*rest.leading_exponent()) > 0));
        // second moment of the normalized bump is 1/(2p+3)
        const GaugeExpr second = GaugeExpr(f.derivative(0).derivative(0).evaluate({x}) / 2 / (2 * p + 3)) * r(2);
        const GaugeExpr after = rest - second;
        CHECK((after.is_zero() || *after.leading_exponent() >= 4));
    }
    CHECK(to_piecewise_net(embed_distribution(fd_zero(d), 4).net(), 1)->is_zero());
}

TEST_CASE("moderateness verdicts on compacts") {
    const Interval k = iv(-1, 1);
    const auto sv = net_is_moderate_on(Expr::sin(X() * rho(-1)), k, 3);
    for (unsigned j = 0; j <= 3; ++j) {
        CHECK(sv[j].moderate.kind == Moderateness::Kind::yes);
        CHECK(sv[j].moderate.n == j);
        CHECK(sv[j].method == VerdictMethod::bound);
    }
    const auto ev = net_is_moderate_on(Expr::exp(rho(-1)) * X(), k, 1);
    CHECK(ev[0].moderate.kind == Moderateness::Kind::no);
    const Expr neg = Expr::exp(-rho(-1)) * Expr::sin(X());
    for (const auto& v : net_is_moderate_on(neg, k, 3)) CHECK(v.moderate.kind == Moderateness::Kind::yes);
    CHECK(net_is_negligible_on(neg, k, 4).kind == NegligibilityVerdict::Kind::negligible);
    const auto pv = net_is_moderate_on(X() * X() * rho(-3) + X() * rho(-1), k, 2);
    CHECK(pv[0].moderate.n == 3);
    CHECK(pv[0].method == VerdictMethod::exact);
    CHECK(pv[2].moderate.n == 3);
    CHECK(net_is_negligible_on(X() * rho(5), k, 0).kind == NegligibilityVerdict::Kind::not_negligible);
    // exp((cos x - 1) / rho) escapes the bound rules
    const auto sm = net_is_moderate_on(Expr::exp((Expr::cos(X()) - Expr(1)) * rho(-1)), k, 0);
    CHECK(sm[0].method == VerdictMethod::sampled);
    CHECK(sm[0].moderate.kind == Moderateness::Kind::yes);
    CHECK(sm[0].moderate.heuristic);
    CHECK_THROWS_AS(net_is_moderate_on(Expr::bump(4, X()), k, 3), Error);
}

TEST_CASE("transition pieces count toward the sup on a compact") {
    GSFunction f = embed_distribution(delta(iv(-2, 2)), 4);
    const auto v = net_is_moderate_on(f.net(), iv(q(-1, 2), q(1, 2)), 2);
    CHECK(v[0].moderate.n == 1);
    CHECK(v[1].moderate.n == 2);
    CHECK(v[2].moderate.n == 3);
    const auto away = net_is_moderate_on(f.net(), iv(q(1, 4), q(1, 2)), 1);
    CHECK(away[0].moderate.n == 0);
    CHECK(net_is_negligible_on(f.net(), iv(q(1, 4), q(1, 2)), 1).kind == NegligibilityVerdict::Kind::negligible);
    const auto edge = net_is_moderate_on(f.net(), iv(0, q(1, 2)), 0);
    CHECK(edge[0].moderate.n == 1);
}

TEST_CASE("Colombeau class equality") {
    const Interval d = iv(-2, 2);
    const Interval k = iv(q(-1, 2), q(1, 2));
    GSFunction h = embed_distribution(heaviside(d), 8);
    GSFunction dl = embed_distribution(delta(d), 8);
    CHECK(colombeau_class_equal(h, h, k, 2).kind == NegligibilityVerdict::Kind::negligible);
    const auto ne = colombeau_class_equal(dl, h, k, 0);
    CHECK(ne.kind == NegligibilityVerdict::Kind::not_negligible);
    CHECK(ne.method == VerdictMethod::exact);
    GSFunction dh = gsf_derive(h, MultiIndex{1});
    CHECK(colombeau_class_equal(dh, dl, k, 2).kind == NegligibilityVerdict::Kind::negligible);
    GSFunction pert(h.net() + canonical_perturbation(1, h.gauge()), 1, h.domain(), h.gauge());
    CHECK(colombeau_class_equal(h, pert, k, 3).kind == NegligibilityVerdict::Kind::negligible);
    CHECK_THROWS_AS(colombeau_class_equal(h, dl, iv(-2, 1), 0), Error);
}

TEST_CASE("embedding is linear in the class sense") {
    Rng rng(11);
    const Interval d = iv(-1, 1);
    const Interval k = iv(q(-1, 2), q(1, 2));
    for (int trial = 0; trial < 8; ++trial) {
        const auto t = random_distribution(rng, d, 3, 3, 3);
        const auto s = random_distribution(rng, d, 3, 3, 3);
        GSFunction sum = embed_distribution(fd_add(t, s), 8);
        GSFunction et = embed_distribution(t, 8), es = embed_distribution(s, 8);
        GSFunction parts(et.net() + es.net(), 1, et.domain());
        CHECK(colombeau_class_equal(sum, parts, k, 1).kind == NegligibilityVerdict::Kind::negligible);
        // another representative embeds into the same class
        GSFunction other = embed_distribution(random_representative(rng, t, 2), 8);
        CHECK(colombeau_class_equal(et, other, k, 1).kind == NegligibilityVerdict::Kind::negligible);
    }
}

TEST_CASE("pairing consistency") {
    Rng rng(5);
    const Interval d = iv(-1, 1);
    const PiecewisePoly phi = bump_test(d, 8);
    for (int trial = 0; trial < 8; ++trial) {
        const auto t = random_distribution(rng, d, 3, 3, 3);
        const GaugeExpr gap = gsf_pair(embed_distribution(t, 8), phi) - GaugeExpr(fd_pair(t, phi));
        CHECK((gap.is_zero() || sgn(*gap.leading_exponent()) > 0));
    }
    const GaugeExpr pd = gsf_pair(embed_distribution(delta(d), 8), bump_test(d, 4));
    CHECK(pd.terms().front().exponent == 0);
    CHECK(pd.terms().front().coeff == 1);
    CHECK(pd.terms()[1].exponent == 2);
}

TEST_CASE("evaluation is an algebra map on nets") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Expr a = random_smooth_net(rng, 1), b = random_smooth_net(rng, 1);
        const GeneralizedPoint x = pt(GaugeExpr(random_rational(rng, 3, 4) / 2) + r(1));
        const GeneralizedNumber va = evaluate_net(a, x, Gauge()), vb = evaluate_net(b, x, Gauge());
        CHECK(gn_agree(evaluate_net(a + b, x, Gauge()), gn_add(va, vb)));
        CHECK(gn_agree(evaluate_net(a * b, x, Gauge()), gn_mul(va, vb)));
    }
}

TEST_CASE("derivatives do not depend on negligible perturbations") {
    Rng rng(19);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = static_cast<std::size_t>(random_int(rng, 1, 2));
        GSFunction f(random_smooth_net(rng, n), n, GsfDomain::everywhere(n));
        std::vector<GeneralizedPoint> points;
        for (int i = 0; i < 3; ++i) {
            std::vector<GaugeExpr> c;
            for (std::size_t j = 0; j < n; ++j) c.push_back(GaugeExpr(random_rational(rng, 3, 3)) + GaugeExpr::monomial(random_rational(rng, 2, 2), 1));
            points.push_back(GeneralizedPoint::symbolic(c));
        }
        REQUIRE(gsf_certify(f, points, 2));
        CHECK(f.certificate()->certified_order() == 2u);
        MultiIndex alpha(n);
        alpha[0] = 1;
        GSFunction g = gsf_derive(f, alpha);
        const auto recs = g.certificate()->perturbations();
        CHECK(recs.size() == points.size());
        for (const auto& rec : recs) CHECK(rec.agree);
        CHECK(g.certificate()->certified_order() == 1u);
    }
}

TEST_CASE("universal map for the identity carrier") {
    std::vector<GSFunction> fs;
    Rng rng(23);
    for (int i = 0; i < 4; ++i) fs.emplace_back(random_smooth_net(rng, 1), 1, GsfDomain::everywhere(1));
    PhiCarrier carrier;
    carrier.size = fs.size();
    carrier.preimage = [&](std::size_t i) { return std::optional<GSFunction>(fs[i]); };
    carrier.point_map = [&](std::size_t i, const GeneralizedPoint& x) { return gsf_eval(fs[i], x); };
    carrier.derivative = [&](std::size_t i, const MultiIndex& a, const GeneralizedPoint& x) {
        return gsf_eval(gsf_derive(fs[i], a), x);
    };
    const std::vector<GeneralizedPoint> samples{pt(GaugeExpr(q(1, 3))), pt(GaugeExpr(q(-1, 2)) + r(2))};
    PhiCandidate same = [&](std::size_t i, const GeneralizedPoint& x) { return evaluate_net(fs[i].net(), x, Gauge()); };
    const PhiReport rep = gsf_universal_phi(carrier, samples, 2, {same});
    CHECK(rep.passed());
    CHECK(rep.checks > 0);
    PhiCandidate shifted = [&](std::size_t i, const GeneralizedPoint& x) {
        return evaluate_net(fs[i].net() + Expr(1), x, Gauge());
    };
    CHECK_FALSE(gsf_universal_phi(carrier, samples, 1, {shifted}).unique);
    PhiCarrier broken = carrier;
    broken.preimage = [](std::size_t) { return std::optional<GSFunction>(); };
    CHECK_THROWS_AS(gsf_universal_phi(broken, samples, 1), Error);
}

TEST_CASE("regularization rows") {
    GSFunction f = embed_distribution(delta(iv(-1, 1)), 2);
    const auto rows = regularization_rows(f, {q(1, 10)}, q(-1, 2), q(1, 2), 5, true);
    REQUIRE(rows.size() == 5);
    CHECK(rows[2].x == "0");
    CHECK(rows[2].value == "75/8");
    CHECK(rows[0].value == "0");
    const auto fl = regularization_rows(f, {q(1, 10)}, q(-1, 2), q(1, 2), 5, false);
    CHECK(std::stod(fl[2].value) == doctest::Approx(9.375));
}
