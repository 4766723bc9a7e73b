#include "gfcalc/piecewise_poly.hpp"

#include <doctest.h>

using namespace gfcalc;

namespace {

Poly x1() { return Poly::variable(1, 0); }
Poly c1(int v) { return Poly::constant(1, Rational(v)); }

PiecewisePoly ramp() {
    return PiecewisePoly(Interval::unit(1), {{Rational(0)}}, {Poly(1), x1()});
}

}  // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("2.5e1") == Rational(25));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("multi-index order and arithmetic") {
    MultiIndex a{1, 2}, b{2, 2};
    CHECK(a.leq(b));
    CHECK_FALSE(b.leq(a));
    CHECK((b - a) == MultiIndex{1, 0});
    CHECK_THROWS_AS(a - b, Error);
    CHECK(max(MultiIndex{3, 0}, MultiIndex{1, 4}) == MultiIndex{3, 4});
    CHECK(indices_below(MultiIndex{1, 2}).size() == 6);
    CHECK(indices_of_total_order(2, 2).size() == 6);
}

TEST_CASE("polynomial ring operations") {
    Poly x = x1();
    Poly p = (x + c1(1)) * (x - c1(1));
    CHECK(p == x * x - c1(1));
    CHECK(p.derivative(0) == x.scaled(Rational(2)));
    CHECK(p.antiderivative(0).derivative(0) == p);
    CHECK(p.evaluate({Rational(3)}) == 8);
    CHECK(p.substitute(0, x + c1(1)) == x * x + x.scaled(Rational(2)));
    CHECK(to_string(p) == "x^2 - 1");
}

TEST_CASE("laurent substitution by a monomial") {
    Poly s = Poly::variable(2, 1);
    Exponents inv{};
    inv[1] = -1;
    Poly p = Poly::monomial(2, Rational(1), inv);  // 1/s
    Poly q = p.substitute(1, s.scaled(Rational(2)));
    CHECK(q == p.scaled(Rational(1, 2)));
}

TEST_CASE("piecewise continuity is validated") {
    CHECK_NOTHROW(ramp());
    CHECK_THROWS_AS(PiecewisePoly(Interval::unit(1), {{Rational(0)}}, {Poly(1), c1(1)}), Error);
    CHECK_THROWS_AS(PiecewisePoly(Interval::unit(1), {{Rational(2)}}, {Poly(1), x1()}), Error);
}

TEST_CASE("primitive anchored at the center") {
    auto one = PiecewisePoly::polynomial(Interval::unit(1), c1(1));
    CHECK(one.primitive(0) == PiecewisePoly::polynomial(Interval::unit(1), x1()));

    auto half_sq = ramp().primitive(0);
    CHECK(half_sq.evaluate({Rational(-1, 2)}) == 0);
    CHECK(half_sq.evaluate({Rational(1, 2)}) == Rational(1, 8));
    CHECK(half_sq.partial(0) == ramp());

    Interval box = Interval::unit(2);
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    auto f = PiecewisePoly::polynomial(box, x * y);
    auto g = f.primitive(0);
    CHECK(g == PiecewisePoly::polynomial(box, (x * x * y).scaled(Rational(1, 2))));
    CHECK(g.partial(0) == f);
}

TEST_CASE("primitive on an off-center domain crosses cells continuously") {
    Interval dom = Interval::from_bounds({Rational(0)}, {Rational(3)});
    Poly x = Poly::variable(1, 0);
    auto f = PiecewisePoly(dom, {{Rational(1), Rational(2)}}, {x, c1(1), x - c1(1)});
    auto F = f.primitive(0);
    CHECK(F.evaluate({Rational(3, 2)}) == 0);
    CHECK(F.partial(0) == f);
    // integral from 3/2 to 3 of f = 1/2 + (x^2/2 - x)|_2^3 = 1/2 + 3/2
    CHECK(F.evaluate({Rational(3)}) == 2);
    CHECK(F.evaluate({Rational(0)}) == Rational(-1));
}

TEST_CASE("partial derivative names the bad face") {
    try {
        (void)ramp().partial(0);
        FAIL("expected not_differentiable");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::not_differentiable);
        CHECK(std::string(e.what()).find("x1 = 0") != std::string::npos);
    }
    CHECK_FALSE(ramp().is_c_alpha(MultiIndex{1}));
    CHECK(PiecewisePoly::polynomial(Interval::unit(1), x1() * x1()).is_c_alpha(MultiIndex{5}));
}

TEST_CASE("restrict, refine, coarsen, splice") {
    auto r = ramp();
    Interval left = Interval::from_bounds({Rational(-1)}, {Rational(-1, 2)});
    CHECK(r.restrict_to(left).is_zero());
    auto fine = r.refined({{Rational(-1, 2), Rational(0), Rational(1, 3)}});
    CHECK(fine.total_cells() == 4);
    CHECK(fine.coarsened().total_cells() == 2);
    CHECK(fine == r);
    auto a = r.restrict_to(Interval::from_bounds({Rational(-1)}, {Rational(1, 2)}));
    auto b = r.restrict_to(Interval::from_bounds({Rational(-1, 2)}, {Rational(1)}));
    CHECK(PiecewisePoly::splice(a, b, 0, Rational(1, 2)) == r);
    CHECK_THROWS_AS(r.restrict_to(Interval::from_bounds({Rational(0)}, {Rational(2)})), Error);
}

TEST_CASE("exact integration") {
    auto bump = PiecewisePoly::polynomial(Interval::unit(1), (c1(1) - x1() * x1()) * (c1(1) - x1() * x1()));
    CHECK(bump.integral() == Rational(16, 15));
    CHECK(ramp().integral() == Rational(1, 2));
    CHECK((ramp() * ramp()).integral() == Rational(1, 3));
}
