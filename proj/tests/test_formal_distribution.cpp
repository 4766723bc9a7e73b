#include "gfcalc/formal_distribution.hpp"

#include <doctest.h>

#include <random>

using namespace gfcalc;
using kernels::Exec;

namespace {

Poly x1() { return Poly::variable(1, 0); }
Poly c1(int v) { return Poly::constant(1, Rational(v)); }
Interval I1() { return Interval::unit(1); }

PiecewisePoly ramp() { return PiecewisePoly(I1(), {{Rational(0)}}, {Poly(1), x1()}); }
PiecewisePoly poly1(const Poly& p) { return PiecewisePoly::polynomial(I1(), p); }

FormalDistribution delta() { return FormalDistribution(MultiIndex{2}, ramp()); }

// Oracle for single-cell polynomials: membership in the kernel of d^m.
bool kernel_oracle(const Poly& p, const MultiIndex& m) {
    Poly d = p;
    for (std::size_t k = 0; k < m.size(); ++k)
        for (unsigned i = 0; i < m[k]; ++i) d = d.derivative(k);
    return m.is_zero() ? p.is_zero() : d.is_zero();
}

}  // namespace

TEST_CASE("P_m membership examples") {
    Interval box = Interval::unit(2);
    Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    auto h1 = PiecewisePoly::polynomial(box, x * y);
    auto h2 = PiecewisePoly::polynomial(box, x * x * y);
    for (Exec e : {Exec::serial, Exec::parallel}) {
        CHECK(p_m_member_grid(h1, MultiIndex{2, 1}, e) == kernel_oracle(x * y, MultiIndex{2, 1}));
        CHECK(p_m_member_grid(h2, MultiIndex{2, 1}, e) == kernel_oracle(x * x * y, MultiIndex{2, 1}));
    }
    CHECK(p_m_member(h1, MultiIndex{2, 1}));
    CHECK_FALSE(p_m_member(h2, MultiIndex{2, 1}));
    CHECK(p_m_member(PiecewisePoly::zero(I1()), MultiIndex{0}));
    CHECK_FALSE(p_m_member(poly1(c1(1)), MultiIndex{0}));
    CHECK_FALSE(p_m_member_grid(poly1(c1(1)), MultiIndex{0}));
}

TEST_CASE("P_m membership on piecewise functions") {
    CHECK_FALSE(p_m_member(ramp(), MultiIndex{2}));
    CHECK_FALSE(p_m_member(ramp(), MultiIndex{5}));
    // A kinked function in x1 plus anything in x2 below order 1 in x2... is in P_(0,1) only if kink lives in x1 alone.
    Interval box = Interval::unit(2);
    Poly x = Poly::variable(2, 0);
    auto kink_x = PiecewisePoly(box, {{Rational(0)}, {}}, {Poly(2), x});
    CHECK(p_m_member(kink_x, MultiIndex{3, 1}));
    CHECK_FALSE(p_m_member(kink_x, MultiIndex{3, 0}));
    CHECK(p_m_member_grid(kink_x, MultiIndex{3, 1}, Exec::serial));
}

TEST_CASE("fd_equal examples") {
    auto one = poly1(c1(1));
    CHECK(fd_equal(FormalDistribution(MultiIndex{1}, poly1(x1())), fd_lambda(one)));
    CHECK_FALSE(fd_equal(delta(), fd_zero(I1())));
    auto shifted = ramp() + poly1(x1().scaled(Rational(3)) + c1(1));
    CHECK(fd_equal(delta(), FormalDistribution(MultiIndex{2}, shifted)));
    auto other = Interval::from_bounds({Rational(0)}, {Rational(1)});
    CHECK_THROWS_AS(fd_equal(delta(), fd_zero(other)), Error);
}

TEST_CASE("derive, lambda, raise") {
    auto heaviside = fd_derive(fd_lambda(ramp()), 0);
    CHECK(heaviside.order() == MultiIndex{1});
    auto raised = fd_raise(FormalDistribution(MultiIndex{1}, poly1(x1())), MultiIndex{3});
    CHECK(raised.order() == MultiIndex{3});
    CHECK(raised.rep() == poly1((x1() * x1() * x1()).scaled(Rational(1, 6))));
    CHECK(fd_equal(raised, FormalDistribution(MultiIndex{1}, poly1(x1()))));
    CHECK_THROWS_AS(fd_raise(delta(), MultiIndex{1}), Error);

    Interval box = Interval::unit(2);
    auto t = FormalDistribution(MultiIndex{0, 0}, PiecewisePoly(box, {{Rational(0)}, {}}, {Poly(2), Poly::variable(2, 0)}));
    auto a = fd_derive(fd_derive(t, 0), 1);
    auto b = fd_derive(fd_derive(t, 1), 0);
    CHECK(fd_equal(a, b));
}

TEST_CASE("vector operations") {
    auto t = delta();
    CHECK(fd_equal(fd_add(t, fd_zero(I1())), t));
    CHECK(fd_equal(fd_add(FormalDistribution(MultiIndex{1}, poly1(x1())), fd_lambda(poly1(c1(-1)))), fd_zero(I1())));
    CHECK(fd_equal(fd_add(t, t), fd_scale(Rational(2), t)));
    CHECK_FALSE(fd_equal(fd_add(t, t), t));
}

TEST_CASE("restriction") {
    auto t = delta();
    Interval j = Interval::from_bounds({Rational(1, 4)}, {Rational(1)});
    Interval k = Interval::from_bounds({Rational(1, 2)}, {Rational(3, 4)});
    CHECK(fd_equal(fd_restrict(fd_restrict(t, j), k), fd_restrict(t, k)));
    CHECK(fd_equal(fd_restrict(t, j), fd_zero(j)));
    CHECK(fd_equal(fd_restrict(t, I1()), t));
    CHECK_THROWS_AS(fd_restrict(t, Interval::from_bounds({Rational(0)}, {Rational(2)})), Error);
}

TEST_CASE("pairing") {
    Poly one_minus = c1(1) - x1() * x1();
    auto phi = poly1(one_minus * one_minus);
    // Oracle: integral over [0,1] of x * (12x^2 - 4) computed by hand equals 3 - 2.
    CHECK(fd_pair(delta(), phi) == 1);
    CHECK(fd_pair(fd_lambda(ramp()), phi) == (ramp() * phi).integral());
    // <D T, phi> = -<T, phi'>
    auto phi3 = poly1(one_minus * one_minus * one_minus);
    auto dphi3 = phi3.partial(0);
    auto t = FormalDistribution(MultiIndex{1}, ramp());
    CHECK(fd_pair(fd_derive(t, 0), phi3) == -fd_pair(t, dphi3));
    CHECK_THROWS_AS(fd_pair(delta(), poly1(one_minus)), Error);
    CHECK_THROWS_AS(fd_pair(fd_derive(delta(), 0), phi), Error);
}

TEST_CASE("random single-cell polynomials agree with the kernel oracle") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + rng() % 3;
        Poly p(n);
        for (int t = 0; t < 4; ++t) {
            Exponents e{};
            int budget = static_cast<int>(rng() % 5);
            for (std::size_t k = 0; k < n && budget > 0; ++k) {
                int d = static_cast<int>(rng() % (budget + 1));
                e[k] = d;
                budget -= d;
            }
            p.add_term(e, make_rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
        }
        MultiIndex m(n);
        for (std::size_t k = 0; k < n; ++k) m[k] = static_cast<unsigned>(rng() % 4);
        auto h = PiecewisePoly::polynomial(Interval::unit(n), p);
        CHECK(p_m_member_grid(h, m) == kernel_oracle(p, m));
        CHECK(p_m_member_monomial(p, m) == kernel_oracle(p, m));
    }
}
