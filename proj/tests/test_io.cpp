#include "doctest.h"

#include "gfcalc/json_io.hpp"
#include "gfcalc/random_objects.hpp"
#include "gfcalc/syntax.hpp"
#include "gfcalc/workspace.hpp"

#include <cstdio>

using namespace gfcalc;

namespace {

template <class T, class Decode>
void check_round_trip(const T& x, Decode decode) {
    const io::json j = io::encode(x);
    const io::json again = io::encode(decode(io::json::parse(j.dump())));
    CHECK(j == again);
}

}  // namespace

TEST_CASE("mini-syntax distributions") {
    const auto d = parse_distribution("((2),ramp)");
    CHECK(d.order() == MultiIndex{2});
    REQUIRE(d.rep().breaks()[0].size() == 1);
    CHECK(d.rep().breaks()[0][0] == 0);
    CHECK(d.rep().cells()[0].is_zero());
    CHECK(d.rep().cells()[1] == Poly::variable(1, 0));
    // <ramp'', (1 - x^2)^2> = phi(0)
    CHECK(fd_pair(d, parse_piecewise("(1-x^2)^2")) == 1);
    CHECK(fd_equal(parse_distribution("((1),x)"), parse_distribution("((0),1)")));
    CHECK_FALSE(fd_equal(parse_distribution("((1),x)"), parse_distribution("2")));

    const auto a = parse_distribution("abs(2*x-1) on (0,2)");
    CHECK(a.domain() == Interval::from_bounds({Rational(0)}, {Rational(2)}));
    CHECK(a.rep().breaks()[0] == std::vector<Rational>{make_rational(1, 2)});
    CHECK(a.rep().evaluate({Rational(0)}) == 1);
    CHECK(a.rep().evaluate({Rational(2)}) == 3);

    const auto p = parse_piecewise("pw[0, 1/2](0; x^2; x - 1/4)");
    CHECK(p.evaluate({make_rational(1, 4)}) == make_rational(1, 16));
    CHECK(p.evaluate({make_rational(3, 4)}) == make_rational(1, 2));
    CHECK(parse_piecewise("x^2/3") == parse_piecewise("(1/3)*x*x"));
    CHECK(parse_piecewise("ramp(x - 2)").is_zero());
    CHECK(parse_piecewise("(x+1)^0") == parse_piecewise("1"));

    CHECK_THROWS_AS(parse_piecewise("pw[0](1; x)"), Error);
    for (const char* badtext : {"x +", "foo(x)", "((1),x", "x^(1/2)", "sin(x)", "1/x", "x $ 2", "rho"}) {
        INFO(badtext);
        CHECK_THROWS_AS(parse_distribution(badtext), Error);
    }
}

TEST_CASE("mini-syntax generalized numbers and nets") {
    const auto a = parse_number("2/rho + 3 - rho^(1/2)");
    REQUIRE(a.is_symbolic());
    CHECK(a.symbolic() == GaugeExpr::monomial(Rational(2), Rational(-1)) + GaugeExpr(3) -
                              GaugeExpr::rho_power(make_rational(1, 2)));
    const auto b = parse_number("rho*sin(1/rho)");
    CHECK_FALSE(b.is_symbolic());
    CHECK(gn_is_moderate(b).kind == Moderateness::Kind::yes);
    CHECK_THROWS_AS(parse_number("x + 1"), Error);

    const Expr e = parse_expr("x^2 * sin(x/rho) + bump(x)");
    CHECK(e == Expr::variable(0) * Expr::variable(0) * Expr::sin(Expr::variable(0) * Expr::rho_power(Rational(-1))) +
                   Expr::bump(kDefaultBumpExponent, Expr::variable(0)));
    CHECK(parse_rational_list("1e-2,1e-3, 1/4") ==
          std::vector<Rational>{make_rational(1, 100), make_rational(1, 1000), make_rational(1, 4)});
}

TEST_CASE("json round trips") {
    Rng rng(11);
    for (int i = 0; i < 60; ++i) {
        const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
        check_round_trip(random_distribution(rng, Interval::unit(n), 3), io::decode_distribution);
        check_round_trip(random_gauge_expr(rng), io::decode_gauge_expr);
        check_round_trip(random_smooth_net(rng, n), io::decode_expr);
        const auto d1 = random_distribution(rng, Interval::unit(1), 3);
        const auto f = embed_distribution(d1);
        check_round_trip(f, io::decode_gsf);
        const auto back = io::decode_distribution(io::encode(d1));
        CHECK(back.rep() == d1.rep());
        CHECK(back.order() == d1.order());
    }
    check_round_trip(Gauge::power(make_rational(3, 2)), io::decode_gauge);
    check_round_trip(Gauge::table({{0.1, 0.01}, {0.01, 0.0001}}), io::decode_gauge);
    check_round_trip(GaugeExpr::truncated_zero(Rational(3)) + GaugeExpr(1), io::decode_gauge_expr);
    check_round_trip(GeneralizedNumber(GaugeExpr::rho_power(Rational(-1))),
                     [](const io::json& j) { return io::decode_number(j); });
    const auto ball = GsfDomain::balls({{GeneralizedPoint::standard({Rational(1)}), GeneralizedNumber(GaugeExpr(1))}});
    check_round_trip(ball, [](const io::json& j) { return io::decode_domain(j); });

    CHECK_THROWS_AS(io::encode(parse_number("sin(1/rho)")), Error);
    CHECK_THROWS_AS(io::decode_distribution(io::json::parse(R"({"type":"gsf"})")), Error);
    CHECK_THROWS_AS(io::decode_expr(io::json::parse(R"(["tan", ["var", 0]])")), Error);
}

TEST_CASE("workspace bindings survive save and load") {
    Workspace ws;
    ws.config.level = 3;
    ws.config.gauge = Gauge::power(Rational(2));
    ws.bind("d", io::encode(parse_distribution("((2),ramp)")));
    ws.bind("x", io::encode(parse_number("1/rho + 2")));
    CHECK_THROWS_AS(ws.bind("", io::encode(Rational(1))), Error);
    CHECK_THROWS_AS(ws.lookup("missing"), Error);

    const std::string path = "workspace_test.json";
    ws.save(path);
    const Workspace back = Workspace::load(path);
    std::remove(path.c_str());
    CHECK(back.config.level == 3);
    CHECK(back.to_json() == ws.to_json());
    CHECK(fd_equal(io::decode_distribution(back.lookup("d")), parse_distribution("((2),ramp)")));
    CHECK(Workspace::load("no_such_workspace.json").bindings().empty());
}
