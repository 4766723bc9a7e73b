#include "gfcalc/fd_presheaf.hpp"
#include "gfcalc/random_objects.hpp"

#include <doctest.h>

using namespace gfcalc;

namespace {

Interval iv(const Rational& a, const Rational& b) { return Interval::from_bounds({a}, {b}); }
Rational q(long a, long b = 1) { return make_rational(a, b); }
Poly x1() { return Poly::variable(1, 0); }

PiecewisePoly ramp_on(const Interval& d) { return PiecewisePoly(d, {{Rational(0)}}, {Poly(1), x1()}); }
FormalDistribution heaviside(const Interval& d) { return FormalDistribution(MultiIndex{1}, ramp_on(d)); }
FormalDistribution delta(const Interval& d) { return FormalDistribution(MultiIndex{2}, ramp_on(d)); }
FormalDistribution constant(const Interval& d, int c) {
    return fd_lambda(PiecewisePoly::polynomial(d, Poly::constant(1, Rational(c))));
}

const BaseIndex kBase = BaseIndex::standard(1, 5);

}  // namespace

TEST_CASE("open covers") {
    CHECK_FALSE(covered_by(iv(-1, 1), {iv(-1, 0), iv(0, 1)}));
    CHECK(covered_by(iv(-1, 1), {iv(-1, q(1, 2)), iv(q(-1, 2), 1)}));
    CHECK(covered_by(iv(q(-1, 4), q(1, 4)), {iv(-1, q(1, 2))}));
    Interval sq = Interval::unit(2);
    auto box = [](long a, long b, long c, long d) {
        return Interval::from_bounds({q(a, 2), q(c, 2)}, {q(b, 2), q(d, 2)});
    };
    CHECK(covered_by(sq, {box(-2, 1, -2, 2), box(-1, 2, -2, 2)}));
    CHECK_FALSE(covered_by(sq, {box(-2, 1, -2, 1), box(-1, 2, -2, 1), box(-2, 2, 0, 2)}) == false);
    CHECK_FALSE(covered_by(sq, {box(-2, 0, -2, 2), box(0, 2, -2, 2)}));
}

TEST_CASE("base enumeration") {
    CHECK(kBase.enumerate().size() == 528);
    CHECK(BaseIndex::standard(1, 4).enumerate().size() == 136);
    CHECK(kBase.is_base(iv(q(-1, 2), q(3, 16))));
    CHECK_FALSE(kBase.is_base(iv(q(-1, 3), q(1, 2))));
}

TEST_CASE("locally equal") {
    DistributionPresheaf p;
    CompatibleFamily<FormalDistribution> fam{{iv(-1, 0), constant(iv(-1, 0), 0)}, {iv(0, 1), constant(iv(0, 1), 1)}};
    CHECK(locally_equal(p, iv(-1, 1), heaviside(iv(-1, 1)), fam));
    CHECK_FALSE(locally_equal(p, iv(-1, 1), fd_add(heaviside(iv(-1, 1)), constant(iv(-1, 1), 1)), fam));
    CompatibleFamily<FormalDistribution> single{{iv(-1, 1), delta(iv(-1, 1))}};
    CHECK(locally_equal(p, iv(q(1, 4), q(1, 2)), fd_restrict(delta(iv(-1, 1)), iv(q(1, 4), q(1, 2))), single));
}

TEST_CASE("maximal family construction in one dimension") {
    DistributionPresheaf p;
    const Interval a = iv(-1, q(1, 2)), b = iv(q(-1, 2), 1), u = iv(-1, 1);
    DistributionSection h(p, kBase, {{a, heaviside(a)}, {b, heaviside(b)}});
    auto e = h.lookup(u);
    REQUIRE(e.status == GlueStatus::decided);
    CHECK(fd_equal(*e.section, heaviside(u)));

    // Delta pieces given with unrelated representatives still glue to delta.
    Rng rng(3);
    DistributionSection d(p, kBase,
                          {{a, random_representative(rng, delta(a))}, {b, random_representative(rng, delta(b))}});
    auto de = d.lookup(u);
    REQUIRE(de.status == GlueStatus::decided);
    CHECK(fd_equal(*de.section, delta(u)));
    Poly phi = (Poly::constant(1, Rational(1)) - x1() * x1());
    Poly phi5 = phi * phi * phi * phi * phi;
    CHECK(fd_pair(*de.section, PiecewisePoly::polynomial(u, phi5)) == 1);

    CHECK(h.lookup(iv(q(-1, 4), q(1, 4))).status == GlueStatus::decided);
    CHECK_THROWS_AS(DistributionSection(p, kBase, {{a, heaviside(a)}, {b, delta(b)}}), Error);
}

TEST_CASE("maximal family properties on a small base") {
    DistributionPresheaf p;
    const BaseIndex base = BaseIndex::standard(1, 3);
    const Interval a = iv(-1, q(1, 4)), b = iv(q(-1, 2), 1);
    const FormalDistribution g = fd_add(delta(iv(-1, 1)), heaviside(iv(-1, 1)));
    DistributionSection s(p, base, {{a, fd_restrict(g, a)}, {b, fd_restrict(g, b)}});
    auto decided = s.decided();
    CHECK(decided.size() == base.enumerate().size());
    CHECK(s.undecided().empty());
    for (const auto& [j, sec] : decided) {
        CHECK(fd_equal(sec, fd_restrict(g, j)));
        CHECK(locally_equal(p, j, sec, s.generators()));
    }
    for (const auto& m : s.generators()) CHECK(fd_equal(*s.lookup(m.domain).section, m.section));
}

TEST_CASE("section operations") {
    DistributionPresheaf p;
    const Interval u = iv(-1, 1);
    auto x = eta_embed(p, kBase, u, delta(u));
    auto zero = eta_embed(p, kBase, u, fd_zero(u));
    CHECK(section_equal(section_add(x, zero), x));
    CHECK(section_equal(section_restrict(x, {u}), x));
    CHECK(section_equal(section_scale(Rational(0), x), zero));
    CHECK_FALSE(section_equal(x, zero));

    auto sum = section_add(x, eta_embed(p, kBase, u, heaviside(u)));
    const Interval v = iv(q(1, 4), 1);
    auto r = section_restrict(sum, {v});
    CHECK(section_equal(r, eta_embed(p, kBase, v, constant(v, 1))));
    for (const auto& j : kBase.enumerate_within({v})) {
        auto e = r.lookup(j);
        REQUIRE(e.status == GlueStatus::decided);
        CHECK(fd_equal(*e.section, constant(j, 1)));
    }
    CHECK_THROWS_AS(section_restrict(x, {iv(-1, 1)}).lookup(iv(q(-1, 3), 0)), Error);
}

TEST_CASE("eta embedding") {
    DistributionPresheaf p;
    const Interval i = iv(q(-3, 4), q(3, 4)), j = iv(q(-1, 2), q(1, 4));
    auto t = delta(i);
    CHECK(section_equal(section_restrict(eta_embed(p, kBase, i, t), {j}), eta_embed(p, kBase, j, fd_restrict(t, j))));
    CHECK(section_equal(eta_embed(p, kBase, i, fd_zero(i)), section_scale(Rational(0), eta_embed(p, kBase, i, t))));
    auto e = eta_embed(p, kBase, i, t).lookup(j);
    REQUIRE(e.status == GlueStatus::decided);
    Poly w = (x1() - Poly::constant(1, q(-1, 2))) * (x1() - Poly::constant(1, q(1, 4)));
    CHECK(fd_pair(*e.section, PiecewisePoly::polynomial(j, w * w)) == PiecewisePoly::polynomial(j, w * w).evaluate({0}));
}

TEST_CASE("two-dimensional gluing by slabs") {
    DistributionPresheaf p;
    const BaseIndex base = BaseIndex::standard(2, 2);
    Rng rng(5);
    const Interval sq = Interval::unit(2);
    const FormalDistribution g = random_distribution(rng, sq, 2, 2, 2, 2);
    const Interval left = Interval::from_bounds({q(-1), q(-1)}, {q(1, 2), q(1)});
    const Interval right = Interval::from_bounds({q(-1, 2), q(-1)}, {q(1), q(1)});
    DistributionSection s(p, base, {{left, random_representative(rng, fd_restrict(g, left))},
                                    {right, random_representative(rng, fd_restrict(g, right))}});
    auto e = s.lookup(sq);
    if (e.status == GlueStatus::decided) CHECK(fd_equal(*e.section, g));
    else CHECK(e.status == GlueStatus::undecided);

    // Quadrant-style cover: no slab chain spans the square, so the outcome must be honest.
    const Interval bottom = Interval::from_bounds({q(-1), q(-1)}, {q(1), q(1, 2)});
    const Interval tl = Interval::from_bounds({q(-1), q(-1, 2)}, {q(1, 2), q(1)});
    const Interval tr = Interval::from_bounds({q(-1, 2), q(-1, 2)}, {q(1), q(1)});
    DistributionSection t(p, base, {{bottom, fd_restrict(g, bottom)}, {tl, fd_restrict(g, tl)}, {tr, fd_restrict(g, tr)}});
    auto te = t.lookup(sq);
    if (te.status == GlueStatus::decided) CHECK(fd_equal(*te.section, g));
    else CHECK(te.status == GlueStatus::undecided);
}

TEST_CASE("sheaf law suite on a handful of covers") {
    SheafLawOptions opt;
    opt.cases = 12;
    opt.seed = 9;
    auto r = sheaf_laws_check(opt);
    for (const auto& v : r.violations) MESSAGE(v.law << ": " << v.detail);
    CHECK(r.passed());
    CHECK(r.checks["gluing"] == 24);
    CHECK(r.checks["glue_morphism"] == 24);
    auto eta = eta_naturality_check(opt);
    CHECK(eta.passed());
}
