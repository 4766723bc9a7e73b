#include "doctest.h"

#include "gfcalc/universal.hpp"

using namespace gfcalc;

namespace {

InfinityClass exps(std::initializer_list<Rational> xs) { return InfinityClass(xs); }

SetMap inclusion(const QInstances& in, std::size_t s, std::size_t d) {
    SetMap m{s, d, {}};
    for (const auto& x : in.objects[s]) m.map.emplace(x, x);
    return m;
}

PsiOptions small_options(std::size_t stride) {
    PsiOptions o;
    o.stride = stride;
    o.invariant_samples = 8;
    return o;
}

}  // namespace

TEST_CASE("Q laws on infinity classes") {
    QInstances in;
    in.objects = {exps({Rational(-1)}), exps({Rational(-1), Rational(-2)}),
                  exps({Rational(-1), Rational(-2), make_rational(-3, 2)})};
    in.arrows = {inclusion(in, 0, 1), inclusion(in, 1, 2), inclusion(in, 0, 2)};
    auto r = check_Q_laws(in);
    CHECK(r.passed());
    CHECK(r.find("identity")->checks == 3);
    CHECK(r.find("composition")->checks == 1);
    CHECK(q_holds(compose(in.arrows[1], in.arrows[0]), in));

    SetMap bad{0, 1, {{Rational(-1), Rational(-2)}}};
    in.arrows.push_back(bad);
    r = check_Q_laws(in);
    CHECK_FALSE(r.passed());
    CHECK(r.find("arrows")->violations.size() == 1);
    CHECK(r.find("identity")->passed);
    CHECK(r.find("composition")->passed);
    CHECK(r.find("unit_laws")->passed);
}

TEST_CASE("section enumeration") {
    PsiOptions o;
    const auto all = enumerate_sections(o);
    CHECK(all.size() == 136 * 5);
    const auto again = enumerate_sections(o);
    for (std::size_t i = 0; i < all.size(); i += 37) {
        CHECK(all[i].rep() == again[i].rep());
        CHECK(all[i].order()[0] == i % 5);
        CHECK(BaseIndex::standard(1, 4).is_base(all[i].domain()));
        CHECK(all[i].rep().max_degree(0) <= 5);
    }
    o.stride = 4;
    CHECK(enumerate_sections(o).size() == 170);
}

TEST_CASE("psi for the identity target") {
    const auto o = small_options(3);
    const auto t = identity_target();
    CHECK(check_target(t, o).passed());
    const auto sections = enumerate_sections(o);
    const auto w = build_psi(t, sections, o);
    CHECK(w.passed());
    CHECK(w.failures.empty());
    CHECK(w.checks == 3 * sections.size());

    const auto w2 = build_psi(t, sections, o, PsiVariant::representative);
    CHECK(w2.passed());
    CHECK(check_uniqueness(t, w, w2));
    CHECK(check_uniqueness(t, w, w));
    CHECK(check_uniqueness(t, w, map_images<FormalDistribution>(w, [](const FormalDistribution& s) { return s; })));

    const auto bad = build_psi(t, sections, o, PsiVariant::scrambled);
    CHECK_FALSE(bad.matches_expected);
    CHECK_FALSE(check_uniqueness(t, w, bad));
}

TEST_CASE("psi for the order-shifted target") {
    const auto o = small_options(3);
    const auto t = shifted_target(2);
    const auto sections = enumerate_sections(o);
    const auto w = build_psi(t, sections, o);
    CHECK(w.passed());
    CHECK(w.images[1].stored.order()[0] == sections[1].order()[0] + 2);
    const auto w2 = build_psi(t, sections, o, PsiVariant::representative);
    CHECK(check_uniqueness(t, w, w2));
    CHECK_FALSE(check_uniqueness(t, w, build_psi(t, sections, o, PsiVariant::scrambled)));
}

TEST_CASE("psi for the Colombeau target") {
    auto o = small_options(43);
    o.invariant_samples = 4;
    const auto t = colombeau_target();
    const auto sections = enumerate_sections(o);
    REQUIRE(sections.size() >= 15);
    const auto w = build_psi(t, sections, o);
    for (const auto& f : w.failures) MESSAGE(f);
    CHECK(w.passed());
    const auto w2 = build_psi(t, sections, o, PsiVariant::representative);
    CHECK(check_uniqueness(t, w, w2));
}

TEST_CASE("a target failing compatibility is refused") {
    auto t = identity_target();
    t.name = "doubled";
    t.delta = [](const FormalDistribution& s, std::size_t k) { return fd_scale(Rational(2), fd_derive(s, k)); };
    const auto o = small_options(50);
    const auto r = check_target(t, o);
    CHECK_FALSE(r.find("compatibility")->passed);
    CHECK(r.find("delta_commutativity")->passed);
    try {
        build_psi(t, enumerate_sections(o), o);
        FAIL("expected a refusal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::target_invariant);
        CHECK(std::string(e.what()).find("compatibility") != std::string::npos);
    }
}

TEST_CASE("tau on the Colombeau quotient and on point evaluation") {
    const Interval k = Interval::unit(1);
    const Expr x = Expr::variable(0);
    const std::vector<Expr> nets = {x, Expr(1) + x * x, Expr::sin(x), Expr::rho_power(Rational(-1)) * x};
    const std::vector<Expr> negl = {canonical_perturbation(1, Gauge())};

    const auto r = check_colombeau_tau(colombeau_identity_instance(k, nets, negl));
    CHECK(r.passed());
    CHECK(r.find("multiplicative")->checks == nets.size() * nets.size());

    const auto pe = check_colombeau_tau(point_evaluation_instance(k, nets, negl));
    CHECK(pe.passed());
    CHECK(pe.find("well_defined")->passed);
    bool scope_noted = false;
    for (const auto& n : pe.notes) scope_noted = scope_noted || n.find("outside Col scope") != std::string::npos;
    CHECK(scope_noted);

    auto broken = colombeau_identity_instance(k, nets, negl);
    broken.in_kernel = [](const Expr&) { return false; };
    const auto rb = check_colombeau_tau(broken);
    CHECK_FALSE(rb.passed());
    CHECK_FALSE(rb.find("kernel_consistent")->passed);
}

TEST_CASE("ring conditions") {
    RingCheckOptions o;
    o.samples = 300;
    const auto r = check_quotient_ring_conditions(o);
    for (const auto& c : r.conditions) {
        INFO(c.name);
        CHECK(c.passed);
        CHECK(c.checks > 0);
    }
    CHECK(r.find("ring_axioms")->checks == 300);
    CHECK_FALSE(r.notes.empty());
}
