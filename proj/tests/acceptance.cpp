// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "gfcalc/fd_presheaf.hpp"
#include "gfcalc/gsf.hpp"
#include "gfcalc/random_objects.hpp"
#include "gfcalc/universal.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace gfcalc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Interval iv(long a, long b) { return Interval::from_bounds({Rational(a)}, {Rational(b)}); }
Poly x1() { return Poly::variable(1, 0); }

std::string frac(std::size_t ok, std::size_t total) { return std::to_string(ok) + "/" + std::to_string(total); }

// d^m p = 0, by repeated differentiation.
bool kernel_oracle(const Poly& p, const MultiIndex& m) {
    if (m.is_zero()) return p.is_zero();
    Poly d = p;
    for (std::size_t k = 0; k < m.size(); ++k)
        for (unsigned i = 0; i < m[k]; ++i) d = d.derivative(k);
    return d.is_zero();
}

Poly random_cell_poly(Rng& rng, std::size_t n, const MultiIndex& m) {
    if (random_int(rng, 0, 1) == 0) return random_p_m_poly(rng, m, 5);
    Poly p(n);
    for (int t = 0; t < 5; ++t) {
        Exponents e{};
        int budget = static_cast<int>(random_int(rng, 0, 5));
        for (std::size_t k = 0; k < n && budget > 0; ++k) {
            const int d = static_cast<int>(random_int(rng, 0, budget));
            e[k] = d;
            budget -= d;
        }
        p.add_term(e, random_rational(rng));
    }
    return p;
}

// (2p+1)! / (2^(2p+1) (p!)^2) = 1 / integral_{-1}^{1} (1-u^2)^p du
Rational bump_constant(unsigned p) {
    mpz_class num = 1, den = 1;
    for (unsigned i = 1; i <= 2 * p + 1; ++i) num *= i;
    for (unsigned i = 1; i <= p; ++i) den *= i * i;
    den *= mpz_class(1) << (2 * p + 1);
    Rational c(num, den);
    c.canonicalize();
    return c;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome ftc() {
    Rng rng(101);
    std::size_t ok = 0;
    const std::size_t total = 500;
    for (std::size_t i = 0; i < total; ++i) {
        const PiecewisePoly f = random_pp_1d(rng, iv(-1, 1), 4, 5, 1);
        const PiecewisePoly df = f.partial(std::size_t{0});
        ok += fd_equal(fd_derive(fd_lambda(f), 0), fd_lambda(df)) ? 1 : 0;
    }
    return {ok == total, frac(ok, total) + " exact"};
}

Outcome p_m_oracles() {
    Rng rng(102);
    std::size_t ok = 0, members = 0;
    const std::size_t total = 1000;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t n = static_cast<std::size_t>(random_int(rng, 1, 3));
        MultiIndex m(n);
        for (std::size_t k = 0; k < n; ++k) m[k] = static_cast<unsigned>(random_int(rng, 0, 3));
        const Poly p = random_cell_poly(rng, n, m);
        const bool mono = p_m_member_monomial(p, m);
        const bool grid = p_m_member_grid(PiecewisePoly::polynomial(Interval::unit(n), p), m);
        const bool oracle = kernel_oracle(p, m);
        ok += (mono == grid && grid == oracle) ? 1 : 0;
        members += oracle ? 1 : 0;
    }
    return {ok == total, frac(ok, total) + " agree (" + std::to_string(members) + " members)"};
}

Outcome representative_independence() {
    Rng rng(103);
    std::size_t ok = 0;
    const std::size_t total = 300;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t n = static_cast<std::size_t>(random_int(rng, 1, 2));
        const FormalDistribution t = random_distribution(rng, Interval::unit(n), 2, 2, 2);
        MultiIndex m = t.order();
        for (std::size_t k = 0; k < n; ++k) m[k] += static_cast<unsigned>(random_int(rng, 0, 2));
        ok += fd_equal(t, fd_raise(t, m)) ? 1 : 0;
    }
    return {ok == total, frac(ok, total) + " exact"};
}

Outcome schwarz() {
    Rng rng(104);
    std::size_t ok = 0;
    const std::size_t total = 200;
    for (std::size_t i = 0; i < total; ++i) {
        const FormalDistribution t = random_distribution(rng, Interval::unit(2), 2, 2, 2);
        const auto a = fd_derive(fd_derive(t, 0), 1);
        const auto b = fd_derive(fd_derive(t, 1), 0);
        ok += (fd_equal(a, b) && a.order() == b.order()) ? 1 : 0;
    }
    return {ok == total, frac(ok, total) + " exact"};
}

std::string law_counts(const LawReport& r) {
    std::string s;
    for (const auto& [law, n] : r.checks) s += (s.empty() ? "" : ", ") + law + " " + std::to_string(n);
    return s;
}

Outcome sheaf_laws() {
    SheafLawOptions o;
    o.cases = 200;
    o.level = 5;
    o.seed = 105;
    const LawReport r = sheaf_laws_check(o);
    bool ok = r.passed();
    for (const char* law : {"locality", "gluing", "glue_restrict", "glue_morphism"})
        ok = ok && r.checks.count(law) && r.checks.at(law) > 0;
    std::string d = std::to_string(r.violations.size()) + " counterexamples; " + law_counts(r);
    if (!r.violations.empty()) d += "; first: " + r.violations.front().detail;
    return {ok, d};
}

Outcome eta_naturality() {
    SheafLawOptions o;
    o.cases = 200;
    o.level = 5;
    o.seed = 106;
    const LawReport r = eta_naturality_check(o);
    const std::size_t n = r.checks.count("eta_naturality") ? r.checks.at("eta_naturality") : 0;
    return {r.passed() && n >= 200, std::to_string(n - std::min(n, r.violations.size())) + "/" + std::to_string(n) + " exact"};
}

PsiOptions psi_options() {
    PsiOptions o;
    o.level = 4;
    o.alpha_cap = 4;
    o.d_cap = 5;
    o.seed = 107;
    return o;
}

constexpr std::size_t kColombeauStride = 13;

template <class S>
std::string witness_summary(const MorphismWitness<S>& w) {
    std::string d = std::to_string(w.sections.size()) + " sections";
    if (!w.failures.empty()) d += "; first failure: " + w.failures.front();
    return d;
}

Outcome psi_construction() {
    auto o = psi_options();
    const auto all = enumerate_sections(o);
    std::string detail;
    bool ok = true;

    const auto id = identity_target();
    const auto w_id = build_psi(id, all, o);
    ok = ok && w_id.passed() && check_target(id, o).passed();
    detail += "identity " + witness_summary(w_id);

    const auto sh = shifted_target(2);
    const auto w_sh = build_psi(sh, all, o);
    ok = ok && w_sh.passed() && check_target(sh, o).passed();
    detail += "; shifted " + witness_summary(w_sh);

    o.stride = kColombeauStride;
    o.invariant_samples = 8;
    const auto col = colombeau_target();
    const auto sample = enumerate_sections(o);
    const auto w_col = build_psi(col, sample, o);
    ok = ok && w_col.passed() && check_target(col, o).passed();
    detail += "; colombeau " + witness_summary(w_col) + " (stride " + std::to_string(kColombeauStride) + ")";
    return {ok, detail};
}

Outcome uniqueness() {
    auto o = psi_options();
    const auto all = enumerate_sections(o);
    const auto id = identity_target();
    const auto sh = shifted_target(2);
    bool ok = check_uniqueness(id, build_psi(id, all, o), build_psi(id, all, o, PsiVariant::representative));
    ok = ok && check_uniqueness(sh, build_psi(sh, all, o), build_psi(sh, all, o, PsiVariant::representative));
    // a witness that is not a morphism must be told apart
    const bool discriminates = !check_uniqueness(id, build_psi(id, all, o), build_psi(id, all, o, PsiVariant::scrambled));
    o.stride = kColombeauStride;
    o.invariant_samples = 2;
    const auto col = colombeau_target();
    const auto sample = enumerate_sections(o);
    ok = ok && check_uniqueness(col, build_psi(col, sample, o), build_psi(col, sample, o, PsiVariant::representative));
    return {ok && discriminates, "identity and shifted on " + std::to_string(all.size()) + " sections, colombeau on " +
                                     std::to_string(sample.size()) + "; scrambled witness rejected: " +
                                     (discriminates ? "yes" : "no")};
}

Outcome ring() {
    RingCheckOptions o;
    o.samples = 1000;
    o.seed = 109;
    const CheckReport r = check_quotient_ring_conditions(o);
    std::string d;
    bool ok = r.passed();
    for (const auto& c : r.conditions) {
        d += (d.empty() ? "" : ", ") + c.name + " " + std::to_string(c.checks);
        ok = ok && c.checks > 0;
    }
    const auto* axioms = r.find("ring_axioms");
    ok = ok && axioms && axioms->checks == 1000;
    for (const auto& c : r.conditions)
        if (!c.violations.empty()) d += "; " + c.name + ": " + c.violations.front();
    return {ok, d};
}

Outcome delta_regularization() {
    const unsigned p = 8;
    const Interval d = iv(-1, 1);
    const FormalDistribution delta(MultiIndex{2}, PiecewisePoly(d, {{Rational(0)}}, {Poly(1), x1()}));
    const GSFunction f = embed_distribution(delta, p);
    const GeneralizedNumber v0 = gsf_eval(f, GeneralizedPoint::standard({Rational(0)}));
    const bool value_ok =
        v0.is_symbolic() && v0.symbolic().identical(GaugeExpr::monomial(bump_constant(p), Rational(-1)));

    Poly phi = Poly::constant(1, Rational(1));
    for (int i = 0; i < 4; ++i) phi *= Poly::constant(1, Rational(1)) - x1() * x1();
    const GaugeExpr pairing = gsf_pair(f, PiecewisePoly::polynomial(d, phi));
    // <delta_rho, phi> - phi(0) = rho^2 phi''(0) m_2 / 2 + O(rho^4), m_2 = 1/(2p+3), phi''(0) = -8
    const GaugeExpr gap = pairing - GaugeExpr(1);
    const bool leading_ok = !gap.is_zero() && *gap.leading_exponent() == 2 &&
                            gap.leading_coeff() == make_rational(-4, 2 * p + 3);

    std::vector<double> lx, ly;
    std::string errs;
    for (const Rational eps : {make_rational(1, 100), make_rational(1, 1000), make_rational(1, 10000)}) {
        const auto rho = f.gauge().rho_exact(eps);
        const auto e = rho ? gap.evaluate_exact(*rho) : std::nullopt;
        if (!e) return {false, "pairing not exactly evaluable at eps = " + to_string(eps)};
        const double err = std::abs(to_double(*e));
        lx.push_back(std::log10(to_double(eps)));
        ly.push_back(std::log10(err));
        char buf[48];
        std::snprintf(buf, sizeof buf, "%s%.3e", errs.empty() ? "" : ", ", err);
        errs += buf;
    }
    const double order = ls_slope(lx, ly);
    char buf[160];
    std::snprintf(buf, sizeof buf, "C_p value %s, errors [%s], order %.4f", value_ok ? "exact" : "WRONG",
                  errs.c_str(), order);
    return {value_ok && leading_ok && order >= 1.9, buf};
}

Outcome perturbation() {
    Rng rng(111);
    std::size_t functions = 0, records = 0, ok = 0, exact = 0;
    while (functions < 100) {
        const std::size_t n = static_cast<std::size_t>(random_int(rng, 1, 2));
        GSFunction f(random_smooth_net(rng, n), n, GsfDomain::everywhere(n));
        std::vector<GeneralizedPoint> points;
        for (int i = 0; i < 2; ++i) {
            std::vector<GaugeExpr> c;
            for (std::size_t j = 0; j < n; ++j)
                c.push_back(GaugeExpr(random_rational(rng, 3, 3)) + GaugeExpr::monomial(random_rational(rng, 2, 2), 1));
            points.push_back(GeneralizedPoint::symbolic(c));
        }
        if (!gsf_certify(f, points, 2)) continue;
        ++functions;
        MultiIndex alpha(n);
        alpha[static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(n) - 1))] = 1;
        const GSFunction g = gsf_derive(f, alpha);
        for (const auto& r : g.certificate()->perturbations()) {
            ++records;
            exact += r.exact ? 1 : 0;
            ok += (r.agree && (r.exact || r.gap_exponent >= 10)) ? 1 : 0;
        }
    }
    return {ok == records && records > 0,
            std::to_string(functions) + " functions, " + frac(ok, records) + " evaluations agree (" +
                std::to_string(exact) + " symbolic)"};
}

Outcome phi_identity() {
    Rng rng(112);
    std::vector<GSFunction> fs;
    for (int i = 0; i < 10; ++i) fs.emplace_back(random_smooth_net(rng, 1), 1, GsfDomain::everywhere(1));
    PhiCarrier carrier;
    carrier.size = fs.size();
    carrier.preimage = [&](std::size_t i) { return std::optional<GSFunction>(fs[i]); };
    carrier.point_map = [&](std::size_t i, const GeneralizedPoint& x) { return gsf_eval(fs[i], x); };
    carrier.derivative = [&](std::size_t i, const MultiIndex& a, const GeneralizedPoint& x) {
        return gsf_eval(gsf_derive(fs[i], a), x);
    };
    std::vector<GeneralizedPoint> samples;
    for (int i = 0; i < 3; ++i)
        samples.push_back(GeneralizedPoint::symbolic(
            {GaugeExpr(random_rational(rng, 3, 4)) + GaugeExpr::monomial(random_rational(rng, 2, 3), 1)}));
    PhiCandidate same = [&](std::size_t i, const GeneralizedPoint& x) { return evaluate_net(fs[i].net(), x, Gauge()); };
    PhiCandidate shifted = [&](std::size_t i, const GeneralizedPoint& x) {
        return evaluate_net(fs[i].net() + Expr(1), x, Gauge());
    };
    const PhiReport rep = gsf_universal_phi(carrier, samples, 2, {same});
    const bool rejects = !gsf_universal_phi(carrier, samples, 0, {shifted}).unique;
    std::string d = "10 instances, " + std::to_string(rep.checks) + " checks; shifted candidate rejected: " +
                    (rejects ? "yes" : "no");
    if (!rep.failures.empty()) d += "; " + rep.failures.front();
    return {rep.passed() && rejects, d};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"derivative of lambda(f) equals lambda(f') for C^1 f", ftc},
        {"P_m monomial criterion agrees with divided differences", p_m_oracles},
        {"raising the order keeps the class", representative_independence},
        {"mixed derivatives commute", schwarz},
        {"sheaf locality and gluing on dyadic covers", sheaf_laws},
        {"eta commutes with restriction", eta_naturality},
        {"psi satisfies both diagram equations", psi_construction},
        {"independent psi witnesses agree", uniqueness},
        {"ring axioms and quotient-ring conditions", ring},
        {"embedded delta value and convergence order", delta_regularization},
        {"derivatives ignore negligible perturbations", perturbation},
        {"phi is the identity on the identity carrier", phi_identity},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu  %s: %s  [%.1fs]\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failed += out.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
