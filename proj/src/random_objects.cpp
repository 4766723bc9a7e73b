#include "gfcalc/random_objects.hpp"

#include <algorithm>
#include <set>

namespace gfcalc {

long random_int(Rng& rng, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return d(rng);
}

Rational random_rational(Rng& rng, long max_num, long max_den) {
    return make_rational(random_int(rng, -max_num, max_num), random_int(rng, 1, max_den));
}

Poly random_poly(Rng& rng, std::size_t nvars, int max_degree, int max_terms) {
    Poly p(nvars);
    const int terms = static_cast<int>(random_int(rng, 1, max_terms));
    for (int t = 0; t < terms; ++t) {
        Exponents e{};
        long budget = random_int(rng, 0, max_degree);
        for (std::size_t k = 0; k < nvars && budget > 0; ++k) {
            long d = (k + 1 == nvars) ? budget : random_int(rng, 0, budget);
            e[k] = static_cast<int>(d);
            budget -= d;
        }
        p.add_term(e, random_rational(rng));
    }
    return p;
}

Poly random_p_m_poly(Rng& rng, const MultiIndex& m, int max_degree) {
    const std::size_t n = m.size();
    Poly p(n);
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < n; ++k)
        if (m[k] > 0) active.push_back(k);
    if (active.empty()) return p;
    const int terms = static_cast<int>(random_int(rng, 1, 4));
    for (int t = 0; t < terms; ++t) {
        const std::size_t low = active[static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(active.size()) - 1))];
        Exponents e{};
        for (std::size_t k = 0; k < n; ++k) {
            if (k == low) e[k] = static_cast<int>(random_int(rng, 0, static_cast<long>(m[k]) - 1));
            else e[k] = static_cast<int>(random_int(rng, 0, max_degree));
        }
        p.add_term(e, random_rational(rng));
    }
    return p;
}

namespace {

std::vector<Rational> interior_grid(const Interval& domain, std::size_t k, unsigned level) {
    const long cells = 1L << level;
    const Rational step = 2 * domain.radii()[k] / cells;
    std::vector<Rational> g;
    for (long i = 1; i < cells; ++i) g.push_back(domain.lo(k) + step * i);
    return g;
}

Interval axis_interval(const Interval& domain, std::size_t k) {
    return Interval({domain.center()[k]}, {domain.radii()[k]});
}

}  // namespace

PiecewisePoly random_pp_1d(Rng& rng, const Interval& domain, int max_breaks, int max_degree, unsigned smooth,
                           unsigned level) {
    auto grid = interior_grid(domain, 0, level);
    std::shuffle(grid.begin(), grid.end(), rng);
    const long nb = std::min<long>(random_int(rng, 0, max_breaks), static_cast<long>(grid.size()));
    std::vector<Rational> breaks(grid.begin(), grid.begin() + nb);
    std::sort(breaks.begin(), breaks.end());
    std::vector<Poly> cells;
    cells.push_back(random_poly(rng, 1, max_degree));
    const Poly x = Poly::variable(1, 0);
    for (const auto& b : breaks) {
        Poly factor = Poly::constant(1, Rational(1));
        for (unsigned i = 0; i <= smooth; ++i) factor *= x - Poly::constant(1, b);
        const int rest = std::max(0, max_degree - static_cast<int>(smooth) - 1);
        Poly q = random_poly(rng, 1, rest);
        if (q.is_zero()) q = Poly::constant(1, Rational(1));
        cells.push_back(cells.back() + factor * q);
    }
    return PiecewisePoly(domain, {breaks}, std::move(cells));
}

PiecewisePoly lift_axis(const PiecewisePoly& f1, const Interval& domain, std::size_t axis) {
    const std::size_t n = domain.dimension();
    std::vector<std::vector<Rational>> breaks(n);
    breaks[axis] = f1.breaks()[0];
    std::vector<std::size_t> counts(n, 1);
    counts[axis] = f1.total_cells();
    std::vector<Poly> cells;
    for (const auto& c : f1.cells()) {
        Poly p(n);
        for (const auto& [e, v] : c.terms()) {
            Exponents f{};
            f[axis] = e[0];
            p.add_term(f, v);
        }
        cells.push_back(p);
    }
    return PiecewisePoly(domain, std::move(breaks), std::move(cells));
}

PiecewisePoly random_pp(Rng& rng, const Interval& domain, int max_breaks, int max_degree, unsigned level) {
    const std::size_t n = domain.dimension();
    if (n == 1) return random_pp_1d(rng, domain, max_breaks, max_degree, 0, level);
    PiecewisePoly f = PiecewisePoly::polynomial(domain, random_poly(rng, n, max_degree));
    const int products = static_cast<int>(random_int(rng, 1, 2));
    for (int t = 0; t < products; ++t) {
        const std::size_t a = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(n) - 1));
        const std::size_t b = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(n) - 1));
        auto fa = lift_axis(random_pp_1d(rng, axis_interval(domain, a), max_breaks, 2, 0, level), domain, a);
        auto fb = lift_axis(random_pp_1d(rng, axis_interval(domain, b), max_breaks, 1, 0, level), domain, b);
        f = f + fa * fb;
    }
    return f;
}

FormalDistribution random_distribution(Rng& rng, const Interval& domain, unsigned max_order, int max_breaks,
                                       int max_degree, unsigned level) {
    const std::size_t n = domain.dimension();
    MultiIndex order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = static_cast<unsigned>(random_int(rng, 0, max_order));
    PiecewisePoly rep = n == 1 ? random_pp_1d(rng, domain, max_breaks, max_degree, 0, level)
                               : random_pp(rng, domain, max_breaks, max_degree, level);
    return FormalDistribution(order, rep);
}

FormalDistribution random_representative(Rng& rng, const FormalDistribution& t, unsigned max_extra) {
    const std::size_t n = t.dimension();
    MultiIndex extra(n);
    for (std::size_t k = 0; k < n; ++k) extra[k] = static_cast<unsigned>(random_int(rng, 0, max_extra));
    FormalDistribution raised = fd_raise(t, t.order() + extra);
    Poly q = random_p_m_poly(rng, raised.order());
    return FormalDistribution(raised.order(), raised.rep() + PiecewisePoly::polynomial(t.domain(), q));
}

Interval random_base_interval(Rng& rng, const BaseIndex& base, long min_cells) {
    return random_base_subinterval(rng, base, base.region(), min_cells);
}

Interval random_base_subinterval(Rng& rng, const BaseIndex& base, const Interval& inside, long min_cells) {
    const std::size_t n = base.dimension();
    std::vector<Rational> lo(n), hi(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto g = base.grid(k);
        std::vector<Rational> pts;
        for (const auto& x : g)
            if (inside.lo(k) <= x && x <= inside.hi(k)) pts.push_back(x);
        const long m = static_cast<long>(pts.size()) - 1;
        const long span = std::min(m, min_cells);
        long a = random_int(rng, 0, m - span);
        long b = random_int(rng, a + span, m);
        lo[k] = pts[static_cast<std::size_t>(a)];
        hi[k] = pts[static_cast<std::size_t>(b)];
    }
    return Interval::from_bounds(lo, hi);
}

std::vector<Interval> random_cover(Rng& rng, const BaseIndex& base, const Interval& u, int max_pieces) {
    auto g = base.grid(0);
    std::vector<Rational> pts;
    for (const auto& x : g)
        if (u.lo(0) <= x && x <= u.hi(0)) pts.push_back(x);
    const long m = static_cast<long>(pts.size()) - 1;
    auto iv = [&](long a, long b) { return Interval::from_bounds({pts[static_cast<std::size_t>(a)]}, {pts[static_cast<std::size_t>(b)]}); };
    if (m < 3) return {u};
    std::vector<Interval> cover;
    long s = 0;
    while (true) {
        long e = static_cast<int>(cover.size()) + 1 >= max_pieces ? m : std::min(m, random_int(rng, s + 2, m));
        cover.push_back(iv(s, e));
        if (e == m) break;
        s = random_int(rng, s + 1, e - 1);
    }
    if (random_int(rng, 0, 2) == 0) {
        long a = random_int(rng, 0, m - 1);
        cover.push_back(iv(a, random_int(rng, a + 1, m)));
    }
    return cover;
}

GaugeExpr random_gauge_expr(Rng& rng, int max_terms) {
    std::vector<GaugeTerm> terms;
    const int k = static_cast<int>(random_int(rng, 0, max_terms));
    for (int i = 0; i < k; ++i)
        terms.push_back({random_rational(rng, 6, 3), make_rational(random_int(rng, -8, 8), random_int(rng, 1, 2))});
    return GaugeExpr::from_terms(std::move(terms));
}

Expr random_smooth_net(Rng& rng, std::size_t dim, int max_terms) {
    std::vector<Expr> terms;
    const int count = static_cast<int>(random_int(rng, 1, max_terms));
    for (int t = 0; t < count; ++t) {
        Expr term = Expr(random_rational(rng, 5, 3)) * Expr::rho_power(Rational(random_int(rng, -1, 1)));
        for (std::size_t i = 0; i < dim; ++i)
            for (long d = random_int(rng, 0, 2); d > 0; --d) term = term * Expr::variable(i);
        const std::size_t axis = static_cast<std::size_t>(random_int(rng, 0, static_cast<long>(dim) - 1));
        Expr arg = Expr(random_rational(rng, 2, 2)) + Expr(random_rational(rng, 3, 2)) * Expr::variable(axis);
        switch (random_int(rng, 0, 5)) {
        case 1: term = term * Expr::sin(arg); break;
        case 2: term = term * Expr::cos(arg * Expr::rho_power(Rational(-1))); break;
        case 3: term = term * Expr::exp(arg); break;
        case 4: term = term * Expr::bump(8, arg); break;
        default: break;
        }
        terms.push_back(term);
    }
    return Expr::sum(terms);
}

}  // namespace gfcalc
