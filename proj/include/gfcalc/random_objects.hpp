#pragma once

#include "gfcalc/expr.hpp"
#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/gauge.hpp"
#include "gfcalc/sheaf.hpp"

#include <random>

namespace gfcalc {

using Rng = std::mt19937_64;

long random_int(Rng& rng, long lo, long hi);  // inclusive
Rational random_rational(Rng& rng, long max_num = 5, long max_den = 4);
Poly random_poly(Rng& rng, std::size_t nvars, int max_degree, int max_terms = 4);
// Polynomial with every monomial below m in some coordinate (an element of P_m).
Poly random_p_m_poly(Rng& rng, const MultiIndex& m, int max_degree = 3);

// Continuous 1-D piecewise polynomial of class C^smooth with breakpoints on the dyadic grid of `level`.
PiecewisePoly random_pp_1d(Rng& rng, const Interval& domain, int max_breaks, int max_degree, unsigned smooth,
                           unsigned level = 5);
// Continuous n-D piecewise polynomial built from products of 1-D pieces plus a polynomial.
PiecewisePoly random_pp(Rng& rng, const Interval& domain, int max_breaks, int max_degree, unsigned level = 4);
// Reads a 1-D piecewise polynomial as a function of x_axis on an n-D box.
PiecewisePoly lift_axis(const PiecewisePoly& f1, const Interval& domain, std::size_t axis);

FormalDistribution random_distribution(Rng& rng, const Interval& domain, unsigned max_order, int max_breaks = 3,
                                       int max_degree = 3, unsigned level = 5);
// A different representative of the same class: higher order and an added P_m term.
FormalDistribution random_representative(Rng& rng, const FormalDistribution& t, unsigned max_extra = 2);

Interval random_base_interval(Rng& rng, const BaseIndex& base, long min_cells = 1);
Interval random_base_subinterval(Rng& rng, const BaseIndex& base, const Interval& inside, long min_cells = 1);
// 1-D cover of u by overlapping base intervals.
std::vector<Interval> random_cover(Rng& rng, const BaseIndex& base, const Interval& u, int max_pieces = 5);

GaugeExpr random_gauge_expr(Rng& rng, int max_terms = 4);
// Sum of terms c * rho^k * x^beta * g(affine), g one of 1, sin, cos, exp, bump_8.
Expr random_smooth_net(Rng& rng, std::size_t dim, int max_terms = 3);

}  // namespace gfcalc
