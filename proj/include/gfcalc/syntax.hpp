#pragma once

#include "gfcalc/expr.hpp"
#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/gauge.hpp"

#include <string_view>

namespace gfcalc {

// Mini-syntax for 1-D objects.
//
//   distribution := "((" nat ")," pexpr ")" [domain] | pexpr [domain]
//   domain       := "on" "(" rational "," rational ")"          default (-1,1)
//   pexpr        := term { ("+" | "-") term }
//   term         := unary { ("*" | "/") unary }                  "/" only by constants
//   unary        := "-" unary | power
//   power        := atom [ "^" exponent ]
//   exponent     := ["-"] number | "(" ["-"] number ["/" number] ")"
//   atom         := rational | "x" | "rho" | "(" pexpr ")"
//                 | ("ramp" | "abs") [ "(" pexpr ")" ]           argument affine in x, default x
//                 | ("sin" | "cos" | "exp") "(" pexpr ")"         generalized expressions only
//                 | "bump" "(" pexpr ")"                          (1 - t^2)^8 normalized, 0 for |t| >= 1
//                 | "pw" "[" rational {"," rational} "]" "(" pexpr {";" pexpr} ")"
//
// ramp(a) = max(a, 0); pw[b1,...,bk](p0; ...; pk) takes p_i between b_i and b_{i+1}.
// Piecewise polynomials must be continuous and use only x and constants; generalized
// expressions may use rho, sin, cos, exp and bump but not ramp, abs or pw.

PiecewisePoly parse_piecewise(std::string_view text, const Interval& domain = Interval::unit(1));
FormalDistribution parse_distribution(std::string_view text);
// A tree in x_1 and rho.
Expr parse_expr(std::string_view text);
// Closed series when the text has no functions, otherwise an opaque net sampled from the tree.
GeneralizedNumber parse_number(std::string_view text, const Gauge& gauge = Gauge());
// Comma separated rationals.
std::vector<Rational> parse_rational_list(std::string_view text);

}  // namespace gfcalc
