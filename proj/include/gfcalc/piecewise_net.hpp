#pragma once

#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/gauge.hpp"
#include "gfcalc/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gfcalc {

// Polynomial in x with generalized power series coefficients in rho.
using NetPoly = MPoly<GaugeExpr>;

// The moving point base + shift * rho.
struct NetBreak {
    Rational base;
    int shift = 0;
};

bool operator<(const NetBreak& a, const NetBreak& b);
bool operator==(const NetBreak& a, const NetBreak& b);

struct NetPiece {
    std::optional<NetBreak> lo;  // nullopt: -infinity
    std::optional<NetBreak> hi;  // nullopt: +infinity
    NetPoly poly;
};

// Net of piecewise polynomial functions of x whose breakpoints move with rho.
// Pieces are listed left to right; multi-variable nets have a single piece.
class PiecewiseNet {
public:
    PiecewiseNet() = default;
    PiecewiseNet(std::size_t nvars, std::vector<NetPiece> pieces, std::optional<int> smoothness);

    static PiecewiseNet polynomial(std::size_t nvars, const NetPoly& p);

    std::size_t nvars() const { return nvars_; }
    const std::vector<NetPiece>& pieces() const { return pieces_; }
    // Number of further derivatives that stay continuous; nullopt when unbounded.
    const std::optional<int>& smoothness() const { return smoothness_; }

    PiecewiseNet derivative(std::size_t k) const;
    PiecewiseNet operator+(const PiecewiseNet& o) const;
    PiecewiseNet operator*(const PiecewiseNet& o) const;
    PiecewiseNet scaled(const GaugeExpr& c) const;
    bool is_zero() const;

    double evaluate(const std::vector<double>& x, double rho) const;
    long double evaluate(const std::vector<long double>& x, long double rho) const;
    // Exact value at rational x and rho; nullopt when a coefficient has a non-integral exponent.
    std::optional<Rational> evaluate_exact(const Rational& x, const Rational& rho) const;
    // Value at a generalized point given by series; nullopt when the piece cannot be decided.
    std::optional<GaugeExpr> evaluate_symbolic(const std::vector<GaugeExpr>& x) const;

    // Exponent e with sup over the closed box k of |net| ~ rho^e; nullopt when the net vanishes there.
    std::optional<Rational> sup_exponent(const Interval& k) const;
    // Exact integral over the domain of phi of net * phi.
    GaugeExpr pair(const PiecewisePoly& phi) const;

    // Piece order is valid for rho below this bound; nullopt when unrestricted.
    std::optional<Rational> rho_limit() const;
    // Largest j such that the net and its first j derivatives are continuous, capped at `cap`.
    int continuity_order(int cap) const;
    PiecewiseNet with_smoothness(std::optional<int> s) const;

    // Canonical text used for structural comparison.
    const std::string& key() const { return key_; }

private:
    PiecewiseNet merged(const PiecewiseNet& o, bool multiply) const;
    PiecewiseNet raw_derivative(std::size_t k) const;
    std::size_t locate(const std::vector<double>& x, double rho) const;
    void build_key();

    std::size_t nvars_ = 1;
    std::vector<NetPiece> pieces_;
    std::optional<int> smoothness_;
    std::string key_;
};

// C_p with C_p * integral_{-1}^{1} (1 - u^2)^p du = 1.
Rational bump_constant(unsigned p);
// C_p * d^k/du^k (1 - u^2)^p as a polynomial in u.
Poly bump_poly(unsigned p, unsigned k);

GaugeExpr break_value(const NetBreak& b);

// Exact net rep * (d^order mu_rho) for a 1-D formal distribution, where mu_rho(x) = mu(x/rho)/rho,
// mu the normalized bump of exponent p and rep extended by its boundary values outside the domain.
PiecewiseNet mollify(const FormalDistribution& t, unsigned p);

std::string to_string(const NetPoly& p);
std::string to_string(const PiecewiseNet& n);

}  // namespace gfcalc
