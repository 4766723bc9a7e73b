#pragma once

#include "gfcalc/gauge.hpp"
#include "gfcalc/multi_index.hpp"
#include "gfcalc/piecewise_net.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gfcalc {

enum class ExprOp { constant, variable, rho_power, sum, product, sin, cos, exp, bump, piecewise };
const char* to_string(ExprOp op);

// Immutable expression tree over x_1..x_n and the gauge symbol rho. Sums and products are
// kept flat, sorted and with like terms collected, so structurally equal trees compare equal.
class Expr {
public:
    struct Node;

    Expr();  // constant 0
    Expr(const Rational& c);  // NOLINT(google-explicit-constructor)
    Expr(int c);              // NOLINT(google-explicit-constructor)

    static Expr constant(const Rational& c);
    static Expr variable(std::size_t k);
    static Expr rho_power(const Rational& q);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr sin(const Expr& a);
    static Expr cos(const Expr& a);
    static Expr exp(const Expr& a);
    // k-th derivative of C_p (1 - t^2)^p on |t| <= 1, 0 outside, composed with a.
    static Expr bump(unsigned p, const Expr& a, unsigned k = 0);
    // The univariate net composed with a.
    static Expr piecewise(std::shared_ptr<const PiecewiseNet> net, const Expr& a);

    ExprOp op() const;
    const Rational& value() const;  // constant value or rho exponent
    std::size_t index() const;      // variable index
    unsigned bump_p() const;
    unsigned bump_k() const;
    const std::shared_ptr<const PiecewiseNet>& net() const;
    const std::shared_ptr<const Poly>& bump_polynomial() const;
    const std::vector<Expr>& args() const;

    bool is_constant() const { return op() == ExprOp::constant; }
    bool is_zero() const;
    // Number of variables the tree mentions (largest index + 1).
    std::size_t arity() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    Expr operator-() const;

    Expr derivative(std::size_t k) const;
    Expr derivative(const MultiIndex& alpha) const;
    // Substitutes e for x_k.
    Expr substitute(std::size_t k, const Expr& e) const;
    // Remaining derivative orders that stay continuous; nullopt when unbounded.
    std::optional<int> budget() const;

    double evaluate(const std::vector<double>& x, double rho) const;
    long double evaluate(const std::vector<long double>& x, long double rho) const;

    friend int compare(const Expr& a, const Expr& b);
    friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
    friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

    std::string to_string() const;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Expr::Node {
    ExprOp op = ExprOp::constant;
    Rational value;
    std::size_t index = 0;
    unsigned p = 0;
    unsigned k = 0;
    std::shared_ptr<const PiecewiseNet> net;
    std::shared_ptr<const Poly> bump_poly;
    std::vector<Expr> args;
};

// Symbolic value of a tree at a point with series coordinates.
struct SymbolicValue {
    std::optional<GaugeExpr> value;  // closed form when the tree closes over the grammar
    bool moderate = false;           // known moderate even without a closed form
    bool infinite_growth = false;    // known to exceed every rho^-N
};

SymbolicValue evaluate_symbolic(const Expr& e, const std::vector<GaugeExpr>& x);

// Piecewise-net form of a tree built from constants, variables, rho powers, +, * and
// univariate piecewise leaves applied to x_1; nullopt otherwise.
std::optional<PiecewiseNet> to_piecewise_net(const Expr& e, std::size_t nvars);

}  // namespace gfcalc
