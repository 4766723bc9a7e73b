#pragma once

#include "gfcalc/error.hpp"
#include "gfcalc/rational.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gfcalc {

class Gauge {
public:
    Gauge() = default;  // eps^1
    // rho_eps = eps^p
    static Gauge power(const Rational& p);
    // rho given by samples eps -> rho_eps, interpolated log-log between samples.
    static Gauge table(std::map<double, double> samples);

    bool is_power() const { return samples_.empty(); }
    const Rational& exponent() const { return exponent_; }
    const std::map<double, double>& samples() const { return samples_; }

    double rho(double eps) const;
    // Exact rho for a power gauge with integral exponent.
    std::optional<Rational> rho_exact(const Rational& eps) const;

    friend bool operator==(const Gauge& a, const Gauge& b) {
        return a.exponent_ == b.exponent_ && a.samples_ == b.samples_;
    }
    std::string to_string() const;

private:
    Rational exponent_ = 1;
    std::map<double, double> samples_;
};

struct GaugeTerm {
    Rational coeff;
    Rational exponent;
};

// Finite or truncated generalized power series sum c_i rho^{a_i} + O(rho^trunc).
class GaugeExpr {
public:
    GaugeExpr() = default;
    GaugeExpr(int c);  // NOLINT(google-explicit-constructor)
    GaugeExpr(const Rational& c);  // NOLINT(google-explicit-constructor)

    static GaugeExpr monomial(const Rational& coeff, const Rational& exponent);
    static GaugeExpr rho_power(const Rational& exponent) { return monomial(Rational(1), exponent); }
    static GaugeExpr from_terms(std::vector<GaugeTerm> terms, std::optional<Rational> trunc = std::nullopt);
    static GaugeExpr truncated_zero(const Rational& order);

    const std::vector<GaugeTerm>& terms() const { return terms_; }
    const std::optional<Rational>& truncation() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }
    // No known terms (exact zero, or zero up to the truncation order).
    bool is_zero() const { return terms_.empty(); }
    bool is_exact_zero() const { return terms_.empty() && !trunc_; }
    bool is_monomial() const { return terms_.size() == 1 && !trunc_; }
    std::optional<Rational> leading_exponent() const;
    Rational leading_coeff() const;

    GaugeExpr truncated(const Rational& order) const;

    GaugeExpr operator-() const;
    friend GaugeExpr operator+(const GaugeExpr& a, const GaugeExpr& b);
    friend GaugeExpr operator-(const GaugeExpr& a, const GaugeExpr& b);
    friend GaugeExpr operator*(const GaugeExpr& a, const GaugeExpr& b);
    friend GaugeExpr operator*(const GaugeExpr& a, const Rational& c);
    GaugeExpr& operator+=(const GaugeExpr& o) { return *this = *this + o; }
    GaugeExpr& operator*=(const GaugeExpr& o) { return *this = *this * o; }

    // Equality up to the smaller truncation order.
    friend bool operator==(const GaugeExpr& a, const GaugeExpr& b) { return (a - b).is_zero(); }
    // Identical canonical data, including truncation orders.
    bool identical(const GaugeExpr& o) const;

    double evaluate(double rho) const;
    long double evaluate_long(long double rho) const;
    // Exact value when every exponent is an integer; truncation is ignored.
    std::optional<Rational> evaluate_exact(const Rational& rho) const;

    std::string to_string() const;

private:
    std::vector<GaugeTerm> terms_;
    std::optional<Rational> trunc_;
};

inline bool coeff_is_zero(const GaugeExpr& g) { return g.is_exact_zero(); }

struct OpaqueNet {
    std::function<double(double)> evaluator;  // eps -> x_eps
    std::vector<double> schedule;             // decreasing eps values
    std::string label;
};

std::vector<double> default_schedule();  // 2^-k, k = 4..20

enum class NumberClass { zero, infinitesimal, finite_invertible, infinite, undetermined };
const char* to_string(NumberClass c);

struct Classification {
    NumberClass cls = NumberClass::undetermined;
    bool heuristic = false;
    double slope = 0;     // fitted leading exponent (opaque bodies)
    double residual = 0;  // RMS fit residual in decades (opaque bodies)
};

struct Moderateness {
    enum class Kind { yes, no, undetermined } kind = Kind::undetermined;
    unsigned n = 0;  // x = O(rho^-n) when kind == yes
    bool heuristic = false;
    std::string to_string() const;
};

class GeneralizedNumber {
public:
    GeneralizedNumber() = default;
    GeneralizedNumber(GaugeExpr body, Gauge gauge = Gauge()) : body_(std::move(body)), gauge_(std::move(gauge)) {}
    GeneralizedNumber(OpaqueNet body, Gauge gauge = Gauge()) : body_(std::move(body)), gauge_(std::move(gauge)) {}

    bool is_symbolic() const { return std::holds_alternative<GaugeExpr>(body_); }
    const GaugeExpr& symbolic() const;
    const OpaqueNet& opaque() const;
    const Gauge& gauge() const { return gauge_; }

    // Representative value at eps.
    double sample(double eps) const;
    std::string to_string() const;

private:
    std::variant<GaugeExpr, OpaqueNet> body_;
    Gauge gauge_;
};

GeneralizedNumber gn_add(const GeneralizedNumber& x, const GeneralizedNumber& y);
GeneralizedNumber gn_sub(const GeneralizedNumber& x, const GeneralizedNumber& y);
GeneralizedNumber gn_mul(const GeneralizedNumber& x, const GeneralizedNumber& y);
Classification gn_classify(const GeneralizedNumber& x);
Moderateness gn_is_moderate(const GeneralizedNumber& x);
// Negligible: zero in the ring. Heuristic for opaque bodies.
bool gn_is_negligible(const GeneralizedNumber& x);
bool gn_leq(const GeneralizedNumber& x, const GeneralizedNumber& y);
bool gn_lt(const GeneralizedNumber& x, const GeneralizedNumber& y);
GeneralizedNumber gn_abs(const GeneralizedNumber& x);
// Monomials invert exactly; otherwise y is a truncated series with x * y = 1 + O(rho^order).
GeneralizedNumber gn_invert(const GeneralizedNumber& x, const Rational& order);
GeneralizedNumber gn_invert(const GeneralizedNumber& x);

struct OpaqueAnalysis {
    bool finite_samples = true;
    std::optional<unsigned> moderate_n;  // smallest N with x = O(rho^-N) on the schedule
    bool negligible = false;
    double slope = 0;
    double residual = 0;
};

// Thresholds of the sampled tests.
inline constexpr double kFitResidualDecades = 0.1;
inline constexpr double kBoundSlackDecades = 0.1;
inline constexpr double kSlopeBand = 0.05;
inline constexpr unsigned kMaxModerateN = 64;

OpaqueAnalysis analyze_samples(const std::vector<double>& log_abs_x, const std::vector<double>& log_rho);
OpaqueAnalysis analyze_opaque(const OpaqueNet& net, const Gauge& gauge);

}  // namespace gfcalc
