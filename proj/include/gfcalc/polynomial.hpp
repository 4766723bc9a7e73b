#pragma once

#include "gfcalc/error.hpp"
#include "gfcalc/rational.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace gfcalc {

inline constexpr std::size_t kMaxVars = 4;
using Exponents = std::array<int, kMaxVars>;

inline bool coeff_is_zero(const Rational& c) { return sgn(c) == 0; }

// Sparse multivariate Laurent polynomial in at most kMaxVars variables.
// R must provide +, -, *, unary -, R * Rational, a zero default value and coeff_is_zero(R).
template <class R>
class MPoly {
public:
    using Terms = std::map<Exponents, R>;

    MPoly() = default;
    explicit MPoly(std::size_t nvars) : nvars_(nvars) { check_nvars(nvars); }

    static MPoly constant(std::size_t nvars, const R& c) {
        MPoly p(nvars);
        p.add_term(Exponents{}, c);
        return p;
    }

    static MPoly variable(std::size_t nvars, std::size_t k) {
        MPoly p(nvars);
        Exponents e{};
        e[k] = 1;
        p.add_term(e, R(1));
        return p;
    }

    static MPoly monomial(std::size_t nvars, const R& c, const Exponents& e) {
        MPoly p(nvars);
        p.add_term(e, c);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Exponents& e, const R& c) {
        if (coeff_is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second = it->second + c;
            if (coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    R coefficient(const Exponents& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? R() : it->second;
    }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{});
    }

    R constant_term() const { return coefficient(Exponents{}); }

    MPoly operator-() const {
        MPoly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }

    MPoly& operator+=(const MPoly& o) {
        nvars_ = std::max(nvars_, o.nvars_);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    MPoly& operator-=(const MPoly& o) {
        nvars_ = std::max(nvars_, o.nvars_);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r(std::max(a.nvars_, b.nvars_));
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e;
                for (std::size_t k = 0; k < kMaxVars; ++k) e[k] = ea[k] + eb[k];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly scaled(const R& c) const {
        MPoly r(nvars_);
        if (coeff_is_zero(c)) return r;
        for (const auto& [e, t] : terms_) r.add_term(e, t * c);
        return r;
    }

    MPoly scaled_by_rational(const Rational& c) const {
        MPoly r(nvars_);
        if (sgn(c) == 0) return r;
        for (const auto& [e, t] : terms_) r.add_term(e, t * c);
        return r;
    }

    // Multiplies by the monomial x^shift.
    MPoly shifted(const Exponents& shift) const {
        MPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            Exponents f;
            for (std::size_t k = 0; k < kMaxVars; ++k) f[k] = e[k] + shift[k];
            r.terms_.emplace(f, c);
        }
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return false;
            if (!coeff_is_zero(ia->second - ib->second)) return false;
        }
        return true;
    }

    MPoly derivative(std::size_t k) const {
        MPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[k] == 0) continue;
            Exponents f = e;
            f[k] -= 1;
            r.add_term(f, c * Rational(e[k]));
        }
        return r;
    }

    MPoly antiderivative(std::size_t k) const {
        MPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[k] == -1)
                throw Error(ErrorCode::invalid_argument, "antiderivative of x^-1 is not polynomial");
            Exponents f = e;
            f[k] += 1;
            r.add_term(f, c * make_rational(1, e[k] + 1));
        }
        return r;
    }

    // Replaces variable k by the polynomial `value`. Negative powers of x_k are only
    // allowed when `value` is a single monomial.
    MPoly substitute(std::size_t k, const MPoly& value) const {
        std::size_t n = std::max(nvars_, value.nvars_);
        std::map<int, MPoly> powers;
        std::function<const MPoly&(int)> power_of = [&](int e) -> const MPoly& {
            auto it = powers.find(e);
            if (it != powers.end()) return it->second;
            MPoly p;
            if (e == 0) {
                p = MPoly::constant(n, R(1));
            } else if (e > 0) {
                p = power_of(e - 1) * value;
            } else {
                if (value.terms_.size() != 1)
                    throw Error(ErrorCode::invalid_argument,
                                "negative power substitution needs a monomial");
                const auto& [ve, vc] = *value.terms_.begin();
                Exponents inv;
                for (std::size_t i = 0; i < kMaxVars; ++i) inv[i] = -ve[i];
                if constexpr (std::is_same_v<R, Rational>) {
                    MPoly base = MPoly::monomial(n, R(1) / vc, inv);
                    p = power_of(e + 1) * base;
                } else {
                    throw Error(ErrorCode::invalid_argument,
                                "negative power substitution needs rational coefficients");
                }
            }
            return powers.emplace(e, std::move(p)).first->second;
        };
        MPoly r(n);
        for (const auto& [e, c] : terms_) {
            Exponents rest = e;
            rest[k] = 0;
            MPoly piece = power_of(e[k]).shifted(rest).scaled(c);
            r += piece;
        }
        return r;
    }

    // Substitutes the constant `value` for x_k; x_k then no longer occurs.
    MPoly evaluate_axis(std::size_t k, const R& value) const {
        return substitute(k, MPoly::constant(nvars_, value));
    }

    R evaluate(const std::vector<R>& point) const {
        R total{};
        std::vector<std::map<int, R>> cache(nvars_);
        auto power = [&](std::size_t k, int e) -> R {
            auto it = cache[k].find(e);
            if (it != cache[k].end()) return it->second;
            R v(1);
            int a = e < 0 ? -e : e;
            for (int i = 0; i < a; ++i) v = v * point[k];
            if (e < 0) {
                if constexpr (std::is_same_v<R, Rational>) {
                    if (sgn(v) == 0)
                        throw Error(ErrorCode::not_invertible, "negative power of zero");
                    v = R(1) / v;
                } else {
                    throw Error(ErrorCode::invalid_argument, "negative power in evaluation");
                }
            }
            cache[k].emplace(e, v);
            return v;
        };
        for (const auto& [e, c] : terms_) {
            R term = c;
            for (std::size_t k = 0; k < nvars_; ++k)
                if (e[k] != 0) term = term * power(k, e[k]);
            total = total + term;
        }
        return total;
    }

    int degree(std::size_t k) const {
        int d = 0;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (first || e[k] > d) d = e[k];
            first = false;
        }
        return d;
    }

    int min_degree(std::size_t k) const {
        int d = 0;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (first || e[k] < d) d = e[k];
            first = false;
        }
        return d;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (std::size_t k = 0; k < nvars_; ++k) s += e[k];
            d = std::max(d, s);
        }
        return d;
    }

    bool depends_on(std::size_t k) const {
        for (const auto& [e, c] : terms_)
            if (e[k] != 0) return true;
        return false;
    }

    // Collects the coefficient of x_k^j as a polynomial in the remaining variables.
    std::map<int, MPoly> split_by(std::size_t k) const {
        std::map<int, MPoly> parts;
        for (const auto& [e, c] : terms_) {
            Exponents f = e;
            f[k] = 0;
            auto [it, inserted] = parts.try_emplace(e[k], MPoly(nvars_));
            it->second.add_term(f, c);
        }
        return parts;
    }

    MPoly with_nvars(std::size_t n) const {
        check_nvars(n);
        for (const auto& [e, c] : terms_)
            for (std::size_t k = n; k < kMaxVars; ++k)
                if (e[k] != 0)
                    throw Error(ErrorCode::invalid_argument, "dropping a used variable");
        MPoly r = *this;
        r.nvars_ = n;
        return r;
    }

    template <class S, class F>
    MPoly<S> map_coefficients(F&& f) const {
        MPoly<S> r(nvars_);
        for (const auto& [e, c] : terms_) r.add_term(e, f(c));
        return r;
    }

private:
    static void check_nvars(std::size_t n) {
        if (n > kMaxVars)
            throw Error(ErrorCode::invalid_argument, "too many polynomial variables");
    }

    std::size_t nvars_ = 0;
    Terms terms_;
};

using Poly = MPoly<Rational>;

std::string to_string(const Poly& p, const std::vector<std::string>& names = {});

}  // namespace gfcalc
