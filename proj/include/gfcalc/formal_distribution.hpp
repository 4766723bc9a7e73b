#pragma once

#include "gfcalc/interval.hpp"
#include "gfcalc/kernels.hpp"
#include "gfcalc/multi_index.hpp"
#include "gfcalc/piecewise_poly.hpp"

#include <string>

namespace gfcalc {

// The class of the pair (order, rep), read as "the order-th derivative of rep".
// Field equality is not class equality; use fd_equal.
class FormalDistribution {
public:
    FormalDistribution() = default;
    FormalDistribution(MultiIndex order, PiecewisePoly rep);

    const MultiIndex& order() const { return order_; }
    const PiecewisePoly& rep() const { return rep_; }
    const Interval& domain() const { return rep_.domain(); }
    std::size_t dimension() const { return rep_.dimension(); }

private:
    MultiIndex order_;
    PiecewisePoly rep_;
};

// h = sum_k theta_k with theta_k polynomial of degree < m_k in x_k.
bool p_m_member(const PiecewisePoly& h, const MultiIndex& m, kernels::Exec exec = kernels::Exec::parallel);
// Decision by tensor divided differences on the canonical test grid, never taking the fast path.
bool p_m_member_grid(const PiecewisePoly& h, const MultiIndex& m, kernels::Exec exec = kernels::Exec::parallel);
// Single-polynomial criterion: no monomial x^beta with beta >= m.
bool p_m_member_monomial(const Poly& h, const MultiIndex& m);

bool fd_equal(const FormalDistribution& t, const FormalDistribution& s,
              kernels::Exec exec = kernels::Exec::parallel);
FormalDistribution fd_derive(const FormalDistribution& t, std::size_t k);
FormalDistribution fd_derive(const FormalDistribution& t, const MultiIndex& alpha);
FormalDistribution fd_lambda(const PiecewisePoly& f);
FormalDistribution fd_raise(const FormalDistribution& t, const MultiIndex& m);
FormalDistribution fd_add(const FormalDistribution& t, const FormalDistribution& s);
FormalDistribution fd_sub(const FormalDistribution& t, const FormalDistribution& s);
FormalDistribution fd_scale(const Rational& mu, const FormalDistribution& t);
FormalDistribution fd_restrict(const FormalDistribution& t, const Interval& j);
FormalDistribution fd_zero(const Interval& domain);
// (-1)^|order| * integral of rep * d^order phi over the domain.
Rational fd_pair(const FormalDistribution& t, const PiecewisePoly& phi);

std::string to_string(const FormalDistribution& t);

}  // namespace gfcalc
