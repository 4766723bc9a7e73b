#pragma once

#include "gfcalc/interval.hpp"
#include "gfcalc/multi_index.hpp"
#include "gfcalc/polynomial.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gfcalc {

// Continuous piecewise polynomial on a tensor grid of cells covering an Interval.
// Cell polynomials use global coordinates. Cells are stored row-major with axis 0 slowest.
class PiecewisePoly {
public:
    using CellIndex = std::vector<std::size_t>;

    PiecewisePoly() = default;
    // Validates breakpoints and continuity across every face.
    PiecewisePoly(Interval domain, std::vector<std::vector<Rational>> breaks, std::vector<Poly> cells);

    static PiecewisePoly polynomial(const Interval& domain, const Poly& p);
    static PiecewisePoly zero(const Interval& domain);

    const Interval& domain() const { return domain_; }
    std::size_t dimension() const { return domain_.dimension(); }
    const std::vector<std::vector<Rational>>& breaks() const { return breaks_; }
    const std::vector<Poly>& cells() const { return cells_; }

    std::size_t cell_count(std::size_t k) const { return breaks_[k].size() + 1; }
    std::size_t total_cells() const { return cells_.size(); }
    std::size_t flat_index(const CellIndex& idx) const;
    CellIndex unflatten(std::size_t flat) const;
    const Poly& cell(const CellIndex& idx) const { return cells_[flat_index(idx)]; }

    // lo, interior breakpoints, hi along axis k.
    std::vector<Rational> axis_nodes(std::size_t k) const;
    Rational cell_lo(std::size_t k, std::size_t i) const;
    Rational cell_hi(std::size_t k, std::size_t i) const;

    Rational evaluate(const std::vector<Rational>& x) const;

    // Same function on a finer grid; `breaks` must contain the current breakpoints.
    PiecewisePoly refined(const std::vector<std::vector<Rational>>& breaks) const;
    // Drops breakpoints across which neighbouring cells carry identical polynomials.
    PiecewisePoly coarsened() const;

    bool is_zero() const;
    bool is_single_cell() const { return cells_.size() == 1; }
    int max_degree(std::size_t k) const;

    PiecewisePoly operator+(const PiecewisePoly& other) const;
    PiecewisePoly operator-(const PiecewisePoly& other) const;
    PiecewisePoly operator*(const PiecewisePoly& other) const;
    PiecewisePoly operator-() const;
    PiecewisePoly scaled(const Rational& c) const;

    // Antiderivative along axis k vanishing on the hyperplane x_k = c_k.
    PiecewisePoly primitive(std::size_t k) const;
    // Iterated primitive, gamma_k times along each axis k.
    PiecewisePoly primitive(const MultiIndex& gamma) const;
    // Cellwise derivative; throws not_differentiable naming the first discontinuous face.
    PiecewisePoly partial(std::size_t k) const;
    PiecewisePoly partial(const MultiIndex& alpha) const;
    bool is_c_alpha(const MultiIndex& alpha) const;

    PiecewisePoly restrict_to(const Interval& sub) const;
    // Joins `left` (used for x_axis < cut) and `right` (x_axis > cut); domains must share the
    // other extents and overlap across `cut`.
    static PiecewisePoly splice(const PiecewisePoly& left, const PiecewisePoly& right, std::size_t axis,
                                const Rational& cut);

    Rational integral() const;

    // Description of the first face where continuity fails, empty if continuous.
    std::string discontinuity() const;

    friend bool operator==(const PiecewisePoly& a, const PiecewisePoly& b);

private:
    struct Unchecked {};
    PiecewisePoly(Unchecked, Interval domain, std::vector<std::vector<Rational>> breaks,
                  std::vector<Poly> cells);

    template <class F>
    PiecewisePoly combine(const PiecewisePoly& other, F&& op) const;

    Interval domain_;
    std::vector<std::vector<Rational>> breaks_;
    std::vector<Poly> cells_;
};

std::vector<std::vector<Rational>> merge_breaks(const std::vector<std::vector<Rational>>& a,
                                                const std::vector<std::vector<Rational>>& b);

// Integral of p over the closed box [lo, hi].
Rational integrate_box(const Poly& p, const std::vector<Rational>& lo, const std::vector<Rational>& hi);

std::string to_string(const PiecewisePoly& f);

}  // namespace gfcalc
