#pragma once

#include "gfcalc/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace gfcalc {

// Open n-dimensional box given by center and per-axis half-sides.
class Interval {
public:
    Interval() = default;
    Interval(std::vector<Rational> center, std::vector<Rational> radii);

    static Interval from_bounds(const std::vector<Rational>& lo, const std::vector<Rational>& hi);
    static Interval unit(std::size_t n);  // (-1,1)^n

    std::size_t dimension() const { return center_.size(); }
    const std::vector<Rational>& center() const { return center_; }
    const std::vector<Rational>& radii() const { return radii_; }
    Rational lo(std::size_t k) const { return center_[k] - radii_[k]; }
    Rational hi(std::size_t k) const { return center_[k] + radii_[k]; }

    bool contains_point(const std::vector<Rational>& x) const;          // open box
    bool closure_contains_point(const std::vector<Rational>& x) const;  // closed box
    bool contains(const Interval& other) const;                          // other ⊆ this
    std::optional<Interval> intersect(const Interval& other) const;      // nonempty open intersection

    Rational volume() const;

    friend bool operator==(const Interval&, const Interval&) = default;
    friend bool operator<(const Interval& a, const Interval& b);

    std::string to_string() const;

private:
    std::vector<Rational> center_;
    std::vector<Rational> radii_;
};

}  // namespace gfcalc
