#include "gfcalc/interval.hpp"

#include "gfcalc/error.hpp"

namespace gfcalc {

Interval::Interval(std::vector<Rational> center, std::vector<Rational> radii)
    : center_(std::move(center)), radii_(std::move(radii)) {
    if (center_.size() != radii_.size())
        throw Error(ErrorCode::invalid_argument, "interval center and radii differ in length");
    for (const auto& r : radii_)
        if (sgn(r) <= 0) throw Error(ErrorCode::invalid_argument, "interval radius must be positive");
}

Interval Interval::from_bounds(const std::vector<Rational>& lo, const std::vector<Rational>& hi) {
    if (lo.size() != hi.size()) throw Error(ErrorCode::invalid_argument, "bound length mismatch");
    std::vector<Rational> c(lo.size()), r(lo.size());
    for (std::size_t k = 0; k < lo.size(); ++k) {
        c[k] = (lo[k] + hi[k]) / 2;
        r[k] = (hi[k] - lo[k]) / 2;
    }
    return Interval(std::move(c), std::move(r));
}

Interval Interval::unit(std::size_t n) {
    return Interval(std::vector<Rational>(n, Rational(0)), std::vector<Rational>(n, Rational(1)));
}

bool Interval::contains_point(const std::vector<Rational>& x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t k = 0; k < dimension(); ++k)
        if (!(lo(k) < x[k] && x[k] < hi(k))) return false;
    return true;
}

bool Interval::closure_contains_point(const std::vector<Rational>& x) const {
    if (x.size() != dimension()) return false;
    for (std::size_t k = 0; k < dimension(); ++k)
        if (x[k] < lo(k) || x[k] > hi(k)) return false;
    return true;
}

bool Interval::contains(const Interval& other) const {
    if (other.dimension() != dimension()) return false;
    for (std::size_t k = 0; k < dimension(); ++k)
        if (other.lo(k) < lo(k) || other.hi(k) > hi(k)) return false;
    return true;
}

std::optional<Interval> Interval::intersect(const Interval& other) const {
    if (other.dimension() != dimension()) return std::nullopt;
    std::vector<Rational> l(dimension()), h(dimension());
    for (std::size_t k = 0; k < dimension(); ++k) {
        l[k] = std::max(lo(k), other.lo(k));
        h[k] = std::min(hi(k), other.hi(k));
        if (!(l[k] < h[k])) return std::nullopt;
    }
    return from_bounds(l, h);
}

Rational Interval::volume() const {
    Rational v = 1;
    for (const auto& r : radii_) v *= 2 * r;
    return v;
}

bool operator<(const Interval& a, const Interval& b) {
    if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
    for (std::size_t k = 0; k < a.dimension(); ++k) {
        if (a.lo(k) != b.lo(k)) return a.lo(k) < b.lo(k);
        if (a.hi(k) != b.hi(k)) return a.hi(k) < b.hi(k);
    }
    return false;
}

std::string Interval::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < dimension(); ++k) {
        if (k) s += "x";
        s += "(" + lo(k).get_str() + "," + hi(k).get_str() + ")";
    }
    return s;
}

}  // namespace gfcalc
