#include "gfcalc/piecewise_poly.hpp"

#include <algorithm>
#include <sstream>

namespace gfcalc {

namespace {

std::size_t locate(const std::vector<Rational>& breaks, const Rational& x) {
    return static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
}

void require_same_domain(const Interval& a, const Interval& b) {
    if (!(a == b))
        throw Error(ErrorCode::domain_mismatch, "domains differ: " + a.to_string() + " vs " + b.to_string());
}

}  // namespace

PiecewisePoly::PiecewisePoly(Unchecked, Interval domain, std::vector<std::vector<Rational>> breaks,
                             std::vector<Poly> cells)
    : domain_(std::move(domain)), breaks_(std::move(breaks)), cells_(std::move(cells)) {}

PiecewisePoly::PiecewisePoly(Interval domain, std::vector<std::vector<Rational>> breaks, std::vector<Poly> cells)
    : domain_(std::move(domain)), breaks_(std::move(breaks)), cells_(std::move(cells)) {
    const std::size_t n = domain_.dimension();
    if (n == 0 || n > kMaxVars) throw Error(ErrorCode::invalid_argument, "unsupported dimension");
    if (breaks_.size() != n) throw Error(ErrorCode::invalid_argument, "one breakpoint list per axis required");
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& b = breaks_[k];
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!(domain_.lo(k) < b[i] && b[i] < domain_.hi(k)))
                throw Error(ErrorCode::invalid_argument, "breakpoint outside the open domain");
            if (i && !(b[i - 1] < b[i]))
                throw Error(ErrorCode::invalid_argument, "breakpoints must increase strictly");
        }
        total *= b.size() + 1;
    }
    if (cells_.size() != total) throw Error(ErrorCode::invalid_argument, "cell count does not match breakpoints");
    for (auto& c : cells_) {
        if (c.nvars() > n) c = c.with_nvars(n);
        for (std::size_t k = 0; k < n; ++k)
            if (c.min_degree(k) < 0) throw Error(ErrorCode::invalid_argument, "negative exponent in cell polynomial");
        c = c.with_nvars(n);
    }
    std::string bad = discontinuity();
    if (!bad.empty()) throw Error(ErrorCode::invalid_argument, "representative is discontinuous at " + bad);
}

PiecewisePoly PiecewisePoly::polynomial(const Interval& domain, const Poly& p) {
    return PiecewisePoly(domain, std::vector<std::vector<Rational>>(domain.dimension()), {p});
}

PiecewisePoly PiecewisePoly::zero(const Interval& domain) { return polynomial(domain, Poly(domain.dimension())); }

std::size_t PiecewisePoly::flat_index(const CellIndex& idx) const {
    std::size_t f = 0;
    for (std::size_t k = 0; k < breaks_.size(); ++k) f = f * cell_count(k) + idx[k];
    return f;
}

PiecewisePoly::CellIndex PiecewisePoly::unflatten(std::size_t flat) const {
    CellIndex idx(breaks_.size());
    for (std::size_t k = breaks_.size(); k-- > 0;) {
        idx[k] = flat % cell_count(k);
        flat /= cell_count(k);
    }
    return idx;
}

std::vector<Rational> PiecewisePoly::axis_nodes(std::size_t k) const {
    std::vector<Rational> nodes;
    nodes.reserve(breaks_[k].size() + 2);
    nodes.push_back(domain_.lo(k));
    nodes.insert(nodes.end(), breaks_[k].begin(), breaks_[k].end());
    nodes.push_back(domain_.hi(k));
    return nodes;
}

Rational PiecewisePoly::cell_lo(std::size_t k, std::size_t i) const {
    return i == 0 ? domain_.lo(k) : breaks_[k][i - 1];
}

Rational PiecewisePoly::cell_hi(std::size_t k, std::size_t i) const {
    return i == breaks_[k].size() ? domain_.hi(k) : breaks_[k][i];
}

Rational PiecewisePoly::evaluate(const std::vector<Rational>& x) const {
    if (!domain_.closure_contains_point(x))
        throw Error(ErrorCode::out_of_domain, "evaluation point outside the closed domain");
    CellIndex idx(dimension());
    for (std::size_t k = 0; k < dimension(); ++k) idx[k] = std::min(locate(breaks_[k], x[k]), breaks_[k].size());
    return cell(idx).evaluate(x);
}

PiecewisePoly PiecewisePoly::refined(const std::vector<std::vector<Rational>>& nb) const {
    const std::size_t n = dimension();
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        for (const auto& b : breaks_[k])
            if (!std::binary_search(nb[k].begin(), nb[k].end(), b))
                throw Error(ErrorCode::invalid_argument, "refinement must keep existing breakpoints");
        counts[k] = nb[k].size() + 1;
        total *= counts[k];
    }
    std::vector<std::vector<std::size_t>> old_of_new(n);
    for (std::size_t k = 0; k < n; ++k) {
        old_of_new[k].resize(counts[k]);
        for (std::size_t i = 0; i < counts[k]; ++i) {
            Rational lo = i == 0 ? domain_.lo(k) : nb[k][i - 1];
            old_of_new[k][i] = locate(breaks_[k], lo);
        }
    }
    std::vector<Poly> cells(total);
    CellIndex idx(n), old(n);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = rem % counts[k];
            rem /= counts[k];
            old[k] = old_of_new[k][idx[k]];
        }
        cells[f] = cell(old);
    }
    return PiecewisePoly(Unchecked{}, domain_, nb, std::move(cells));
}

PiecewisePoly PiecewisePoly::coarsened() const {
    const std::size_t n = dimension();
    std::vector<std::vector<bool>> removable(n);
    for (std::size_t k = 0; k < n; ++k) {
        removable[k].assign(breaks_[k].size(), true);
        for (std::size_t f = 0; f < cells_.size(); ++f) {
            CellIndex idx = unflatten(f);
            if (idx[k] + 1 >= cell_count(k)) continue;
            if (!removable[k][idx[k]]) continue;
            CellIndex nxt = idx;
            ++nxt[k];
            if (!(cells_[f] == cell(nxt))) removable[k][idx[k]] = false;
        }
    }
    std::vector<std::vector<Rational>> nb(n);
    bool any = false;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < breaks_[k].size(); ++i) {
            if (removable[k][i]) any = true;
            else nb[k].push_back(breaks_[k][i]);
        }
    if (!any) return *this;
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        counts[k] = nb[k].size() + 1;
        total *= counts[k];
    }
    std::vector<Poly> cells(total);
    CellIndex idx(n), old(n);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = rem % counts[k];
            rem /= counts[k];
            Rational lo = idx[k] == 0 ? domain_.lo(k) : nb[k][idx[k] - 1];
            old[k] = locate(breaks_[k], lo);
        }
        cells[f] = cell(old);
    }
    return PiecewisePoly(Unchecked{}, domain_, std::move(nb), std::move(cells));
}

bool PiecewisePoly::is_zero() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Poly& p) { return p.is_zero(); });
}

int PiecewisePoly::max_degree(std::size_t k) const {
    int d = 0;
    for (const auto& c : cells_) d = std::max(d, c.degree(k));
    return d;
}

template <class F>
PiecewisePoly PiecewisePoly::combine(const PiecewisePoly& other, F&& op) const {
    require_same_domain(domain_, other.domain_);
    auto nb = merge_breaks(breaks_, other.breaks_);
    PiecewisePoly a = refined(nb);
    PiecewisePoly b = other.refined(nb);
    std::vector<Poly> cells(a.cells_.size());
    for (std::size_t f = 0; f < cells.size(); ++f) cells[f] = op(a.cells_[f], b.cells_[f]);
    return PiecewisePoly(Unchecked{}, domain_, std::move(nb), std::move(cells)).coarsened();
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& o) const {
    return combine(o, [](const Poly& x, const Poly& y) { return x + y; });
}

PiecewisePoly PiecewisePoly::operator-(const PiecewisePoly& o) const {
    return combine(o, [](const Poly& x, const Poly& y) { return x - y; });
}

PiecewisePoly PiecewisePoly::operator*(const PiecewisePoly& o) const {
    return combine(o, [](const Poly& x, const Poly& y) { return x * y; });
}

PiecewisePoly PiecewisePoly::operator-() const { return scaled(Rational(-1)); }

PiecewisePoly PiecewisePoly::scaled(const Rational& c) const {
    std::vector<Poly> cells(cells_.size());
    for (std::size_t f = 0; f < cells.size(); ++f) cells[f] = cells_[f].scaled(c);
    return PiecewisePoly(Unchecked{}, domain_, breaks_, std::move(cells)).coarsened();
}

PiecewisePoly PiecewisePoly::primitive(std::size_t k) const {
    if (k >= dimension()) throw Error(ErrorCode::invalid_argument, "axis out of range");
    const Rational c = domain_.center()[k];
    auto nb = breaks_;
    if (!std::binary_search(nb[k].begin(), nb[k].end(), c)) {
        nb[k].insert(std::upper_bound(nb[k].begin(), nb[k].end(), c), c);
    }
    PiecewisePoly g = refined(nb);
    const std::size_t t = locate(g.breaks_[k], c);  // first cell with lo == c
    std::vector<Poly> out(g.cells_.size());
    for (std::size_t f = 0; f < g.cells_.size(); ++f) {
        CellIndex idx = g.unflatten(f);
        if (idx[k] != t) continue;
        // Walk right from the anchor.
        Poly acc(dimension());
        for (std::size_t i = t; i < g.cell_count(k); ++i) {
            CellIndex ci = idx;
            ci[k] = i;
            std::size_t fi = g.flat_index(ci);
            Poly a = g.cells_[fi].antiderivative(k);
            Rational lo = g.cell_lo(k, i);
            Poly fcell = a - a.evaluate_axis(k, lo) + acc;
            acc = fcell.evaluate_axis(k, g.cell_hi(k, i));
            out[fi] = std::move(fcell);
        }
        acc = Poly(dimension());
        for (std::size_t i = t; i-- > 0;) {
            CellIndex ci = idx;
            ci[k] = i;
            std::size_t fi = g.flat_index(ci);
            Poly a = g.cells_[fi].antiderivative(k);
            Rational hi = g.cell_hi(k, i);
            Poly fcell = a - a.evaluate_axis(k, hi) + acc;
            acc = fcell.evaluate_axis(k, g.cell_lo(k, i));
            out[fi] = std::move(fcell);
        }
    }
    return PiecewisePoly(Unchecked{}, domain_, std::move(nb), std::move(out)).coarsened();
}

PiecewisePoly PiecewisePoly::primitive(const MultiIndex& gamma) const {
    PiecewisePoly r = *this;
    for (std::size_t k = 0; k < gamma.size(); ++k)
        for (unsigned i = 0; i < gamma[k]; ++i) r = r.primitive(k);
    return r;
}

PiecewisePoly PiecewisePoly::partial(std::size_t k) const {
    if (k >= dimension()) throw Error(ErrorCode::invalid_argument, "axis out of range");
    std::vector<Poly> cells(cells_.size());
    for (std::size_t f = 0; f < cells.size(); ++f) cells[f] = cells_[f].derivative(k);
    PiecewisePoly d(Unchecked{}, domain_, breaks_, std::move(cells));
    std::string bad = d.discontinuity();
    if (!bad.empty())
        throw Error(ErrorCode::not_differentiable,
                    "partial derivative along axis " + std::to_string(k + 1) + " is discontinuous at " + bad);
    return d.coarsened();
}

PiecewisePoly PiecewisePoly::partial(const MultiIndex& alpha) const {
    PiecewisePoly r = *this;
    for (std::size_t k = 0; k < alpha.size(); ++k)
        for (unsigned i = 0; i < alpha[k]; ++i) r = r.partial(k);
    return r;
}

bool PiecewisePoly::is_c_alpha(const MultiIndex& alpha) const {
    if (alpha.size() != dimension()) throw Error(ErrorCode::invalid_argument, "multi-index length mismatch");
    for (const auto& beta : indices_below(alpha)) {
        if (beta.is_zero()) continue;
        std::vector<Poly> cells(cells_);
        for (std::size_t k = 0; k < beta.size(); ++k)
            for (unsigned i = 0; i < beta[k]; ++i)
                for (auto& c : cells) c = c.derivative(k);
        PiecewisePoly d(Unchecked{}, domain_, breaks_, std::move(cells));
        if (!d.discontinuity().empty()) return false;
    }
    return true;
}

PiecewisePoly PiecewisePoly::restrict_to(const Interval& sub) const {
    if (!domain_.contains(sub))
        throw Error(ErrorCode::domain_mismatch, sub.to_string() + " is not inside " + domain_.to_string());
    const std::size_t n = dimension();
    std::vector<std::vector<Rational>> nb(n);
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& b : breaks_[k])
            if (sub.lo(k) < b && b < sub.hi(k)) nb[k].push_back(b);
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        counts[k] = nb[k].size() + 1;
        total *= counts[k];
    }
    std::vector<Poly> cells(total);
    CellIndex idx(n), old(n);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = rem % counts[k];
            rem /= counts[k];
            Rational lo = idx[k] == 0 ? sub.lo(k) : nb[k][idx[k] - 1];
            Rational hi = idx[k] + 1 == counts[k] ? sub.hi(k) : nb[k][idx[k]];
            old[k] = locate(breaks_[k], Rational((lo + hi) / 2));
        }
        cells[f] = cell(old);
    }
    return PiecewisePoly(Unchecked{}, sub, std::move(nb), std::move(cells));
}

PiecewisePoly PiecewisePoly::splice(const PiecewisePoly& left, const PiecewisePoly& right, std::size_t axis,
                                    const Rational& cut) {
    const std::size_t n = left.dimension();
    if (right.dimension() != n || axis >= n) throw Error(ErrorCode::domain_mismatch, "splice dimension mismatch");
    for (std::size_t k = 0; k < n; ++k) {
        if (k == axis) continue;
        if (left.domain_.lo(k) != right.domain_.lo(k) || left.domain_.hi(k) != right.domain_.hi(k))
            throw Error(ErrorCode::domain_mismatch, "splice needs equal cross-sections");
    }
    if (!(left.domain_.lo(axis) < cut && cut <= left.domain_.hi(axis) && right.domain_.lo(axis) <= cut &&
          cut < right.domain_.hi(axis)))
        throw Error(ErrorCode::domain_mismatch, "splice cut outside the overlap");
    std::vector<Rational> lo(n), hi(n);
    std::vector<std::vector<Rational>> nb(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (k == axis) {
            lo[k] = left.domain_.lo(k);
            hi[k] = right.domain_.hi(k);
            for (const auto& b : left.breaks_[k])
                if (b < cut) nb[k].push_back(b);
            nb[k].push_back(cut);
            for (const auto& b : right.breaks_[k])
                if (b > cut) nb[k].push_back(b);
        } else {
            lo[k] = left.domain_.lo(k);
            hi[k] = left.domain_.hi(k);
            std::merge(left.breaks_[k].begin(), left.breaks_[k].end(), right.breaks_[k].begin(),
                       right.breaks_[k].end(), std::back_inserter(nb[k]));
            nb[k].erase(std::unique(nb[k].begin(), nb[k].end()), nb[k].end());
        }
    }
    Interval dom = Interval::from_bounds(lo, hi);
    std::vector<std::size_t> counts(n);
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) {
        counts[k] = nb[k].size() + 1;
        total *= counts[k];
    }
    std::vector<Poly> cells(total);
    CellIndex idx(n), old(n);
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t rem = f;
        std::vector<Rational> mid(n);
        for (std::size_t k = n; k-- > 0;) {
            idx[k] = rem % counts[k];
            rem /= counts[k];
            Rational a = idx[k] == 0 ? lo[k] : nb[k][idx[k] - 1];
            Rational b = idx[k] + 1 == counts[k] ? hi[k] : nb[k][idx[k]];
            mid[k] = (a + b) / 2;
        }
        const PiecewisePoly& src = mid[axis] < cut ? left : right;
        for (std::size_t k = 0; k < n; ++k) old[k] = locate(src.breaks_[k], mid[k]);
        cells[f] = src.cell(old);
    }
    PiecewisePoly r(Unchecked{}, dom, std::move(nb), std::move(cells));
    std::string bad = r.discontinuity();
    if (!bad.empty()) throw Error(ErrorCode::incompatible_family, "spliced pieces disagree at " + bad);
    return r.coarsened();
}

Rational PiecewisePoly::integral() const {
    Rational total = 0;
    const std::size_t n = dimension();
    for (std::size_t f = 0; f < cells_.size(); ++f) {
        CellIndex idx = unflatten(f);
        std::vector<Rational> lo(n), hi(n);
        for (std::size_t k = 0; k < n; ++k) {
            lo[k] = cell_lo(k, idx[k]);
            hi[k] = cell_hi(k, idx[k]);
        }
        total += integrate_box(cells_[f], lo, hi);
    }
    return total;
}

std::string PiecewisePoly::discontinuity() const {
    for (std::size_t k = 0; k < dimension(); ++k) {
        for (std::size_t f = 0; f < cells_.size(); ++f) {
            CellIndex idx = unflatten(f);
            if (idx[k] + 1 >= cell_count(k)) continue;
            CellIndex nxt = idx;
            ++nxt[k];
            const Rational& b = breaks_[k][idx[k]];
            if (!(cells_[f].evaluate_axis(k, b) == cell(nxt).evaluate_axis(k, b))) {
                std::ostringstream msg;
                msg << "face x" << (k + 1) << " = " << b.get_str();
                if (dimension() > 1) {
                    msg << " (cell";
                    for (std::size_t j = 0; j < dimension(); ++j)
                        if (j != k) msg << " x" << (j + 1) << " in [" << cell_lo(j, idx[j]).get_str() << ","
                                        << cell_hi(j, idx[j]).get_str() << "]";
                    msg << ")";
                }
                return msg.str();
            }
        }
    }
    return {};
}

bool operator==(const PiecewisePoly& a, const PiecewisePoly& b) {
    if (!(a.domain_ == b.domain_)) return false;
    return (a - b).is_zero();
}

std::vector<std::vector<Rational>> merge_breaks(const std::vector<std::vector<Rational>>& a,
                                                const std::vector<std::vector<Rational>>& b) {
    std::vector<std::vector<Rational>> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        std::merge(a[k].begin(), a[k].end(), b[k].begin(), b[k].end(), std::back_inserter(r[k]));
        r[k].erase(std::unique(r[k].begin(), r[k].end()), r[k].end());
    }
    return r;
}

Rational integrate_box(const Poly& p, const std::vector<Rational>& lo, const std::vector<Rational>& hi) {
    Poly q = p;
    for (std::size_t k = 0; k < lo.size(); ++k) {
        Poly a = q.antiderivative(k);
        q = a.evaluate_axis(k, hi[k]) - a.evaluate_axis(k, lo[k]);
    }
    return q.constant_term();
}

std::string to_string(const PiecewisePoly& f) {
    std::ostringstream out;
    if (f.total_cells() == 1) {
        out << to_string(f.cells()[0]) << " on " << f.domain().to_string();
        return out.str();
    }
    for (std::size_t c = 0; c < f.total_cells(); ++c) {
        auto idx = f.unflatten(c);
        if (c) out << "; ";
        for (std::size_t k = 0; k < f.dimension(); ++k) {
            if (k) out << "x";
            out << "[" << f.cell_lo(k, idx[k]).get_str() << "," << f.cell_hi(k, idx[k]).get_str() << "]";
        }
        out << ": " << to_string(f.cells()[c]);
    }
    return out.str();
}

}  // namespace gfcalc
