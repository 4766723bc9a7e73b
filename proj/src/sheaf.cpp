#include "gfcalc/sheaf.hpp"

namespace gfcalc {

BaseIndex::BaseIndex(Interval region, unsigned level) : region_(std::move(region)), level_(level) {
    if (level_ > 12) throw Error(ErrorCode::invalid_argument, "base level too large");
}

BaseIndex BaseIndex::standard(std::size_t n, unsigned level) { return BaseIndex(Interval::unit(n), level); }

std::vector<Rational> BaseIndex::grid(std::size_t k) const {
    const long cells = 1L << level_;
    const Rational step = 2 * region_.radii()[k] / cells;
    std::vector<Rational> g;
    g.reserve(static_cast<std::size_t>(cells) + 1);
    for (long i = 0; i <= cells; ++i) g.push_back(region_.lo(k) + step * i);
    return g;
}

bool BaseIndex::is_base(const Interval& i) const {
    if (i.dimension() != dimension() || !region_.contains(i)) return false;
    for (std::size_t k = 0; k < dimension(); ++k) {
        const Rational step = 2 * region_.radii()[k] / (1L << level_);
        for (const Rational& e : {i.lo(k), i.hi(k)}) {
            Rational q = (e - region_.lo(k)) / step;
            if (q.get_den() != 1) return false;
        }
    }
    return true;
}

std::vector<Interval> BaseIndex::enumerate() const {
    std::vector<std::vector<std::pair<Rational, Rational>>> axes(dimension());
    for (std::size_t k = 0; k < dimension(); ++k) {
        auto g = grid(k);
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b) axes[k].emplace_back(g[a], g[b]);
    }
    std::vector<Interval> out;
    std::vector<std::size_t> idx(dimension(), 0);
    while (true) {
        std::vector<Rational> lo(dimension()), hi(dimension());
        for (std::size_t k = 0; k < dimension(); ++k) {
            lo[k] = axes[k][idx[k]].first;
            hi[k] = axes[k][idx[k]].second;
        }
        out.push_back(Interval::from_bounds(lo, hi));
        std::size_t k = 0;
        for (; k < dimension(); ++k) {
            if (++idx[k] < axes[k].size()) break;
            idx[k] = 0;
        }
        if (k == dimension()) break;
    }
    return out;
}

std::vector<Interval> BaseIndex::enumerate_within(const std::vector<Interval>& opens) const {
    std::vector<Interval> out;
    for (auto& j : enumerate())
        if (covered_by(j, opens)) out.push_back(std::move(j));
    return out;
}

bool covered_by(const Interval& j, const std::vector<Interval>& opens) {
    const std::size_t n = j.dimension();
    // Split j into the open cells, faces, edges and vertices of the grid of all endpoints,
    // and require each stratum to sit inside one open box.
    std::vector<std::vector<std::pair<Rational, Rational>>> strata(n);  // point when first == second
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Rational> cuts{j.lo(k), j.hi(k)};
        for (const auto& o : opens) {
            if (o.dimension() != n) return false;
            for (const Rational& e : {o.lo(k), o.hi(k)})
                if (j.lo(k) < e && e < j.hi(k)) cuts.push_back(e);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (i) strata[k].emplace_back(cuts[i], cuts[i]);
            strata[k].emplace_back(cuts[i], cuts[i + 1]);
        }
    }
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        bool inside_some = false;
        for (const auto& o : opens) {
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k) {
                const auto& [a, b] = strata[k][idx[k]];
                if (a == b) ok = o.lo(k) < a && a < o.hi(k);
                else ok = o.lo(k) <= a && b <= o.hi(k);
            }
            if (ok) {
                inside_some = true;
                break;
            }
        }
        if (!inside_some) return false;
        std::size_t k = 0;
        for (; k < n; ++k) {
            if (++idx[k] < strata[k].size()) break;
            idx[k] = 0;
        }
        if (k == n) break;
    }
    return true;
}

}  // namespace gfcalc
