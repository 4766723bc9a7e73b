#include "gfcalc/formal_distribution.hpp"

#include <algorithm>

namespace gfcalc {

using kernels::Exec;
using kernels::Tensor;

namespace {

void require_same_domain(const FormalDistribution& t, const FormalDistribution& s) {
    if (!(t.domain() == s.domain()))
        throw Error(ErrorCode::domain_mismatch,
                    "distributions live on " + t.domain().to_string() + " and " + s.domain().to_string());
}

// Per axis: every cell node plus deg + m_k + 2 equispaced interior points in each cell.
std::vector<Rational> grid_nodes(const PiecewisePoly& h, std::size_t k, unsigned mk) {
    const int deg = h.max_degree(k);
    const auto nodes = h.axis_nodes(k);
    const int interior = deg + static_cast<int>(mk) + 2;
    std::vector<Rational> out;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        out.push_back(nodes[i]);
        const Rational step = (nodes[i + 1] - nodes[i]) / (interior + 1);
        for (int j = 1; j <= interior; ++j) out.push_back(nodes[i] + step * j);
    }
    out.push_back(nodes.back());
    return out;
}

// Values of h on the tensor grid, computed cell by cell with mode products.
Tensor grid_values(const PiecewisePoly& h, const std::vector<std::vector<Rational>>& grid, Exec exec) {
    const std::size_t n = h.dimension();
    std::vector<std::size_t> dims(n);
    for (std::size_t k = 0; k < n; ++k) dims[k] = grid[k].size();
    Tensor values(dims);
    std::vector<std::size_t> strides(n, 1);
    for (std::size_t k = n; k-- > 1;) strides[k - 1] = strides[k] * dims[k];

    for (std::size_t c = 0; c < h.total_cells(); ++c) {
        const auto idx = h.unflatten(c);
        const Poly& p = h.cells()[c];
        std::vector<std::size_t> first(n), count(n), degs(n);
        for (std::size_t k = 0; k < n; ++k) {
            const Rational lo = h.cell_lo(k, idx[k]);
            const Rational hi = h.cell_hi(k, idx[k]);
            auto b = std::lower_bound(grid[k].begin(), grid[k].end(), lo);
            auto e = std::upper_bound(grid[k].begin(), grid[k].end(), hi);
            first[k] = static_cast<std::size_t>(b - grid[k].begin());
            count[k] = static_cast<std::size_t>(e - b);
            degs[k] = static_cast<std::size_t>(std::max(0, p.degree(k))) + 1;
        }
        Tensor coeff(degs);
        for (const auto& [ex, cf] : p.terms()) {
            std::size_t flat = 0;
            for (std::size_t k = 0; k < n; ++k) flat = flat * degs[k] + static_cast<std::size_t>(ex[k]);
            coeff.data[flat] = cf;
        }
        Tensor cur = coeff;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<std::vector<Rational>> vander(count[k], std::vector<Rational>(degs[k]));
            for (std::size_t i = 0; i < count[k]; ++i) {
                Rational pw = 1;
                for (std::size_t d = 0; d < degs[k]; ++d) {
                    vander[i][d] = pw;
                    pw *= grid[k][first[k] + i];
                }
            }
            cur = kernels::mode_product(cur, k, vander, exec);
        }
        std::vector<std::size_t> local(n, 0);
        for (std::size_t f = 0; f < cur.size(); ++f) {
            std::size_t rem = f, g = 0;
            for (std::size_t k = n; k-- > 0;) {
                local[k] = rem % count[k];
                rem /= count[k];
            }
            for (std::size_t k = 0; k < n; ++k) g += (first[k] + local[k]) * strides[k];
            values.data[g] = cur.data[f];
        }
    }
    return values;
}

}  // namespace

FormalDistribution::FormalDistribution(MultiIndex order, PiecewisePoly rep)
    : order_(std::move(order)), rep_(std::move(rep)) {
    if (order_.size() != rep_.dimension())
        throw Error(ErrorCode::invalid_argument, "order length differs from the representative's dimension");
}

bool p_m_member_monomial(const Poly& h, const MultiIndex& m) {
    for (const auto& [e, c] : h.terms()) {
        bool dominates = true;
        for (std::size_t k = 0; k < m.size(); ++k)
            if (e[k] < static_cast<int>(m[k])) dominates = false;
        if (dominates) return false;
    }
    return true;
}

bool p_m_member_grid(const PiecewisePoly& h, const MultiIndex& m, Exec exec) {
    const std::size_t n = h.dimension();
    if (m.size() != n) throw Error(ErrorCode::invalid_argument, "multi-index length mismatch");
    std::vector<std::vector<Rational>> grid(n);
    for (std::size_t k = 0; k < n; ++k) grid[k] = grid_nodes(h, k, m[k]);
    Tensor t = grid_values(h, grid, exec);
    for (std::size_t k = 0; k < n; ++k) t = kernels::windowed_divided_difference(t, k, grid[k], m[k], exec);
    return kernels::all_zero(t, exec);
}

bool p_m_member(const PiecewisePoly& h, const MultiIndex& m, Exec exec) {
    PiecewisePoly c = h.coarsened();
    if (c.is_zero()) return true;
    if (c.is_single_cell()) return p_m_member_monomial(c.cells()[0], m);
    return p_m_member_grid(c, m, exec);
}

bool fd_equal(const FormalDistribution& t, const FormalDistribution& s, Exec exec) {
    require_same_domain(t, s);
    const MultiIndex m = max(t.order(), s.order());
    PiecewisePoly f = t.rep().primitive(m - t.order());
    PiecewisePoly g = s.rep().primitive(m - s.order());
    return p_m_member(f - g, m, exec);
}

FormalDistribution fd_derive(const FormalDistribution& t, std::size_t k) {
    if (k >= t.dimension()) throw Error(ErrorCode::invalid_argument, "axis out of range");
    return FormalDistribution(t.order() + MultiIndex::unit(t.dimension(), k), t.rep());
}

FormalDistribution fd_derive(const FormalDistribution& t, const MultiIndex& alpha) {
    return FormalDistribution(t.order() + alpha, t.rep());
}

FormalDistribution fd_lambda(const PiecewisePoly& f) { return FormalDistribution(MultiIndex(f.dimension()), f); }

FormalDistribution fd_raise(const FormalDistribution& t, const MultiIndex& m) {
    if (!t.order().leq(m))
        throw Error(ErrorCode::invalid_argument,
                    "cannot raise order " + t.order().to_string() + " to " + m.to_string());
    return FormalDistribution(m, t.rep().primitive(m - t.order()));
}

FormalDistribution fd_add(const FormalDistribution& t, const FormalDistribution& s) {
    require_same_domain(t, s);
    const MultiIndex m = max(t.order(), s.order());
    return FormalDistribution(m, t.rep().primitive(m - t.order()) + s.rep().primitive(m - s.order()));
}

FormalDistribution fd_sub(const FormalDistribution& t, const FormalDistribution& s) {
    return fd_add(t, fd_scale(Rational(-1), s));
}

FormalDistribution fd_scale(const Rational& mu, const FormalDistribution& t) {
    return FormalDistribution(t.order(), t.rep().scaled(mu));
}

FormalDistribution fd_restrict(const FormalDistribution& t, const Interval& j) {
    return FormalDistribution(t.order(), t.rep().restrict_to(j));
}

FormalDistribution fd_zero(const Interval& domain) { return fd_lambda(PiecewisePoly::zero(domain)); }

Rational fd_pair(const FormalDistribution& t, const PiecewisePoly& phi) {
    if (!(phi.domain() == t.domain()))
        throw Error(ErrorCode::domain_mismatch, "test function and distribution live on different intervals");
    const MultiIndex& alpha = t.order();
    if (!phi.is_c_alpha(alpha))
        throw Error(ErrorCode::not_differentiable,
                    "test function is not of class C^" + alpha.to_string());
    const std::size_t n = t.dimension();
    for (const auto& beta : indices_below(alpha)) {
        PiecewisePoly d = phi.partial(beta);
        for (std::size_t k = 0; k < n; ++k) {
            if (beta[k] >= alpha[k]) continue;
            for (const Rational& side : {phi.domain().lo(k), phi.domain().hi(k)}) {
                for (std::size_t c = 0; c < d.total_cells(); ++c) {
                    auto idx = d.unflatten(c);
                    bool on_face = (side == phi.domain().lo(k)) ? idx[k] == 0 : idx[k] + 1 == d.cell_count(k);
                    if (!on_face) continue;
                    if (!d.cells()[c].evaluate_axis(k, side).is_zero())
                        throw Error(ErrorCode::boundary_condition,
                                    "derivative " + beta.to_string() + " of the test function does not vanish on x" +
                                        std::to_string(k + 1) + " = " + side.get_str());
                }
            }
        }
    }
    Rational value = (t.rep() * phi.partial(alpha)).integral();
    return alpha.total() % 2 ? Rational(-value) : value;
}

std::string to_string(const FormalDistribution& t) {
    return "D^" + t.order().to_string() + "[" + to_string(t.rep()) + "]";
}

}  // namespace gfcalc
