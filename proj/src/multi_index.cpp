#include "gfcalc/multi_index.hpp"

#include "gfcalc/error.hpp"

#include <algorithm>
#include <numeric>

namespace gfcalc {

MultiIndex MultiIndex::unit(std::size_t n, std::size_t k) {
    MultiIndex m(n);
    m.entries_.at(k) = 1;
    return m;
}

unsigned MultiIndex::total() const { return std::accumulate(entries_.begin(), entries_.end(), 0u); }

bool MultiIndex::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](unsigned e) { return e == 0; });
}

bool MultiIndex::leq(const MultiIndex& other) const {
    if (size() != other.size()) return false;
    for (std::size_t k = 0; k < size(); ++k)
        if (entries_[k] > other.entries_[k]) return false;
    return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (size() != other.size()) throw Error(ErrorCode::invalid_argument, "multi-index length mismatch");
    MultiIndex r(size());
    for (std::size_t k = 0; k < size(); ++k) r.entries_[k] = entries_[k] + other.entries_[k];
    return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
    if (!other.leq(*this))
        throw Error(ErrorCode::invalid_argument,
                    "multi-index difference " + to_string() + " - " + other.to_string() + " undefined");
    MultiIndex r(size());
    for (std::size_t k = 0; k < size(); ++k) r.entries_[k] = entries_[k] - other.entries_[k];
    return r;
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < size(); ++k) {
        if (k) s += ",";
        s += std::to_string(entries_[k]);
    }
    return s + ")";
}

MultiIndex max(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::invalid_argument, "multi-index length mismatch");
    MultiIndex r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = std::max(a[k], b[k]);
    return r;
}

std::vector<MultiIndex> indices_below(const MultiIndex& bound) {
    std::vector<MultiIndex> out;
    MultiIndex cur(bound.size());
    while (true) {
        out.push_back(cur);
        std::size_t k = 0;
        for (; k < bound.size(); ++k) {
            if (cur[k] < bound[k]) {
                ++cur[k];
                break;
            }
            cur[k] = 0;
        }
        if (k == bound.size()) break;
    }
    return out;
}

std::vector<MultiIndex> indices_of_total_order(std::size_t n, unsigned k) {
    std::vector<unsigned> caps(n, k);
    std::vector<MultiIndex> out;
    for (auto& m : indices_below(MultiIndex(caps)))
        if (m.total() <= k) out.push_back(m);
    return out;
}

}  // namespace gfcalc
