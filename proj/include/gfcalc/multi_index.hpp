#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace gfcalc {

class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : entries_(n, 0) {}
    MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
    explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

    static MultiIndex unit(std::size_t n, std::size_t k);

    std::size_t size() const { return entries_.size(); }
    unsigned operator[](std::size_t k) const { return entries_[k]; }
    unsigned& operator[](std::size_t k) { return entries_[k]; }
    const std::vector<unsigned>& entries() const { return entries_; }

    unsigned total() const;
    bool is_zero() const;

    // Componentwise partial order.
    bool leq(const MultiIndex& other) const;

    MultiIndex operator+(const MultiIndex& other) const;
    // Throws unless other.leq(*this).
    MultiIndex operator-(const MultiIndex& other) const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

    std::string to_string() const;

private:
    std::vector<unsigned> entries_;
};

MultiIndex max(const MultiIndex& a, const MultiIndex& b);

// All multi-indices beta with beta <= bound componentwise.
std::vector<MultiIndex> indices_below(const MultiIndex& bound);
// All multi-indices of length n with total order <= k.
std::vector<MultiIndex> indices_of_total_order(std::size_t n, unsigned k);

}  // namespace gfcalc
