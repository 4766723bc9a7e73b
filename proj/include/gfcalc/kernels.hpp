#pragma once

#include "gfcalc/rational.hpp"

#include <cstddef>
#include <functional>
#include <vector>

// Data-parallel kernels. Every kernel has a serial reference path selected by Exec::serial;
// the parallel path uses OpenMP when available and must produce identical results.
namespace gfcalc::kernels {

enum class Exec { serial, parallel };

int thread_count();

// Dense tensor with row-major layout (axis 0 slowest).
struct Tensor {
    std::vector<std::size_t> dims;
    std::vector<Rational> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> d);
    std::size_t size() const { return data.size(); }
};

// out[.., i, ..] = sum_j matrix[i][j] * t[.., j, ..] along `axis`.
Tensor mode_product(const Tensor& t, std::size_t axis, const std::vector<std::vector<Rational>>& matrix,
                    Exec exec = Exec::parallel);

// Divided differences of the given order over every window of order+1 consecutive nodes along `axis`.
Tensor windowed_divided_difference(const Tensor& t, std::size_t axis, const std::vector<Rational>& nodes,
                                   unsigned order, Exec exec = Exec::parallel);

bool all_zero(const Tensor& t, Exec exec = Exec::parallel);

// Evaluates f(i) for i in [0, count).
std::vector<Rational> map_index(std::size_t count, const std::function<Rational(std::size_t)>& f,
                                Exec exec = Exec::parallel);
std::vector<double> map_index_double(std::size_t count, const std::function<double(std::size_t)>& f,
                                     Exec exec = Exec::parallel);

// Runs pred(i) for i in [0, count) and returns the indices where it failed, in increasing order.
std::vector<std::size_t> failing_cases(std::size_t count, const std::function<bool(std::size_t)>& pred,
                                       Exec exec = Exec::parallel);

}  // namespace gfcalc::kernels
