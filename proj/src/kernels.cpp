#include "gfcalc/kernels.hpp"

#include "gfcalc/error.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gfcalc::kernels {

namespace {

constexpr std::size_t kParallelThreshold = 64;

// Runs body(i) for every i, in parallel when requested. The first exception thrown by any
// iteration is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Exec exec, Body&& body) {
    if (exec == Exec::serial || count < kParallelThreshold) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

struct AxisSplit {
    std::size_t outer = 1;
    std::size_t inner = 1;
};

AxisSplit split(const std::vector<std::size_t>& dims, std::size_t axis) {
    AxisSplit s;
    for (std::size_t k = 0; k < axis; ++k) s.outer *= dims[k];
    for (std::size_t k = axis + 1; k < dims.size(); ++k) s.inner *= dims[k];
    return s;
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Tensor::Tensor(std::vector<std::size_t> d) : dims(std::move(d)) {
    std::size_t total = 1;
    for (auto x : dims) total *= x;
    data.assign(total, Rational(0));
}

Tensor mode_product(const Tensor& t, std::size_t axis, const std::vector<std::vector<Rational>>& matrix,
                    Exec exec) {
    if (axis >= t.dims.size()) throw Error(ErrorCode::invalid_argument, "mode product axis out of range");
    const std::size_t cols = t.dims[axis];
    for (const auto& row : matrix)
        if (row.size() != cols) throw Error(ErrorCode::invalid_argument, "mode product shape mismatch");
    auto dims = t.dims;
    dims[axis] = matrix.size();
    Tensor out(dims);
    const AxisSplit s = split(t.dims, axis);
    const std::size_t rows = matrix.size();
    for_each_index(s.outer * rows, exec, [&](std::size_t job) {
        const std::size_t o = job / rows;
        const std::size_t r = job % rows;
        const auto& row = matrix[r];
        Rational* dst = &out.data[(o * rows + r) * s.inner];
        const Rational* src = &t.data[o * cols * s.inner];
        Rational prod;
        for (std::size_t j = 0; j < cols; ++j) {
            if (sgn(row[j]) == 0) continue;
            for (std::size_t i = 0; i < s.inner; ++i) {
                const Rational& v = src[j * s.inner + i];
                if (sgn(v) == 0) continue;
                prod = row[j] * v;
                dst[i] += prod;
            }
        }
    });
    return out;
}

Tensor windowed_divided_difference(const Tensor& t, std::size_t axis, const std::vector<Rational>& nodes,
                                   unsigned order, Exec exec) {
    const std::size_t len = t.dims.at(axis);
    if (nodes.size() != len) throw Error(ErrorCode::invalid_argument, "divided difference node count mismatch");
    if (order == 0) return t;
    if (order >= len) {
        auto dims = t.dims;
        dims[axis] = 0;
        return Tensor(dims);
    }
    auto dims = t.dims;
    dims[axis] = len - order;
    Tensor out(dims);
    const AxisSplit s = split(t.dims, axis);
    for_each_index(s.outer * s.inner, exec, [&](std::size_t job) {
        const std::size_t o = job / s.inner;
        const std::size_t i = job % s.inner;
        std::vector<Rational> line(len);
        for (std::size_t j = 0; j < len; ++j) line[j] = t.data[(o * len + j) * s.inner + i];
        for (unsigned level = 1; level <= order; ++level)
            for (std::size_t j = 0; j + level < len; ++j)
                line[j] = (line[j + 1] - line[j]) / (nodes[j + level] - nodes[j]);
        const std::size_t olen = len - order;
        for (std::size_t j = 0; j < olen; ++j) out.data[(o * olen + j) * s.inner + i] = line[j];
    });
    return out;
}

bool all_zero(const Tensor& t, Exec exec) {
    if (exec == Exec::serial || t.size() < kParallelThreshold) {
        return std::all_of(t.data.begin(), t.data.end(), [](const Rational& v) { return sgn(v) == 0; });
    }
    int nonzero = 0;
    const long long n = static_cast<long long>(t.size());
#pragma omp parallel for reduction(| : nonzero)
    for (long long i = 0; i < n; ++i) nonzero |= sgn(t.data[static_cast<std::size_t>(i)]) != 0 ? 1 : 0;
    return nonzero == 0;
}

std::vector<Rational> map_index(std::size_t count, const std::function<Rational(std::size_t)>& f, Exec exec) {
    std::vector<Rational> out(count);
    for_each_index(count, exec, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

std::vector<double> map_index_double(std::size_t count, const std::function<double(std::size_t)>& f, Exec exec) {
    std::vector<double> out(count);
    for_each_index(count, exec, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

std::vector<std::size_t> failing_cases(std::size_t count, const std::function<bool(std::size_t)>& pred, Exec exec) {
    std::vector<char> ok(count, 0);
    for_each_index(count, exec, [&](std::size_t i) { ok[i] = pred(i) ? 1 : 0; });
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < count; ++i)
        if (!ok[i]) bad.push_back(i);
    return bad;
}

}  // namespace gfcalc::kernels
