// Serial reference vs OpenMP path for the data-parallel kernels.
// Usage: bench_kernels [repetitions]
#include "gfcalc/formal_distribution.hpp"
#include "gfcalc/kernels.hpp"
#include "gfcalc/random_objects.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace gfcalc;
using kernels::Exec;

namespace {

template <class R>
double median_ms(int reps, const std::function<R()>& run, R& out) {
    std::vector<double> t;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        out = run();
        t.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(t.begin(), t.end());
    return t[t.size() / 2];
}

template <class R>
bool compare(const std::string& name, int reps, const std::function<R(Exec)>& run) {
    R serial{}, parallel{};
    const double ts = median_ms<R>(reps, [&] { return run(Exec::serial); }, serial);
    const double tp = median_ms<R>(reps, [&] { return run(Exec::parallel); }, parallel);
    const bool same = serial == parallel;
    std::printf("%-32s %10.2f %10.2f %8.2fx  %s\n", name.c_str(), ts, tp, ts / tp, same ? "identical" : "MISMATCH");
    return same;
}

kernels::Tensor random_tensor(Rng& rng, std::vector<std::size_t> dims) {
    kernels::Tensor t(std::move(dims));
    for (auto& v : t.data) v = random_rational(rng, 9, 7);
    return t;
}

std::vector<std::vector<Rational>> random_matrix(Rng& rng, std::size_t n) {
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    for (auto& row : m)
        for (auto& v : row) v = random_rational(rng, 5, 5);
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
    Rng rng(2024);
    std::printf("threads: %d, repetitions: %d (median reported)\n", kernels::thread_count(), reps);
    std::printf("%-32s %10s %10s %9s\n", "kernel", "serial ms", "omp ms", "speedup");
    bool ok = true;

    const auto t3 = random_tensor(rng, {24, 24, 24});
    const auto mat = random_matrix(rng, 24);
    ok &= compare<std::vector<Rational>>("mode_product 24^3", reps, [&](Exec e) {
        return kernels::mode_product(t3, 1, mat, e).data;
    });

    std::vector<Rational> nodes;
    for (int i = 0; i < 24; ++i) nodes.push_back(make_rational(i * i + 1, 7));
    ok &= compare<std::vector<Rational>>("divided difference 24^3, order 3", reps, [&](Exec e) {
        return kernels::windowed_divided_difference(t3, 2, nodes, 3, e).data;
    });

    ok &= compare<std::vector<double>>("map_index_double 2^18", reps, [&](Exec e) {
        return kernels::map_index_double(1u << 18, [](std::size_t i) { return std::sin(1e-3 * static_cast<double>(i)) / (1.0 + i); }, e);
    });

    std::vector<FormalDistribution> ts, ss;
    for (int i = 0; i < 40; ++i) {
        ts.push_back(random_distribution(rng, Interval::unit(3), 2, 2, 2));
        ss.push_back(random_representative(rng, ts.back()));
    }
    ok &= compare<std::vector<std::size_t>>("fd_equal on 40 3-D pairs", reps, [&](Exec e) {
        return kernels::failing_cases(ts.size(), [&](std::size_t i) { return fd_equal(ts[i], ss[i], Exec::serial); }, e);
    });
    ok &= compare<std::vector<bool>>("p_m grid decision 3-D", reps, [&](Exec e) {
        std::vector<bool> r;
        for (int i = 0; i < 10; ++i) r.push_back(p_m_member_grid(fd_sub(ts[i], ss[i]).rep(), MultiIndex{3, 3, 3}, e));
        return r;
    });
    return ok ? 0 : 1;
}
