#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shs::exec {

// Execution policy for the data-parallel kernels. Serial is the reference
// implementation; OpenMP must produce bit-identical results (all reductions
// go through fixed-block accumulation independent of thread count).
enum class Policy { Serial, OpenMP };

inline Policy& default_policy() {
    static Policy p = Policy::OpenMP;
    return p;
}

inline void set_num_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <typename F>
inline void parallel_for(std::ptrdiff_t n, Policy policy, F&& body) {
    if (policy == Policy::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    }
}

// Block size for deterministic reductions. Partial sums are formed per fixed
// block (serial within a block) and combined in block order, so the result
// does not depend on the number of threads.
inline constexpr std::ptrdiff_t kReductionBlock = 4096;

template <typename F>
inline double deterministic_sum(std::ptrdiff_t n, Policy policy, F&& term) {
    if (n <= 0) return 0.0;
    const std::ptrdiff_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks));
    parallel_for(nblocks, policy, [&](std::ptrdiff_t b) {
        const std::ptrdiff_t lo = b * kReductionBlock;
        const std::ptrdiff_t hi = std::min(n, lo + kReductionBlock);
        double s = 0.0;
        for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(b)] = s;
    });
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

inline double deterministic_sum(const std::vector<double>& v, Policy policy) {
    return deterministic_sum(static_cast<std::ptrdiff_t>(v.size()), policy,
                             [&](std::ptrdiff_t i) { return v[static_cast<std::size_t>(i)]; });
}

inline double deterministic_dot(const std::vector<double>& a, const std::vector<double>& b,
                                Policy policy) {
    return deterministic_sum(static_cast<std::ptrdiff_t>(a.size()), policy, [&](std::ptrdiff_t i) {
        const auto k = static_cast<std::size_t>(i);
        return a[k] * b[k];
    });
}

// max/min are order-independent in exact and floating arithmetic.
template <typename F>
inline double reduce_max(std::ptrdiff_t n, Policy policy, F&& term) {
    const std::ptrdiff_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<double> partial(static_cast<std::size_t>(std::max<std::ptrdiff_t>(nblocks, 1)),
                                -std::numeric_limits<double>::infinity());
    parallel_for(nblocks, policy, [&](std::ptrdiff_t b) {
        const std::ptrdiff_t lo = b * kReductionBlock;
        const std::ptrdiff_t hi = std::min(n, lo + kReductionBlock);
        double m = -std::numeric_limits<double>::infinity();
        for (std::ptrdiff_t i = lo; i < hi; ++i) m = std::fmax(m, term(i));
        partial[static_cast<std::size_t>(b)] = m;
    });
    double m = -std::numeric_limits<double>::infinity();
    for (double s : partial) m = std::fmax(m, s);
    return m;
}

template <typename F>
inline double reduce_min(std::ptrdiff_t n, Policy policy, F&& term) {
    return -reduce_max(n, policy, [&](std::ptrdiff_t i) { return -term(i); });
}

}  // namespace shs::exec
