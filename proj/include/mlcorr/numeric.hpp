// numeric.hpp
// Small numeric helpers: pairwise (tree-order) summation and integer
// utilities used across the engine.

#pragma once
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace mlcorr {

using cplx = std::complex<double>;

namespace detail {

inline constexpr std::size_t kPairwiseBlock = 32;

template <class T>
T pairwise_sum_impl(const T* data, std::size_t n) {
    if (n <= kPairwiseBlock) {
        T acc{};
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

}  // namespace detail

// Sum in tree order. Rounding error grows as O(log n) instead of O(n), and
// the result is a fixed function of the input order (reproducible).
template <class T>
T pairwise_sum(std::span<const T> values) {
    if (values.empty()) return T{};
    return detail::pairwise_sum_impl(values.data(), values.size());
}

template <class T>
T pairwise_sum(const std::vector<T>& values) {
    return pairwise_sum(std::span<const T>(values));
}

// Pairwise sum of f(i) for i in [first, last), blocked so that only a small
// scratch buffer is materialized.
template <class T, class F>
T pairwise_sum_of(std::size_t first, std::size_t last, F&& f) {
    if (last <= first) return T{};
    const std::size_t n = last - first;
    if (n <= detail::kPairwiseBlock) {
        T acc{};
        for (std::size_t i = first; i < last; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = first + n / 2;
    return pairwise_sum_of<T>(first, mid, f) + pairwise_sum_of<T>(mid, last, f);
}

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// [rho^m] with an exact result for integer rho.
inline std::uint64_t floor_pow(double rho, int m) {
    double r = std::floor(std::pow(rho, m));
    if (rho == std::floor(rho)) {
        // repeated multiplication is exact as long as the value fits in 2^53
        double acc = 1.0;
        for (int i = 0; i < m; ++i) acc *= rho;
        r = acc;
    }
    return static_cast<std::uint64_t>(r);
}

// e^{2 pi i x}, reducing x to [0,1) first to keep the argument small.
inline cplx unit_phase(double x) {
    x -= std::floor(x);
    return std::polar(1.0, 2.0 * std::numbers::pi * x);
}

inline double frac(double x) { return x - std::floor(x); }

}  // namespace mlcorr
