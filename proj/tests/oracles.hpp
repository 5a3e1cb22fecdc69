// Reference implementations used only by the tests. Each one is the literal
// definition (trial division, nested loops, long double stepping) and shares
// no code with the library beyond the value types.
#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cld = std::complex<long double>;

struct Factored {
    int omega = 0;   // with multiplicity
    int distinct = 0;
    bool squarefree = true;
};

inline Factored factor(std::uint64_t n) {
    Factored f;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.omega += e;
        f.distinct += 1;
        if (e > 1) f.squarefree = false;
    }
    if (n > 1) {
        f.omega += 1;
        f.distinct += 1;
    }
    return f;
}

inline int mu(std::uint64_t n) {
    const auto f = factor(n);
    if (!f.squarefree) return 0;
    return f.distinct % 2 ? -1 : 1;
}

inline int lambda(std::uint64_t n) { return factor(n).omega % 2 ? -1 : 1; }

// values[0] unused, values[n] for n = 1..n_max
inline std::vector<double> mu_table(std::size_t n_max) {
    std::vector<double> v(n_max + 1, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) v[n] = mu(n);
    return v;
}

inline std::vector<double> lambda_table(std::size_t n_max) {
    std::vector<double> v(n_max + 1, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) v[n] = lambda(n);
    return v;
}

inline long long mertens(std::size_t N) {
    long long s = 0;
    for (std::size_t n = 1; n <= N; ++n) s += mu(n);
    return s;
}

// (1/N) sum_{m<=N} a[m] a[m+n]
inline long double correlation(const std::vector<double>& a, std::size_t N, std::size_t n) {
    long double s = 0;
    for (std::size_t m = 1; m <= N; ++m) s += static_cast<long double>(a[m]) * a[m + n];
    return s / N;
}

inline long double cesaro(const std::vector<double>& a, std::size_t N) {
    long double s = 0;
    for (std::size_t n = 1; n <= N; ++n) s += std::fabs(correlation(a, N, n));
    return s / N;
}

inline long double cubic(const std::vector<double>& a, std::size_t N) {
    long double s = 0;
    for (std::size_t n = 1; n <= N; ++n)
        for (std::size_t m = 1; m <= N; ++m) s += static_cast<long double>(a[n]) * a[m] * a[n + m];
    return s / (static_cast<long double>(N) * N);
}

inline long double chowla(const std::vector<double>& a, std::size_t N, const std::vector<std::size_t>& shifts,
                          const std::vector<int>& exps) {
    long double s = 0;
    for (std::size_t n = 1; n <= N; ++n) {
        long double p = std::pow(static_cast<long double>(a[n]), exps[0]);
        for (std::size_t j = 0; j < shifts.size(); ++j) p *= std::pow(static_cast<long double>(a[n + shifts[j]]), exps[j + 1]);
        s += p;
    }
    return s / N;
}

inline long double mrt(const std::vector<double>& a, std::size_t N, std::size_t H) {
    long double s = 0;
    for (std::size_t h = 1; h <= H; ++h) {
        long double inner = 0;
        for (std::size_t n = 1; n <= N; ++n) inner += static_cast<long double>(a[n]) * a[n + h];
        s += std::fabs(inner);
    }
    return s / (static_cast<long double>(H) * N);
}

inline cld expi(long double theta) {
    return {std::cos(2 * std::numbers::pi_v<long double> * theta), std::sin(2 * std::numbers::pi_v<long double> * theta)};
}

// sum_{n=1}^{N} b[n-1] e^{2 pi i n t}, t reduced per term
inline cld exp_sum(const std::vector<std::complex<double>>& b, long double t) {
    cld s = 0;
    for (std::size_t n = 1; n <= b.size(); ++n) {
        long double x = std::fmod(t * n, 1.0L);
        s += cld(b[n - 1].real(), b[n - 1].imag()) * expi(x);
    }
    return s;
}

// |f|^4 form of U2 by the four-fold average over Z/NZ
inline long double u2_fourth_brute(const std::vector<std::complex<double>>& f) {
    const std::size_t N = f.size();
    cld s = 0;
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                cld v = cld(f[x]) * std::conj(cld(f[(x + a) % N])) * std::conj(cld(f[(x + b) % N])) *
                        cld(f[(x + a + b) % N]);
                s += v;
            }
    return s.real() / (static_cast<long double>(N) * N * N);
}

// U3^8 by the eight-fold cube average over Z/NZ
inline long double u3_eighth_brute(const std::vector<std::complex<double>>& f) {
    const std::size_t N = f.size();
    cld s = 0;
    for (std::size_t x = 0; x < N; ++x)
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b)
                for (std::size_t c = 0; c < N; ++c) {
                    cld v = 1;
                    for (int w = 0; w < 8; ++w) {
                        const std::size_t idx = (x + (w & 1 ? a : 0) + (w & 2 ? b : 0) + (w & 4 ? c : 0)) % N;
                        const int bits = (w & 1) + ((w >> 1) & 1) + ((w >> 2) & 1);
                        v *= bits % 2 ? std::conj(cld(f[idx])) : cld(f[idx]);
                    }
                    s += v;
                }
    return s.real() / (static_cast<long double>(N) * N * N * N);
}

// n-th iterate by repeated application in long double
inline std::array<long double, 2> step_orbit(bool skew, long double alpha, long double x, long double y,
                                             std::uint64_t n) {
    for (std::uint64_t i = 0; i < n; ++i) {
        if (skew) y = std::fmod(y + 2 * x + alpha, 1.0L);
        x = std::fmod(x + alpha, 1.0L);
    }
    return {x, y};
}

inline long double circle_gap(long double a, long double b) {
    long double d = std::fmod(std::fabs(a - b), 1.0L);
    return std::min(d, 1 - d);
}

}  // namespace oracle
