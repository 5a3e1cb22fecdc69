// correlation.hpp
// Self-correlations c_{n,N}(A) = (1/N) sum_{m=1}^{N} A(m) A(m+n) and the
// statistics built on them: Cesaro means of |c_{n,N}|, the geometric
// (rho^m) scan with null-subsequence extraction, Chowla multiple
// correlations, cubic averages of pure weights, and the windowed sum
// (1/(HN)) sum_{h<=H} |sum_{n<=N} A(n)A(n+h)|.

#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlcorr/error.hpp"
#include "mlcorr/fft.hpp"
#include "mlcorr/numeric.hpp"
#include "mlcorr/sequence.hpp"

namespace mlcorr {

enum class CorrelationMethod { naive, fft };

inline std::string_view to_string(CorrelationMethod m) {
    return m == CorrelationMethod::naive ? "naive" : "fft";
}

struct CorrelationTable {
    std::size_t N = 0;
    std::vector<double> coeffs;  // coeffs[n] = c_{n,N}, n = 0..N
    SequenceKind source_kind = SequenceKind::custom;
    CorrelationMethod method = CorrelationMethod::naive;
};

namespace detail {

inline void check_correlation_range(std::size_t n_max, std::size_t N, const char* what) {
    if (N < 1) throw DomainError(std::string(what) + ": N must be >= 1");
    if (n_max < 2 * N)
        throw RangeError(std::string(what) + ": c_{n,N} reads A up to 2N = " +
                         std::to_string(2 * N) + ", sequence has n_max = " + std::to_string(n_max));
}

}  // namespace detail

template <WeightSequence S>
CorrelationTable naive_correlate(const S& seq, std::size_t N) {
    detail::check_correlation_range(seq.n_max(), N, "naive_correlate");
    CorrelationTable t{N, std::vector<double>(N + 1), seq.kind(), CorrelationMethod::naive};
    const double invN = 1.0 / static_cast<double>(N);
    for (std::size_t n = 0; n <= N; ++n) {
        const double s = pairwise_sum_of<double>(1, N + 1, [&](std::size_t m) {
            return static_cast<double>(seq[m]) * static_cast<double>(seq[m + n]);
        });
        t.coeffs[n] = s * invN;
    }
    return t;
}

// r(h) = sum_{m=1}^{N} A(m) A(m+h) for h = 0..max_lag, by one packed complex
// FFT of length next_pow2(2(N + max_lag) + 1). Needs A up to N + max_lag.
template <WeightSequence S>
std::vector<double> fft_lagged_products(const S& seq, std::size_t N, std::size_t max_lag) {
    require_length(seq, N + max_lag, "fft_lagged_products");
    const std::size_t L = next_pow2(2 * (N + max_lag) + 1);
    FftPlan fwd(L, FftDirection::forward);
    FftPlan inv(L, FftDirection::backward);
    fwd.zero();
    auto z = fwd.data();
    // real part: a = A(1..N); imaginary part: b = A(1..N+max_lag)
    for (std::size_t i = 0; i < N + max_lag; ++i) {
        const double b = static_cast<double>(seq[i + 1]);
        z[i] = cplx(i < N ? b : 0.0, b);
    }
    fwd.execute();
    auto r = inv.data();
    for (std::size_t k = 0; k < L; ++k) {
        const cplx zk = z[k];
        const cplx zr = std::conj(z[(L - k) % L]);
        const cplx a = 0.5 * (zk + zr);
        const cplx b = cplx(0.0, -0.5) * (zk - zr);
        r[k] = std::conj(a) * b;
    }
    inv.execute();
    std::vector<double> out(max_lag + 1);
    const double scale = 1.0 / static_cast<double>(L);
    for (std::size_t h = 0; h <= max_lag; ++h) out[h] = r[h].real() * scale;
    return out;
}

template <WeightSequence S>
CorrelationTable fft_correlate(const S& seq, std::size_t N) {
    detail::check_correlation_range(seq.n_max(), N, "fft_correlate");
    auto lagged = fft_lagged_products(seq, N, N);
    const double invN = 1.0 / static_cast<double>(N);
    for (auto& v : lagged) v *= invN;
    return CorrelationTable{N, std::move(lagged), seq.kind(), CorrelationMethod::fft};
}

template <WeightSequence S>
CorrelationTable correlate(const S& seq, std::size_t N, CorrelationMethod method) {
    return method == CorrelationMethod::naive ? naive_correlate(seq, N) : fft_correlate(seq, N);
}

// ---------------------------------------------------------------------------
// Cesaro mean of |c_{n,N}|

struct CesaroReport {
    std::size_t N = 0;
    double D = 0.0;  // (1/N) sum_{n=1}^{N} |c_{n,N}|
    std::vector<std::pair<double, double>> fitted_ratio;  // (eps, D * ln(N)^eps)

    std::optional<double> ratio(double eps) const {
        for (const auto& [e, r] : fitted_ratio)
            if (e == eps) return r;
        return std::nullopt;
    }
};

inline CesaroReport cesaro_abs_mean(const CorrelationTable& table, std::span<const double> eps = {}) {
    if (table.coeffs.size() != table.N + 1) throw DomainError("cesaro_abs_mean: incomplete table");
    const double sum = pairwise_sum_of<double>(1, table.N + 1,
                                               [&](std::size_t n) { return std::abs(table.coeffs[n]); });
    CesaroReport rep{table.N, sum / static_cast<double>(table.N), {}};
    const double logN = std::log(static_cast<double>(table.N));
    for (double e : eps) rep.fitted_ratio.emplace_back(e, rep.D * std::pow(logN, e));
    return rep;
}

// max over the run's N-grid of D(N) ln(N)^eps; an empirical fit, nothing more.
inline double empirical_constant(std::span<const CesaroReport> reports, double eps) {
    double c = 0.0;
    for (const auto& r : reports) c = std::max(c, r.D * std::pow(std::log(static_cast<double>(r.N)), eps));
    return c;
}

// ---------------------------------------------------------------------------
// Geometric scan over N = [rho^m]

struct NullWitness {
    std::size_t level = 0;  // l, 1-based
    double delta = 0.0;
    int m = 0;
    std::uint64_t rhopow = 0;
    std::size_t n = 0;
    double abs_c = 0.0;
};

struct GeometricScan {
    double rho = 2.0;
    int m_max = 0;
    std::vector<std::uint64_t> rhopow;  // [rho^m], m = 1..m_max
    std::vector<double> terms;          // D([rho^m])
    std::vector<double> partial_sums;
    std::vector<NullWitness> null_subseq;
    // levels l whose delta found no witness inside the sieved range
    std::vector<std::size_t> insufficient_range;
};

template <WeightSequence S>
GeometricScan geometric_scan(const S& seq, double rho, int m_max, std::span<const double> deltas) {
    if (!(rho > 1.0)) throw DomainError("geometric_scan: rho must exceed 1");
    if (m_max < 1) throw DomainError("geometric_scan: m_max must be >= 1");
    GeometricScan scan;
    scan.rho = rho;
    scan.m_max = m_max;
    for (int m = 1; m <= m_max; ++m) scan.rhopow.push_back(floor_pow(rho, m));
    if (scan.rhopow.back() > seq.n_max() / 2)
        throw RangeError("geometric_scan: [rho^m_max] = " + std::to_string(scan.rhopow.back()) +
                         " exceeds n_max/2");

    std::vector<std::vector<double>> abs_tables;
    abs_tables.reserve(m_max);
    double running = 0.0;
    for (auto N : scan.rhopow) {
        auto table = fft_correlate(seq, N);
        std::vector<double> a(N + 1);
        for (std::size_t n = 0; n <= N; ++n) a[n] = std::abs(table.coeffs[n]);
        const double D = cesaro_abs_mean(table).D;
        scan.terms.push_back(D);
        running += D;
        scan.partial_sums.push_back(running);
        abs_tables.push_back(std::move(a));
    }

    // tail[i] = sum_{j >= i} terms[j] over the scanned range
    std::vector<double> tail(m_max + 1, 0.0);
    for (int i = m_max - 1; i >= 0; --i) tail[i] = tail[i + 1] + scan.terms[i];

    for (std::size_t l = 0; l < deltas.size(); ++l) {
        const double delta = deltas[l];
        bool found = false;
        for (int i = 0; i < m_max && !found; ++i) {
            if (!(tail[i] < delta)) continue;
            const auto& a = abs_tables[i];
            for (std::size_t n = 1; n < a.size(); ++n) {
                if (a[n] < delta) {
                    scan.null_subseq.push_back({l + 1, delta, i + 1, scan.rhopow[i], n, a[n]});
                    found = true;
                    break;
                }
            }
            // the first qualifying m decides the level
            break;
        }
        if (!found) scan.insufficient_range.push_back(l + 1);
    }
    return scan;
}

inline std::vector<double> dyadic_deltas(std::size_t levels) {
    std::vector<double> d;
    for (std::size_t l = 1; l <= levels; ++l) d.push_back(std::ldexp(1.0, -static_cast<int>(l)));
    return d;
}

// ---------------------------------------------------------------------------
// Chowla multiple correlations

struct ChowlaSpec {
    std::vector<std::size_t> shifts;  // a_1 < ... < a_r, positive
    std::vector<int> exponents;       // i_0..i_r, each 1 or 2, not all 2

    void validate() const {
        if (exponents.size() != shifts.size() + 1)
            throw DomainError("ChowlaSpec: need exactly r+1 exponents for r shifts");
        for (std::size_t s = 0; s < shifts.size(); ++s) {
            if (shifts[s] == 0) throw DomainError("ChowlaSpec: shifts must be positive");
            if (s > 0 && shifts[s] <= shifts[s - 1])
                throw DomainError("ChowlaSpec: shifts must be strictly increasing");
        }
        bool all_two = true;
        for (int e : exponents) {
            if (e != 1 && e != 2) throw DomainError("ChowlaSpec: exponents must be 1 or 2");
            all_two = all_two && e == 2;
        }
        if (all_two) throw DomainError("ChowlaSpec: exponents must not all equal 2");
    }
};

// (1/N) sum_{n<=N} prod_s A(n + a_s)^{i_s}, with a_0 = 0.
template <WeightSequence S>
double chowla_sum(const ChowlaSpec& spec, const S& seq, std::size_t N) {
    spec.validate();
    if (N < 1) throw DomainError("chowla_sum: N must be >= 1");
    const std::size_t reach = spec.shifts.empty() ? 0 : spec.shifts.back();
    require_length(seq, N + reach, "chowla_sum");
    const double s = pairwise_sum_of<double>(1, N + 1, [&](std::size_t n) {
        double p = static_cast<double>(seq[n]);
        if (spec.exponents[0] == 2) p *= static_cast<double>(seq[n]);
        for (std::size_t j = 0; j < spec.shifts.size(); ++j) {
            const double v = static_cast<double>(seq[n + spec.shifts[j]]);
            p *= v;
            if (spec.exponents[j + 1] == 2) p *= v;
        }
        return p;
    });
    return s / static_cast<double>(N);
}

// ---------------------------------------------------------------------------
// Cubic averages (1/N^2) sum_{n,m=1}^{N} A(n) A(m) A(n+m)

template <WeightSequence S>
double cubic_average_direct(const S& seq, std::size_t N) {
    detail::check_correlation_range(seq.n_max(), N, "cubic_average_direct");
    const double s = pairwise_sum_of<double>(1, N + 1, [&](std::size_t n) {
        const double an = static_cast<double>(seq[n]);
        return an * pairwise_sum_of<double>(1, N + 1, [&](std::size_t m) {
                   return static_cast<double>(seq[m]) * static_cast<double>(seq[n + m]);
               });
    });
    return s / (static_cast<double>(N) * static_cast<double>(N));
}

// Grouped by k = n + m: (1/N^2) sum_{k=2}^{2N} A(k) w_N(k), where
// w_N(k) = sum_{n+m=k, 1<=n,m<=N} A(n) A(m) is one self-convolution.
template <WeightSequence S>
double cubic_average(const S& seq, std::size_t N) {
    detail::check_correlation_range(seq.n_max(), N, "cubic_average");
    const std::size_t L = next_pow2(2 * N);
    FftPlan fwd(L, FftDirection::forward);
    FftPlan inv(L, FftDirection::backward);
    fwd.zero();
    auto x = fwd.data();
    for (std::size_t i = 0; i < N; ++i) x[i] = static_cast<double>(seq[i + 1]);
    fwd.execute();
    auto y = inv.data();
    for (std::size_t k = 0; k < L; ++k) y[k] = x[k] * x[k];
    inv.execute();
    const double scale = 1.0 / static_cast<double>(L);
    // conv index j <-> k = j + 2
    const double s = pairwise_sum_of<double>(2, 2 * N + 1, [&](std::size_t k) {
        return static_cast<double>(seq[k]) * (y[k - 2].real() * scale);
    });
    return s / (static_cast<double>(N) * static_cast<double>(N));
}

// ---------------------------------------------------------------------------

// (1/(H N)) sum_{h=1}^{H} |sum_{n<=N} A(n) A(n+h)|
template <WeightSequence S>
double mrt_window_sum(const S& seq, std::size_t N, std::size_t H) {
    if (H < 10 || H > N) throw DomainError("mrt_window_sum: need 10 <= H <= N");
    require_length(seq, N + H, "mrt_window_sum");
    const auto r = fft_lagged_products(seq, N, H);
    const double s = pairwise_sum_of<double>(1, H + 1, [&](std::size_t h) { return std::abs(r[h]); });
    return s / (static_cast<double>(H) * static_cast<double>(N));
}

}  // namespace mlcorr
