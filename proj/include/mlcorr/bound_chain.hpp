// bound_chain.hpp
// The Cauchy-Schwarz / Parseval-Bessel chain behind the Cesaro bound, with
// unit eigenvalue and constant observables:
//
//   L  = (1/N) sum_{m<=N} |c_{m,N}|
//      <= ((1/N) sum_{m<=N} |c_{m,N}|^2)^{1/2}                  (Cauchy-Schwarz)
//      <= sup_t |(1/N) S_N(t)| * ((1/N) sum_{p<=2N} |A(p)|)^{1/2}  (Bessel)
//
// The sup is replaced by its certified upper bound, so a violation of any
// link is an implementation bug, not a numerical accident.

#pragma once
#include <cmath>
#include <cstddef>

#include "mlcorr/correlation.hpp"
#include "mlcorr/spectral.hpp"

namespace mlcorr {

struct BoundChainRecord {
    std::size_t N = 0;
    double L = 0.0;
    double cauchy_schwarz = 0.0;
    double sup_lower = 0.0;  // of |S_N(t)| / N
    double sup_upper = 0.0;
    double density = 0.0;  // (1/N) sum_{p<=2N} |A(p)|
    double P = 0.0;        // sup_upper * sqrt(density)
    double rhs = 0.0;      // sqrt(2) * P
    bool tight_holds = false;  // L <= CS <= P
    bool holds = false;        // L <= sqrt(2) * P
};

template <WeightSequence S>
BoundChainRecord bound_chain(const S& seq, std::size_t N, const SupOptions& opt = {}) {
    BoundChainRecord r;
    r.N = N;
    const auto table = fft_correlate(seq, N);
    const double invN = 1.0 / static_cast<double>(N);
    r.L = cesaro_abs_mean(table).D;
    r.cauchy_schwarz = std::sqrt(
        pairwise_sum_of<double>(1, N + 1, [&](std::size_t m) { return table.coeffs[m] * table.coeffs[m]; }) *
        invN);
    const auto sup = certified_sup(coefficients(seq, N), opt);
    r.sup_lower = sup.lower * invN;
    r.sup_upper = sup.upper * invN;
    r.density = pairwise_sum_of<double>(1, 2 * N + 1,
                                        [&](std::size_t p) { return std::abs(static_cast<double>(seq[p])); }) *
                invN;
    r.P = r.sup_upper * std::sqrt(r.density);
    r.rhs = std::sqrt(2.0) * r.P;
    r.tight_holds = r.L <= r.cauchy_schwarz * (1.0 + 1e-12) && r.cauchy_schwarz <= r.P * (1.0 + 1e-12);
    r.holds = r.L <= r.rhs;
    return r;
}

}  // namespace mlcorr
