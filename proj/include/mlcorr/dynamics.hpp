// dynamics.hpp
// Torus systems and weighted ergodic quantities over them.
//
//   rotation     x -> x + alpha                   (mod 1)
//   affine skew  (x, y) -> (x + alpha, y + 2x + alpha)   (mod 1)
//
// Iterates use the closed forms x_n = x0 + n alpha and
// y_n = y0 + 2n x0 + n^2 alpha on fixed-point phases, so no error builds up
// along the orbit. All alpha are rational in machine arithmetic; the default
// sqrt(2)-1 has bounded continued-fraction quotients and behaves like an
// irrational at the sizes used here.

#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlcorr/error.hpp"
#include "mlcorr/fft.hpp"
#include "mlcorr/numeric.hpp"
#include "mlcorr/parallel.hpp"
#include "mlcorr/phase.hpp"
#include "mlcorr/sequence.hpp"
#include "mlcorr/sieve.hpp"
#include "mlcorr/spectral.hpp"

namespace mlcorr {

inline const double kDefaultAlpha = std::sqrt(2.0) - 1.0;

enum class SystemKind { rotation, affine_skew };

struct TorusPoint {
    Phase x, y;
    static TorusPoint from_doubles(double x, double y = 0.0) {
        return {Phase::from_double(x), Phase::from_double(y)};
    }
    std::array<double, 2> to_doubles() const { return {x.to_double(), y.to_double()}; }
};

struct DynamicalSystemSpec {
    SystemKind kind = SystemKind::rotation;
    double alpha = kDefaultAlpha;

    int dimension() const { return kind == SystemKind::rotation ? 1 : 2; }

    // T^n(start)
    TorusPoint orbit(const TorusPoint& start, std::uint64_t n) const {
        const Phase a = Phase::from_double(alpha);
        if (kind == SystemKind::rotation) return {start.x + a.times(n), start.y};
        return {start.x + a.times(n), start.y + start.x.times(2 * n) + a.times(n * n)};
    }

    // one application of the map, for checking the closed form
    TorusPoint step(const TorusPoint& p) const {
        const Phase a = Phase::from_double(alpha);
        if (kind == SystemKind::rotation) return {p.x + a, p.y};
        return {p.x + a, p.y + p.x.times(2) + a};
    }
};

inline std::array<double, 2> orbit_value(const DynamicalSystemSpec& sys, std::array<double, 2> x0,
                                         std::uint64_t n) {
    return sys.orbit(TorusPoint::from_doubles(x0[0], x0[1]), n).to_doubles();
}

// Finite linear combination of characters e^{2 pi i <k, x>}.
struct Observable {
    struct Term {
        cplx coefficient{1.0, 0.0};
        std::array<std::int64_t, 2> k{0, 0};
    };
    std::vector<Term> terms;

    static Observable constant(cplx c = 1.0) { return Observable{{Term{c, {0, 0}}}}; }
    static Observable character(std::int64_t kx, std::int64_t ky = 0) {
        return Observable{{Term{1.0, {kx, ky}}}};
    }

    cplx operator()(const TorusPoint& p) const {
        cplx v{};
        for (const auto& t : terms)
            v += t.coefficient * (p.x.times(static_cast<std::uint64_t>(t.k[0])) +
                                  p.y.times(static_cast<std::uint64_t>(t.k[1])))
                                     .character();
        return v;
    }

    // |f| <= sum |coefficients|
    double sup_bound() const {
        double s = 0.0;
        for (const auto& t : terms) s += std::abs(t.coefficient);
        return s;
    }

    Observable scaled(cplx c) const {
        Observable o = *this;
        for (auto& t : o.terms) t.coefficient *= c;
        return o;
    }
};

// f(T^n x0) for n = 1..N at positions 0..N-1
inline std::vector<cplx> orbit_samples(const Observable& f, const DynamicalSystemSpec& sys,
                                       const TorusPoint& x0, std::size_t N, std::uint64_t stride = 1) {
    std::vector<cplx> out(N);
    for (std::size_t n = 1; n <= N; ++n) out[n - 1] = f(sys.orbit(x0, stride * n));
    return out;
}

// (1/N) sum_{n<=N} A(n) f(T^n x0)
template <WeightSequence S>
cplx weighted_birkhoff(const S& seq, const Observable& f, const DynamicalSystemSpec& sys,
                       const TorusPoint& x0, std::size_t N) {
    if (N < 1) throw DomainError("weighted_birkhoff: N must be >= 1");
    require_length(seq, N, "weighted_birkhoff");
    const cplx s = pairwise_sum_of<cplx>(
        1, N + 1, [&](std::size_t n) { return static_cast<double>(seq[n]) * f(sys.orbit(x0, n)); });
    return s / static_cast<double>(N);
}

// ---------------------------------------------------------------------------
// Cubic weighted average
//   (1/N^2) sum_{n,m=1}^{N} A(n)A(m)A(n+m) f1(T1^n x) f2(T2^m x) f3(T3^{n+m} x)

struct CubicSystems {
    Observable f1, f2, f3;
    DynamicalSystemSpec T1, T2, T3;
};

namespace detail {
template <WeightSequence S>
void cubic_weighted_inputs(const S& seq, const CubicSystems& c, const TorusPoint& x0, std::size_t N,
                           std::vector<cplx>& a, std::vector<cplx>& b, std::vector<cplx>& g) {
    if (N < 1) throw DomainError("cubic_weighted_average: N must be >= 1");
    require_length(seq, 2 * N, "cubic_weighted_average");
    a.resize(N);
    b.resize(N);
    g.resize(2 * N);
    for (std::size_t n = 1; n <= N; ++n) {
        const double w = static_cast<double>(seq[n]);
        a[n - 1] = w * c.f1(c.T1.orbit(x0, n));
        b[n - 1] = w * c.f2(c.T2.orbit(x0, n));
    }
    for (std::size_t k = 1; k <= 2 * N; ++k) g[k - 1] = static_cast<double>(seq[k]) * c.f3(c.T3.orbit(x0, k));
}
}  // namespace detail

// Grouped by k = n + m: sum_k g(k) (a * b)(k), one convolution.
template <WeightSequence S>
cplx cubic_weighted_average(const S& seq, const CubicSystems& c, const TorusPoint& x0, std::size_t N) {
    std::vector<cplx> a, b, g;
    detail::cubic_weighted_inputs(seq, c, x0, N, a, b, g);
    const auto w = fft_convolve(a, b);  // w[j] pairs n + m = j + 2
    const cplx s = pairwise_sum_of<cplx>(2, 2 * N + 1, [&](std::size_t k) { return g[k - 1] * w[k - 2]; });
    return s / (static_cast<double>(N) * static_cast<double>(N));
}

template <WeightSequence S>
cplx cubic_weighted_average_direct(const S& seq, const CubicSystems& c, const TorusPoint& x0,
                                   std::size_t N) {
    std::vector<cplx> a, b, g;
    detail::cubic_weighted_inputs(seq, c, x0, N, a, b, g);
    const cplx s = pairwise_sum_of<cplx>(1, N + 1, [&](std::size_t n) {
        return a[n - 1] *
               pairwise_sum_of<cplx>(1, N + 1, [&](std::size_t m) { return b[m - 1] * g[n + m - 1]; });
    });
    return s / (static_cast<double>(N) * static_cast<double>(N));
}

// ---------------------------------------------------------------------------

struct WwBracket {
    double grid_max = 0.0;
    double lower = 0.0;  // of sup_t |(1/N) sum b_n e^{2 pi i n t}|
    double upper = 0.0;
    double argmax = 0.0;
};

inline WwBracket normalized_bracket(const SupBracket& s, std::size_t N) {
    const double inv = 1.0 / static_cast<double>(N);
    return {s.grid_max * inv, s.lower * inv, s.upper * inv, s.argmax};
}

// Wiener-Wintner sup over t of |(1/N) sum_{n<=N} A(n) f(T^n x0) e^{2 pi i n t}|
template <WeightSequence S>
WwBracket ww_sup(const S& seq, const Observable& f, const DynamicalSystemSpec& sys, const TorusPoint& x0,
                 std::size_t N, const SupOptions& opt = {}) {
    if (N < 1) throw DomainError("ww_sup: N must be >= 1");
    require_length(seq, N, "ww_sup");
    auto b = orbit_samples(f, sys, x0, N);
    for (std::size_t n = 1; n <= N; ++n) b[n - 1] *= static_cast<double>(seq[n]);
    return normalized_bracket(certified_sup(b, opt), N);
}

// ---------------------------------------------------------------------------
// Wiener-Wintner version of the Katai-Bourgain-Sarnak-Ziegler criterion

struct KbszPair {
    std::uint64_t p = 0, q = 0;
    double sup_lower = 0.0;
    double sup_upper = 0.0;
};

struct KbszReport {
    std::string weight;  // label of the multiplicative function the criterion is applied to
    double epsilon = 0.0;
    double prime_bound = 0.0;  // exp(1/epsilon); primes strictly below it
    std::size_t N = 0;
    std::vector<KbszPair> pairs;
    double max_sup = 0.0;  // max certified upper bound over pairs
    double bound = 0.0;    // 2 sqrt(eps log(1/eps))
    bool hypothesis_holds = false;  // every pair's certified sup < epsilon
};

inline constexpr std::size_t kDefaultPrimeCap = 200;

inline bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline KbszReport kbsz_quantity(std::string weight, const Observable& f, const DynamicalSystemSpec& sys,
                                const TorusPoint& x0, double epsilon, std::size_t N,
                                const SupOptions& opt = {}, std::size_t prime_cap = kDefaultPrimeCap,
                                unsigned threads = 1) {
    if (!(epsilon > 0.0) || epsilon >= 1.0) throw DomainError("kbsz_quantity: need 0 < epsilon < 1");
    if (f.sup_bound() > 1.0 + 1e-12) throw DomainError("kbsz_quantity: observable must satisfy |f| <= 1");
    if (N < 1) throw DomainError("kbsz_quantity: N must be >= 1");

    KbszReport rep;
    rep.weight = std::move(weight);
    rep.epsilon = epsilon;
    rep.N = N;
    rep.prime_bound = std::exp(1.0 / epsilon);
    rep.bound = 2.0 * std::sqrt(epsilon * std::log(1.0 / epsilon));

    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; static_cast<double>(p) < rep.prime_bound; ++p) {
        if (!is_prime_trial(p)) continue;
        primes.push_back(p);
        if (primes.size() > prime_cap)
            throw CapacityError("kbsz_quantity: exp(1/eps) = " + std::to_string(rep.prime_bound) +
                                " admits more than " + std::to_string(prime_cap) + " primes");
    }
    for (std::size_t i = 0; i < primes.size(); ++i)
        for (std::size_t j = i + 1; j < primes.size(); ++j) rep.pairs.push_back({primes[i], primes[j], 0.0, 0.0});

    // sup over t of the (p-q)t-modulated sum equals the plain sup over t'
    parallel_for(rep.pairs.size(), threads, [&](std::size_t i) {
        auto& pr = rep.pairs[i];
        std::vector<cplx> c(N);
        for (std::size_t n = 1; n <= N; ++n) c[n - 1] = f(sys.orbit(x0, pr.p * n)) * f(sys.orbit(x0, pr.q * n));
        const auto br = normalized_bracket(certified_sup(c, opt), N);
        pr.sup_lower = br.lower;
        pr.sup_upper = br.upper;
    });
    rep.hypothesis_holds = !rep.pairs.empty();
    for (const auto& pr : rep.pairs) {
        rep.max_sup = std::max(rep.max_sup, pr.sup_upper);
        if (!(pr.sup_upper < epsilon)) rep.hypothesis_holds = false;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// van der Corput

struct VdcResult {
    double lhs = 0.0;
    double rhs = 0.0;
};

// lhs = |(1/N) sum u_n|^2
// rhs = (N+H)/(N^2 (H+1)) sum |u_n|^2
//     + 2 (N+H)/(N^2 (H+1)^2) sum_{h=1}^{H} (H+1-h) Re sum_{n=0}^{N-h-1} u_{n+h} conj(u_n)
inline VdcResult vdc_check(std::span<const cplx> u, std::size_t H) {
    const std::size_t N = u.size();
    if (N < 1) throw DomainError("vdc_check: empty sequence");
    if (H > N - 1) throw RangeError("vdc_check: need 0 <= H <= N-1");
    const double Nd = static_cast<double>(N), Hd = static_cast<double>(H);
    const cplx mean = pairwise_sum_of<cplx>(0, N, [&](std::size_t n) { return u[n]; }) / Nd;
    VdcResult r;
    r.lhs = std::norm(mean);
    const double energy = pairwise_sum_of<double>(0, N, [&](std::size_t n) { return std::norm(u[n]); });
    const double shifted = pairwise_sum_of<double>(1, H + 1, [&](std::size_t h) {
        const double re = pairwise_sum_of<double>(0, N - h, [&](std::size_t n) {
            return (u[n + h] * std::conj(u[n])).real();
        });
        return (Hd + 1.0 - static_cast<double>(h)) * re;
    });
    r.rhs = (Nd + Hd) / (Nd * Nd * (Hd + 1.0)) * energy +
            2.0 * (Nd + Hd) / (Nd * Nd * (Hd + 1.0) * (Hd + 1.0)) * shifted;
    return r;
}

}  // namespace mlcorr
