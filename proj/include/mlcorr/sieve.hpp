// sieve.hpp
// Segmented sieve for Omega (prime factors with multiplicity), the Liouville
// function lambda = (-1)^Omega and the Mobius function mu, plus a per-integer
// trial-division oracle used as the independent check.
//
// Segment [lo, hi]: every prime p <= sqrt(hi) is divided out of a residual
// array via its prime powers p, p^2, ... ; a residual > 1 afterwards is one
// remaining prime factor. Output does not depend on the segment size.

#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlcorr/error.hpp"
#include "mlcorr/numeric.hpp"
#include "mlcorr/parallel.hpp"
#include "mlcorr/sequence.hpp"

namespace mlcorr {

struct SieveConfig {
    std::size_t n_max = 1;
    std::size_t segment_size = std::size_t{1} << 20;
    std::optional<std::string> cache_path;
    // Omega(1) = 1 (hence lambda(1) = -1) instead of the standard Omega(1) = 0.
    bool omega_one_is_one = false;
    std::size_t memory_budget_bytes = std::size_t{1} << 30;
    unsigned threads = 1;
    // Test hook: negate the output value at this index (fault injection).
    std::optional<std::size_t> fault_flip_index;
};

namespace detail {

inline std::vector<std::uint32_t> small_primes(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

inline std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline void check_sieve_config(const SieveConfig& cfg) {
    if (cfg.n_max < 1) throw ConfigError("n_max", "must be >= 1");
    if (cfg.segment_size < 1) throw ConfigError("segment_size", "must be >= 1");
    const std::size_t seg = std::min(cfg.segment_size, cfg.n_max);
    const std::size_t scratch = seg * (sizeof(std::uint64_t) + 2) * std::max(1u, cfg.threads);
    const std::size_t need = cfg.n_max + scratch;
    if (need > cfg.memory_budget_bytes)
        throw CapacityError("sieve to n_max = " + std::to_string(cfg.n_max) + " needs ~" +
                            std::to_string(need) + " bytes, budget is " +
                            std::to_string(cfg.memory_budget_bytes));
}

// Fills omega[0..len) and squarefree[0..len) for integers lo..lo+len-1.
inline void factor_segment(std::uint64_t lo, std::size_t len,
                           const std::vector<std::uint32_t>& primes, std::int8_t* omega,
                           std::uint8_t* squarefree, std::vector<std::uint64_t>& residual) {
    const std::uint64_t hi = lo + len - 1;
    residual.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
        residual[i] = lo + i;
        omega[i] = 0;
        squarefree[i] = 1;
    }
    for (std::uint32_t p32 : primes) {
        const std::uint64_t p = p32;
        if (p * p > hi) break;
        int power = 1;
        for (std::uint64_t pk = p; pk <= hi; ++power) {
            std::uint64_t start = ((lo + pk - 1) / pk) * pk;
            for (std::uint64_t m = start; m <= hi; m += pk) {
                const std::size_t i = m - lo;
                residual[i] /= p;
                ++omega[i];
                if (power >= 2) squarefree[i] = 0;
            }
            if (pk > hi / p) break;
            pk *= p;
        }
    }
    for (std::size_t i = 0; i < len; ++i)
        if (residual[i] > 1) ++omega[i];
}

}  // namespace detail

inline ArithSequence sieve(SequenceKind kind, const SieveConfig& cfg) {
    if (kind == SequenceKind::custom) throw DomainError("sieve: custom kind is not sieveable");
    detail::check_sieve_config(cfg);

    const std::uint64_t n_max = cfg.n_max;
    const auto primes = detail::small_primes(detail::isqrt(n_max));
    const std::size_t seg = std::min<std::size_t>(cfg.segment_size, n_max);
    const std::size_t segments = (n_max + seg - 1) / seg;

    std::vector<std::int8_t> values(n_max);
    parallel_for(segments, cfg.threads, [&](std::size_t s) {
        const std::uint64_t lo = 1 + s * seg;
        const std::size_t len = std::min<std::uint64_t>(seg, n_max - lo + 1);
        std::vector<std::uint64_t> residual;
        std::vector<std::uint8_t> squarefree(len);
        std::int8_t* out = values.data() + (lo - 1);
        detail::factor_segment(lo, len, primes, out, squarefree.data(), residual);
        for (std::size_t i = 0; i < len; ++i) {
            const int om = out[i];
            switch (kind) {
                case SequenceKind::omega: break;
                case SequenceKind::liouville: out[i] = (om % 2 == 0) ? 1 : -1; break;
                case SequenceKind::mobius: out[i] = squarefree[i] ? ((om % 2 == 0) ? 1 : -1) : 0; break;
                case SequenceKind::custom: break;
            }
        }
    });

    if (cfg.omega_one_is_one) {
        if (kind == SequenceKind::omega) values[0] = 1;
        if (kind == SequenceKind::liouville) values[0] = -1;
        // mu(1) = 1 is its own case in the definition and is kept
    }
    if (cfg.fault_flip_index && *cfg.fault_flip_index >= 1 && *cfg.fault_flip_index <= n_max) {
        auto& v = values[*cfg.fault_flip_index - 1];
        v = static_cast<std::int8_t>(v == 0 ? 1 : -v);
    }
    return ArithSequence(kind, std::move(values));
}

inline ArithSequence sieve_omega(std::size_t n_max) {
    SieveConfig cfg;
    cfg.n_max = n_max;
    return sieve(SequenceKind::omega, cfg);
}
inline ArithSequence sieve_liouville(std::size_t n_max) {
    SieveConfig cfg;
    cfg.n_max = n_max;
    return sieve(SequenceKind::liouville, cfg);
}
inline ArithSequence sieve_mobius(std::size_t n_max) {
    SieveConfig cfg;
    cfg.n_max = n_max;
    return sieve(SequenceKind::mobius, cfg);
}

struct OracleValues {
    int omega;
    int mu;
    int lambda;
    friend bool operator==(const OracleValues&, const OracleValues&) = default;
};

inline constexpr std::uint64_t kOracleLimit = 10'000'000;

// Full trial-division factorization of a single integer; never touches a sieve.
inline OracleValues brute_force_oracle(std::uint64_t n) {
    if (n < 1 || n > kOracleLimit)
        throw RangeError("brute_force_oracle: n must lie in [1, 10^7]");
    int omega = 0;
    bool squarefree = true;
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        omega += e;
        if (e >= 2) squarefree = false;
    }
    if (m > 1) ++omega;
    const int lambda = (omega % 2 == 0) ? 1 : -1;
    return {omega, squarefree ? lambda : 0, lambda};
}

// M(N) = sum_{n <= N} mu(n)
inline std::int64_t mertens(const ArithSequence& mu, std::size_t N) {
    if (mu.kind() != SequenceKind::mobius) throw DomainError("mertens: needs a mobius sequence");
    require_length(mu, N, "mertens");
    std::int64_t acc = 0;
    for (std::size_t n = 1; n <= N; ++n) acc += mu[n];
    return acc;
}

// sum_{n <= N} A(n) / n^s, s > 1. For mu this tends to 1/zeta(s), for lambda
// to zeta(2s)/zeta(s).
template <WeightSequence S>
double dirichlet_partial(const S& seq, double s, std::size_t N) {
    if (!(s > 1.0)) throw DomainError("dirichlet_partial: s must exceed 1");
    require_length(seq, N, "dirichlet_partial");
    return pairwise_sum_of<double>(1, N + 1, [&](std::size_t n) {
        return static_cast<double>(seq[n]) * std::pow(static_cast<double>(n), -s);
    });
}

// #{n <= N : mu(n) != 0} / N
inline double squarefree_density(const ArithSequence& mu, std::size_t N) {
    if (mu.kind() != SequenceKind::mobius)
        throw DomainError("squarefree_density: needs a mobius sequence");
    require_length(mu, N, "squarefree_density");
    std::size_t count = 0;
    for (std::size_t n = 1; n <= N; ++n) count += (mu[n] != 0);
    return static_cast<double>(count) / static_cast<double>(N);
}

}  // namespace mlcorr
