// verify.hpp
// Cross-oracle suites: every fast path against its independent slow path.
// Failures are reported as data; nothing here throws on a mismatch.

#pragma once
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mlcorr/correlation.hpp"
#include "mlcorr/dynamics.hpp"
#include "mlcorr/error.hpp"
#include "mlcorr/gowers.hpp"
#include "mlcorr/random.hpp"
#include "mlcorr/sieve.hpp"
#include "mlcorr/spectral.hpp"

namespace mlcorr {

struct VerifyConfig {
    std::size_t sieve_limit = 100'000;
    std::vector<std::size_t> correlation_sizes{256, 1024};
    std::size_t random_sequences = 10;
    std::vector<std::size_t> cubic_sizes{64, 256, 512};
    std::size_t weighted_cubic_configs = 5;
    std::size_t gowers_size = 256;
    std::size_t gowers_sequences = 10;
    std::size_t vdc_draws = 200;
    std::size_t orbit_steps = 10'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    // fault injection hook: negate this sieve entry
    std::optional<std::size_t> sieve_fault_index;

    void validate() const {
        if (sieve_limit < 1) throw ConfigError("nmax", "zero-length sequence");
        if (gowers_size < 1) throw ConfigError("gowers_size", "zero-length sequence");
    }
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;

    void observe(double deviation) {
        ++cases;
        if (!(deviation <= max_deviation)) max_deviation = deviation;  // NaN sticks
        if (!(deviation <= tolerance)) passed = false;
    }
};

struct VerifyReport {
    std::vector<SuiteResult> suites;
    bool passed() const {
        return std::all_of(suites.begin(), suites.end(), [](const auto& s) { return s.passed; });
    }
};

namespace detail {

inline ArithSequence verify_sieve(SequenceKind kind, const VerifyConfig& cfg, std::size_t n_max) {
    SieveConfig sc;
    sc.n_max = n_max;
    sc.threads = cfg.threads;
    sc.fault_flip_index = cfg.sieve_fault_index;
    return sieve(kind, sc);
}

template <WeightSequence S>
double max_table_deviation(const S& seq, std::size_t N) {
    const auto a = naive_correlate(seq, N), b = fft_correlate(seq, N);
    double d = 0.0;
    for (std::size_t n = 0; n <= N; ++n) d = std::max(d, std::abs(a.coeffs[n] - b.coeffs[n]));
    return d;
}

inline CubicSystems random_cubic_systems(std::mt19937_64& rng) {
    CubicSystems c;
    DynamicalSystemSpec* sys[3] = {&c.T1, &c.T2, &c.T3};
    Observable* obs[3] = {&c.f1, &c.f2, &c.f3};
    for (int i = 0; i < 3; ++i) {
        sys[i]->kind = (rng() >> 63) ? SystemKind::affine_skew : SystemKind::rotation;
        sys[i]->alpha = unit_uniform(rng);
        const auto kx = static_cast<std::int64_t>(rng() % 7) - 3;
        const auto ky = sys[i]->kind == SystemKind::affine_skew ? static_cast<std::int64_t>(rng() % 5) - 2 : 0;
        *obs[i] = Observable::character(kx, ky);
    }
    return c;
}

}  // namespace detail

inline VerifyReport verify(const VerifyConfig& cfg) {
    cfg.validate();
    VerifyReport report;
    std::mt19937_64 rng(cfg.seed);

    // sieve against trial division
    {
        SuiteResult s{"sieve_vs_trial_division", true, 0.0, 0.0, 0};
        const auto om = detail::verify_sieve(SequenceKind::omega, cfg, cfg.sieve_limit);
        const auto mu = detail::verify_sieve(SequenceKind::mobius, cfg, cfg.sieve_limit);
        const auto la = detail::verify_sieve(SequenceKind::liouville, cfg, cfg.sieve_limit);
        double mismatches = 0.0;
        for (std::size_t n = 1; n <= cfg.sieve_limit; ++n) {
            const auto o = brute_force_oracle(n);
            if (o.omega != om[n] || o.mu != mu[n] || o.lambda != la[n]) mismatches += 1.0;
        }
        s.observe(mismatches);
        report.suites.push_back(s);
    }

    // FFT correlation against the literal double loop
    {
        SuiteResult s{"fft_vs_naive_correlation", true, 0.0, 1e-10, 0};
        std::size_t biggest = 0;
        for (auto N : cfg.correlation_sizes) biggest = std::max(biggest, N);
        const auto mu = sieve_mobius(2 * biggest), la = sieve_liouville(2 * biggest);
        for (auto N : cfg.correlation_sizes) {
            s.observe(detail::max_table_deviation(mu, N));
            s.observe(detail::max_table_deviation(la, N));
            for (std::size_t r = 0; r < cfg.random_sequences; ++r)
                s.observe(detail::max_table_deviation(random_sign_sequence(2 * N, rng()), N));
        }
        report.suites.push_back(s);
    }

    // convolution cubic average against the double loop
    {
        SuiteResult s{"cubic_fast_vs_double_loop", true, 0.0, 1e-9, 0};
        std::size_t biggest = 0;
        for (auto N : cfg.cubic_sizes) biggest = std::max(biggest, N);
        const auto mu = sieve_mobius(2 * biggest), la = sieve_liouville(2 * biggest);
        for (auto N : cfg.cubic_sizes) {
            s.observe(std::abs(cubic_average(mu, N) - cubic_average_direct(mu, N)));
            s.observe(std::abs(cubic_average(la, N) - cubic_average_direct(la, N)));
        }
        const std::size_t N = cfg.cubic_sizes.empty() ? 64 : cfg.cubic_sizes.front();
        for (std::size_t r = 0; r < cfg.weighted_cubic_configs; ++r) {
            const auto sys = detail::random_cubic_systems(rng);
            const auto x0 = TorusPoint::from_doubles(unit_uniform(rng), unit_uniform(rng));
            s.observe(std::abs(cubic_weighted_average(mu, sys, x0, N) -
                               cubic_weighted_average_direct(mu, sys, x0, N)));
        }
        report.suites.push_back(s);
    }

    // Gowers U2: inductive vs Fourier; nesting U1 <= U2 <= U3
    {
        SuiteResult s{"gowers_inductive_vs_fourier", true, 0.0, 1e-8, 0};
        SuiteResult m{"gowers_monotonicity", true, 0.0, 1e-12, 0};
        for (std::size_t r = 0; r < cfg.gowers_sequences; ++r) {
            const auto seq = random_sign_sequence(cfg.gowers_size, rng());
            const auto u1 = gowers_norm(seq, cfg.gowers_size, 1, GowersMethod::inductive).value;
            const auto u2 = gowers_norm(seq, cfg.gowers_size, 2, GowersMethod::inductive).value;
            const auto u2f = gowers_norm(seq, cfg.gowers_size, 2, GowersMethod::fourier).value;
            const auto u3 = gowers_norm(seq, cfg.gowers_size, 3, GowersMethod::inductive).value;
            s.observe(std::abs(u2 - u2f));
            m.observe(std::max({0.0, u1 - u2, u2 - u3}));
        }
        report.suites.push_back(s);
        report.suites.push_back(m);
    }

    // van der Corput: lhs <= rhs
    {
        SuiteResult s{"van_der_corput", true, 0.0, 1e-12, 0};
        for (std::size_t d = 0; d < cfg.vdc_draws; ++d) {
            const std::size_t N = 1 + rng() % 64;
            std::vector<cplx> u(N);
            for (auto& z : u) z = random_unit_disc(rng);
            const std::size_t root = static_cast<std::size_t>(std::sqrt(static_cast<double>(N)));
            for (std::size_t H : {std::size_t{0}, std::size_t{1}, root, N - 1}) {
                if (H > N - 1) continue;
                const auto r = vdc_check(u, H);
                s.observe(std::max(0.0, r.lhs - r.rhs));
            }
        }
        report.suites.push_back(s);
    }

    // closed-form orbits against repeated one-step maps
    {
        SuiteResult s{"orbit_closed_form", true, 0.0, 1e-12, 0};
        for (auto kind : {SystemKind::rotation, SystemKind::affine_skew}) {
            const DynamicalSystemSpec sys{kind, unit_uniform(rng)};
            const std::array<double, 2> x0{unit_uniform(rng), unit_uniform(rng)};
            // modular stepping on fixed-point phases
            auto p = TorusPoint::from_doubles(x0[0], x0[1]);
            double dev = 0.0;
            for (std::size_t n = 1; n <= cfg.orbit_steps; ++n) {
                p = sys.step(p);
                const auto closed = orbit_value(sys, x0, n);
                const auto stepped = p.to_doubles();
                dev = std::max({dev, circle_distance(closed[0], stepped[0]),
                                circle_distance(closed[1], stepped[1])});
            }
            s.observe(dev);
        }
        report.suites.push_back(s);
    }

    // Parseval on the phase grid
    {
        SuiteResult s{"phase_grid_parseval", true, 0.0, 1e-8, 0};
        const auto mu = sieve_mobius(1000);
        for (std::size_t N : {std::size_t{100}, std::size_t{1000}}) {
            const auto p = phase_profile(mu, N);
            const double grid = pairwise_sum_of<double>(0, p.M, [&](std::size_t k) { return std::norm(p.samples[k]); }) /
                                static_cast<double>(p.M);
            double energy = 0.0;
            for (std::size_t n = 1; n <= N; ++n) energy += mu[n] * mu[n];
            s.observe(std::abs(grid - energy) / std::max(1.0, energy));
        }
        report.suites.push_back(s);
    }
    return report;
}

}  // namespace mlcorr
