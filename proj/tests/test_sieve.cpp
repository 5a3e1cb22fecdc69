#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "mlcorr/sieve.hpp"
#include "oracles.hpp"

using namespace mlcorr;

namespace {

constexpr double kSixOverPi2 = 6.0 / (std::numbers::pi * std::numbers::pi);

const ArithSequence& mu_1e6() {
    static const ArithSequence s = sieve_mobius(1'000'000);
    return s;
}

}  // namespace

TEST(Sieve, SmallValues) {
    const auto om = sieve_omega(100);
    EXPECT_EQ(om[8], 3);
    EXPECT_EQ(om[12], 3);
    EXPECT_EQ(om[1], 0);
    const auto mu = sieve_mobius(100);
    EXPECT_EQ(mu[1], 1);
    EXPECT_EQ(mu[4], 0);
    EXPECT_EQ(mu[30], -1);
    const auto la = sieve_liouville(100);
    EXPECT_EQ(la[2], -1);
    EXPECT_EQ(la[4], 1);
}

TEST(Sieve, LiouvilleFirstEightFrozen) {
    const std::vector<int> expected{1, -1, -1, 1, -1, 1, -1, -1};
    const auto la = sieve_liouville(8);
    for (std::size_t n = 1; n <= 8; ++n) {
        EXPECT_EQ(la[n], expected[n - 1]) << n;
        EXPECT_EQ(oracle::lambda(n), expected[n - 1]) << n;
    }
}

TEST(Sieve, MatchesTrialDivisionUpTo1e5) {
    const std::size_t n_max = 100'000;
    const auto om = sieve_omega(n_max);
    const auto mu = sieve_mobius(n_max);
    const auto la = sieve_liouville(n_max);
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto f = oracle::factor(n);
        ASSERT_EQ(om[n], f.omega) << n;
        ASSERT_EQ(mu[n], oracle::mu(n)) << n;
        ASSERT_EQ(la[n], oracle::lambda(n)) << n;
    }
}

TEST(Sieve, BruteForceOracle) {
    EXPECT_EQ(brute_force_oracle(60), (OracleValues{4, 0, 1}));
    EXPECT_EQ(brute_force_oracle(97), (OracleValues{1, -1, -1}));
    EXPECT_EQ(brute_force_oracle(1), (OracleValues{0, 1, 1}));
    EXPECT_EQ(brute_force_oracle(9'999'991).omega, 1);  // prime
    EXPECT_THROW(brute_force_oracle(0), RangeError);
    EXPECT_THROW(brute_force_oracle(10'000'001), RangeError);
}

TEST(Sieve, SegmentSizeDoesNotChangeOutput) {
    for (auto kind : {SequenceKind::omega, SequenceKind::mobius, SequenceKind::liouville}) {
        SieveConfig a, b, c;
        a.n_max = b.n_max = c.n_max = 300'007;
        a.segment_size = 1 << 20;  // larger than n_max: one segment
        b.segment_size = 997;
        c.segment_size = 65536;
        c.threads = 3;
        const auto ref = sieve(kind, a);
        EXPECT_EQ(ref, sieve(kind, b));
        EXPECT_EQ(ref, sieve(kind, c));
    }
}

TEST(Sieve, SegmentsStraddlingLargeRange) {
    // a window near 2*10^6 through a small segment size
    SieveConfig cfg;
    cfg.n_max = 2'000'000;
    cfg.segment_size = 4099;
    const auto mu = sieve(SequenceKind::mobius, cfg);
    for (std::size_t n = cfg.n_max - 5000; n <= cfg.n_max; ++n) ASSERT_EQ(mu[n], oracle::mu(n)) << n;
}

TEST(Sieve, MultiplicativeOnCoprimePairs) {
    const std::size_t n_max = 1'000'000;
    const auto mu = sieve_mobius(n_max);
    const auto la = sieve_liouville(n_max);
    std::mt19937_64 rng(2024);
    int tested = 0;
    while (tested < 10'000) {
        const std::size_t a = 1 + rng() % 1000;
        const std::size_t b = 1 + rng() % (n_max / a);
        if (std::gcd(a, b) != 1) continue;
        ASSERT_EQ(mu[a * b], mu[a] * mu[b]) << a << "*" << b;
        ASSERT_EQ(la[a * b], la[a] * la[b]) << a << "*" << b;
        ++tested;
    }
}

TEST(Sieve, MobiusAgreesWithLiouvilleOffSquares) {
    const auto mu = sieve_mobius(200'000);
    const auto la = sieve_liouville(200'000);
    for (std::size_t n = 1; n <= 200'000; ++n) {
        if (mu[n] != 0) {
            ASSERT_EQ(mu[n], la[n]) << n;
        }
    }
}

TEST(Sieve, OmegaOneIsOneSwitch) {
    SieveConfig cfg;
    cfg.n_max = 50;
    cfg.omega_one_is_one = true;
    EXPECT_EQ(sieve(SequenceKind::omega, cfg)[1], 1);
    EXPECT_EQ(sieve(SequenceKind::liouville, cfg)[1], -1);
    EXPECT_EQ(sieve(SequenceKind::mobius, cfg)[1], 1);
    EXPECT_EQ(sieve(SequenceKind::liouville, cfg)[2], -1);
}

TEST(Sieve, CapacityAndDomainErrors) {
    SieveConfig cfg;
    cfg.n_max = 10'000'000;
    cfg.memory_budget_bytes = 1'000'000;
    EXPECT_THROW(sieve(SequenceKind::mobius, cfg), CapacityError);
    cfg.memory_budget_bytes = std::size_t{1} << 30;
    EXPECT_THROW(sieve(SequenceKind::custom, cfg), DomainError);
    cfg.n_max = 0;
    EXPECT_THROW(sieve(SequenceKind::mobius, cfg), Error);
}

TEST(Sieve, FaultInjectionFlipsOneValue) {
    SieveConfig cfg;
    cfg.n_max = 100;
    cfg.fault_flip_index = 30;
    const auto mu = sieve(SequenceKind::mobius, cfg);
    EXPECT_EQ(mu[30], 1);
    EXPECT_EQ(mu[29], -1);
}

TEST(Mertens, SpotValuesFrozen) {
    const auto& mu = mu_1e6();
    EXPECT_EQ(mertens(mu, 1), 1);
    EXPECT_EQ(mertens(mu, 2), 0);
    EXPECT_EQ(mertens(mu, 100), 1);
    EXPECT_EQ(mertens(mu, 1000), 2);
    EXPECT_EQ(mertens(mu, 10'000), -23);
    EXPECT_EQ(mertens(mu, 10'000), oracle::mertens(10'000));
    EXPECT_THROW(mertens(mu, 1'000'001), RangeError);
    EXPECT_THROW(mertens(sieve_liouville(10), 5), DomainError);
}

TEST(Dirichlet, PartialSums) {
    const auto& mu = mu_1e6();
    EXPECT_DOUBLE_EQ(dirichlet_partial(mu, 2.0, 1), 1.0);
    // trial-division oracle value at 10^6: 0.60792710204046184
    EXPECT_NEAR(dirichlet_partial(mu, 2.0, 1'000'000), 0.60792710204046184, 1e-12);
    EXPECT_NEAR(dirichlet_partial(mu, 2.0, 1'000'000), kSixOverPi2, 1e-3);
    const auto la = sieve_liouville(1'000'000);
    EXPECT_NEAR(dirichlet_partial(la, 2.0, 1'000'000), std::numbers::pi * std::numbers::pi / 15.0, 1e-3);
    EXPECT_THROW(dirichlet_partial(mu, 1.0, 10), DomainError);
}

TEST(Dirichlet, SquarefreeDensity) {
    // trial-division oracle count at 10^6: 607926
    EXPECT_DOUBLE_EQ(squarefree_density(mu_1e6(), 1'000'000), 0.607926);
    EXPECT_NEAR(squarefree_density(mu_1e6(), 1'000'000), kSixOverPi2, 0.002);
}

TEST(Sequence, KindParsingAndCustomValidation) {
    EXPECT_EQ(parse_kind("mu"), SequenceKind::mobius);
    EXPECT_EQ(parse_kind("liouville"), SequenceKind::liouville);
    EXPECT_THROW(parse_kind("zeta"), ConfigError);
    EXPECT_THROW(CustomSequence({0.5, 1.5}), DomainError);
    const CustomSequence c({0.5, -1.0});
    EXPECT_EQ(c[2], -1.0);
    EXPECT_EQ(c.n_max(), 2u);
}
