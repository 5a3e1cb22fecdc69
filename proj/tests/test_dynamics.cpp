#include <gtest/gtest.h>

#include <random>

#include "mlcorr/correlation.hpp"
#include "mlcorr/dynamics.hpp"
#include "mlcorr/random.hpp"
#include "mlcorr/sieve.hpp"
#include "oracles.hpp"

using namespace mlcorr;

namespace {

const ArithSequence& mu_seq() {
    static const ArithSequence s = sieve_mobius(200'000);
    return s;
}

const DynamicalSystemSpec kRotation{SystemKind::rotation, kDefaultAlpha};
const DynamicalSystemSpec kSkew{SystemKind::affine_skew, kDefaultAlpha};

cplx to_cplx(oracle::cld z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

TEST(Orbit, ClosedFormExamples) {
    const DynamicalSystemSpec rot{SystemKind::rotation, 0.25};
    EXPECT_NEAR(orbit_value(rot, {0.3, 0.0}, 0)[0], 0.3, 1e-16);
    EXPECT_NEAR(orbit_value(rot, {0.3, 0.0}, 4)[0], 0.3, 1e-15);
    const DynamicalSystemSpec skew{SystemKind::affine_skew, 0.3};
    const auto p = orbit_value(skew, {0.0, 0.0}, 2);
    EXPECT_NEAR(p[0], 0.6, 1e-15);
    EXPECT_NEAR(p[1], 0.2, 1e-15);
    EXPECT_EQ(rot.dimension(), 1);
    EXPECT_EQ(skew.dimension(), 2);
}

TEST(Orbit, ClosedFormMatchesLongDoubleStepping) {
    for (bool skew : {false, true}) {
        const DynamicalSystemSpec sys{skew ? SystemKind::affine_skew : SystemKind::rotation, kDefaultAlpha};
        const std::array<double, 2> x0{0.123, 0.456};
        long double x = x0[0], y = x0[1];
        std::uint64_t done = 0;
        for (std::uint64_t n : {1u, 10u, 100u, 1000u, 5000u}) {
            const auto s = oracle::step_orbit(skew, kDefaultAlpha, x, y, n - done);
            x = s[0];
            y = s[1];
            done = n;
            const auto c = orbit_value(sys, x0, n);
            EXPECT_LT(oracle::circle_gap(c[0], x), 1e-12) << n;
            EXPECT_LT(oracle::circle_gap(c[1], y), 1e-11) << n;
        }
    }
}

TEST(Orbit, StaysInUnitTorus) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 1000; ++i) {
        const auto p = orbit_value(kSkew, {unit_uniform(rng), unit_uniform(rng)}, rng() % 10'000'000);
        for (double c : p) {
            EXPECT_GE(c, 0.0);
            EXPECT_LT(c, 1.0);
        }
    }
}

TEST(Observable, EvaluationAndBounds) {
    const auto p = TorusPoint::from_doubles(0.25, 0.5);
    EXPECT_NEAR(std::abs(Observable::character(1)(p) - cplx(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(Observable::character(0, 1)(p) - cplx(-1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(Observable::character(-1, 0)(p) - cplx(0, -1)), 0.0, 1e-15);
    Observable mix;
    mix.terms = {{cplx(0.5, 0), {1, 0}}, {cplx(0, 0.25), {2, 3}}};
    EXPECT_DOUBLE_EQ(mix.sup_bound(), 0.75);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i)
        EXPECT_LE(std::abs(mix(TorusPoint::from_doubles(unit_uniform(rng), unit_uniform(rng)))), 0.75 + 1e-15);
    EXPECT_EQ(Observable::constant()(p), cplx(1.0, 0.0));
}

TEST(Birkhoff, ConstantObservableGivesMertens) {
    const auto v = weighted_birkhoff(mu_seq(), Observable::constant(), kRotation, TorusPoint{}, 10'000);
    EXPECT_NEAR(v.real(), -23.0 / 10'000, 1e-15);
    EXPECT_NEAR(v.imag(), 0.0, 1e-15);
}

TEST(Birkhoff, RotationCharacterIsExponentialSum) {
    const double x0 = 0.17;
    const std::size_t N = 5000;
    const auto v = weighted_birkhoff(mu_seq(), Observable::character(1), kRotation,
                                     TorusPoint::from_doubles(x0), N);
    const auto b = coefficients(mu_seq(), N);
    const cplx ref = Phase::from_double(x0).character() * to_cplx(oracle::exp_sum(b, kDefaultAlpha)) / double(N);
    EXPECT_LT(std::abs(v - ref), 1e-12);
}

TEST(Birkhoff, SkewCharacterIsQuadraticPhase) {
    // f(T^n x) = e(y0 + 2 n x0 + n^2 alpha); with x0 = y0 = 0 only n^2 alpha is left
    const std::size_t N = 10'000;
    const auto v = weighted_birkhoff(mu_seq(), Observable::character(0, 1), kSkew, TorusPoint{}, N);
    EXPECT_NEAR(std::abs(v), quad_phase_sum(mu_seq(), N, kDefaultAlpha, 0.0), 1e-12);
    const auto shifted = weighted_birkhoff(mu_seq(), Observable::character(0, 1), kSkew,
                                           TorusPoint::from_doubles(0.125, 0.3), N);
    EXPECT_NEAR(std::abs(shifted), quad_phase_sum(mu_seq(), N, kDefaultAlpha, 0.25), 1e-12);
}

TEST(Birkhoff, RangeError) {
    EXPECT_THROW(weighted_birkhoff(sieve_mobius(10), Observable::constant(), kRotation, TorusPoint{}, 11),
                 RangeError);
}

TEST(CubicWeighted, ConstantObservablesReduceToCubicAverage) {
    const auto one = Observable::constant();
    const CubicSystems cs{one, one, one, kRotation, kRotation, kRotation};
    for (std::size_t N : {10u, 100u, 1000u}) {
        const auto v = cubic_weighted_average(mu_seq(), cs, TorusPoint{}, N);
        EXPECT_NEAR(v.real(), cubic_average(mu_seq(), N), 1e-12);
        EXPECT_NEAR(v.imag(), 0.0, 1e-12);
    }
    const CustomSequence all(std::vector<double>(200, 1.0));
    EXPECT_NEAR(std::abs(cubic_weighted_average(all, cs, TorusPoint{}, 100) - cplx(1.0)), 0.0, 1e-12);
}

TEST(CubicWeighted, FastPathMatchesDoubleLoop) {
    const auto f = Observable::character(1);
    const CubicSystems cs{f, f, f, kRotation, kRotation, kRotation};
    const auto x0 = TorusPoint::from_doubles(0.2);
    const auto fast = cubic_weighted_average(mu_seq(), cs, x0, 512);
    EXPECT_LT(std::abs(fast - cubic_weighted_average_direct(mu_seq(), cs, x0, 512)), 1e-9);

    // literal loop with closed-form phases in long double
    oracle::cld s = 0;
    const auto mu = oracle::mu_table(1024);
    for (std::size_t n = 1; n <= 512; ++n)
        for (std::size_t m = 1; m <= 512; ++m) {
            const long double a = kDefaultAlpha;
            const long double ph = (0.2L + n * a) + (0.2L + m * a) + (0.2L + (n + m) * a);
            s += static_cast<long double>(mu[n] * mu[m] * mu[n + m]) * oracle::expi(std::fmod(ph, 1.0L));
        }
    EXPECT_LT(std::abs(fast - to_cplx(s / (512.0L * 512.0L))), 1e-12);
}

TEST(CubicWeighted, RandomConfigurations) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto pick_sys = [&] {
            return DynamicalSystemSpec{rng() % 2 ? SystemKind::rotation : SystemKind::affine_skew,
                                       unit_uniform(rng)};
        };
        auto pick_obs = [&] {
            Observable o;
            o.terms = {{random_unit_disc(rng), {int(rng() % 7) - 3, int(rng() % 5) - 2}},
                       {random_unit_disc(rng), {int(rng() % 7) - 3, int(rng() % 5) - 2}}};
            return o;
        };
        const CubicSystems cs{pick_obs(), pick_obs(), pick_obs(), pick_sys(), pick_sys(), pick_sys()};
        const std::size_t N = 1 + rng() % 512;
        const auto w = random_sign_sequence(2 * N, rng());
        const auto x0 = TorusPoint::from_doubles(unit_uniform(rng), unit_uniform(rng));
        EXPECT_LT(std::abs(cubic_weighted_average(w, cs, x0, N) - cubic_weighted_average_direct(w, cs, x0, N)),
                  1e-9)
            << trial;
    }
}

TEST(WienerWintner, ConstantObservableIsDavenportSup) {
    const auto br = ww_sup(mu_seq(), Observable::constant(), kRotation, TorusPoint{}, 3000);
    const auto ref = certified_sup(coefficients(mu_seq(), 3000));
    EXPECT_NEAR(br.lower, ref.lower / 3000, 1e-12);
    EXPECT_NEAR(br.upper, ref.upper / 3000, 1e-12);
}

TEST(WienerWintner, RotationCharacterOnlyShiftsTheArgmax) {
    const auto plain = ww_sup(mu_seq(), Observable::constant(), kRotation, TorusPoint{}, 3000);
    const auto rot = ww_sup(mu_seq(), Observable::character(1), kRotation, TorusPoint::from_doubles(0.4), 3000);
    // same |S(t)| up to a shift in t: the brackets must overlap
    EXPECT_LE(rot.lower, plain.upper);
    EXPECT_LE(plain.lower, rot.upper);
}

TEST(WienerWintner, UnimodularScalingInvariance) {
    const auto f = Observable::character(0, 1);
    const auto g = f.scaled(std::polar(1.0, 1.234));
    const auto a = ww_sup(mu_seq(), f, kSkew, TorusPoint::from_doubles(0.1, 0.2), 4000);
    const auto b = ww_sup(mu_seq(), g, kSkew, TorusPoint::from_doubles(0.1, 0.2), 4000);
    EXPECT_NEAR(a.lower, b.lower, 1e-9);
    EXPECT_NEAR(a.upper, b.upper, 1e-9);
    EXPECT_LE(a.grid_max, a.upper);
    EXPECT_LE(a.grid_max, a.lower + 1e-15);
}

TEST(WienerWintner, SkewValueDecreases) {
    const auto f = Observable::character(0, 1);
    const auto small = ww_sup(mu_seq(), f, kSkew, TorusPoint{}, 1000);
    const auto large = ww_sup(mu_seq(), f, kSkew, TorusPoint{}, 10'000);
    EXPECT_LT(large.upper, small.lower);
}

TEST(Kbsz, ConstantObservableHasUnitSups) {
    const auto rep = kbsz_quantity("mobius", Observable::constant(), kRotation, TorusPoint{}, 0.3, 2000);
    // primes below e^{10/3} = 28.03: 2..23, nine primes, 36 pairs
    EXPECT_EQ(rep.pairs.size(), 36u);
    for (const auto& p : rep.pairs) {
        EXPECT_LT(p.p, p.q);
        EXPECT_NEAR(p.sup_lower, 1.0, 1e-10);
        EXPECT_NEAR(p.sup_upper, 1.0, 1e-10);
    }
    EXPECT_FALSE(rep.hypothesis_holds);
    EXPECT_NEAR(rep.bound, 2.0 * std::sqrt(0.3 * std::log(1.0 / 0.3)), 1e-15);
}

TEST(Kbsz, TooFewPrimesGivesEmptyReport) {
    // e^{1/0.95} = 2.86: only the prime 2
    const auto rep = kbsz_quantity("mobius", Observable::character(1), kRotation, TorusPoint{}, 0.95, 100);
    EXPECT_TRUE(rep.pairs.empty());
    EXPECT_FALSE(rep.hypothesis_holds);
}

TEST(Kbsz, CapAndDomainErrors) {
    EXPECT_THROW(kbsz_quantity("mobius", Observable::character(1), kRotation, TorusPoint{}, 0.1, 10),
                 CapacityError);
    // e^5 = 148.4: 34 primes
    EXPECT_THROW(kbsz_quantity("mobius", Observable::character(1), kRotation, TorusPoint{}, 0.2, 10, {}, 33),
                 CapacityError);
    EXPECT_EQ(kbsz_quantity("mobius", Observable::character(1), kRotation, TorusPoint{}, 0.2, 10, {}, 34).pairs.size(),
              34u * 33u / 2u);
    EXPECT_THROW(kbsz_quantity("mobius", Observable::character(1), kRotation, TorusPoint{}, 0.0, 10), DomainError);
    EXPECT_THROW(kbsz_quantity("mobius", Observable::character(1).scaled(2.0), kRotation, TorusPoint{}, 0.5, 10),
                 DomainError);
}

TEST(Kbsz, RotationCharacterFrozen) {
    // c_n = e((p + q) n alpha + 2 x0) is a pure phase: every sup is 1
    const auto rep = kbsz_quantity("mobius", Observable::character(1), kRotation, TorusPoint{}, 0.25, 10'000);
    ASSERT_EQ(rep.pairs.size(), 120u);  // 16 primes below e^4
    EXPECT_EQ(rep.pairs.front().p, 2u);
    EXPECT_EQ(rep.pairs.front().q, 3u);
    EXPECT_EQ(rep.pairs.back().p, 47u);
    EXPECT_EQ(rep.pairs.back().q, 53u);
    for (const auto& p : rep.pairs) {
        EXPECT_NEAR(p.sup_lower, 1.0, 1e-10);
        EXPECT_NEAR(p.sup_upper, 1.0, 1e-10);
    }
    EXPECT_NEAR(rep.max_sup, 1.0, 1e-10);
    EXPECT_FALSE(rep.hypothesis_holds);
}

TEST(Kbsz, SkewCharacterFrozen) {
    const auto rep =
        kbsz_quantity("mobius", Observable::character(0, 1), kSkew, TorusPoint{}, 0.25, 10'000, {}, 200, 2);
    ASSERT_EQ(rep.pairs.size(), 120u);
    EXPECT_NEAR(rep.pairs[0].sup_lower, 0.021443143344426402, 1e-10);
    EXPECT_NEAR(rep.pairs[0].sup_upper, 0.022105099452283315, 1e-10);
    EXPECT_NEAR(rep.max_sup, 0.05369481697754494, 1e-10);
    EXPECT_TRUE(rep.hypothesis_holds);
    // pair (2, 3) against the long double oracle at the reported argmax
    std::vector<cplx> c(10'000);
    for (std::size_t n = 1; n <= c.size(); ++n) {
        const long double a = kDefaultAlpha;
        c[n - 1] = to_cplx(oracle::expi(std::fmod(a * (2.0L * n) * (2.0L * n) + a * (3.0L * n) * (3.0L * n), 1.0L)));
    }
    const auto br = certified_sup(c);
    EXPECT_NEAR(br.lower / 1e4, rep.pairs[0].sup_lower, 1e-9);
}

TEST(Vdc, InequalityHoldsOnRandomInputs) {
    std::mt19937_64 rng(123);
    for (int draw = 0; draw < 300; ++draw) {
        const std::size_t N = 1 + rng() % 64;
        std::vector<cplx> u(N);
        for (auto& z : u) z = random_unit_disc(rng);
        const auto root = std::min(static_cast<std::size_t>(std::sqrt(double(N))), N - 1);
        for (std::size_t H : {std::size_t{0}, std::min<std::size_t>(1, N - 1), root, N - 1}) {
            const auto r = vdc_check(u, H);
            ASSERT_LE(r.lhs, r.rhs + 1e-12) << draw << " H=" << H;
        }
    }
}

TEST(Vdc, LiteralFormula) {
    std::mt19937_64 rng(5);
    std::vector<cplx> u(20);
    for (auto& z : u) z = random_unit_disc(rng);
    const std::size_t N = 20, H = 4;
    oracle::cld mean = 0;
    long double energy = 0, shifted = 0;
    for (auto z : u) {
        mean += oracle::cld(z);
        energy += std::norm(oracle::cld(z));
    }
    for (std::size_t h = 1; h <= H; ++h) {
        long double re = 0;
        for (std::size_t n = 0; n + h < N; ++n) re += (oracle::cld(u[n + h]) * std::conj(oracle::cld(u[n]))).real();
        shifted += (H + 1 - h) * re;
    }
    const long double lhs = std::norm(mean / (long double)N);
    const long double rhs = (N + H) * energy / (N * N * (H + 1.0L)) + 2.0L * (N + H) * shifted / (N * N * (H + 1.0L) * (H + 1.0L));
    const auto r = vdc_check(u, H);
    EXPECT_NEAR(r.lhs, static_cast<double>(lhs), 1e-15);
    EXPECT_NEAR(r.rhs, static_cast<double>(rhs), 1e-14);
    // H = 0 is the trivial bound |mean|^2 <= mean |u|^2
    EXPECT_NEAR(vdc_check(u, 0).rhs, static_cast<double>(energy / N), 1e-15);
}

TEST(Vdc, Errors) {
    std::vector<cplx> u(5, 1.0);
    EXPECT_THROW(vdc_check(u, 5), RangeError);
    EXPECT_THROW(vdc_check(std::vector<cplx>{}, 0), DomainError);
}
