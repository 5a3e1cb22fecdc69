// random.hpp
// Seeded test inputs. Values are derived from raw mt19937_64 bits rather
// than std distributions so they are identical across standard libraries.

#pragma once
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mlcorr/numeric.hpp"
#include "mlcorr/sequence.hpp"

namespace mlcorr {

inline double unit_uniform(std::mt19937_64& rng) { return std::ldexp(static_cast<double>(rng() >> 11), -53); }

inline std::vector<double> random_signs(std::size_t n, std::mt19937_64& rng) {
    std::vector<double> v(n);
    for (auto& x : v) x = (rng() >> 63) ? 1.0 : -1.0;
    return v;
}

inline CustomSequence random_sign_sequence(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return CustomSequence(random_signs(n, rng));
}

// Uniform in the closed unit disc.
inline cplx random_unit_disc(std::mt19937_64& rng) {
    const double r = std::sqrt(unit_uniform(rng));
    const double theta = 2.0 * std::numbers::pi * unit_uniform(rng);
    return std::polar(r, theta);
}

}  // namespace mlcorr
