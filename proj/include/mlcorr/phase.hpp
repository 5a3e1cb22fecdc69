// phase.hpp
// Points of the circle R/Z as 64-bit fixed-point fractions. Addition and
// integer multiples wrap modulo 2^64, i.e. exactly modulo 1, so quantities
// such as alpha*n^2 mod 1 carry no error beyond the initial rounding of
// alpha to a multiple of 2^-64.

#pragma once
#include <cmath>
#include <algorithm>
#include <cstdint>
#include <numbers>

#include "mlcorr/numeric.hpp"

namespace mlcorr {

class Phase {
public:
    constexpr Phase() = default;
    static constexpr Phase from_raw(std::uint64_t raw) { return Phase(raw); }

    // x mod 1 rounded to the nearest multiple of 2^-64
    static Phase from_double(double x) {
        const long double scaled = std::round(std::ldexp(static_cast<long double>(frac(x)), 64));
        if (scaled >= std::ldexp(1.0L, 64)) return Phase(0);
        return Phase(static_cast<std::uint64_t>(scaled));
    }

    constexpr std::uint64_t raw() const { return raw_; }
    double to_double() const { return std::ldexp(static_cast<double>(raw_ >> 11), -53); }

    constexpr Phase operator+(Phase o) const { return Phase(raw_ + o.raw_); }
    constexpr Phase operator-(Phase o) const { return Phase(raw_ - o.raw_); }
    constexpr Phase operator-() const { return Phase(0 - raw_); }
    constexpr Phase& operator+=(Phase o) {
        raw_ += o.raw_;
        return *this;
    }
    // k * x mod 1, exact for any integer k (mod 2^64)
    constexpr Phase times(std::uint64_t k) const { return Phase(raw_ * k); }

    // e^{2 pi i x}
    cplx character() const {
        // signed representative in [-1/2, 1/2) keeps the angle small
        const auto s = static_cast<std::int64_t>(raw_);
        const double angle = std::ldexp(static_cast<double>(s), -64) * 2.0 * std::numbers::pi;
        return std::polar(1.0, angle);
    }

    friend constexpr bool operator==(Phase, Phase) = default;

private:
    constexpr explicit Phase(std::uint64_t raw) : raw_(raw) {}
    std::uint64_t raw_ = 0;
};

// Distance on R/Z between two doubles.
inline double circle_distance(double a, double b) {
    const double d = frac(a - b);
    return std::min(d, 1.0 - d);
}

}  // namespace mlcorr
