// sequence.hpp
// Integer-indexed weight sequences A(1..n_max). Sieved arithmetic functions
// are stored one signed byte per integer; custom sequences hold doubles.

#pragma once
#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mlcorr/error.hpp"

namespace mlcorr {

enum class SequenceKind : std::uint8_t { mobius = 0, liouville = 1, omega = 2, custom = 3 };

inline std::string_view to_string(SequenceKind k) {
    switch (k) {
        case SequenceKind::mobius: return "mobius";
        case SequenceKind::liouville: return "liouville";
        case SequenceKind::omega: return "omega";
        case SequenceKind::custom: return "custom";
    }
    return "unknown";
}

inline SequenceKind parse_kind(std::string_view s) {
    if (s == "mobius" || s == "mu") return SequenceKind::mobius;
    if (s == "liouville" || s == "lambda") return SequenceKind::liouville;
    if (s == "omega") return SequenceKind::omega;
    if (s == "custom") return SequenceKind::custom;
    throw ConfigError("kind", "unknown sequence kind '" + std::string(s) + "'");
}

// Anything readable as A(n), 1 <= n <= n_max().
template <class S>
concept WeightSequence = requires(const S& s, std::size_t n) {
    { s.n_max() } -> std::convertible_to<std::size_t>;
    { s[n] } -> std::convertible_to<double>;
    { s.kind() } -> std::convertible_to<SequenceKind>;
};

class ArithSequence {
public:
    ArithSequence() = default;
    ArithSequence(SequenceKind kind, std::vector<std::int8_t> values)
        : kind_(kind), values_(std::move(values)) {
        if (kind_ == SequenceKind::custom)
            throw DomainError("ArithSequence: custom sequences use CustomSequence");
    }

    SequenceKind kind() const noexcept { return kind_; }
    std::size_t n_max() const noexcept { return values_.size(); }

    // 1-based, unchecked
    int operator[](std::size_t n) const noexcept { return values_[n - 1]; }

    int at(std::size_t n) const {
        if (n == 0 || n > values_.size())
            throw RangeError("ArithSequence: index " + std::to_string(n) + " outside [1, " +
                             std::to_string(values_.size()) + "]");
        return values_[n - 1];
    }

    const std::vector<std::int8_t>& raw() const noexcept { return values_; }
    std::vector<std::int8_t>& raw_mut() noexcept { return values_; }

    friend bool operator==(const ArithSequence&, const ArithSequence&) = default;

private:
    SequenceKind kind_ = SequenceKind::mobius;
    std::vector<std::int8_t> values_;
};

// Real weights in [-1, 1].
class CustomSequence {
public:
    CustomSequence() = default;
    explicit CustomSequence(std::vector<double> values) : values_(std::move(values)) {
        for (double v : values_)
            if (!(v >= -1.0 && v <= 1.0))
                throw DomainError("CustomSequence: values must lie in [-1, 1]");
    }

    SequenceKind kind() const noexcept { return SequenceKind::custom; }
    std::size_t n_max() const noexcept { return values_.size(); }
    double operator[](std::size_t n) const noexcept { return values_[n - 1]; }
    const std::vector<double>& raw() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

template <WeightSequence S>
void require_length(const S& seq, std::size_t needed, std::string_view what) {
    if (seq.n_max() < needed)
        throw RangeError(std::string(what) + ": needs A(1.." + std::to_string(needed) +
                         ") but sequence has n_max = " + std::to_string(seq.n_max()));
}

// A(first..last) as doubles, position 0 holding A(first).
template <WeightSequence S>
std::vector<double> dense_slice(const S& seq, std::size_t first, std::size_t last) {
    require_length(seq, last, "dense_slice");
    std::vector<double> out;
    if (last < first) return out;
    out.reserve(last - first + 1);
    for (std::size_t n = first; n <= last; ++n) out.push_back(static_cast<double>(seq[n]));
    return out;
}

}  // namespace mlcorr
