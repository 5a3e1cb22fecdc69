// spectral.hpp
// Exponential sums S(t) = sum_{n=1}^{N} b_n e^{2 pi i n t}: grid profiles via
// a zero-padded transform, certified suprema over t, Davenport-type decay
// scans and quadratic-phase sums.
//
// Certificate. With n_lo, n_hi the first and last nonzero coefficients,
// e^{-pi i (n_lo+n_hi) t} S(t) has exponential type pi (n_hi - n_lo), so by
// Bernstein |S|' <= pi (n_hi - n_lo) sup|S|. Every t is within 1/(2M) of a
// grid point, hence
//     sup|S| <= grid_max / (1 - pi (n_hi - n_lo) / (2M)).
// The triangle bound sum |b_n| is also an upper bound; the smaller is used.
// The lower bound is a direct evaluation of |S| after golden-section search
// around the best grid cells.

#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "mlcorr/error.hpp"
#include "mlcorr/fft.hpp"
#include "mlcorr/numeric.hpp"
#include "mlcorr/parallel.hpp"
#include "mlcorr/phase.hpp"
#include "mlcorr/sequence.hpp"

namespace mlcorr {

struct SupOptions {
    std::size_t grid = 0;  // base grid M; 0 selects next_pow2(8N)
    double target_ratio = 1.05;
    int max_doublings = 6;
    std::size_t refine_cells = 8;
    int golden_iterations = 40;
};

struct SupBracket {
    double grid_max = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double argmax = 0.0;  // phase t where `lower` was attained
    std::size_t effective_grid = 0;
    int doublings = 0;
    bool certified = false;  // Bernstein grid certificate was available
};

struct PhaseProfile {
    std::size_t N = 0;
    std::size_t M = 0;
    std::vector<cplx> samples;  // S(k/M), k = 0..M-1
    double grid_max = 0.0;
    double refined_sup_lower = std::numeric_limits<double>::quiet_NaN();
    double certified_sup_upper = std::numeric_limits<double>::quiet_NaN();
    bool certified = false;
    std::vector<cplx> coeffs;  // b_1..b_N at positions 0..N-1
};

inline std::size_t default_grid(std::size_t N) { return next_pow2(8 * N); }

template <WeightSequence S>
std::vector<cplx> coefficients(const S& seq, std::size_t N) {
    require_length(seq, N, "coefficients");
    std::vector<cplx> b(N);
    for (std::size_t n = 1; n <= N; ++n) b[n - 1] = static_cast<double>(seq[n]);
    return b;
}

// S(t) evaluated directly; t is taken on the 2^-64 grid.
inline cplx evaluate_exp_sum(std::span<const cplx> b, Phase t) {
    constexpr std::size_t kBlock = 64;
    const cplx step = t.character();
    const std::size_t blocks = (b.size() + kBlock - 1) / kBlock;
    return pairwise_sum_of<cplx>(0, blocks, [&](std::size_t blk) {
        const std::size_t first = blk * kBlock;
        const std::size_t last = std::min(b.size(), first + kBlock);
        cplx z = t.times(first + 1).character();
        cplx acc{};
        for (std::size_t i = first; i < last; ++i) {
            acc += b[i] * z;
            z *= step;
        }
        return acc;
    });
}

inline cplx evaluate_exp_sum(std::span<const cplx> b, double t) {
    return evaluate_exp_sum(b, Phase::from_double(t));
}

namespace detail {

struct Support {
    std::size_t lo = 0, hi = 0;  // 1-based indices of first/last nonzero
    bool empty = true;
};

inline Support support_of(std::span<const cplx> b) {
    Support s;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] != cplx{}) {
            if (s.empty) s.lo = i + 1;
            s.hi = i + 1;
            s.empty = false;
        }
    return s;
}

inline double bernstein_fraction(const Support& s, std::size_t grid) {
    if (s.empty) return 0.0;
    return std::numbers::pi * static_cast<double>(s.hi - s.lo) / (2.0 * static_cast<double>(grid));
}

inline double triangle_bound(std::span<const cplx> b) {
    return pairwise_sum_of<double>(0, b.size(), [&](std::size_t i) { return std::abs(b[i]); });
}

// Keeps the `capacity` largest grid values seen.
class TopCells {
public:
    explicit TopCells(std::size_t capacity) : capacity_(capacity) {}

    void offer(double value, std::uint64_t phase_raw) {
        if (heap_.size() < capacity_) {
            heap_.emplace(value, phase_raw);
        } else if (value > heap_.top().first) {
            heap_.pop();
            heap_.emplace(value, phase_raw);
        }
    }

    // Best cells, at least `min_sep` apart on the circle (raw units).
    std::vector<std::uint64_t> distinct(std::size_t count, std::uint64_t min_sep) const {
        auto copy = heap_;
        std::vector<std::pair<double, std::uint64_t>> all;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        std::vector<std::uint64_t> picked;
        for (const auto& [v, p] : all) {
            if (picked.size() >= count) break;
            bool near = false;
            for (auto q : picked) {
                const std::uint64_t d = p - q;
                if (std::min(d, 0 - d) < min_sep) near = true;
            }
            if (!near) picked.push_back(p);
        }
        return picked;
    }

private:
    using Entry = std::pair<double, std::uint64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
    std::size_t capacity_;
};

inline std::uint64_t grid_step_raw(std::size_t grid) {
    // 2^64 / grid, exact for power-of-two grids
    return static_cast<std::uint64_t>(std::ldexp(1.0L, 64) / static_cast<long double>(grid));
}

// Golden-section maximization of |S| on [center - half, center + half].
inline std::pair<double, Phase> golden_refine(std::span<const cplx> b, Phase center, std::uint64_t half,
                                              int iterations) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto at = [&](double u) {  // u in [0, 1] across the interval
        const auto off = static_cast<std::uint64_t>(u * static_cast<double>(2 * half));
        return center - Phase::from_raw(half) + Phase::from_raw(off);
    };
    auto value = [&](Phase t) { return std::abs(evaluate_exp_sum(b, t)); };

    double best = value(center);
    Phase best_t = center;
    double a = 0.0, c = 1.0;
    double x1 = c - invphi * (c - a), x2 = a + invphi * (c - a);
    Phase t1 = at(x1), t2 = at(x2);
    double f1 = value(t1), f2 = value(t2);
    for (int it = 0; it < iterations; ++it) {
        if (f1 > best) best = f1, best_t = t1;
        if (f2 > best) best = f2, best_t = t2;
        if (f1 < f2) {
            a = x1;
            x1 = x2, f1 = f2, t1 = t2;
            x2 = a + invphi * (c - a);
            t2 = at(x2);
            f2 = value(t2);
        } else {
            c = x2;
            x2 = x1, f2 = f1, t2 = t1;
            x1 = c - invphi * (c - a);
            t1 = at(x1);
            f1 = value(t1);
        }
    }
    if (f1 > best) best = f1, best_t = t1;
    if (f2 > best) best = f2, best_t = t2;
    return {best, best_t};
}

// Adds the grid values of one shifted transform (slice j of `slices` over
// base grid M) to `cells` and returns the slice maximum.
inline double scan_slice(std::span<const cplx> b, std::size_t M, std::size_t slice, std::size_t slices,
                         FftPlan& plan, TopCells& cells, std::vector<cplx>* keep = nullptr) {
    const std::size_t grid = M * slices;
    const Phase shift = slices == 1 ? Phase{}
                                    : (is_pow2(grid) ? Phase::from_raw(grid_step_raw(grid) * slice)
                                                     : Phase::from_double(static_cast<double>(slice) /
                                                                          static_cast<double>(grid)));
    plan.zero();
    auto x = plan.data();
    for (std::size_t n = 1; n <= b.size(); ++n)
        x[n % M] += slice == 0 ? b[n - 1] : b[n - 1] * shift.times(n).character();
    plan.execute();
    double mx = 0.0;
    const std::uint64_t step = grid_step_raw(grid);
    const bool exact = is_pow2(grid);
    for (std::size_t k = 0; k < M; ++k) {
        const double v = std::abs(x[k]);
        mx = std::max(mx, v);
        const std::uint64_t raw =
            exact ? step * (k * slices + slice)
                  : Phase::from_double(static_cast<double>(k * slices + slice) / static_cast<double>(grid)).raw();
        cells.offer(v, raw);
    }
    if (keep) keep->assign(x.begin(), x.end());
    return mx;
}

}  // namespace detail

inline PhaseProfile phase_profile_coeffs(std::vector<cplx> b, std::size_t M) {
    const std::size_t N = b.size();
    if (N < 1) throw DomainError("phase_profile: N must be >= 1");
    if (M == 0) M = default_grid(N);
    if (M < 2 * N + 1)
        throw GridResolutionError("phase_profile: grid M = " + std::to_string(M) + " below 2N+1 = " +
                                  std::to_string(2 * N + 1));
    PhaseProfile p;
    p.N = N;
    p.M = M;
    FftPlan plan(M, FftDirection::backward);
    detail::TopCells ignore(1);
    p.grid_max = detail::scan_slice(b, M, 0, 1, plan, ignore, &p.samples);
    p.coeffs = std::move(b);
    return p;
}

template <WeightSequence S>
PhaseProfile phase_profile(const S& seq, std::size_t N, std::size_t M = 0) {
    return phase_profile_coeffs(coefficients(seq, N), M);
}

// Bracket from the profile's own grid (no doubling). Also stores it in the
// profile.
inline std::pair<double, double> certify_sup(PhaseProfile& profile, const SupOptions& opt = {}) {
    const auto support = detail::support_of(profile.coeffs);
    const double frac_b = detail::bernstein_fraction(support, profile.M);
    const double triangle = detail::triangle_bound(profile.coeffs);
    profile.certified = frac_b < 1.0;
    double upper = triangle;
    if (profile.certified) upper = std::min(upper, profile.grid_max / (1.0 - frac_b));

    detail::TopCells cells(opt.refine_cells * 8);
    const std::uint64_t step = detail::grid_step_raw(profile.M);
    for (std::size_t k = 0; k < profile.M; ++k)
        cells.offer(std::abs(profile.samples[k]),
                    is_pow2(profile.M) ? step * k
                                       : Phase::from_double(static_cast<double>(k) / profile.M).raw());
    double lower = profile.grid_max;
    for (auto raw : cells.distinct(opt.refine_cells, 2 * step))
        lower = std::max(lower, detail::golden_refine(profile.coeffs, Phase::from_raw(raw), step,
                                                      opt.golden_iterations)
                                    .first);
    // evaluation rounding can push |S(t)| an ulp past sum |b_n|, which no t can exceed
    lower = std::min(lower, triangle);
    upper = std::max(upper, lower);
    profile.refined_sup_lower = lower;
    profile.certified_sup_upper = upper;
    return {lower, upper};
}

// Certified bracket for sup_t |S(t)|, doubling the grid until
// upper / grid_max <= target_ratio (or max_doublings is hit). A grid of
// M * 2^d points is scanned as 2^d phase-shifted M-point transforms.
inline SupBracket certified_sup(std::span<const cplx> b, const SupOptions& opt = {}) {
    SupBracket out;
    const std::size_t N = b.size();
    if (N < 1) throw DomainError("certified_sup: N must be >= 1");
    const std::size_t M = opt.grid ? opt.grid : default_grid(N);
    if (M < 2 * N + 1)
        throw GridResolutionError("certified_sup: grid M = " + std::to_string(M) + " below 2N+1");

    const auto support = detail::support_of(b);
    const double triangle = detail::triangle_bound(b);
    FftPlan plan(M, FftDirection::backward);
    detail::TopCells cells(opt.refine_cells * 8);

    std::size_t slices = 1;
    double grid_max = detail::scan_slice(b, M, 0, 1, plan, cells);
    int d = 0;
    auto upper_for = [&](std::size_t grid, double gmax, bool& certified) {
        const double f = detail::bernstein_fraction(support, grid);
        certified = f < 1.0;
        return certified ? std::min(triangle, gmax / (1.0 - f)) : triangle;
    };
    bool certified = false;
    double upper = upper_for(M, grid_max, certified);
    while (d < opt.max_doublings && !(grid_max > 0.0 && upper / grid_max <= opt.target_ratio) &&
           !(grid_max == 0.0 && upper == 0.0)) {
        // existing grid values keep their phases; add the odd slices of the finer grid
        slices *= 2;
        ++d;
        for (std::size_t j = 1; j < slices; j += 2)
            grid_max = std::max(grid_max, detail::scan_slice(b, M, j, slices, plan, cells));
        upper = upper_for(M * slices, grid_max, certified);
    }

    const std::size_t grid = M * slices;
    const std::uint64_t step = detail::grid_step_raw(grid);
    double best = -1.0;
    Phase arg{};
    for (auto raw : cells.distinct(opt.refine_cells, 2 * step)) {
        auto [v, t] = detail::golden_refine(b, Phase::from_raw(raw), step, opt.golden_iterations);
        if (v > best) best = v, arg = t;
    }
    const double lower = std::min(std::max(grid_max, best), triangle);
    out.grid_max = grid_max;
    out.lower = lower;
    out.upper = std::max(upper, lower);
    out.argmax = arg.to_double();
    out.effective_grid = grid;
    out.doublings = d;
    out.certified = certified;
    return out;
}

// ---------------------------------------------------------------------------

struct DecayRow {
    std::size_t N = 0;
    SupBracket bracket;
    double sup_norm = 0.0;  // certified upper / N
    std::vector<std::pair<double, double>> davenport_ratio;  // (eps, sup_norm * ln(N)^eps)
};

struct DecayCurve {
    SequenceKind kind = SequenceKind::custom;
    std::vector<DecayRow> rows;
};

template <WeightSequence S>
DecayCurve decay_scan(const S& seq, std::span<const std::size_t> N_grid, std::span<const double> eps,
                      const SupOptions& opt = {}, unsigned threads = 1) {
    for (auto N : N_grid) require_length(seq, N, "decay_scan");
    DecayCurve curve{seq.kind(), std::vector<DecayRow>(N_grid.size())};
    parallel_for(N_grid.size(), threads, [&](std::size_t i) {
        const std::size_t N = N_grid[i];
        auto& row = curve.rows[i];
        row.N = N;
        row.bracket = certified_sup(coefficients(seq, N), opt);
        row.sup_norm = row.bracket.upper / static_cast<double>(N);
        const double logN = std::log(static_cast<double>(N));
        for (double e : eps) row.davenport_ratio.emplace_back(e, row.sup_norm * std::pow(logN, e));
    });
    return curve;
}

// (1/N) |sum_{n<=N} A(n) e^{2 pi i (alpha n^2 + beta n)}|
template <WeightSequence S>
double quad_phase_sum(const S& seq, std::size_t N, double alpha, double beta) {
    if (N < 1) throw DomainError("quad_phase_sum: N must be >= 1");
    require_length(seq, N, "quad_phase_sum");
    const Phase a = Phase::from_double(alpha), c = Phase::from_double(beta);
    const cplx s = pairwise_sum_of<cplx>(1, N + 1, [&](std::size_t n) {
        const std::uint64_t n64 = n;
        return static_cast<double>(seq[n]) * (a.times(n64 * n64) + c.times(n64)).character();
    });
    return std::abs(s) / static_cast<double>(N);
}

}  // namespace mlcorr
