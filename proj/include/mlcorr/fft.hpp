// fft.hpp
// RAII wrapper over an in-place complex FFTW plan with an owned, aligned
// buffer. Plans are made with FFTW_ESTIMATE so the chosen algorithm (and
// therefore every output bit) is identical from run to run. The FFTW planner
// is not re-entrant; plan creation and destruction take a process-wide lock,
// execution does not.

#pragma once
#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <mutex>
#include <new>
#include <span>
#include <vector>

#include "mlcorr/numeric.hpp"

namespace mlcorr {

enum class FftDirection { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

// Unnormalized: forward uses e^{-2 pi i jk/L}, backward e^{+2 pi i jk/L}.
class FftPlan {
public:
    FftPlan(std::size_t length, FftDirection dir) : length_(length) {
        buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * length));
        if (!buffer_) throw std::bad_alloc();
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan_ = fftw_plan_dft_1d(static_cast<int>(length), buffer_, buffer_, static_cast<int>(dir),
                                 FFTW_ESTIMATE);
    }
    ~FftPlan() {
        std::lock_guard lock(detail::fftw_planner_mutex());
        if (plan_) fftw_destroy_plan(plan_);
        fftw_free(buffer_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return length_; }
    std::span<cplx> data() noexcept { return {reinterpret_cast<cplx*>(buffer_), length_}; }
    std::span<const cplx> data() const noexcept {
        return {reinterpret_cast<const cplx*>(buffer_), length_};
    }
    void zero() noexcept {
        for (auto& z : data()) z = cplx{};
    }
    void execute() noexcept { fftw_execute(plan_); }

private:
    std::size_t length_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan plan_ = nullptr;
};

// Linear convolution of two complex sequences (x * y)[k] = sum_i x[i] y[k-i],
// length x.size() + y.size() - 1.
inline std::vector<cplx> fft_convolve(std::span<const cplx> x, std::span<const cplx> y) {
    if (x.empty() || y.empty()) return {};
    const std::size_t out_len = x.size() + y.size() - 1;
    const std::size_t L = next_pow2(out_len);
    FftPlan fx(L, FftDirection::forward), fy(L, FftDirection::forward);
    FftPlan inv(L, FftDirection::backward);
    fx.zero();
    fy.zero();
    std::copy(x.begin(), x.end(), fx.data().begin());
    std::copy(y.begin(), y.end(), fy.data().begin());
    fx.execute();
    fy.execute();
    auto a = fx.data(), b = fy.data(), c = inv.data();
    for (std::size_t k = 0; k < L; ++k) c[k] = a[k] * b[k];
    inv.execute();
    std::vector<cplx> out(out_len);
    const double scale = 1.0 / static_cast<double>(L);
    for (std::size_t k = 0; k < out_len; ++k) out[k] = c[k] * scale;
    return out;
}

}  // namespace mlcorr
