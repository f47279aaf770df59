#pragma once

#include "coincars/spectra.hpp"

#include <fftw3.h>

namespace coincars::detail {

/// In-place-capable complex FFT of fixed size; execute() is thread-safe.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);
    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const noexcept { return n_; }
    void forward(std::span<complex> data) const;
    /// Unnormalized inverse.
    void backward(std::span<complex> data) const;

private:
    std::size_t n_;
    fftw_plan forward_;
    fftw_plan backward_;
};

std::size_t next_pow2(std::size_t n) noexcept;

} // namespace coincars::detail
