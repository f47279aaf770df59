#include "fft.hpp"

#include <mutex>
#include <stdexcept>

namespace coincars::detail {

namespace {
// FFTW's planner is not reentrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

fftw_complex* as_fftw(std::span<complex> d) { return reinterpret_cast<fftw_complex*>(d.data()); }
} // namespace

FftPlan::FftPlan(std::size_t n) : n_(n)
{
    std::vector<complex> scratch(n);
    auto* buf = as_fftw(scratch);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    forward_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, flags);
    if (forward_ == nullptr || backward_ == nullptr)
        throw std::runtime_error("FFTW planning failed");
}

FftPlan::~FftPlan()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
}

void FftPlan::forward(std::span<complex> data) const
{
    fftw_execute_dft(forward_, as_fftw(data), as_fftw(data));
}

void FftPlan::backward(std::span<complex> data) const
{
    fftw_execute_dft(backward_, as_fftw(data), as_fftw(data));
}

std::size_t next_pow2(std::size_t n) noexcept
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

} // namespace coincars::detail
