#include "coincars/cars_engine.hpp"

#include "coincars/error.hpp"
#include "fft.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace coincars {

namespace {

bool same_step(double a, double b) noexcept { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

/// Index offset o with out.point(k) - shift.point(j) == probe.point(o + k - j), if integral.
std::optional<long long> aligned_offset(const FrequencyGrid& shift, const FrequencyGrid& probe,
                                        const FrequencyGrid& out)
{
    if (!same_step(shift.step(), probe.step()) || !same_step(shift.step(), out.step()))
        return std::nullopt;
    const double o = (out.start() - shift.start() - probe.start()) / shift.step();
    const double r = std::round(o);
    if (std::abs(o - r) > 1e-6)
        return std::nullopt;
    return static_cast<long long>(r);
}

/// Index range [lo, hi] of nonzero entries, or nullopt if all zero.
std::optional<std::pair<std::size_t, std::size_t>> support(std::span<const complex> v)
{
    std::size_t lo = v.size();
    std::size_t hi = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] != complex{}) {
            lo = std::min(lo, k);
            hi = k;
        }
    }
    if (lo == v.size())
        return std::nullopt;
    return std::pair{lo, hi};
}

void check_coverage(const FrequencyGrid& shift, std::span<const complex> response, const ComplexSpectrum& probe,
                    const FrequencyGrid& out)
{
    const auto rs = support(response);
    const auto ps = support(probe.amplitude());
    if (!rs || !ps)
        return;
    const double need_lo = probe.grid().point(ps->first) + shift.point(rs->first);
    const double need_hi = probe.grid().point(ps->second) + shift.point(rs->second);
    const double tol = 1e-6 * out.step();
    if (out.start() > need_lo + tol || out.last() < need_hi - tol) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "output grid [" << out.start() << ", " << out.last() << "] cm^-1 does not cover the anti-Stokes span ["
            << need_lo << ", " << need_hi << "] cm^-1";
        throw DomainError(msg.str());
    }
}

ComplexSpectrum convolve_checked(const ExcitationSpectrum& excitation, std::vector<complex> response,
                                 const ComplexSpectrum& probe, const FrequencyGrid& out)
{
    check_coverage(excitation.grid(), response, probe, out);
    std::vector<std::vector<complex>> rs;
    rs.push_back(std::move(response));
    FieldConvolver conv(excitation.grid(), std::move(rs), probe.grid(), out);
    return std::move(conv.apply(probe).front());
}

} // namespace

FrequencyGrid anti_stokes_grid(const FrequencyGrid& shift, const FrequencyGrid& probe)
{
    if (!same_step(shift.step(), probe.step()))
        return FrequencyGrid::covering(shift.start() + probe.start(), shift.last() + probe.last(),
                                       std::min(shift.step(), probe.step()));
    return FrequencyGrid(shift.start() + probe.start(), shift.step(), shift.count() + probe.count() - 1);
}

std::vector<complex> resonant_response(const ExcitationSpectrum& excitation, const RamanMedium& medium)
{
    const auto& g = excitation.grid();
    std::vector<complex> r(g.count());
    for (std::size_t j = 0; j < g.count(); ++j) {
        const complex a = excitation.amplitude()[j];
        r[j] = a == complex{} ? complex{} : a * medium.response(g.point(j));
    }
    return r;
}

std::vector<complex> nonresonant_response(const ExcitationSpectrum& excitation, complex nonresonant)
{
    std::vector<complex> r(excitation.amplitude().begin(), excitation.amplitude().end());
    for (auto& v : r)
        v *= nonresonant;
    return r;
}

ComplexSpectrum resonant_field(const ExcitationSpectrum& excitation, const ComplexSpectrum& probe,
                               const RamanMedium& medium, const FrequencyGrid& out)
{
    return convolve_checked(excitation, resonant_response(excitation, medium), probe, out);
}

ComplexSpectrum nonresonant_field(const ExcitationSpectrum& excitation, const ComplexSpectrum& probe,
                                  complex nonresonant, const FrequencyGrid& out)
{
    return convolve_checked(excitation, nonresonant_response(excitation, nonresonant), probe, out);
}

ComplexSpectrum convolve_direct(const FrequencyGrid& shift, std::span<const complex> response,
                                const ComplexSpectrum& probe, const FrequencyGrid& out)
{
    std::vector<complex> e(out.count());
    for (std::size_t k = 0; k < out.count(); ++k) {
        const double w = out.point(k);
        complex sum{};
        for (std::size_t j = 0; j < shift.count(); ++j) {
            if (response[j] == complex{})
                continue;
            sum += shift.weight(j) * response[j] * probe.at(w - shift.point(j));
        }
        e[k] = sum;
    }
    return ComplexSpectrum(out, std::move(e));
}

ComplexSpectrum dual_sample_field(const ComplexSpectrum& sample, const ComplexSpectrum& reference, double phase,
                                  const DispersionModel& dispersion)
{
    if (!(sample.grid() == reference.grid()))
        throw DomainError("sample and reference fields must share a grid");
    const auto& g = sample.grid();
    std::vector<complex> e(g.count());
    for (std::size_t k = 0; k < g.count(); ++k)
        e[k] = std::polar(1.0, phase + dispersion.phase(g.point(k))) * sample[k] + reference[k];
    return ComplexSpectrum(g, std::move(e));
}

struct FieldConvolver::Transform {
    detail::FftPlan plan;
    long long offset;
    std::size_t linear_length;
    std::vector<std::vector<complex>> response_spectra;

    explicit Transform(std::size_t n) : plan(n) {}
};

FieldConvolver::FieldConvolver(FrequencyGrid shift, std::vector<std::vector<complex>> responses, FrequencyGrid probe,
                               FrequencyGrid out)
    : shift_(shift), probe_(probe), out_(out), responses_(std::move(responses))
{
    for (const auto& r : responses_)
        if (r.size() != shift_.count())
            throw DomainError("response length does not match the shift grid");
    const auto offset = aligned_offset(shift_, probe_, out_);
    if (!offset)
        return;
    const std::size_t linear = shift_.count() + probe_.count() - 1;
    transform_ = std::make_unique<Transform>(detail::next_pow2(linear));
    transform_->offset = *offset;
    transform_->linear_length = linear;
    const std::size_t n = transform_->plan.size();
    for (const auto& r : responses_) {
        std::vector<complex> buf(n);
        for (std::size_t j = 0; j < r.size(); ++j)
            buf[j] = shift_.weight(j) * r[j];
        transform_->plan.forward(buf);
        transform_->response_spectra.push_back(std::move(buf));
    }
}

FieldConvolver::~FieldConvolver() = default;
FieldConvolver::FieldConvolver(FieldConvolver&&) noexcept = default;
FieldConvolver& FieldConvolver::operator=(FieldConvolver&&) noexcept = default;

bool FieldConvolver::uses_transform() const noexcept { return transform_ != nullptr; }

std::vector<ComplexSpectrum> FieldConvolver::apply(const ComplexSpectrum& probe) const
{
    std::vector<ComplexSpectrum> fields;
    fields.reserve(responses_.size());
    if (!transform_ || !(probe.grid() == probe_)) {
        for (const auto& r : responses_)
            fields.push_back(convolve_direct(shift_, r, probe, out_));
        return fields;
    }
    const auto& t = *transform_;
    const std::size_t n = t.plan.size();
    std::vector<complex> probe_hat(n);
    std::copy(probe.amplitude().begin(), probe.amplitude().end(), probe_hat.begin());
    t.plan.forward(probe_hat);
    const double scale = 1.0 / static_cast<double>(n);
    std::vector<complex> buf(n);
    for (const auto& rh : t.response_spectra) {
        for (std::size_t i = 0; i < n; ++i)
            buf[i] = probe_hat[i] * rh[i];
        t.plan.backward(buf);
        std::vector<complex> e(out_.count());
        for (std::size_t k = 0; k < out_.count(); ++k) {
            const long long m = t.offset + static_cast<long long>(k);
            if (m >= 0 && static_cast<std::size_t>(m) < t.linear_length)
                e[k] = buf[static_cast<std::size_t>(m)] * scale;
        }
        fields.emplace_back(out_, std::move(e));
    }
    return fields;
}

} // namespace coincars
