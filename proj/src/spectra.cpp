#include "coincars/spectra.hpp"

#include "coincars/error.hpp"
#include "text_util.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace coincars {

FrequencyGrid::FrequencyGrid(double start, double step, std::size_t count) : start_(start), step_(step), count_(count)
{
    if (!std::isfinite(start) || !std::isfinite(step) || !(step > 0.0))
        throw DomainError("frequency grid needs a finite start and a positive step");
    if (count < 2)
        throw DomainError("frequency grid needs at least 2 points");
}

FrequencyGrid FrequencyGrid::covering(double lo, double hi, double step)
{
    if (!(hi > lo) || !(step > 0.0))
        throw DomainError("cannot cover an empty span");
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
    return FrequencyGrid(lo, step, std::max<std::size_t>(n, 2));
}

ComplexSpectrum::ComplexSpectrum(FrequencyGrid grid) : grid_(grid), amplitude_(grid.count()) {}

ComplexSpectrum::ComplexSpectrum(FrequencyGrid grid, std::vector<complex> amplitude)
    : grid_(grid), amplitude_(std::move(amplitude))
{
    if (amplitude_.size() != grid_.count())
        throw DomainError("spectrum length does not match its grid");
    for (const auto& a : amplitude_)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
            throw DomainError("spectrum contains non-finite values");
}

complex ComplexSpectrum::at(double w) const noexcept
{
    const double x = (w - grid_.start()) / grid_.step();
    const double last = static_cast<double>(grid_.count() - 1);
    // Tolerate round-off right at the edges.
    if (x < -1e-9 || x > last + 1e-9)
        return {};
    if (x <= 0.0)
        return amplitude_.front();
    if (x >= last)
        return amplitude_.back();
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-9)
        return amplitude_[static_cast<std::size_t>(nearest)];
    const auto k = static_cast<std::size_t>(x);
    const double f = x - static_cast<double>(k);
    return amplitude_[k] * (1.0 - f) + amplitude_[k + 1] * f;
}

void RamanMedium::validate() const
{
    for (const auto& l : lines) {
        if (!std::isfinite(l.center) || !std::isfinite(l.amplitude.real()) || !std::isfinite(l.amplitude.imag()))
            throw DomainError("Raman line has non-finite parameters");
        if (!(l.hwhm > 0.0) || !std::isfinite(l.hwhm))
            throw DomainError("Raman line half-width must be positive");
    }
    if (!std::isfinite(nonresonant.real()) || !std::isfinite(nonresonant.imag()))
        throw DomainError("non-finite nonresonant coefficient");
    if (lines.empty() && nonresonant == complex{})
        throw DomainError("medium needs at least one line or a nonzero nonresonant term");
}

complex RamanMedium::response(double shift) const noexcept
{
    complex sum{};
    for (const auto& l : lines)
        sum += l.amplitude / complex(shift - l.center, l.hwhm);
    return sum;
}

double wavelength_to_wavenumber(double wavelength_nm)
{
    if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm))
        throw DomainError("wavelength must be positive");
    return 1e7 / wavelength_nm;
}

double wavenumber_to_wavelength(double wavenumber_cm1)
{
    if (!(wavenumber_cm1 > 0.0) || !std::isfinite(wavenumber_cm1))
        throw DomainError("wavenumber must be positive");
    return 1e7 / wavenumber_cm1;
}

double bandwidth_nm_to_cm1(double width_nm, double center_cm1)
{
    const double lambda = wavenumber_to_wavelength(center_cm1);
    return 1e7 * width_nm / (lambda * lambda);
}

ComplexSpectrum resample(const ComplexSpectrum& spec, const FrequencyGrid& target)
{
    const auto& src = spec.grid();
    if (target.last() < src.start() || target.start() > src.last())
        throw DomainError("resample target does not overlap the source span");
    if (target == src)
        return spec;
    std::vector<complex> out(target.count());
    for (std::size_t k = 0; k < target.count(); ++k)
        out[k] = spec.at(target.point(k));
    return ComplexSpectrum(target, std::move(out));
}

double trapezoid(const FrequencyGrid& grid, std::span<const double> values)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k)
        sum += grid.weight(k) * values[k];
    return sum;
}

double total_power(const ComplexSpectrum& spec)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k)
        sum += spec.grid().weight(k) * std::norm(spec[k]);
    return sum;
}

RamanMedium parse_line_list(std::string_view text, std::string_view origin)
{
    RamanMedium medium;
    std::size_t lineno = 0;
    for (auto raw : detail::split_lines(text)) {
        ++lineno;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = detail::split_csv(line);
        auto where = [&] { return std::string(origin) + ":" + std::to_string(lineno); };
        if (!fields.empty() && detail::trim(fields[0]) == "NONRES") {
            if (fields.size() != 3)
                throw ConfigError(where() + ": NONRES record needs re, im");
            medium.nonresonant = {detail::parse_double(fields[1], where()), detail::parse_double(fields[2], where())};
            continue;
        }
        if (fields.size() != 4)
            throw ConfigError(where() + ": expected center_cm1, hwhm_cm1, amp_re, amp_im");
        RamanLine l{detail::parse_double(fields[0], where()), detail::parse_double(fields[1], where()),
                    {detail::parse_double(fields[2], where()), detail::parse_double(fields[3], where())}};
        if (!(l.hwhm > 0.0))
            throw ConfigError(where() + ": half-width must be positive");
        medium.lines.push_back(l);
    }
    try {
        medium.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string(origin) + ": " + e.what());
    }
    return medium;
}

RamanMedium read_line_list(const std::filesystem::path& path)
{
    return parse_line_list(detail::read_file(path), path.string());
}

} // namespace coincars
