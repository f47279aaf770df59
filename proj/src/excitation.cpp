#include "coincars/excitation.hpp"

#include "coincars/error.hpp"

#include <cmath>
#include <numbers>

namespace coincars {

namespace {
constexpr double speed_of_light_cm_per_fs = 2.99792458e-5;
}

ExcitationSpectrum two_photon_spectrum(const ComplexSpectrum& pump, const ComplexSpectrum& stokes,
                                       const FrequencyGrid& out)
{
    const auto& pg = pump.grid();
    const auto& sg = stokes.grid();
    if (std::abs(pg.step() - sg.step()) > 1e-12 * pg.step())
        throw DomainError("pump and Stokes grids must share a step");

    std::vector<complex> a(out.count());
    for (std::size_t j = 0; j < out.count(); ++j) {
        const double shift = out.point(j);
        complex sum{};
        for (std::size_t k = 0; k < pg.count(); ++k) {
            const complex p = pump[k];
            if (p == complex{})
                continue;
            sum += pg.weight(k) * std::conj(stokes.at(pg.point(k) - shift)) * p;
        }
        a[j] = sum;
    }
    return ExcitationSpectrum(ComplexSpectrum(out, std::move(a)));
}

ExcitationSpectrum uniform_excitation(complex a0, double band_lo, double band_hi, const FrequencyGrid& out)
{
    if (!(band_lo < band_hi))
        throw DomainError("excitation band must satisfy lo < hi");
    std::vector<complex> a(out.count());
    for (std::size_t j = 0; j < out.count(); ++j) {
        const double w = out.point(j);
        if (w >= band_lo && w <= band_hi)
            a[j] = a0;
    }
    return ExcitationSpectrum(ComplexSpectrum(out, std::move(a)));
}

ComplexSpectrum gaussian_pulse(double center_cm1, double intensity_fwhm_cm1, const FrequencyGrid& grid)
{
    if (!(intensity_fwhm_cm1 > 0.0))
        throw DomainError("pulse bandwidth must be positive");
    // |E|^2 = exp(-x^2 / sigma^2) has FWHM 2 sigma sqrt(ln 2).
    const double sigma = intensity_fwhm_cm1 / (2.0 * std::sqrt(std::numbers::ln2));
    std::vector<complex> e(grid.count());
    for (std::size_t k = 0; k < grid.count(); ++k) {
        const double x = grid.point(k) - center_cm1;
        e[k] = std::exp(-x * x / (2.0 * sigma * sigma));
    }
    return ComplexSpectrum(grid, std::move(e));
}

double transform_limited_bandwidth(double duration_fs)
{
    if (!(duration_fs > 0.0))
        throw DomainError("pulse duration must be positive");
    // Gaussian time-bandwidth product 2 ln2 / pi, in cycles.
    constexpr double tbp = 2.0 * std::numbers::ln2 / std::numbers::pi;
    return tbp / (duration_fs * speed_of_light_cm_per_fs);
}

} // namespace coincars
