#pragma once

#include "coincars/spectra.hpp"

namespace coincars {

/// Two-photon excitation amplitude A(Omega) over Raman shift.
class ExcitationSpectrum {
public:
    explicit ExcitationSpectrum(ComplexSpectrum values) : values_(std::move(values)) {}

    const FrequencyGrid& grid() const noexcept { return values_.grid(); }
    std::span<const complex> amplitude() const noexcept { return values_.amplitude(); }
    const ComplexSpectrum& spectrum() const noexcept { return values_; }
    complex at(double shift) const noexcept { return values_.at(shift); }

private:
    ComplexSpectrum values_;
};

/// A(Omega) = integral E_S*(w - Omega) E_p(w) dw, trapezoid over the pump grid.
/// Pump and Stokes must share a step; the Stokes field is interpolated
/// linearly when the lag lands between its samples.
ExcitationSpectrum two_photon_spectrum(const ComplexSpectrum& pump, const ComplexSpectrum& stokes,
                                       const FrequencyGrid& out);

/// Joint-field reading: one field E plays pump and Stokes.
inline ExcitationSpectrum two_photon_spectrum(const ComplexSpectrum& joint, const FrequencyGrid& out)
{
    return two_photon_spectrum(joint, joint, out);
}

/// A0 inside [band_lo, band_hi], zero elsewhere.
ExcitationSpectrum uniform_excitation(complex a0, double band_lo, double band_hi, const FrequencyGrid& out);

/// Flat-phase Gaussian field amplitude exp(-(w-w0)^2 / (2 sigma^2)) with the
/// given intensity FWHM.
ComplexSpectrum gaussian_pulse(double center_cm1, double intensity_fwhm_cm1, const FrequencyGrid& grid);

/// Intensity FWHM (cm^-1) of a transform-limited Gaussian pulse of the given
/// intensity FWHM duration.
double transform_limited_bandwidth(double duration_fs);

} // namespace coincars
