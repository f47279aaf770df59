#pragma once

// Resonant and non-resonant anti-Stokes fields of a single medium, plus the
// phase-shifted superposition of sample and reference fields.

#include "coincars/excitation.hpp"

#include <memory>

namespace coincars {

/// Quadratic spectral phase on the sample arm: c1 (w - w0) + c2 (w - w0)^2.
struct DispersionModel {
    double reference = 0.0;  ///< w0, cm^-1
    double linear = 0.0;     ///< c1, rad/(cm^-1)
    double quadratic = 0.0;  ///< c2, rad/(cm^-1)^2

    double phase(double w) const noexcept
    {
        const double x = w - reference;
        return linear * x + quadratic * x * x;
    }
};

/// Output grid needed to hold probe (x) excitation support without truncation.
FrequencyGrid anti_stokes_grid(const FrequencyGrid& shift, const FrequencyGrid& probe);

/// E_r(w) = sum_n C_n integral probe(w - Omega) A(Omega) / (Omega - Omega_n + i Gamma_n) dOmega.
ComplexSpectrum resonant_field(const ExcitationSpectrum& excitation, const ComplexSpectrum& probe,
                               const RamanMedium& medium, const FrequencyGrid& out);

/// E_nr(w) = C_nonres integral probe(w - Omega) A(Omega) dOmega.
ComplexSpectrum nonresonant_field(const ExcitationSpectrum& excitation, const ComplexSpectrum& probe,
                                  complex nonresonant, const FrequencyGrid& out);

/// Direct O(K*K) quadrature of the probe/response convolution, bypassing the
/// transform path. Exposed so the two routes can be compared.
ComplexSpectrum convolve_direct(const FrequencyGrid& shift, std::span<const complex> response,
                                const ComplexSpectrum& probe, const FrequencyGrid& out);

/// exp(i (Phi + phi_d(w))) E_S(w) + E_R(w).
ComplexSpectrum dual_sample_field(const ComplexSpectrum& sample, const ComplexSpectrum& reference,
                                  double phase, const DispersionModel& dispersion = {});

/// Reusable convolution of many probes against fixed shift-domain responses.
///
/// Each response r_j(Omega) already includes A(Omega) and the line (or
/// nonresonant) factor. apply() returns one anti-Stokes field per response.
/// When probe, shift and output grids share a step and are index-aligned the
/// work is done with FFTs; otherwise it falls back to convolve_direct.
/// apply() is const and safe to call from several threads at once.
class FieldConvolver {
public:
    FieldConvolver(FrequencyGrid shift, std::vector<std::vector<complex>> responses, FrequencyGrid probe,
                   FrequencyGrid out);
    ~FieldConvolver();
    FieldConvolver(FieldConvolver&&) noexcept;
    FieldConvolver& operator=(FieldConvolver&&) noexcept;

    std::vector<ComplexSpectrum> apply(const ComplexSpectrum& probe) const;

    bool uses_transform() const noexcept;
    const FrequencyGrid& output_grid() const noexcept { return out_; }
    std::size_t response_count() const noexcept { return responses_.size(); }

private:
    struct Transform;

    FrequencyGrid shift_;
    FrequencyGrid probe_;
    FrequencyGrid out_;
    std::vector<std::vector<complex>> responses_;
    std::unique_ptr<Transform> transform_;
};

/// Shift-domain resonant response A(Omega) * sum_n C_n / (Omega - Omega_n + i Gamma_n).
std::vector<complex> resonant_response(const ExcitationSpectrum& excitation, const RamanMedium& medium);
std::vector<complex> nonresonant_response(const ExcitationSpectrum& excitation, complex nonresonant);

} // namespace coincars
