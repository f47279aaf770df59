#pragma once

// Seeded generators of noisy probe spectra and their diagnostics.

#include "coincars/tmm.hpp"

#include <cstdint>
#include <optional>
#include <variant>

namespace coincars {

/// N equal-amplitude Lorentzians, centers uniform in the band, phases uniform in [0, 2 pi).
struct MultiLorentzian {
    std::size_t count = 25;
    /// Intensity FWHM in cm^-1. Ignored when width_nm is set.
    double width_cm1 = 15.625;
    /// Intensity FWHM in nm, converted at each component's center.
    std::optional<double> width_nm;
    double band_lo = 12200.0;
    double band_hi = 12800.0;
    bool random_phases = true;

    double component_width(double center) const;
};

/// Envelope times unit-modulus noise, phase constant over blocks of `correlation_cm1`.
struct RandomPhaseEnvelope {
    ComplexSpectrum envelope;
    double correlation_cm1;
};

/// Envelope times the complex transmission of a layered medium. With a
/// recipe, each realization gets its own random stack.
struct LayeredMedium {
    ComplexSpectrum envelope;
    std::variant<Stack, RandomStackRecipe> stack;
};

/// One grid bin of amplitude E0 at `center` (narrowband multiplex probe).
struct Narrowband {
    double center;
    complex amplitude{1.0, 0.0};
};

struct ProbeSpec {
    std::variant<MultiLorentzian, RandomPhaseEnvelope, LayeredMedium, Narrowband> variant;
    std::uint64_t seed = 0;

    void validate() const;
};

struct LorentzianComponent {
    double center;
    double hwhm;
    double phase;
};

/// The components drawn for a MultiLorentzian realization, in draw order.
std::vector<LorentzianComponent> draw_components(const MultiLorentzian& spec, std::uint64_t seed,
                                                 std::uint64_t realization);

/// gamma / (gamma - i (w - center)): causal line, peak modulus 1, intensity FWHM 2 gamma.
complex lorentzian_component(double w, double center, double hwhm) noexcept;

ComplexSpectrum generate(const ProbeSpec& spec, std::uint64_t realization, const FrequencyGrid& grid);

/// Time axis in fs.
struct TimeGrid {
    double start_fs;
    double step_fs;
    std::size_t count;

    double point(std::size_t k) const noexcept { return start_fs + static_cast<double>(k) * step_fs; }
};

/// |E(t)|^2 normalized to peak 1, E(t) = integral E(w) exp(-i 2 pi c (w - w_ref) t) dw.
std::vector<double> temporal_profile(const ComplexSpectrum& spec, const TimeGrid& times);

/// Angular frequency (rad/fs) of a wavenumber (cm^-1).
double angular_frequency(double wavenumber_cm1) noexcept;

/// HWHM (cm^-1) of g(D) = |integral E*(w) E(w + D) dw|^2 / (integral |E|^2)^2.
double spectral_correlation_length(const ComplexSpectrum& spec);

} // namespace coincars
