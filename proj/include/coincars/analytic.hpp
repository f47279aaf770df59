#pragma once

// Closed-form frequency-integrated interference of Lorentzian Raman lines,
// and the trapezoid oracle it is certified against.

#include "coincars/spectra.hpp"

namespace coincars {

/// Sample/reference single-line pair in dimensionless units w = (w - w_pr) / Gamma.
struct LinePair {
    complex sample;     ///< C_S
    complex reference;  ///< C_R
    double sample_center = 0.0;     ///< w_S
    double reference_center = 0.0;  ///< w_R
    double gamma = 1.0;             ///< shared Gamma, cm^-1 (only for unit recovery)

    double mismatch() const noexcept { return 0.5 * (sample_center - reference_center); }
};

struct PhaseOffsets {
    double delta;    ///< arctan(w_RS)
    double phi_c;    ///< arg(C_S* C_R)
};

/// Phi-independent and Phi-dependent parts of I(Phi) = diag + cross cos(Phi - phase).
struct PairSummary {
    double w_rs;
    double delta;
    double phi_c;
    double diag;
    double cross;

    double visibility() const noexcept { return diag > 0.0 ? cross / diag : 0.0; }
};

double w_rs(double sample_center, double reference_center, double gamma);
PhaseOffsets phase_offsets(const LinePair& pair);
PairSummary summarize(const LinePair& pair);

struct QuadratureOptions {
    double span = 200.0;
    double step = 0.005;
    /// Add the asymptotic 1/w^m tails beyond +-span to the trapezoid sum.
    bool tail_correction = true;
};

/// Trapezoid value of integral |e^{i Phi} C_S/(w - w_S + i) + C_R/(w - w_R + i)|^2 dw.
double integrated_signal_quadrature(const LinePair& pair, double phase, const QuadratureOptions& opts = {});

/// Residue evaluation of the same integral:
/// pi (|C_S|^2 + |C_R|^2) + 2 pi |C_S C_R| / sqrt(1 + w_RS^2) cos(Phi - Delta - phi_C).
double integrated_signal_closed(const LinePair& pair, double phase);

/// I(Phi) = diag + 2 Re(e^{i Phi} cross) for two multi-line media, in cm^-1 units.
struct MultiLineSummary {
    double diag;
    complex cross;

    double value(double phase) const noexcept;
    double visibility() const noexcept { return diag > 0.0 ? 2.0 * std::abs(cross) / diag : 0.0; }
    /// Phase of maximum signal.
    double phase_max() const noexcept;
};

/// Residue evaluation of integral |e^{i Phi} sum_S + sum_R|^2 dw with
/// per-line widths. Nonresonant terms are ignored.
MultiLineSummary multi_line_summary(const RamanMedium& sample, const RamanMedium& reference);
double multi_line_integrated(const RamanMedium& sample, const RamanMedium& reference, double phase);

/// Integral of |sum_n C_n / (w - Omega_n + i Gamma_n)|^2 dw.
double resonant_power(const RamanMedium& medium);

/// Scales the sample's line amplitudes so its resonant power equals the reference's.
RamanMedium equalize_power(const RamanMedium& sample, const RamanMedium& reference);

/// Lines seen through a Lorentzian probe component of amplitude half-width
/// `probe_hwhm` after phase averaging: every Gamma_n grows by probe_hwhm.
RamanMedium probe_broadened(const RamanMedium& medium, double probe_hwhm);

/// Multiplies each C_n by the excitation amplitude at its center.
RamanMedium excitation_weighted(const RamanMedium& medium, const ComplexSpectrum& excitation);

/// 2 pi dw^2 |A0|^2 sum <|E_i|^2>.
double noise_normalization(std::span<const double> line_intensities, double component_width, complex a0);

/// 2 pi dw^2 |E0 A0|^2.
double multiplex_normalization(double probe_width, complex e0, complex a0);

} // namespace coincars
