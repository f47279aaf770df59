#pragma once

// (omega, Phi) interference maps of two media, noise averaging, frequency
// integration and fringe-visibility extraction.

#include "coincars/cars_engine.hpp"
#include "coincars/probe.hpp"

#include <optional>
#include <variant>

namespace coincars {

struct PhaseGrid {
    double start = 0.0;
    double step;
    std::size_t count;

    /// `count` points spanning [0, 2 pi cycles).
    static PhaseGrid cycles(std::size_t count, double cycles = 1.0);

    double point(std::size_t j) const noexcept { return start + static_cast<double>(j) * step; }
    friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

/// Transform-limited Gaussian pulse.
struct PulseSpec {
    double wavelength_nm;
    double duration_fs = 35.0;
};

struct PulseExcitation {
    PulseSpec pump;
    PulseSpec stokes;
    double step_cm1 = 1.0;
    /// Half-width of each pulse grid in units of the pulse's sigma.
    double extent_sigma = 6.0;
};

struct FlatExcitation {
    complex a0{1.0, 0.0};
    double band_lo;
    double band_hi;
};

struct ScenarioGrids {
    double step = 0.25;
    double shift_lo;
    double shift_hi;
    double probe_lo;
    double probe_hi;

    FrequencyGrid shift() const { return FrequencyGrid::covering(shift_lo, shift_hi, step); }
    FrequencyGrid probe() const { return FrequencyGrid::covering(probe_lo, probe_hi, step); }
    FrequencyGrid output() const { return anti_stokes_grid(shift(), probe()); }
};

struct Scenario {
    RamanMedium sample;
    RamanMedium reference;
    std::variant<PulseExcitation, FlatExcitation> excitation;
    ProbeSpec probe;
    ScenarioGrids grids;
    PhaseGrid phases = PhaseGrid::cycles(64);
    std::size_t realizations = 1;
    DispersionModel dispersion;
    double attenuation = 1.0;  ///< alpha on the sample arm
    bool equal_power = false;

    void validate() const;
};

ExcitationSpectrum scenario_excitation(const Scenario& sc);

enum class Component : std::size_t { SampleResonant = 0, SampleNonresonant, ReferenceResonant, ReferenceNonresonant };
inline constexpr std::size_t component_count = 4;

/// Noise-averaged second moments <u_a u_b*> of the four field components at
/// every output frequency. Averaging intensities is linear in these, so any
/// map built from them equals the mean of per-realization intensity maps.
class EnsembleStatistics {
public:
    EnsembleStatistics(FrequencyGrid grid, std::size_t realizations);

    const FrequencyGrid& grid() const noexcept { return grid_; }
    std::size_t realizations() const noexcept { return realizations_; }

    complex moment(std::size_t k, Component a, Component b) const noexcept;
    /// Triangular storage index for a <= b.
    static constexpr std::size_t pair_index(std::size_t a, std::size_t b) noexcept
    {
        return a * component_count - a * (a + 1) / 2 + b;
    }
    static constexpr std::size_t pair_count = component_count * (component_count + 1) / 2;

    std::span<complex> raw() noexcept { return moments_; }
    std::span<const complex> raw() const noexcept { return moments_; }

    /// Trapezoid integral over omega of <|u_a|^2>.
    double integrated_power(Component a) const;

private:
    FrequencyGrid grid_;
    std::size_t realizations_;
    std::vector<complex> moments_;  // grid.count() * pair_count
};

/// Runs every realization (in parallel, reduced in ascending order).
EnsembleStatistics ensemble_statistics(const Scenario& sc);

struct InterferenceMap {
    FrequencyGrid omega;
    PhaseGrid phase;
    std::vector<double> intensity;  ///< row-major, omega rows, Phi columns
    std::uint64_t seed = 0;
    std::size_t realizations = 1;

    double at(std::size_t k, std::size_t j) const noexcept { return intensity[k * phase.count + j]; }
};

struct MapOptions {
    double attenuation = 1.0;
    /// Multiplier on the sample's resonant component.
    double sample_scale = 1.0;
    bool include_resonant = true;
    bool include_nonresonant = true;
};

InterferenceMap form_map(const EnsembleStatistics& stats, const PhaseGrid& phases, const DispersionModel& dispersion,
                         const MapOptions& opts);

/// Resonant-amplitude factor equalizing the Phi-averaged integrated resonant powers.
double equal_power_scale(const EnsembleStatistics& stats);

InterferenceMap build_map(const Scenario& sc);

struct FringeCurve {
    PhaseGrid phase;
    std::vector<double> intensity;
};

FringeCurve integrate_over_frequency(const InterferenceMap& map);
FringeCurve map_column(const InterferenceMap& map, std::size_t omega_index);

struct VisibilityReport {
    bool defined = false;
    double v_raw = 0.0;
    double v_fit = 0.0;
    double offset = 0.0;     ///< a of a + b cos(Phi - c)
    double amplitude = 0.0;  ///< b >= 0
    double phase = 0.0;      ///< c
    double phase_max = 0.0;
    double phase_min = 0.0;
    double residual = 0.0;   ///< RMS of fit residuals
};

VisibilityReport visibility(const FringeCurve& curve);

/// Power-weighted circular standard deviation (rad) of per-column fringe
/// phases. Columns under 1% of the peak column power are skipped.
double vertical_strip_metric(const InterferenceMap& map);

struct EqualizationResult {
    double attenuation;
    double visibility;
    double unequalized_visibility;
};

/// Sample-arm attenuation maximizing non-resonant fringe visibility.
EqualizationResult equalize_via_nrb(const Scenario& sc);

/// Visibility of the integrated non-resonant-only curve at attenuation alpha.
double nonresonant_visibility(const EnsembleStatistics& stats, const PhaseGrid& phases, double attenuation);

/// Worker cap for realization loops (0 restores hardware concurrency).
void set_max_threads(unsigned threads) noexcept;
unsigned max_threads() noexcept;

} // namespace coincars
