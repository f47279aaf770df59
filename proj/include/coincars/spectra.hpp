#pragma once

// Frequency grids, complex spectra and Raman media shared by every module.
// Frequencies are wavenumbers (cm^-1) throughout.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace coincars {

using complex = std::complex<double>;

/// Uniform, strictly increasing axis: point(k) = start + k * step.
class FrequencyGrid {
public:
    FrequencyGrid(double start, double step, std::size_t count);

    /// Grid with the given step covering [lo, hi] (last point >= hi).
    static FrequencyGrid covering(double lo, double hi, double step);

    double start() const noexcept { return start_; }
    double step() const noexcept { return step_; }
    std::size_t count() const noexcept { return count_; }
    double point(std::size_t k) const noexcept { return start_ + static_cast<double>(k) * step_; }
    double last() const noexcept { return point(count_ - 1); }
    double span() const noexcept { return last() - start_; }
    bool contains(double w) const noexcept { return w >= start_ && w <= last(); }

    /// Trapezoid weight of point k.
    double weight(std::size_t k) const noexcept
    {
        return (k == 0 || k + 1 == count_) ? 0.5 * step_ : step_;
    }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    double start_;
    double step_;
    std::size_t count_;
};

/// Complex field amplitude sampled on a FrequencyGrid.
class ComplexSpectrum {
public:
    explicit ComplexSpectrum(FrequencyGrid grid);
    ComplexSpectrum(FrequencyGrid grid, std::vector<complex> amplitude);

    const FrequencyGrid& grid() const noexcept { return grid_; }
    std::span<const complex> amplitude() const noexcept { return amplitude_; }
    std::span<complex> amplitude() noexcept { return amplitude_; }
    std::size_t size() const noexcept { return amplitude_.size(); }
    complex operator[](std::size_t k) const noexcept { return amplitude_[k]; }
    complex& operator[](std::size_t k) noexcept { return amplitude_[k]; }

    /// Linear interpolation of real and imaginary parts; zero outside the grid span.
    complex at(double w) const noexcept;

private:
    FrequencyGrid grid_;
    std::vector<complex> amplitude_;
};

struct RamanLine {
    double center;  ///< Omega_n, cm^-1
    double hwhm;    ///< Gamma_n of 1/(Omega - Omega_n + i Gamma_n), cm^-1
    complex amplitude;
};

struct RamanMedium {
    std::vector<RamanLine> lines;
    complex nonresonant{0.0, 0.0};

    /// Throws DomainError when a line has Gamma <= 0 or non-finite data,
    /// or when the medium has neither lines nor a nonresonant term.
    void validate() const;

    /// Complex line response sum_n C_n / (Omega - Omega_n + i Gamma_n).
    complex response(double shift) const noexcept;
};

double wavelength_to_wavenumber(double wavelength_nm);
double wavenumber_to_wavelength(double wavenumber_cm1);

/// Intensity FWHM given in nm at `center_cm1`, converted to cm^-1.
double bandwidth_nm_to_cm1(double width_nm, double center_cm1);

ComplexSpectrum resample(const ComplexSpectrum& spec, const FrequencyGrid& target);

/// Trapezoid integral of |amplitude|^2.
double total_power(const ComplexSpectrum& spec);

/// Trapezoid integral of a real sampled function on `grid`.
double trapezoid(const FrequencyGrid& grid, std::span<const double> values);

/// Parses the Raman line-list text format: `center, hwhm, re, im` rows,
/// `#` comments, optional `NONRES, re, im` record.
RamanMedium parse_line_list(std::string_view text, std::string_view origin = "<text>");
RamanMedium read_line_list(const std::filesystem::path& path);

} // namespace coincars
