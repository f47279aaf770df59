#pragma once

// Normal-incidence transfer matrices for 1D layered media.
// Time dependence e^{-i w t}; a layer accumulates e^{i n k d}.

#include "coincars/spectra.hpp"

#include <array>
#include <cstdint>

namespace coincars {

struct Layer {
    complex index;        ///< Im n >= 0 for passive media
    double thickness_um;
};

struct Stack {
    std::vector<Layer> layers;
    double surrounding_index = 1.0;

    void validate() const;
};

using Matrix2 = std::array<complex, 4>;  // row-major m00 m01 m10 m11

/// Total interface/propagation matrix at wavenumber w (cm^-1), mapping
/// (forward, backward) amplitudes on the exit side to the entry side.
Matrix2 transfer_matrix(const Stack& stack, double wavenumber);

struct TransmissionResult {
    ComplexSpectrum transmission;
    ComplexSpectrum reflection;
};

TransmissionResult transmission(const Stack& stack, const FrequencyGrid& grid);

struct RandomStackRecipe {
    std::size_t layer_count = 60;
    double index_lo = 1.3;
    double index_hi = 2.2;
    double thickness_lo_um = 0.5;
    double thickness_hi_um = 2.0;
};

Stack random_stack(const RandomStackRecipe& recipe, std::uint64_t seed);

/// Rows of `n_re, n_im, d_um`; `#` comments; blank lines ignored.
Stack parse_stack(std::string_view text, std::string_view origin = "<text>");
Stack read_stack(const std::filesystem::path& path);

} // namespace coincars
