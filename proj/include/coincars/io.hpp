#pragma once

// CSV and sidecar output. Numbers use the shortest decimal form that
// round-trips to the same double.

#include "coincars/interferometry.hpp"
#include "coincars/tmm.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace coincars {

std::string format_double(double v);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string grid_header(std::string_view name, double start, double step, std::size_t count);

std::string map_csv(const InterferenceMap& map);
InterferenceMap parse_map_csv(std::string_view text);

std::string curve_csv(const FringeCurve& curve);
std::string spectrum_csv(const ComplexSpectrum& spec);
std::string temporal_csv(const TimeGrid& times, std::span<const double> intensity);
std::string tmm_csv(const TransmissionResult& tr);

struct SweepRow {
    double w_rs;
    double v_closed;
    double v_quadrature;
};

/// Equal-amplitude single-line pair visibility for w_RS in [from, to] by `step`.
std::vector<SweepRow> sweep_wrs(double from, double to, double step);
std::string sweep_csv(std::span<const SweepRow> rows);

} // namespace coincars
