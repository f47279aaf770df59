#include "coincars/io.hpp"

#include "coincars/analytic.hpp"
#include "coincars/error.hpp"
#include "text_util.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace coincars {

std::string format_double(double v)
{
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto dir = path.parent_path();
    if (!dir.empty())
        std::filesystem::create_directories(dir);
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename into " + path.string() + ": " + ec.message());
    }
}

std::string grid_header(std::string_view name, double start, double step, std::size_t count)
{
    return "# " + std::string(name) + " start=" + format_double(start) + ",step=" + format_double(step) +
           ",count=" + std::to_string(count) + "\n";
}

std::string map_csv(const InterferenceMap& map)
{
    std::string out = grid_header("omega_grid", map.omega.start(), map.omega.step(), map.omega.count());
    out += grid_header("phi_grid", map.phase.start, map.phase.step, map.phase.count);
    out.reserve(out.size() + map.intensity.size() * 22);
    for (std::size_t k = 0; k < map.omega.count(); ++k) {
        for (std::size_t j = 0; j < map.phase.count; ++j) {
            if (j)
                out += ',';
            out += format_double(map.at(k, j));
        }
        out += '\n';
    }
    return out;
}

namespace {

struct GridSpec {
    double start, step;
    std::size_t count;
};

GridSpec parse_grid_header(std::string_view line, std::string_view name)
{
    const std::string prefix = "# " + std::string(name) + " ";
    if (line.substr(0, prefix.size()) != prefix)
        throw ConfigError("map CSV: expected header '" + prefix + "...'");
    auto fields = detail::split_csv(line.substr(prefix.size()));
    if (fields.size() != 3)
        throw ConfigError("map CSV: malformed grid header");
    auto value = [&](std::string_view f, std::string_view key) {
        if (f.substr(0, key.size()) != key)
            throw ConfigError("map CSV: expected '" + std::string(key) + "'");
        return detail::parse_double(f.substr(key.size()), "map CSV header");
    };
    return {value(fields[0], "start="), value(fields[1], "step="),
            static_cast<std::size_t>(value(fields[2], "count="))};
}

} // namespace

InterferenceMap parse_map_csv(std::string_view text)
{
    auto lines = detail::split_lines(text);
    if (lines.size() < 2)
        throw ConfigError("map CSV: missing headers");
    const auto og = parse_grid_header(lines[0], "omega_grid");
    const auto pg = parse_grid_header(lines[1], "phi_grid");
    InterferenceMap map{FrequencyGrid(og.start, og.step, og.count), PhaseGrid{pg.start, pg.step, pg.count}, {}};
    if (lines.size() - 2 != og.count)
        throw ConfigError("map CSV: row count does not match omega grid");
    map.intensity.reserve(og.count * pg.count);
    for (std::size_t k = 0; k < og.count; ++k) {
        const auto where = "map CSV row " + std::to_string(k + 3);
        auto cells = detail::split_csv(lines[k + 2]);
        if (cells.size() != pg.count)
            throw ConfigError(where + ": column count does not match phi grid");
        for (auto c : cells)
            map.intensity.push_back(detail::parse_double(c, where));
    }
    return map;
}

std::string curve_csv(const FringeCurve& curve)
{
    std::string out = grid_header("phi_grid", curve.phase.start, curve.phase.step, curve.phase.count);
    out += "# phi_rad,intensity\n";
    for (std::size_t j = 0; j < curve.phase.count; ++j)
        out += format_double(curve.phase.point(j)) + "," + format_double(curve.intensity[j]) + "\n";
    return out;
}

std::string spectrum_csv(const ComplexSpectrum& spec)
{
    const auto& g = spec.grid();
    std::string out = grid_header("omega_grid", g.start(), g.step(), g.count());
    out += "# omega_cm1,re,im,intensity,phase_rad\n";
    for (std::size_t k = 0; k < g.count(); ++k) {
        const auto a = spec[k];
        out += format_double(g.point(k)) + "," + format_double(a.real()) + "," + format_double(a.imag()) + "," +
               format_double(std::norm(a)) + "," + format_double(std::arg(a)) + "\n";
    }
    return out;
}

std::string temporal_csv(const TimeGrid& times, std::span<const double> intensity)
{
    std::string out = grid_header("time_grid_fs", times.start_fs, times.step_fs, times.count);
    out += "# t_fs,intensity\n";
    for (std::size_t n = 0; n < times.count; ++n)
        out += format_double(times.point(n)) + "," + format_double(intensity[n]) + "\n";
    return out;
}

std::string tmm_csv(const TransmissionResult& tr)
{
    const auto& g = tr.transmission.grid();
    std::string out = grid_header("omega_grid", g.start(), g.step(), g.count());
    out += "# omega_cm1,t_abs2,t_arg_rad,r_abs2\n";
    for (std::size_t k = 0; k < g.count(); ++k) {
        out += format_double(g.point(k)) + "," + format_double(std::norm(tr.transmission[k])) + "," +
               format_double(std::arg(tr.transmission[k])) + "," + format_double(std::norm(tr.reflection[k])) + "\n";
    }
    return out;
}

std::vector<SweepRow> sweep_wrs(double from, double to, double step)
{
    if (!std::isfinite(from) || !std::isfinite(to) || !(step > 0.0) || to < from)
        throw DomainError("sweep needs finite from <= to and a positive step");
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = from + static_cast<double>(i) * step;
        const LinePair pair{{1.0, 0.0}, {1.0, 0.0}, w, -w, 1.0};
        // Quadrature curves are exactly a + p cos(Phi) + q sin(Phi); three
        // phases pin the coefficients.
        const double i0 = integrated_signal_quadrature(pair, 0.0);
        const double i1 = integrated_signal_quadrature(pair, 0.5 * std::numbers::pi);
        const double i2 = integrated_signal_quadrature(pair, std::numbers::pi);
        const double a = 0.5 * (i0 + i2);
        const double p = 0.5 * (i0 - i2);
        const double q = i1 - a;
        rows.push_back({w, summarize(pair).visibility(), std::hypot(p, q) / a});
    }
    return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows)
{
    std::string out = "# w_rs,v_closed,v_quadrature\n";
    for (const auto& r : rows)
        out += format_double(r.w_rs) + "," + format_double(r.v_closed) + "," + format_double(r.v_quadrature) + "\n";
    return out;
}

} // namespace coincars
