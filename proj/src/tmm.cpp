#include "coincars/tmm.hpp"

#include "coincars/error.hpp"
#include "coincars/random.hpp"
#include "text_util.hpp"

#include <cmath>
#include <numbers>

namespace coincars {

namespace {

Matrix2 multiply(const Matrix2& a, const Matrix2& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

/// Amplitudes left of the interface in terms of those right of it.
Matrix2 interface(complex left, complex right)
{
    const complex r = (left - right) / (left + right);
    const complex t = 2.0 * left / (left + right);
    return {1.0 / t, r / t, r / t, 1.0 / t};
}

Matrix2 propagation(complex index, double thickness_cm, double k)
{
    const complex delta = index * k * thickness_cm;
    const complex i(0.0, 1.0);
    return {std::exp(-i * delta), 0.0, 0.0, std::exp(i * delta)};
}

} // namespace

void Stack::validate() const
{
    if (!(surrounding_index > 0.0) || !std::isfinite(surrounding_index))
        throw DomainError("surrounding index must be positive");
    for (const auto& l : layers) {
        if (!std::isfinite(l.index.real()) || !std::isfinite(l.index.imag()) || !(l.index.real() > 0.0))
            throw DomainError("layer index needs a finite positive real part");
        if (!(l.thickness_um > 0.0) || !std::isfinite(l.thickness_um))
            throw DomainError("layer thickness must be positive");
    }
}

Matrix2 transfer_matrix(const Stack& stack, double wavenumber)
{
    const double k = 2.0 * std::numbers::pi * wavenumber;
    const complex outside = stack.surrounding_index;
    Matrix2 m{1.0, 0.0, 0.0, 1.0};
    complex prev = outside;
    for (const auto& l : stack.layers) {
        m = multiply(m, interface(prev, l.index));
        m = multiply(m, propagation(l.index, l.thickness_um * 1e-4, k));
        prev = l.index;
    }
    return multiply(m, interface(prev, outside));
}

TransmissionResult transmission(const Stack& stack, const FrequencyGrid& grid)
{
    stack.validate();
    std::vector<complex> t(grid.count());
    std::vector<complex> r(grid.count());
    for (std::size_t j = 0; j < grid.count(); ++j) {
        const auto m = transfer_matrix(stack, grid.point(j));
        t[j] = 1.0 / m[0];
        r[j] = m[2] / m[0];
    }
    return {ComplexSpectrum(grid, std::move(t)), ComplexSpectrum(grid, std::move(r))};
}

Stack random_stack(const RandomStackRecipe& recipe, std::uint64_t seed)
{
    if (!(recipe.index_lo > 0.0) || recipe.index_hi < recipe.index_lo || !(recipe.thickness_lo_um > 0.0) ||
        recipe.thickness_hi_um < recipe.thickness_lo_um)
        throw DomainError("random stack ranges must be positive and ordered");
    Stream stream(seed, 0);
    Stack s;
    s.layers.reserve(recipe.layer_count);
    for (std::size_t i = 0; i < recipe.layer_count; ++i) {
        const double n = stream.uniform(recipe.index_lo, recipe.index_hi);
        const double d = stream.uniform(recipe.thickness_lo_um, recipe.thickness_hi_um);
        s.layers.push_back({n, d});
    }
    return s;
}

Stack parse_stack(std::string_view text, std::string_view origin)
{
    Stack s;
    std::size_t lineno = 0;
    for (auto raw : detail::split_lines(text)) {
        ++lineno;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        const auto where = std::string(origin) + ":" + std::to_string(lineno);
        auto f = detail::split_csv(line);
        if (f.size() != 3)
            throw ConfigError(where + ": expected n_re, n_im, d_um");
        s.layers.push_back({{detail::parse_double(f[0], where), detail::parse_double(f[1], where)},
                            detail::parse_double(f[2], where)});
    }
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string(origin) + ": " + e.what());
    }
    return s;
}

Stack read_stack(const std::filesystem::path& path) { return parse_stack(detail::read_file(path), path.string()); }

} // namespace coincars
