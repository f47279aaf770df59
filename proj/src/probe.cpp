#include "coincars/probe.hpp"

#include "coincars/error.hpp"
#include "coincars/random.hpp"

#include <cmath>
#include <numbers>

namespace coincars {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double speed_of_light_cm_per_fs = 2.99792458e-5;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ComplexSpectrum multi_lorentzian(const MultiLorentzian& spec, std::uint64_t seed, std::uint64_t realization,
                                 const FrequencyGrid& grid)
{
    if (spec.band_lo < grid.start() || spec.band_hi > grid.last())
        throw DomainError("probe band lies outside the probe grid");
    const auto comps = draw_components(spec, seed, realization);
    std::vector<complex> e(grid.count());
    for (const auto& c : comps) {
        const complex ph = std::polar(1.0, c.phase);
        for (std::size_t k = 0; k < grid.count(); ++k)
            e[k] += ph * lorentzian_component(grid.point(k), c.center, c.hwhm);
    }
    return ComplexSpectrum(grid, std::move(e));
}

ComplexSpectrum random_phase(const RandomPhaseEnvelope& spec, std::uint64_t seed, std::uint64_t realization,
                             const FrequencyGrid& grid)
{
    auto env = resample(spec.envelope, grid);
    Stream stream(seed, realization);
    const auto blocks = static_cast<std::size_t>(std::floor(grid.span() / spec.correlation_cm1)) + 1;
    std::vector<complex> factor(blocks);
    for (auto& f : factor)
        f = std::polar(1.0, two_pi * stream.uniform());
    for (std::size_t k = 0; k < grid.count(); ++k) {
        auto b = static_cast<std::size_t>(std::floor((grid.point(k) - grid.start()) / spec.correlation_cm1));
        env[k] *= factor[std::min(b, blocks - 1)];
    }
    return env;
}

ComplexSpectrum layered(const LayeredMedium& spec, std::uint64_t seed, std::uint64_t realization,
                        const FrequencyGrid& grid)
{
    auto env = resample(spec.envelope, grid);
    const Stack stack = std::visit(overloaded{[](const Stack& s) { return s; },
                                              [&](const RandomStackRecipe& r) {
                                                  return random_stack(r, stream_seed(seed, realization));
                                              }},
                                   spec.stack);
    const auto t = transmission(stack, grid).transmission;
    for (std::size_t k = 0; k < grid.count(); ++k)
        env[k] *= t[k];
    return env;
}

ComplexSpectrum narrowband(const Narrowband& spec, const FrequencyGrid& grid)
{
    if (!grid.contains(spec.center))
        throw DomainError("narrowband probe center lies outside the probe grid");
    ComplexSpectrum e(grid);
    e[static_cast<std::size_t>(std::llround((spec.center - grid.start()) / grid.step()))] = spec.amplitude;
    return e;
}

} // namespace

double MultiLorentzian::component_width(double center) const
{
    return width_nm ? bandwidth_nm_to_cm1(*width_nm, center) : width_cm1;
}

void ProbeSpec::validate() const
{
    std::visit(overloaded{[](const MultiLorentzian& m) {
                              if (m.count < 1)
                                  throw DomainError("probe needs at least one component");
                              if (!(m.band_lo < m.band_hi))
                                  throw DomainError("probe band is empty");
                              if (!(m.width_nm ? *m.width_nm > 0.0 : m.width_cm1 > 0.0))
                                  throw DomainError("probe component width must be positive");
                          },
                          [](const RandomPhaseEnvelope& r) {
                              if (!(r.correlation_cm1 > 0.0))
                                  throw DomainError("correlation length must be positive");
                          },
                          [](const LayeredMedium& l) {
                              if (const auto* s = std::get_if<Stack>(&l.stack))
                                  s->validate();
                          },
                          [](const Narrowband&) {}},
               variant);
}

complex lorentzian_component(double w, double center, double hwhm) noexcept
{
    return hwhm / complex(hwhm, -(w - center));
}

std::vector<LorentzianComponent> draw_components(const MultiLorentzian& spec, std::uint64_t seed,
                                                 std::uint64_t realization)
{
    Stream stream(seed, realization);
    std::vector<LorentzianComponent> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const double center = stream.uniform(spec.band_lo, spec.band_hi);
        const double phase = two_pi * stream.uniform();
        out.push_back({center, 0.5 * spec.component_width(center), spec.random_phases ? phase : 0.0});
    }
    return out;
}

ComplexSpectrum generate(const ProbeSpec& spec, std::uint64_t realization, const FrequencyGrid& grid)
{
    spec.validate();
    return std::visit(
        overloaded{[&](const MultiLorentzian& m) { return multi_lorentzian(m, spec.seed, realization, grid); },
                   [&](const RandomPhaseEnvelope& r) { return random_phase(r, spec.seed, realization, grid); },
                   [&](const LayeredMedium& l) { return layered(l, spec.seed, realization, grid); },
                   [&](const Narrowband& n) { return narrowband(n, grid); }},
        spec.variant);
}

double angular_frequency(double wavenumber_cm1) noexcept
{
    return two_pi * speed_of_light_cm_per_fs * wavenumber_cm1;
}

std::vector<double> temporal_profile(const ComplexSpectrum& spec, const TimeGrid& times)
{
    const auto& g = spec.grid();
    if (times.count == 0 || !(times.step_fs > 0.0))
        throw DomainError("time grid needs points and a positive step");
    const double window = times.step_fs * static_cast<double>(times.count - 1);
    const double alias_period = 1.0 / (speed_of_light_cm_per_fs * g.step());
    if (window > alias_period)
        throw DomainError("time window exceeds the alias period of the spectral grid");

    std::vector<double> out(times.count);
    double peak = 0.0;
    for (std::size_t n = 0; n < times.count; ++n) {
        const double t = times.point(n);
        const complex rot = std::polar(1.0, -angular_frequency(g.step()) * t);
        complex z = 1.0;
        complex sum{};
        for (std::size_t k = 0; k < g.count(); ++k) {
            sum += g.weight(k) * spec[k] * z;
            z *= rot;
        }
        out[n] = std::norm(sum);
        peak = std::max(peak, out[n]);
    }
    if (peak > 0.0)
        for (auto& v : out)
            v /= peak;
    return out;
}

double spectral_correlation_length(const ComplexSpectrum& spec)
{
    const auto e = spec.amplitude();
    double norm = 0.0;
    for (const auto& v : e)
        norm += std::norm(v);
    if (!(norm > 0.0))
        throw DomainError("correlation length of a zero spectrum is undefined");
    auto g = [&](std::size_t m) {
        complex s{};
        for (std::size_t k = 0; k + m < e.size(); ++k)
            s += std::conj(e[k]) * e[k + m];
        return std::norm(s) / (norm * norm);
    };
    double prev = 1.0;
    for (std::size_t m = 1; m < e.size(); ++m) {
        const double cur = g(m);
        if (cur <= 0.5) {
            const double f = (prev - 0.5) / (prev - cur);
            return (static_cast<double>(m - 1) + f) * spec.grid().step();
        }
        prev = cur;
    }
    return spec.grid().span();
}

} // namespace coincars
