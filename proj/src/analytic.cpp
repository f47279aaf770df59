#include "coincars/analytic.hpp"

#include "coincars/error.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace coincars {

namespace {

constexpr double pi = std::numbers::pi;

struct Lorentz {
    complex amplitude;
    double center;
    double hwhm;
};

/// integral L_m(w) conj(L_n(w)) dw with L = 1/(w - a + i g).
complex overlap(const Lorentz& m, const Lorentz& n)
{
    return complex(0.0, 2.0 * pi) / complex(n.center - m.center, m.hwhm + n.hwhm);
}

std::vector<Lorentz> to_lorentz(const RamanMedium& medium)
{
    std::vector<Lorentz> out;
    out.reserve(medium.lines.size());
    for (const auto& l : medium.lines)
        out.push_back({l.amplitude, l.center, l.hwhm});
    return out;
}

double self_power(const std::vector<Lorentz>& ls)
{
    double sum = 0.0;
    for (const auto& m : ls)
        for (const auto& n : ls)
            sum += (m.amplitude * std::conj(n.amplitude) * overlap(m, n)).real();
    return sum;
}

} // namespace

double w_rs(double sample_center, double reference_center, double gamma)
{
    if (!(gamma > 0.0))
        throw DomainError("line width must be positive");
    return (sample_center - reference_center) / (2.0 * gamma);
}

PhaseOffsets phase_offsets(const LinePair& pair)
{
    return {std::atan(pair.mismatch()), std::arg(std::conj(pair.sample) * pair.reference)};
}

PairSummary summarize(const LinePair& pair)
{
    const double w = pair.mismatch();
    const auto off = phase_offsets(pair);
    return {w, off.delta, off.phi_c, pi * (std::norm(pair.sample) + std::norm(pair.reference)),
            2.0 * pi * std::abs(pair.sample * pair.reference) / std::sqrt(1.0 + w * w)};
}

double integrated_signal_closed(const LinePair& pair, double phase)
{
    const auto s = summarize(pair);
    return s.diag + s.cross * std::cos(phase - s.delta - s.phi_c);
}

double integrated_signal_quadrature(const LinePair& pair, double phase, const QuadratureOptions& opts)
{
    const complex cs = std::polar(1.0, phase) * pair.sample;
    const complex cr = pair.reference;
    const complex as(pair.sample_center, -1.0);
    const complex ar(pair.reference_center, -1.0);
    auto integrand = [&](double w) { return std::norm(cs / (w - as) + cr / (w - ar)); };

    const double span = opts.span;
    const auto n = static_cast<std::size_t>(std::llround(2.0 * span / opts.step));
    const double h = 2.0 * span / static_cast<double>(n);
    double sum = 0.5 * (integrand(-span) + integrand(span));
    for (std::size_t k = 1; k < n; ++k)
        sum += integrand(-span + static_cast<double>(k) * h);
    sum *= h;

    if (opts.tail_correction) {
        // f(w) = sum_k alpha_k / w^{k+1}, alpha_k = cs as^k + cr ar^k, so
        // |f|^2 = sum_m b_m / w^m with b_m = sum_{j+k=m-2} alpha_j conj(alpha_k).
        // Odd m cancel between the two tails.
        constexpr std::size_t terms = 12;
        std::array<complex, terms> alpha{};
        complex ps = 1.0;
        complex pr = 1.0;
        for (std::size_t k = 0; k < terms; ++k) {
            alpha[k] = cs * ps + cr * pr;
            ps *= as;
            pr *= ar;
        }
        for (std::size_t m = 2; m < terms; m += 2) {
            double b = 0.0;
            for (std::size_t j = 0; j + 2 <= m; ++j)
                b += (alpha[j] * std::conj(alpha[m - 2 - j])).real();
            sum += 2.0 * b * std::pow(span, 1.0 - static_cast<double>(m)) / static_cast<double>(m - 1);
        }
    }
    return sum;
}

double MultiLineSummary::value(double phase) const noexcept
{
    return diag + 2.0 * (std::polar(1.0, phase) * cross).real();
}

double MultiLineSummary::phase_max() const noexcept
{
    const double p = -std::arg(cross);
    return p < 0.0 ? p + 2.0 * pi : p;
}

MultiLineSummary multi_line_summary(const RamanMedium& sample, const RamanMedium& reference)
{
    const auto s = to_lorentz(sample);
    const auto r = to_lorentz(reference);
    complex cross{};
    for (const auto& m : s)
        for (const auto& n : r)
            cross += m.amplitude * std::conj(n.amplitude) * overlap(m, n);
    return {self_power(s) + self_power(r), cross};
}

double multi_line_integrated(const RamanMedium& sample, const RamanMedium& reference, double phase)
{
    return multi_line_summary(sample, reference).value(phase);
}

double resonant_power(const RamanMedium& medium) { return self_power(to_lorentz(medium)); }

RamanMedium equalize_power(const RamanMedium& sample, const RamanMedium& reference)
{
    const double ps = resonant_power(sample);
    const double pr = resonant_power(reference);
    if (!(ps > 0.0) || !(pr > 0.0))
        throw DomainError("equal-power normalization needs nonzero resonant power in both media");
    RamanMedium out = sample;
    const double s = std::sqrt(pr / ps);
    for (auto& l : out.lines)
        l.amplitude *= s;
    return out;
}

RamanMedium probe_broadened(const RamanMedium& medium, double probe_hwhm)
{
    if (probe_hwhm < 0.0)
        throw DomainError("probe half-width must be non-negative");
    RamanMedium out = medium;
    for (auto& l : out.lines)
        l.hwhm += probe_hwhm;
    return out;
}

RamanMedium excitation_weighted(const RamanMedium& medium, const ComplexSpectrum& excitation)
{
    RamanMedium out = medium;
    for (auto& l : out.lines)
        l.amplitude *= excitation.at(l.center);
    return out;
}

double noise_normalization(std::span<const double> line_intensities, double component_width, complex a0)
{
    double sum = 0.0;
    for (double v : line_intensities) {
        if (v < 0.0)
            throw DomainError("line intensities must be non-negative");
        sum += v;
    }
    return 2.0 * pi * component_width * component_width * std::norm(a0) * sum;
}

double multiplex_normalization(double probe_width, complex e0, complex a0)
{
    return 2.0 * pi * probe_width * probe_width * std::norm(e0 * a0);
}

} // namespace coincars
