#include "doctest.h"

#include "coincars/error.hpp"
#include "coincars/excitation.hpp"
#include "coincars/probe.hpp"
#include "coincars/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace coincars;

namespace {

const double pi = std::numbers::pi;
const FrequencyGrid probe_grid(12000.0, 0.25, 4001);

std::vector<double> intensity(const ComplexSpectrum& e)
{
    std::vector<double> v(e.size());
    for (std::size_t k = 0; k < e.size(); ++k)
        v[k] = std::norm(e[k]);
    return v;
}

struct PeakStats {
    std::size_t count = 0;
    double width_sum = 0.0;
    std::size_t widths = 0;
};

// Local maxima above 2% of the global peak. FWHM walks down to half height
// or to the neighbouring minimum; a peak merged on one side uses twice the
// open half-width.
PeakStats peaks(const std::vector<double>& I, double step)
{
    PeakStats s;
    const double top = *std::max_element(I.begin(), I.end());
    for (std::size_t k = 1; k + 1 < I.size(); ++k) {
        if (!(I[k] > I[k - 1] && I[k] >= I[k + 1] && I[k] > 0.02 * top))
            continue;
        ++s.count;
        std::size_t l = k, r = k;
        while (l > 0 && I[l - 1] <= I[l] && I[l] > 0.5 * I[k])
            --l;
        while (r + 1 < I.size() && I[r + 1] <= I[r] && I[r] > 0.5 * I[k])
            ++r;
        const bool lh = I[l] <= 0.5 * I[k], rh = I[r] <= 0.5 * I[k];
        double w = 0.0;
        if (lh && rh)
            w = (r - l) * step;
        else if (lh)
            w = 2.0 * (k - l) * step;
        else if (rh)
            w = 2.0 * (r - k) * step;
        else
            continue;
        s.width_sum += w;
        ++s.widths;
    }
    return s;
}

double overlap(const ComplexSpectrum& a, const ComplexSpectrum& b)
{
    complex s{};
    double na = 0.0, nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += std::conj(a[k]) * b[k];
        na += std::norm(a[k]);
        nb += std::norm(b[k]);
    }
    return std::abs(s) / std::sqrt(na * nb);
}

} // namespace

TEST_CASE("single component")
{
    MultiLorentzian m;
    m.count = 1;
    m.random_phases = false;
    const ProbeSpec spec{m, 77};
    const auto comps = draw_components(m, 77, 0);
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].phase == 0.0);
    CHECK(comps[0].hwhm == doctest::Approx(15.625 / 2));
    CHECK(comps[0].center >= 12200.0);
    CHECK(comps[0].center < 12800.0);
    const auto e = generate(spec, 0, probe_grid);
    const auto I = intensity(e);
    const auto k = std::max_element(I.begin(), I.end()) - I.begin();
    CHECK(std::abs(probe_grid.point(k) - comps[0].center) <= probe_grid.step());
    for (std::size_t j = 0; j < e.size(); j += 311)
        CHECK(std::abs(e[j] - lorentzian_component(probe_grid.point(j), comps[0].center, comps[0].hwhm)) < 1e-15);
    // peak modulus 1, intensity FWHM 2 gamma
    CHECK(std::abs(lorentzian_component(100.0, 100.0, 3.0)) == 1.0);
    CHECK(std::norm(lorentzian_component(103.0, 100.0, 3.0)) == doctest::Approx(0.5));
}

TEST_CASE("determinism")
{
    const ProbeSpec spec{MultiLorentzian{}, 2024};
    const auto a = generate(spec, 5, probe_grid);
    const auto b = generate(spec, 5, probe_grid);
    for (std::size_t k = 0; k < a.size(); ++k)
        REQUIRE(a[k] == b[k]);
    const auto c = generate(spec, 6, probe_grid);
    CHECK(overlap(a, c) < 0.9);
    const auto d = generate(ProbeSpec{MultiLorentzian{}, 2025}, 5, probe_grid);
    CHECK(overlap(a, d) < 0.9);

    // Documented stream derivation: first draw of realization 0 is the first center.
    MultiLorentzian m;
    Stream s(2024, 0);
    CHECK(draw_components(m, 2024, 0)[0].center == 12200.0 + 600.0 * s.uniform());
}

TEST_CASE("width in nm converts at each center")
{
    MultiLorentzian m;
    m.width_nm = 1.0;
    for (const auto& c : draw_components(m, 3, 0))
        CHECK(2 * c.hwhm == doctest::Approx(c.center * c.center * 1e-7).epsilon(1e-12));  // 1e7 d_lambda / lambda^2
}

TEST_CASE("25-line probe peaks")
{
    // Centers are uniform with no separation constraint, so components closer
    // than about one width merge; the mean count over seeds sits near 14.
    MultiLorentzian m;
    double count = 0.0, widths = 0.0;
    std::size_t nw = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const auto st = peaks(intensity(generate({m, static_cast<std::uint64_t>(s)}, 0, probe_grid)), 0.25);
        count += st.count;
        widths += st.width_sum;
        nw += st.widths;
    }
    count /= seeds;
    CHECK(count >= 10.0);
    CHECK(count <= 25.0);
    const double mean_fwhm = widths / nw;
    CHECK(std::abs(mean_fwhm - 15.625) <= 0.3 * 15.625);
}

TEST_CASE("phase uniformity")
{
    MultiLorentzian m;
    const std::size_t bins = 20;
    std::vector<double> hist(bins, 0.0);
    std::size_t n = 0;
    for (std::uint64_t r = 0; r < 400; ++r) {
        for (const auto& c : draw_components(m, 99, r)) {
            REQUIRE(c.phase >= 0.0);
            REQUIRE(c.phase < 2 * pi);
            hist[static_cast<std::size_t>(c.phase / (2 * pi) * bins)] += 1.0;
            ++n;
        }
    }
    REQUIRE(n == 10000);
    const double expect = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (double h : hist)
        chi2 += (h - expect) * (h - expect) / expect;
    CHECK(chi2 < 36.19);  // 19 dof, 1% level
}

TEST_CASE("realization overlap")
{
    // For components of width gamma in a band B the mean normalized overlap is
    // about (sqrt(pi)/2) sqrt(2 pi gamma / B) regardless of N.
    const double gamma = 15.625 / 2, band = 600.0;
    const double predicted = 0.5 * std::sqrt(pi) * std::sqrt(2 * pi * gamma / band);
    std::vector<double> means;
    for (std::size_t n : {25u, 100u}) {
        MultiLorentzian m;
        m.count = n;
        const ProbeSpec spec{m, 42};
        double sum = 0.0;
        for (std::uint64_t i = 0; i < 100; ++i)
            sum += overlap(generate(spec, 2 * i, probe_grid), generate(spec, 2 * i + 1, probe_grid));
        means.push_back(sum / 100);
    }
    CHECK(means[0] == doctest::Approx(predicted).epsilon(0.15));
    CHECK(means[1] == doctest::Approx(predicted).epsilon(0.15));
    // shrinks with narrower components at fixed band
    MultiLorentzian narrow;
    narrow.width_cm1 = 2.0;
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i)
        sum += overlap(generate({narrow, 42}, 2 * i, probe_grid), generate({narrow, 42}, 2 * i + 1, probe_grid));
    CHECK(sum / 100 < 0.2);
    CHECK(sum / 100 < means[0]);
}

TEST_CASE("probe spec validation")
{
    MultiLorentzian m;
    m.count = 0;
    CHECK_THROWS_AS(ProbeSpec({m, 1}).validate(), DomainError);
    m = MultiLorentzian{};
    m.width_cm1 = 0.0;
    CHECK_THROWS_AS(ProbeSpec({m, 1}).validate(), DomainError);
    m = MultiLorentzian{};
    m.band_lo = m.band_hi;
    CHECK_THROWS_AS(ProbeSpec({m, 1}).validate(), DomainError);
    // band outside grid
    CHECK_THROWS_AS(generate({MultiLorentzian{}, 1}, 0, FrequencyGrid(12300.0, 0.25, 100)), DomainError);
    CHECK_THROWS_AS(generate({Narrowband{20000.0}, 1}, 0, probe_grid), DomainError);
}

TEST_CASE("random phase envelope")
{
    const auto env = gaussian_pulse(12500.0, 300.0, probe_grid);
    const ProbeSpec spec{RandomPhaseEnvelope{env, 10.0}, 8};
    const auto e = generate(spec, 0, probe_grid);
    for (std::size_t k = 0; k < e.size(); ++k)
        CHECK(std::abs(std::abs(e[k]) - std::abs(env[k])) <= 1e-12);
    // phase constant inside each 10 cm^-1 block (40 samples)
    for (std::size_t k = 1; k < e.size(); ++k) {
        const auto b0 = static_cast<std::size_t>((probe_grid.point(k - 1) - probe_grid.start()) / 10.0 + 1e-9);
        const auto b1 = static_cast<std::size_t>((probe_grid.point(k) - probe_grid.start()) / 10.0 + 1e-9);
        if (b0 == b1 && std::abs(env[k]) > 1e-6)
            CHECK(std::abs(std::arg(e[k] / env[k]) - std::arg(e[k - 1] / env[k - 1])) < 1e-9);
    }
    const double corr = spectral_correlation_length(e);
    CHECK(corr > 2.0);
    CHECK(corr < 20.0);
}

TEST_CASE("layered medium probe")
{
    const auto env = gaussian_pulse(12500.0, 300.0, probe_grid);
    const Stack st{{{2.0, 0.1}, {1.5, 0.3}}, 1.0};
    const auto e = generate(ProbeSpec{LayeredMedium{env, st}, 1}, 0, probe_grid);
    const auto tr = transmission(st, probe_grid);
    for (std::size_t k = 0; k < e.size(); k += 97)
        CHECK(std::abs(e[k] - env[k] * tr.transmission[k]) <= 1e-14);
    // random recipe: fresh stack per realization
    const ProbeSpec rnd{LayeredMedium{env, RandomStackRecipe{}}, 4};
    CHECK(overlap(generate(rnd, 0, probe_grid), generate(rnd, 1, probe_grid)) < 0.9);
    const auto again = generate(rnd, 1, probe_grid);
    const auto first = generate(rnd, 1, probe_grid);
    for (std::size_t k = 0; k < first.size(); ++k)
        REQUIRE(first[k] == again[k]);
}

TEST_CASE("temporal profile of a lorentzian")
{
    const double gamma = 5.0;
    ComplexSpectrum e(probe_grid);
    for (std::size_t k = 0; k < e.size(); ++k)
        e[k] = lorentzian_component(probe_grid.point(k), 12500.0, gamma);
    const TimeGrid t{-200.0, 2.0, 801};
    const auto prof = temporal_profile(e, t);
    // fit ln I = c - 2 gamma~ t over 100..800 fs
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < t.count; ++k) {
        const double tk = t.point(k);
        if (tk < 100.0 || tk > 800.0)
            continue;
        const double y = std::log(prof[k]);
        sx += tk;
        sy += y;
        sxx += tk * tk;
        sxy += tk * y;
        ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double expected = -2.0 * angular_frequency(gamma);
    CHECK(std::abs(slope / expected - 1.0) <= 0.05);
    // causal: negligible before t = 0
    CHECK(prof[75] < 1e-3);  // t = -50 fs
    CHECK(*std::max_element(prof.begin(), prof.end()) == 1.0);
}

TEST_CASE("transform-limited gaussian pulse")
{
    const double fwhm = transform_limited_bandwidth(35.0);
    const auto e = gaussian_pulse(12500.0, fwhm, FrequencyGrid(10000.0, 0.5, 10001));
    const TimeGrid t{-150.0, 0.5, 601};
    const auto prof = temporal_profile(e, t);
    const auto peak = std::max_element(prof.begin(), prof.end()) - prof.begin();
    CHECK(std::abs(t.point(peak)) <= t.step_fs);
    // 35 fs intensity FWHM
    double lo = 0, hi = 0;
    for (std::size_t k = 1; k < prof.size(); ++k) {
        if (prof[k - 1] < 0.5 && prof[k] >= 0.5)
            lo = t.point(k - 1) + t.step_fs * (0.5 - prof[k - 1]) / (prof[k] - prof[k - 1]);
        if (prof[k - 1] >= 0.5 && prof[k] < 0.5)
            hi = t.point(k - 1) + t.step_fs * (prof[k - 1] - 0.5) / (prof[k - 1] - prof[k]);
    }
    CHECK(hi - lo == doctest::Approx(35.0).epsilon(0.01));
}

TEST_CASE("multi-lorentzian pulse train")
{
    const auto e = generate({MultiLorentzian{}, 42}, 0, probe_grid);
    const TimeGrid t{-500.0, 2.0, 1500};
    const auto prof = temporal_profile(e, t);
    double total = 0.0;
    for (double v : prof)
        total += v;
    double t5 = NAN, t50 = NAN, t95 = NAN, cum = 0.0;
    for (std::size_t k = 0; k < prof.size(); ++k) {
        if (std::isnan(t5) && prof[k] >= 0.05)
            t5 = t.point(k);
        if (std::isnan(t50) && prof[k] >= 0.5)
            t50 = t.point(k);
        cum += prof[k];
        if (std::isnan(t95) && cum >= 0.95 * total)
            t95 = t.point(k);
    }
    const double rise = t50 - t5;
    const double tail = t95 - t50;
    CHECK(rise > 0.0);
    CHECK(tail / rise >= 10.0);
    // tail lasts many inverse component widths: 1 / (2 pi c delta_omega) ~ 340 fs
    CHECK(tail >= 1.0 / angular_frequency(15.625));
}

TEST_CASE("temporal alias limit")
{
    const auto e = gaussian_pulse(12500.0, 400.0, probe_grid);
    // window must stay within 1/(c step) = 1/(2.998e-5 * 0.25) ~ 133 ps
    CHECK_NOTHROW(temporal_profile(e, TimeGrid{-1000.0, 10.0, 201}));
    CHECK_THROWS_AS(temporal_profile(e, TimeGrid{0.0, 1000.0, 200}), DomainError);
}

TEST_CASE("spectral correlation length")
{
    SUBCASE("lorentzian gives twice its half-width")
    {
        const double gamma = 4.0;
        const FrequencyGrid g(-3000.0, 0.1, 60001);
        ComplexSpectrum e(g);
        for (std::size_t k = 0; k < e.size(); ++k)
            e[k] = lorentzian_component(g.point(k), 0.0, gamma);
        // oracle: |integral L*(w) L(w + D)|^2 normalized, L = gamma / (gamma - i w),
        // equals 4 gamma^2 / (4 gamma^2 + D^2)
        CHECK(spectral_correlation_length(e) == doctest::Approx(2.0 * gamma).epsilon(0.01));
    }
    SUBCASE("flat spectrum")
    {
        // triangle autocorrelation (1 - D/W), squared: HWHM = (1 - 1/sqrt 2) W
        const FrequencyGrid g(0.0, 0.25, 401);
        const ComplexSpectrum e(g, std::vector<complex>(g.count(), 1.0));
        CHECK(spectral_correlation_length(e) == doctest::Approx((1.0 - 1.0 / std::sqrt(2.0)) * 100.25).epsilon(0.01));
    }
    SUBCASE("multi-lorentzian near the component width, independent of N")
    {
        std::vector<double> mean;
        for (std::size_t n : {10u, 50u}) {
            MultiLorentzian m;
            m.count = n;
            double sum = 0.0;
            for (std::uint64_t s = 0; s < 20; ++s)
                sum += spectral_correlation_length(generate({m, s}, 0, probe_grid));
            mean.push_back(sum / 20);
        }
        for (double v : mean)
            CHECK(std::abs(v - 15.625) <= 0.5 * 15.625);
        CHECK(mean[0] == doctest::Approx(mean[1]).epsilon(0.2));
    }
    SUBCASE("zero spectrum")
    {
        CHECK_THROWS_AS(spectral_correlation_length(ComplexSpectrum(probe_grid)), DomainError);
    }
}
