#include "doctest.h"

#include "coincars/error.hpp"
#include "coincars/excitation.hpp"
#include "coincars/random.hpp"

#include <cmath>
#include <numbers>

using namespace coincars;

namespace {

ComplexSpectrum random_spectrum(const FrequencyGrid& g, std::uint64_t seed)
{
    Stream s(seed);
    ComplexSpectrum out(g);
    for (std::size_t k = 0; k < g.count(); ++k)
        out[k] = {s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0)};
    return out;
}

} // namespace

TEST_CASE("single bin autocorrelation")
{
    const FrequencyGrid g(0.0, 0.5, 21);
    ComplexSpectrum e(g);
    e[10] = 1.0;
    const FrequencyGrid out(-5.0, 0.5, 21);
    const auto a = two_photon_spectrum(e, e, out);
    for (std::size_t k = 0; k < out.count(); ++k) {
        if (k == 10)
            CHECK(a.amplitude()[k] == complex(0.5));
        else
            CHECK(a.amplitude()[k] == complex(0.0));
    }
}

TEST_CASE("zero lag equals total power")
{
    const FrequencyGrid g(100.0, 0.25, 200);
    const auto e = random_spectrum(g, 3);
    const FrequencyGrid out(-10.0, 0.25, 81);
    const auto a = two_photon_spectrum(e, out);
    CHECK(std::abs(a.at(0.0) - total_power(e)) <= 1e-12 * total_power(e));
}

TEST_CASE("gaussian autocorrelation")
{
    const double sigma = 40.0;
    const FrequencyGrid g(-600.0, 0.5, 2401);
    ComplexSpectrum e(g);
    for (std::size_t k = 0; k < g.count(); ++k)
        e[k] = std::exp(-g.point(k) * g.point(k) / (2 * sigma * sigma));
    const FrequencyGrid out(-200.0, 0.5, 801);
    const auto a = two_photon_spectrum(e, e, out);
    for (std::size_t k = 0; k < out.count(); k += 20) {
        const double w = out.point(k);
        const double expect = sigma * std::sqrt(std::numbers::pi) * std::exp(-w * w / (4 * sigma * sigma));
        CHECK(std::abs(a.amplitude()[k] - expect) <= 1e-6 * expect);
    }
}

TEST_CASE("cauchy-schwarz, linearity and hermitian symmetry")
{
    const FrequencyGrid g(0.0, 1.0, 64);
    const auto p = random_spectrum(g, 11);
    const auto s = random_spectrum(g, 12);
    const auto s2 = random_spectrum(g, 13);
    const FrequencyGrid out(-40.0, 1.0, 81);
    const auto a = two_photon_spectrum(p, s, out);
    const double bound = std::sqrt(total_power(p) * total_power(s));
    for (auto v : a.amplitude())
        CHECK(std::abs(v) <= bound + 1e-10);

    const complex alpha(0.3, -1.7), beta(-2.0, 0.4);
    ComplexSpectrum comb(g), pcomb(g);
    for (std::size_t k = 0; k < g.count(); ++k) {
        comb[k] = alpha * s[k] + beta * s2[k];
        pcomb[k] = alpha * p[k] + beta * s2[k];
    }
    const auto lhs = two_photon_spectrum(p, comb, out);
    const auto b = two_photon_spectrum(p, s2, out);
    const auto plhs = two_photon_spectrum(pcomb, s, out);
    const auto c = two_photon_spectrum(s2, s, out);
    for (std::size_t k = 0; k < out.count(); ++k) {
        const auto expect = std::conj(alpha) * a.amplitude()[k] + std::conj(beta) * b.amplitude()[k];
        CHECK(std::abs(lhs.amplitude()[k] - expect) <= 1e-10 * (1.0 + std::abs(expect)));
        const auto pexpect = alpha * a.amplitude()[k] + beta * c.amplitude()[k];
        CHECK(std::abs(plhs.amplitude()[k] - pexpect) <= 1e-10 * (1.0 + std::abs(pexpect)));
    }

    // Zero end samples make the discrete trapezoid sum exactly Hermitian.
    auto q = p;
    q[0] = 0.0;
    q[q.size() - 1] = 0.0;
    const auto auto_a = two_photon_spectrum(q, out);
    for (std::size_t k = 0; k < out.count(); ++k) {
        const auto mirror = auto_a.amplitude()[out.count() - 1 - k];
        CHECK(std::abs(auto_a.amplitude()[k] - std::conj(mirror)) <= 1e-10);
    }
}

TEST_CASE("mismatched steps are rejected")
{
    const ComplexSpectrum p(FrequencyGrid(0.0, 1.0, 10));
    const ComplexSpectrum s(FrequencyGrid(0.0, 0.3, 10));
    CHECK_THROWS_AS(two_photon_spectrum(p, s, FrequencyGrid(0.0, 1.0, 3)), DomainError);
}

TEST_CASE("uniform excitation")
{
    const FrequencyGrid g(0.0, 1.0, 11);
    const auto ones = uniform_excitation(1.0, -1.0, 20.0, g);
    for (auto v : ones.amplitude())
        CHECK(v == complex(1.0));
    const auto zero = uniform_excitation(0.0, -1.0, 20.0, g);
    for (auto v : zero.amplitude())
        CHECK(v == complex(0.0));
    const auto half = uniform_excitation(complex(0.0, 1.0), 0.0, 5.0, g);
    for (std::size_t k = 0; k < g.count(); ++k)
        CHECK(half.amplitude()[k] == (k <= 5 ? complex(0.0, 1.0) : complex(0.0)));
}

TEST_CASE("pulse helpers")
{
    // 35 fs transform-limited Gaussian: ~420 cm^-1 intensity FWHM.
    CHECK(transform_limited_bandwidth(35.0) == doctest::Approx(420.6).epsilon(1e-3));
    const FrequencyGrid g(8000.0, 0.5, 4001);
    const auto e = gaussian_pulse(9000.0, 100.0, g);
    CHECK(std::norm(e.at(9050.0)) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(e.at(9000.0)) == doctest::Approx(1.0));
}
