#include "coincars/interferometry.hpp"

#include "coincars/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace coincars {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr std::size_t batch_size = 8;

std::atomic<unsigned> thread_cap{0};

unsigned worker_count(std::size_t jobs)
{
    unsigned n = thread_cap.load();
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

template <class F>
void parallel_for(std::size_t count, F&& body)
{
    const unsigned workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true))
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

double wrap(double p)
{
    p = std::fmod(p, two_pi);
    return p < 0.0 ? p + two_pi : p;
}

struct CosineFit {
    double a, p, q, residual;
};

/// Least squares I ~ a + p cos(Phi) + q sin(Phi).
CosineFit fit_cosine(const PhaseGrid& phases, std::span<const double> v)
{
    std::array<double, 9> m{};
    std::array<double, 3> rhs{};
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double phi = phases.point(j);
        const std::array<double, 3> x{1.0, std::cos(phi), std::sin(phi)};
        for (int r = 0; r < 3; ++r) {
            rhs[r] += x[r] * v[j];
            for (int c = 0; c < 3; ++c)
                m[r * 3 + c] += x[r] * x[c];
        }
    }
    // Gaussian elimination with partial pivoting.
    std::array<int, 3> order{0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r * 3 + col]) > std::abs(m[piv * 3 + col]))
                piv = r;
        if (piv != col) {
            for (int c = 0; c < 3; ++c)
                std::swap(m[col * 3 + c], m[piv * 3 + c]);
            std::swap(rhs[col], rhs[piv]);
            std::swap(order[col], order[piv]);
        }
        const double d = m[col * 3 + col];
        if (std::abs(d) < 1e-300)
            throw DomainError("phase grid too short for a cosine fit");
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r * 3 + col] / d;
            for (int c = col; c < 3; ++c)
                m[r * 3 + c] -= f * m[col * 3 + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = rhs[r];
        for (int c = r + 1; c < 3; ++c)
            s -= m[r * 3 + c] * x[c];
        x[r] = s / m[r * 3 + r];
    }
    double ss = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double phi = phases.point(j);
        const double e = v[j] - (x[0] + x[1] * std::cos(phi) + x[2] * std::sin(phi));
        ss += e * e;
    }
    return {x[0], x[1], x[2], std::sqrt(ss / static_cast<double>(v.size()))};
}

void check_phase_density(const PhaseGrid& phases)
{
    if (phases.count < 16 || !(std::abs(phases.step) > 0.0) || std::abs(phases.step) > two_pi / 16.0 + 1e-12)
        throw DomainError("phase grid needs at least 16 points per cycle");
}

} // namespace

PhaseGrid PhaseGrid::cycles(std::size_t count, double cycles)
{
    if (count == 0 || cycles == 0.0)
        throw DomainError("phase grid needs points and a nonzero number of cycles");
    return {0.0, two_pi * cycles / static_cast<double>(count), count};
}

void Scenario::validate() const
{
    sample.validate();
    reference.validate();
    probe.validate();
    if (realizations < 1)
        throw DomainError("scenario needs at least one realization");
    check_phase_density(phases);
    if (!(attenuation >= 0.0) || !std::isfinite(attenuation))
        throw DomainError("sample-arm attenuation must be non-negative");
    if (!(grids.step > 0.0) || !(grids.shift_hi > grids.shift_lo) || !(grids.probe_hi > grids.probe_lo))
        throw DomainError("scenario grids need a positive step and non-empty spans");
    if (const auto* p = std::get_if<PulseExcitation>(&excitation)) {
        if (!(p->step_cm1 > 0.0) || !(p->extent_sigma > 0.0))
            throw DomainError("pulse grid step and extent must be positive");
        wavelength_to_wavenumber(p->pump.wavelength_nm);
        wavelength_to_wavenumber(p->stokes.wavelength_nm);
        transform_limited_bandwidth(p->pump.duration_fs);
        transform_limited_bandwidth(p->stokes.duration_fs);
    } else {
        const auto& f = std::get<FlatExcitation>(excitation);
        if (!(f.band_lo < f.band_hi))
            throw DomainError("flat excitation band must satisfy lo < hi");
    }
}

ExcitationSpectrum scenario_excitation(const Scenario& sc)
{
    const auto shift = sc.grids.shift();
    if (const auto* f = std::get_if<FlatExcitation>(&sc.excitation))
        return uniform_excitation(f->a0, f->band_lo, f->band_hi, shift);
    const auto& p = std::get<PulseExcitation>(sc.excitation);
    auto pulse = [&](const PulseSpec& spec) {
        const double center = wavelength_to_wavenumber(spec.wavelength_nm);
        const double fwhm = transform_limited_bandwidth(spec.duration_fs);
        const double sigma = fwhm / (2.0 * std::sqrt(std::numbers::ln2));
        const double half = p.extent_sigma * sigma;
        return gaussian_pulse(center, fwhm, FrequencyGrid::covering(center - half, center + half, p.step_cm1));
    };
    return two_photon_spectrum(pulse(p.pump), pulse(p.stokes), shift);
}

EnsembleStatistics::EnsembleStatistics(FrequencyGrid grid, std::size_t realizations)
    : grid_(grid), realizations_(realizations), moments_(grid.count() * pair_count)
{
}

complex EnsembleStatistics::moment(std::size_t k, Component a, Component b) const noexcept
{
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (ia <= ib)
        return moments_[k * pair_count + pair_index(ia, ib)];
    return std::conj(moments_[k * pair_count + pair_index(ib, ia)]);
}

double EnsembleStatistics::integrated_power(Component a) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < grid_.count(); ++k)
        sum += grid_.weight(k) * moment(k, a, a).real();
    return sum;
}

EnsembleStatistics ensemble_statistics(const Scenario& sc)
{
    sc.validate();
    const auto excitation = scenario_excitation(sc);
    const auto probe_grid = sc.grids.probe();
    const auto out = sc.grids.output();

    std::array<std::vector<complex>, component_count> responses{
        resonant_response(excitation, sc.sample), nonresonant_response(excitation, sc.sample.nonresonant),
        resonant_response(excitation, sc.reference), nonresonant_response(excitation, sc.reference.nonresonant)};
    std::vector<std::size_t> active;
    std::vector<std::vector<complex>> used;
    for (std::size_t c = 0; c < component_count; ++c) {
        if (std::any_of(responses[c].begin(), responses[c].end(), [](complex v) { return v != complex{}; })) {
            active.push_back(c);
            used.push_back(std::move(responses[c]));
        }
    }
    // Probe support check happens per realization through the grid contract:
    // the output grid is the full Minkowski sum of shift and probe grids.
    FieldConvolver conv(excitation.grid(), std::move(used), probe_grid, out);

    EnsembleStatistics stats(out, sc.realizations);
    auto moments = stats.raw();
    const std::size_t K = out.count();
    std::vector<std::vector<ComplexSpectrum>> batch(batch_size);
    for (std::size_t first = 0; first < sc.realizations; first += batch_size) {
        const std::size_t n = std::min(batch_size, sc.realizations - first);
        parallel_for(n, [&](std::size_t i) { batch[i] = conv.apply(generate(sc.probe, first + i, probe_grid)); });
        // Ascending-realization reduction keeps sums independent of threading.
        for (std::size_t i = 0; i < n; ++i) {
            const auto& fields = batch[i];
            for (std::size_t x = 0; x < active.size(); ++x) {
                for (std::size_t y = x; y < active.size(); ++y) {
                    const std::size_t idx = EnsembleStatistics::pair_index(active[x], active[y]);
                    const auto fx = fields[x].amplitude();
                    const auto fy = fields[y].amplitude();
                    for (std::size_t k = 0; k < K; ++k)
                        moments[k * EnsembleStatistics::pair_count + idx] += fx[k] * std::conj(fy[k]);
                }
            }
            batch[i].clear();
        }
    }
    const double inv = 1.0 / static_cast<double>(sc.realizations);
    for (auto& m : moments)
        m *= inv;
    return stats;
}

namespace {

struct ArmMoments {
    double sample_power;
    double reference_power;
    complex cross;  // <v_S v_R*>
};

ArmMoments arm_moments(const EnsembleStatistics& s, std::size_t k, const MapOptions& o)
{
    using C = Component;
    const double a = o.attenuation;
    const double sc = o.include_resonant ? o.sample_scale : 0.0;
    const double rr = o.include_resonant ? 1.0 : 0.0;
    const double nr = o.include_nonresonant ? 1.0 : 0.0;
    const double ps = sc * sc * s.moment(k, C::SampleResonant, C::SampleResonant).real() +
                      2.0 * sc * nr * s.moment(k, C::SampleResonant, C::SampleNonresonant).real() +
                      nr * s.moment(k, C::SampleNonresonant, C::SampleNonresonant).real();
    const double pr = rr * s.moment(k, C::ReferenceResonant, C::ReferenceResonant).real() +
                      2.0 * rr * nr * s.moment(k, C::ReferenceResonant, C::ReferenceNonresonant).real() +
                      nr * s.moment(k, C::ReferenceNonresonant, C::ReferenceNonresonant).real();
    const complex x = sc * rr * s.moment(k, C::SampleResonant, C::ReferenceResonant) +
                      sc * nr * s.moment(k, C::SampleResonant, C::ReferenceNonresonant) +
                      nr * rr * s.moment(k, C::SampleNonresonant, C::ReferenceResonant) +
                      nr * s.moment(k, C::SampleNonresonant, C::ReferenceNonresonant);
    return {a * a * ps, pr, a * x};
}

} // namespace

InterferenceMap form_map(const EnsembleStatistics& stats, const PhaseGrid& phases, const DispersionModel& dispersion,
                         const MapOptions& opts)
{
    const auto& g = stats.grid();
    InterferenceMap map{g, phases, std::vector<double>(g.count() * phases.count), 0, stats.realizations()};
    for (std::size_t k = 0; k < g.count(); ++k) {
        const auto m = arm_moments(stats, k, opts);
        const double d = dispersion.phase(g.point(k));
        double* row = map.intensity.data() + k * phases.count;
        for (std::size_t j = 0; j < phases.count; ++j) {
            const double v = m.sample_power + m.reference_power +
                             2.0 * (std::polar(1.0, phases.point(j) + d) * m.cross).real();
            row[j] = std::max(0.0, v);
        }
    }
    return map;
}

double equal_power_scale(const EnsembleStatistics& stats)
{
    const double ps = stats.integrated_power(Component::SampleResonant);
    const double pr = stats.integrated_power(Component::ReferenceResonant);
    if (!(ps > 0.0) || !(pr > 0.0))
        throw DomainError("equal-power normalization needs resonant signal from both media");
    return std::sqrt(pr / ps);
}

InterferenceMap build_map(const Scenario& sc)
{
    const auto stats = ensemble_statistics(sc);
    MapOptions opts;
    opts.attenuation = sc.attenuation;
    opts.sample_scale = sc.equal_power ? equal_power_scale(stats) : 1.0;
    auto map = form_map(stats, sc.phases, sc.dispersion, opts);
    map.seed = sc.probe.seed;
    return map;
}

FringeCurve integrate_over_frequency(const InterferenceMap& map)
{
    FringeCurve c{map.phase, std::vector<double>(map.phase.count)};
    for (std::size_t k = 0; k < map.omega.count(); ++k) {
        const double w = map.omega.weight(k);
        for (std::size_t j = 0; j < map.phase.count; ++j)
            c.intensity[j] += w * map.at(k, j);
    }
    return c;
}

FringeCurve map_column(const InterferenceMap& map, std::size_t omega_index)
{
    const auto* row = map.intensity.data() + omega_index * map.phase.count;
    return {map.phase, std::vector<double>(row, row + map.phase.count)};
}

VisibilityReport visibility(const FringeCurve& curve)
{
    check_phase_density(curve.phase);
    VisibilityReport r;
    const auto [lo, hi] = std::minmax_element(curve.intensity.begin(), curve.intensity.end());
    if (!(*hi + *lo > 0.0))
        return r;
    r.defined = true;
    r.v_raw = std::clamp((*hi - *lo) / (*hi + *lo), 0.0, 1.0);
    const auto fit = fit_cosine(curve.phase, curve.intensity);
    r.offset = fit.a;
    r.amplitude = std::hypot(fit.p, fit.q);
    r.phase = std::atan2(fit.q, fit.p);
    r.v_fit = fit.a > 0.0 ? std::clamp(r.amplitude / fit.a, 0.0, 1.0) : 0.0;
    r.phase_max = wrap(r.phase);
    r.phase_min = wrap(r.phase + std::numbers::pi);
    r.residual = fit.residual;
    return r;
}

double vertical_strip_metric(const InterferenceMap& map)
{
    const std::size_t K = map.omega.count();
    std::vector<double> power(K);
    for (std::size_t k = 0; k < K; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < map.phase.count; ++j)
            s += map.at(k, j);
        power[k] = s / static_cast<double>(map.phase.count);
    }
    const double peak = *std::max_element(power.begin(), power.end());
    if (!(peak > 0.0))
        return 0.0;
    complex resultant{};
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (power[k] < 0.01 * peak)
            continue;
        const auto row = std::span<const double>(map.intensity).subspan(k * map.phase.count, map.phase.count);
        const auto fit = fit_cosine(map.phase, row);
        resultant += power[k] * std::polar(1.0, std::atan2(fit.q, fit.p));
        total += power[k];
    }
    const double R = std::abs(resultant) / total;
    return R >= 1.0 ? 0.0 : std::sqrt(-2.0 * std::log(R));
}

double nonresonant_visibility(const EnsembleStatistics& stats, const PhaseGrid& phases, double attenuation)
{
    using C = Component;
    const auto& g = stats.grid();
    double ps = 0.0;
    double pr = 0.0;
    complex x{};
    for (std::size_t k = 0; k < g.count(); ++k) {
        ps += g.weight(k) * stats.moment(k, C::SampleNonresonant, C::SampleNonresonant).real();
        pr += g.weight(k) * stats.moment(k, C::ReferenceNonresonant, C::ReferenceNonresonant).real();
        x += g.weight(k) * stats.moment(k, C::SampleNonresonant, C::ReferenceNonresonant);
    }
    FringeCurve curve{phases, std::vector<double>(phases.count)};
    for (std::size_t j = 0; j < phases.count; ++j)
        curve.intensity[j] = attenuation * attenuation * ps + pr +
                             2.0 * attenuation * (std::polar(1.0, phases.point(j)) * x).real();
    return visibility(curve).v_fit;
}

EqualizationResult equalize_via_nrb(const Scenario& sc)
{
    if (sc.sample.nonresonant == complex{} || sc.reference.nonresonant == complex{})
        throw DomainError("NRB equalization needs a nonresonant term in both media");
    const auto stats = ensemble_statistics(sc);
    auto v = [&](double log_alpha) { return nonresonant_visibility(stats, sc.phases, std::exp(log_alpha)); };

    constexpr double ratio = 0.6180339887498949;
    double a = std::log(1e-4);
    double b = std::log(1e4);
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double vc = v(c);
    double vd = v(d);
    while (b - a > 1e-12) {
        if (vc >= vd) {
            b = d;
            d = c;
            vd = vc;
            c = b - ratio * (b - a);
            vc = v(c);
        } else {
            a = c;
            c = d;
            vc = vd;
            d = a + ratio * (b - a);
            vd = v(d);
        }
    }
    const double alpha = std::exp(0.5 * (a + b));
    return {alpha, nonresonant_visibility(stats, sc.phases, alpha),
            nonresonant_visibility(stats, sc.phases, sc.attenuation)};
}

void set_max_threads(unsigned threads) noexcept { thread_cap.store(threads); }

unsigned max_threads() noexcept
{
    const unsigned n = thread_cap.load();
    return n == 0 ? std::max(1u, std::thread::hardware_concurrency()) : n;
}

} // namespace coincars
