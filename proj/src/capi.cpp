#include "coincars/coincars.h"

#include "coincars/analytic.hpp"
#include "coincars/config.hpp"
#include "coincars/error.hpp"
#include "coincars/io.hpp"

#include <algorithm>
#include <cstring>
#include <string>

struct coincars_scenario {
    coincars::ScenarioConfig config;
};

struct coincars_map {
    coincars::InterferenceMap map;
};

struct coincars_curve {
    coincars::FringeCurve curve;
};

struct coincars_stack {
    coincars::Stack stack;
};

namespace {

thread_local std::string last_error;

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class F>
coincars_status guard(F&& body) noexcept
{
    try {
        last_error.clear();
        body();
        return COINCARS_OK;
    } catch (const ArgumentError& e) {
        last_error = e.what();
        return COINCARS_ERR_ARGUMENT;
    } catch (const coincars::ConfigError& e) {
        last_error = e.what();
        return COINCARS_ERR_CONFIG;
    } catch (const coincars::DomainError& e) {
        last_error = e.what();
        return COINCARS_ERR_DOMAIN;
    } catch (const coincars::IoError& e) {
        last_error = e.what();
        return COINCARS_ERR_IO;
    } catch (const std::filesystem::filesystem_error& e) {
        last_error = e.what();
        return COINCARS_ERR_IO;
    } catch (const std::exception& e) {
        last_error = e.what();
        return COINCARS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return COINCARS_ERR_INTERNAL;
    }
}

template <class T>
const T& need(const T* p, const char* what)
{
    if (p == nullptr)
        throw ArgumentError(std::string("null ") + what);
    return *p;
}

template <class T>
T& need(T* p, const char* what)
{
    if (p == nullptr)
        throw ArgumentError(std::string("null ") + what);
    return *p;
}

const char* text_arg(const char* p, const char* what)
{
    if (p == nullptr)
        throw ArgumentError(std::string("null ") + what);
    return p;
}

void copy_text(const std::string& s, char* buf, std::size_t cap, std::size_t* len)
{
    need(len, "length pointer");
    *len = s.size() + 1;
    if (buf != nullptr && cap >= s.size() + 1)
        std::memcpy(buf, s.c_str(), s.size() + 1);
}

std::string stack_text(const coincars::Stack& s)
{
    std::string out = "# n_re, n_im, d_um\n";
    for (const auto& l : s.layers)
        out += coincars::format_double(l.index.real()) + ", " + coincars::format_double(l.index.imag()) + ", " +
               coincars::format_double(l.thickness_um) + "\n";
    return out;
}

} // namespace

extern "C" {

const char* coincars_last_error(void) { return last_error.c_str(); }

const char* coincars_version(void) { return "1.0.0"; }

void coincars_set_max_threads(unsigned threads) { coincars::set_max_threads(threads); }

coincars_status coincars_scenario_load(const char* path, coincars_scenario** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        auto cfg = coincars::load_config(text_arg(path, "path"));
        *out = new coincars_scenario{std::move(cfg)};
    });
}

coincars_status coincars_scenario_parse(const char* json_text, const char* base_dir, coincars_scenario** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        auto doc = coincars::parse_json_text(text_arg(json_text, "json text"), "<config>");
        if (coincars::is_sidecar(doc))
            doc = doc.at("config");
        auto cfg = coincars::parse_config(doc, base_dir ? base_dir : ".");
        *out = new coincars_scenario{std::move(cfg)};
    });
}

void coincars_scenario_free(coincars_scenario* sc) { delete sc; }

coincars_status coincars_scenario_set_seed(coincars_scenario* sc, uint64_t seed)
{
    return guard([&] { need(sc, "scenario").config.set_seed(seed); });
}

coincars_status coincars_scenario_get_seed(const coincars_scenario* sc, uint64_t* seed)
{
    return guard([&] { need(seed, "seed pointer") = need(sc, "scenario").config.seed(); });
}

coincars_status coincars_scenario_set_realizations(coincars_scenario* sc, uint64_t m)
{
    return guard([&] {
        if (m < 1)
            throw ArgumentError("realizations must be at least 1");
        need(sc, "scenario").config.set_realizations(m);
    });
}

coincars_status coincars_scenario_get_realizations(const coincars_scenario* sc, uint64_t* m)
{
    return guard([&] { need(m, "realizations pointer") = need(sc, "scenario").config.scenario.realizations; });
}

coincars_status coincars_scenario_resolved_json(const coincars_scenario* sc, char* buf, size_t cap, size_t* len)
{
    return guard([&] { copy_text(need(sc, "scenario").config.resolved.dump(2), buf, cap, len); });
}

coincars_status coincars_map_build(const coincars_scenario* sc, coincars_map** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        auto map = coincars::build_map(need(sc, "scenario").config.scenario);
        *out = new coincars_map{std::move(map)};
    });
}

void coincars_map_free(coincars_map* map) { delete map; }

coincars_status coincars_map_dims(const coincars_map* map, size_t* n_omega, size_t* n_phase)
{
    return guard([&] {
        const auto& m = need(map, "map").map;
        need(n_omega, "n_omega") = m.omega.count();
        need(n_phase, "n_phase") = m.phase.count;
    });
}

coincars_status coincars_map_grids(const coincars_map* map, double* omega_start, double* omega_step,
                                   double* phase_start, double* phase_step)
{
    return guard([&] {
        const auto& m = need(map, "map").map;
        need(omega_start, "omega_start") = m.omega.start();
        need(omega_step, "omega_step") = m.omega.step();
        need(phase_start, "phase_start") = m.phase.start;
        need(phase_step, "phase_step") = m.phase.step;
    });
}

coincars_status coincars_map_values(const coincars_map* map, double* out, size_t cap)
{
    return guard([&] {
        const auto& m = need(map, "map").map;
        if (cap < m.intensity.size())
            throw ArgumentError("buffer smaller than n_omega * n_phase");
        if (out == nullptr)
            throw ArgumentError("null buffer");
        std::copy(m.intensity.begin(), m.intensity.end(), out);
    });
}

coincars_status coincars_map_strip_metric(const coincars_map* map, double* metric)
{
    return guard([&] { need(metric, "metric") = coincars::vertical_strip_metric(need(map, "map").map); });
}

coincars_status coincars_map_write_csv(const coincars_map* map, const char* path)
{
    return guard([&] { coincars::write_atomic(text_arg(path, "path"), coincars::map_csv(need(map, "map").map)); });
}

coincars_status coincars_map_integrate(const coincars_map* map, coincars_curve** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        *out = new coincars_curve{coincars::integrate_over_frequency(need(map, "map").map)};
    });
}

void coincars_curve_free(coincars_curve* curve) { delete curve; }

coincars_status coincars_curve_size(const coincars_curve* curve, size_t* n)
{
    return guard([&] { need(n, "size pointer") = need(curve, "curve").curve.intensity.size(); });
}

coincars_status coincars_curve_values(const coincars_curve* curve, double* phase, double* intensity, size_t cap)
{
    return guard([&] {
        const auto& c = need(curve, "curve").curve;
        if (cap < c.intensity.size())
            throw ArgumentError("buffer smaller than curve size");
        for (std::size_t j = 0; j < c.intensity.size(); ++j) {
            if (phase)
                phase[j] = c.phase.point(j);
            if (intensity)
                intensity[j] = c.intensity[j];
        }
    });
}

coincars_status coincars_curve_visibility(const coincars_curve* curve, coincars_visibility* report)
{
    return guard([&] {
        const auto r = coincars::visibility(need(curve, "curve").curve);
        need(report, "report") = {r.defined ? 1 : 0, r.v_raw,     r.v_fit,     r.offset,  r.amplitude,
                                  r.phase,           r.phase_max, r.phase_min, r.residual};
    });
}

coincars_status coincars_curve_write_csv(const coincars_curve* curve, const char* path)
{
    return guard([&] { coincars::write_atomic(text_arg(path, "path"), coincars::curve_csv(need(curve, "curve").curve)); });
}

coincars_status coincars_equalize_nrb(const coincars_scenario* sc, coincars_equalization* out)
{
    return guard([&] {
        const auto r = coincars::equalize_via_nrb(need(sc, "scenario").config.scenario);
        need(out, "result") = {r.attenuation, r.visibility, r.unequalized_visibility};
    });
}

coincars_status coincars_probe_preview(const coincars_scenario* sc, const char* spectrum_csv, const char* temporal_csv,
                                       double* correlation_length_cm1)
{
    return guard([&] {
        const auto& cfg = need(sc, "scenario").config;
        const auto& s = cfg.scenario;
        const auto probe = coincars::generate(s.probe, cfg.preview.realization, s.grids.probe());
        if (spectrum_csv)
            coincars::write_atomic(spectrum_csv, coincars::spectrum_csv(probe));
        if (temporal_csv) {
            const auto prof = coincars::temporal_profile(probe, cfg.preview.times);
            coincars::write_atomic(temporal_csv, coincars::temporal_csv(cfg.preview.times, prof));
        }
        if (correlation_length_cm1)
            *correlation_length_cm1 = coincars::spectral_correlation_length(probe);
    });
}

coincars_status coincars_stack_load(const char* path, coincars_stack** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        *out = new coincars_stack{coincars::read_stack(text_arg(path, "path"))};
    });
}

coincars_status coincars_stack_parse(const char* text, coincars_stack** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        *out = new coincars_stack{coincars::parse_stack(text_arg(text, "text"))};
    });
}

coincars_status coincars_stack_random(size_t layers, double index_lo, double index_hi, double thickness_lo_um,
                                      double thickness_hi_um, uint64_t seed, coincars_stack** out)
{
    return guard([&] {
        need(out, "output handle");
        *out = nullptr;
        const coincars::RandomStackRecipe r{layers, index_lo, index_hi, thickness_lo_um, thickness_hi_um};
        *out = new coincars_stack{coincars::random_stack(r, seed)};
    });
}

void coincars_stack_free(coincars_stack* stack) { delete stack; }

coincars_status coincars_stack_layer_count(const coincars_stack* stack, size_t* n)
{
    return guard([&] { need(n, "count pointer") = need(stack, "stack").stack.layers.size(); });
}

coincars_status coincars_stack_text(const coincars_stack* stack, char* buf, size_t cap, size_t* len)
{
    return guard([&] { copy_text(stack_text(need(stack, "stack").stack), buf, cap, len); });
}

coincars_status coincars_tmm_evaluate(const coincars_stack* stack, double wavenumber_cm1, double* t_re, double* t_im,
                                      double* r_re, double* r_im)
{
    return guard([&] {
        const auto m = coincars::transfer_matrix(need(stack, "stack").stack, wavenumber_cm1);
        const auto t = 1.0 / m[0];
        const auto r = m[2] / m[0];
        need(t_re, "t_re") = t.real();
        need(t_im, "t_im") = t.imag();
        need(r_re, "r_re") = r.real();
        need(r_im, "r_im") = r.imag();
    });
}

coincars_status coincars_tmm_write_csv(const coincars_stack* stack, double start_cm1, double step_cm1, size_t count,
                                       const char* path)
{
    return guard([&] {
        const auto& s = need(stack, "stack").stack;
        const auto tr = coincars::transmission(s, coincars::FrequencyGrid(start_cm1, step_cm1, count));
        coincars::write_atomic(text_arg(path, "path"), coincars::tmm_csv(tr));
    });
}

coincars_status coincars_pair_visibility(double w_rs, int use_quadrature, double* v)
{
    return guard([&] {
        need(v, "result");
        if (!std::isfinite(w_rs))
            throw ArgumentError("w_rs must be finite");
        const auto rows = coincars::sweep_wrs(w_rs, w_rs, 1.0);
        *v = use_quadrature ? rows.front().v_quadrature : rows.front().v_closed;
    });
}

coincars_status coincars_sweep_wrs_write_csv(double from, double to, double step, const char* path, size_t* rows)
{
    return guard([&] {
        const auto table = coincars::sweep_wrs(from, to, step);
        coincars::write_atomic(text_arg(path, "path"), coincars::sweep_csv(table));
        if (rows)
            *rows = table.size();
    });
}

coincars_status coincars_write_text_atomic(const char* path, const char* text)
{
    return guard([&] { coincars::write_atomic(text_arg(path, "path"), text_arg(text, "text")); });
}

} // extern "C"
