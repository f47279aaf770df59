#include "coincars/config.hpp"

#include "coincars/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <initializer_list>

namespace coincars {

using nlohmann::json;

namespace {

/// Read access to one JSON object with key whitelisting.
class Fields {
public:
    Fields(const json& node, std::string path) : node_(node), path_(std::move(path))
    {
        if (!node_.is_object())
            fail("expected an object");
    }

    void allow(std::initializer_list<const char*> keys) const
    {
        for (const auto& [k, v] : node_.items()) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; }))
                throw ConfigError(path_ + ": unknown key '" + k + "'");
        }
    }

    bool has(const char* key) const { return node_.contains(key); }
    const json& at(const char* key) const
    {
        if (!node_.contains(key))
            throw ConfigError(path_ + ": missing required key '" + key + "'");
        return node_.at(key);
    }
    std::string sub(const char* key) const { return path_ + "." + key; }

    double number(const char* key) const { return as_number(at(key), sub(key)); }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::uint64_t count(const char* key) const
    {
        const auto& v = at(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
            throw ConfigError(sub(key) + ": expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    std::uint64_t count(const char* key, std::uint64_t fallback) const { return has(key) ? count(key) : fallback; }

    bool flag(const char* key, bool fallback) const
    {
        if (!has(key))
            return fallback;
        if (!at(key).is_boolean())
            throw ConfigError(sub(key) + ": expected true or false");
        return at(key).get<bool>();
    }

    std::string text(const char* key) const
    {
        if (!at(key).is_string())
            throw ConfigError(sub(key) + ": expected a string");
        return at(key).get<std::string>();
    }

    complex cplx(const char* key, complex fallback) const { return has(key) ? as_complex(at(key), sub(key)) : fallback; }

    std::pair<double, double> range(const char* key) const
    {
        const auto& v = at(key);
        if (!v.is_array() || v.size() != 2)
            throw ConfigError(sub(key) + ": expected [lo, hi]");
        const double lo = as_number(v[0], sub(key));
        const double hi = as_number(v[1], sub(key));
        if (!(lo < hi))
            throw ConfigError(sub(key) + ": expected lo < hi");
        return {lo, hi};
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_ + ": " + msg); }

    static double as_number(const json& v, const std::string& where)
    {
        if (!v.is_number())
            throw ConfigError(where + ": expected a number");
        return v.get<double>();
    }
    static complex as_complex(const json& v, const std::string& where)
    {
        if (v.is_number())
            return {v.get<double>(), 0.0};
        if (!v.is_array() || v.size() != 2)
            throw ConfigError(where + ": expected a number or [re, im]");
        return {as_number(v[0], where), as_number(v[1], where)};
    }

private:
    const json& node_;
    std::string path_;
};

json complex_json(complex c) { return json::array({c.real(), c.imag()}); }

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

RamanMedium parse_medium(const json& node, const std::string& path, const std::filesystem::path& base)
{
    Fields f(node, path);
    f.allow({"lines_file", "lines", "nonresonant", "line_scale"});
    RamanMedium m;
    if (f.has("lines_file") && f.has("lines"))
        f.fail("give either 'lines_file' or 'lines', not both");
    if (f.has("lines_file")) {
        m = read_line_list(resolve_path(base, f.text("lines_file")));
    } else if (f.has("lines")) {
        const auto& arr = f.at("lines");
        if (!arr.is_array())
            throw ConfigError(f.sub("lines") + ": expected an array of [center, hwhm, re, im]");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto where = f.sub("lines") + "[" + std::to_string(i) + "]";
            const auto& row = arr[i];
            if (!row.is_array() || row.size() != 4)
                throw ConfigError(where + ": expected [center, hwhm, re, im]");
            m.lines.push_back({Fields::as_number(row[0], where), Fields::as_number(row[1], where),
                               {Fields::as_number(row[2], where), Fields::as_number(row[3], where)}});
        }
    }
    m.nonresonant = f.cplx("nonresonant", m.nonresonant);
    const double scale = f.number("line_scale", 1.0);
    for (auto& l : m.lines)
        l.amplitude *= scale;
    try {
        m.validate();
    } catch (const DomainError& e) {
        f.fail(e.what());
    }
    return m;
}

json medium_json(const RamanMedium& m)
{
    json lines = json::array();
    for (const auto& l : m.lines)
        lines.push_back({l.center, l.hwhm, l.amplitude.real(), l.amplitude.imag()});
    return {{"lines", lines}, {"nonresonant", complex_json(m.nonresonant)}};
}

struct Envelope {
    double center, fwhm;
};

Envelope parse_envelope(const Fields& parent, const char* key)
{
    Fields f(parent.at(key), parent.sub(key));
    f.allow({"center_cm1", "fwhm_cm1"});
    Envelope e{f.number("center_cm1"), f.number("fwhm_cm1")};
    if (!(e.fwhm > 0.0))
        f.fail("fwhm_cm1 must be positive");
    return e;
}

ProbeSpec parse_probe(const json& node, const std::string& path, const std::filesystem::path& base,
                      const FrequencyGrid& probe_grid, json& resolved)
{
    Fields f(node, path);
    const std::string type = f.text("type");
    ProbeSpec spec;
    resolved = json::object();
    resolved["type"] = type;
    if (type == "multi_lorentzian") {
        f.allow({"type", "count", "width_nm", "width_cm1", "band_cm1", "random_phases"});
        MultiLorentzian m;
        m.count = f.count("count", m.count);
        if (f.has("width_nm") && f.has("width_cm1"))
            f.fail("give either width_nm or width_cm1");
        if (f.has("width_nm"))
            m.width_nm = f.number("width_nm");
        else
            m.width_cm1 = f.number("width_cm1", m.width_cm1);
        std::tie(m.band_lo, m.band_hi) = f.range("band_cm1");
        m.random_phases = f.flag("random_phases", true);
        resolved["count"] = m.count;
        if (m.width_nm)
            resolved["width_nm"] = *m.width_nm;
        else
            resolved["width_cm1"] = m.width_cm1;
        resolved["band_cm1"] = {m.band_lo, m.band_hi};
        resolved["random_phases"] = m.random_phases;
        spec.variant = m;
    } else if (type == "narrowband") {
        f.allow({"type", "center_cm1", "amplitude"});
        Narrowband n{f.number("center_cm1"), f.cplx("amplitude", {1.0, 0.0})};
        resolved["center_cm1"] = n.center;
        resolved["amplitude"] = complex_json(n.amplitude);
        spec.variant = n;
    } else if (type == "random_phase") {
        f.allow({"type", "envelope", "correlation_cm1"});
        const auto env = parse_envelope(f, "envelope");
        RandomPhaseEnvelope r{gaussian_pulse(env.center, env.fwhm, probe_grid), f.number("correlation_cm1")};
        resolved["envelope"] = {{"center_cm1", env.center}, {"fwhm_cm1", env.fwhm}};
        resolved["correlation_cm1"] = r.correlation_cm1;
        spec.variant = std::move(r);
    } else if (type == "layered") {
        f.allow({"type", "envelope", "stack"});
        const auto env = parse_envelope(f, "envelope");
        Fields s(f.at("stack"), f.sub("stack"));
        s.allow({"random", "file", "layers", "surrounding_index"});
        json rstack = json::object();
        LayeredMedium l{gaussian_pulse(env.center, env.fwhm, probe_grid), Stack{}};
        const double outside = s.number("surrounding_index", 1.0);
        if (s.has("random")) {
            Fields r(s.at("random"), s.sub("random"));
            r.allow({"layers", "index", "thickness_um"});
            RandomStackRecipe rec;
            rec.layer_count = r.count("layers", rec.layer_count);
            std::tie(rec.index_lo, rec.index_hi) = r.range("index");
            std::tie(rec.thickness_lo_um, rec.thickness_hi_um) = r.range("thickness_um");
            rstack["random"] = {{"layers", rec.layer_count},
                                {"index", {rec.index_lo, rec.index_hi}},
                                {"thickness_um", {rec.thickness_lo_um, rec.thickness_hi_um}}};
            l.stack = rec;
        } else {
            Stack st;
            if (s.has("file")) {
                st = read_stack(resolve_path(base, s.text("file")));
            } else {
                const auto& arr = s.at("layers");
                if (!arr.is_array())
                    throw ConfigError(s.sub("layers") + ": expected an array of [n_re, n_im, d_um]");
                for (std::size_t i = 0; i < arr.size(); ++i) {
                    const auto where = s.sub("layers") + "[" + std::to_string(i) + "]";
                    if (!arr[i].is_array() || arr[i].size() != 3)
                        throw ConfigError(where + ": expected [n_re, n_im, d_um]");
                    st.layers.push_back({{Fields::as_number(arr[i][0], where), Fields::as_number(arr[i][1], where)},
                                         Fields::as_number(arr[i][2], where)});
                }
            }
            st.surrounding_index = outside;
            json layers = json::array();
            for (const auto& layer : st.layers)
                layers.push_back({layer.index.real(), layer.index.imag(), layer.thickness_um});
            rstack["layers"] = layers;
            l.stack = st;
        }
        rstack["surrounding_index"] = outside;
        resolved["envelope"] = {{"center_cm1", env.center}, {"fwhm_cm1", env.fwhm}};
        resolved["stack"] = rstack;
        spec.variant = std::move(l);
    } else {
        throw ConfigError(f.sub("type") + ": unknown probe type '" + type + "'");
    }
    return spec;
}

} // namespace

nlohmann::json parse_json_text(std::string_view text, std::string_view origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
        const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
        throw ConfigError(std::string(origin) + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
    }
}

bool is_sidecar(const nlohmann::json& doc) { return doc.is_object() && doc.contains("coincars_sidecar"); }

ScenarioConfig parse_config(const json& doc, const std::filesystem::path& base)
{
    Fields top(doc, "config");
    top.allow({"description", "sample", "reference", "excitation", "probe", "grid", "phase", "realizations", "seed",
               "dispersion", "attenuation", "equal_power", "preview"});
    ScenarioConfig cfg;
    auto& sc = cfg.scenario;
    json& r = cfg.resolved;
    r = json::object();
    if (top.has("description"))
        r["description"] = top.text("description");

    sc.sample = parse_medium(top.at("sample"), "config.sample", base);
    sc.reference = parse_medium(top.at("reference"), "config.reference", base);
    r["sample"] = medium_json(sc.sample);
    r["reference"] = medium_json(sc.reference);

    {
        Fields g(top.at("grid"), "config.grid");
        g.allow({"step_cm1", "shift_cm1", "probe_cm1"});
        sc.grids.step = g.number("step_cm1", sc.grids.step);
        if (!(sc.grids.step > 0.0))
            g.fail("step_cm1 must be positive");
        std::tie(sc.grids.shift_lo, sc.grids.shift_hi) = g.range("shift_cm1");
        std::tie(sc.grids.probe_lo, sc.grids.probe_hi) = g.range("probe_cm1");
        r["grid"] = {{"step_cm1", sc.grids.step},
                     {"shift_cm1", {sc.grids.shift_lo, sc.grids.shift_hi}},
                     {"probe_cm1", {sc.grids.probe_lo, sc.grids.probe_hi}}};
    }

    {
        Fields e(top.at("excitation"), "config.excitation");
        if (e.has("flat")) {
            e.allow({"flat"});
            Fields fl(e.at("flat"), e.sub("flat"));
            fl.allow({"a0", "band_cm1"});
            FlatExcitation flat;
            flat.a0 = fl.cplx("a0", flat.a0);
            std::tie(flat.band_lo, flat.band_hi) = fl.range("band_cm1");
            r["excitation"] = {{"flat", {{"a0", complex_json(flat.a0)}, {"band_cm1", {flat.band_lo, flat.band_hi}}}}};
            sc.excitation = flat;
        } else {
            e.allow({"pump", "stokes", "step_cm1", "extent_sigma"});
            auto pulse = [&](const char* key) {
                Fields p(e.at(key), e.sub(key));
                p.allow({"wavelength_nm", "duration_fs"});
                return PulseSpec{p.number("wavelength_nm"), p.number("duration_fs", 35.0)};
            };
            PulseExcitation pe{pulse("pump"), pulse("stokes")};
            pe.step_cm1 = e.number("step_cm1", pe.step_cm1);
            pe.extent_sigma = e.number("extent_sigma", pe.extent_sigma);
            r["excitation"] = {
                {"pump", {{"wavelength_nm", pe.pump.wavelength_nm}, {"duration_fs", pe.pump.duration_fs}}},
                {"stokes", {{"wavelength_nm", pe.stokes.wavelength_nm}, {"duration_fs", pe.stokes.duration_fs}}},
                {"step_cm1", pe.step_cm1},
                {"extent_sigma", pe.extent_sigma}};
            sc.excitation = pe;
        }
    }

    json rprobe;
    sc.probe = parse_probe(top.at("probe"), "config.probe", base, sc.grids.probe(), rprobe);
    r["probe"] = rprobe;
    sc.probe.seed = top.count("seed", 0);
    r["seed"] = sc.probe.seed;

    sc.realizations = top.count("realizations", 1);
    r["realizations"] = sc.realizations;

    if (top.has("phase")) {
        Fields p(top.at("phase"), "config.phase");
        p.allow({"points", "cycles"});
        const auto points = p.count("points", 64);
        const double cycles = p.number("cycles", 1.0);
        if (points == 0 || cycles == 0.0)
            p.fail("points and cycles must be nonzero");
        sc.phases = PhaseGrid::cycles(points, cycles);
        r["phase"] = {{"points", points}, {"cycles", cycles}};
    } else {
        r["phase"] = {{"points", sc.phases.count}, {"cycles", 1.0}};
    }

    if (top.has("dispersion")) {
        Fields d(top.at("dispersion"), "config.dispersion");
        d.allow({"reference_cm1", "linear", "quadratic"});
        sc.dispersion = {d.number("reference_cm1", 0.0), d.number("linear", 0.0), d.number("quadratic", 0.0)};
    }
    r["dispersion"] = {{"reference_cm1", sc.dispersion.reference},
                       {"linear", sc.dispersion.linear},
                       {"quadratic", sc.dispersion.quadratic}};

    sc.attenuation = top.number("attenuation", 1.0);
    r["attenuation"] = sc.attenuation;
    sc.equal_power = top.flag("equal_power", false);
    r["equal_power"] = sc.equal_power;

    if (top.has("preview")) {
        Fields p(top.at("preview"), "config.preview");
        p.allow({"realization", "time_fs"});
        cfg.preview.realization = p.count("realization", 0);
        if (p.has("time_fs")) {
            const auto& t = p.at("time_fs");
            if (!t.is_array() || t.size() != 3 || !t[2].is_number_unsigned())
                throw ConfigError(p.sub("time_fs") + ": expected [start, step, count]");
            cfg.preview.times = {Fields::as_number(t[0], p.sub("time_fs")), Fields::as_number(t[1], p.sub("time_fs")),
                                 t[2].get<std::size_t>()};
        }
    }
    r["preview"] = {{"realization", cfg.preview.realization},
                    {"time_fs", {cfg.preview.times.start_fs, cfg.preview.times.step_fs, cfg.preview.times.count}}};

    try {
        sc.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

void ScenarioConfig::set_seed(std::uint64_t seed)
{
    scenario.probe.seed = seed;
    resolved["seed"] = seed;
}

void ScenarioConfig::set_realizations(std::size_t m)
{
    if (m < 1)
        throw ConfigError("realizations must be at least 1");
    scenario.realizations = m;
    resolved["realizations"] = m;
}

ScenarioConfig load_config(const std::filesystem::path& path)
{
    const auto doc = parse_json_text(detail::read_file(path), path.string());
    const auto base = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    if (is_sidecar(doc)) {
        if (!doc.contains("config"))
            throw ConfigError(path.string() + ": sidecar has no 'config' member");
        return parse_config(doc.at("config"), base);
    }
    return parse_config(doc, base);
}

} // namespace coincars
