// coincars command-line front end. Talks to the library through the C API only.

#include "coincars/coincars.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { exit_ok = 0, exit_different = 1, exit_usage = 2, exit_domain = 3, exit_internal = 4 };

struct Failure {
    int code;
    std::string message;
};

int exit_for(coincars_status s)
{
    switch (s) {
    case COINCARS_OK: return exit_ok;
    case COINCARS_ERR_DOMAIN: return exit_domain;
    case COINCARS_ERR_INTERNAL: return exit_internal;
    default: return exit_usage;
    }
}

void check(coincars_status s)
{
    if (s != COINCARS_OK)
        throw Failure{exit_for(s), coincars_last_error()};
}

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    operator T*() const { return p; }
};

using Scenario = Handle<coincars_scenario, coincars_scenario_free>;
using Map = Handle<coincars_map, coincars_map_free>;
using Curve = Handle<coincars_curve, coincars_curve_free>;
using Stack = Handle<coincars_stack, coincars_stack_free>;

std::string read_text(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw Failure{exit_usage, "cannot open " + p.string()};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolved_json(const coincars_scenario* sc)
{
    std::size_t len = 0;
    check(coincars_scenario_resolved_json(sc, nullptr, 0, &len));
    std::string buf(len, '\0');
    check(coincars_scenario_resolved_json(sc, buf.data(), buf.size(), &len));
    buf.resize(len - 1);
    return buf;
}

std::string stack_text(const coincars_stack* st)
{
    std::size_t len = 0;
    check(coincars_stack_text(st, nullptr, 0, &len));
    std::string buf(len, '\0');
    check(coincars_stack_text(st, buf.data(), buf.size(), &len));
    buf.resize(len - 1);
    return buf;
}

struct Common {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> realizations;
};

void load_scenario(Scenario& sc, const std::string& path, const json* inline_config, const Common& c)
{
    if (inline_config) {
        check(coincars_scenario_parse(inline_config->dump().c_str(), ".", sc.out()));
    } else {
        if (path.empty())
            throw Failure{exit_usage, "--config is required"};
        check(coincars_scenario_load(path.c_str(), sc.out()));
    }
    if (c.seed)
        check(coincars_scenario_set_seed(sc, *c.seed));
    if (c.realizations)
        check(coincars_scenario_set_realizations(sc, *c.realizations));
}

json scenario_json(const coincars_scenario* sc) { return json::parse(resolved_json(sc)); }

void write_sidecar(const fs::path& path, const std::string& command, const json& config, const json& args,
                   const json& outputs, const json& results)
{
    json doc;
    doc["coincars_sidecar"] = 1;
    doc["version"] = coincars_version();
    doc["command"] = command;
    if (!config.is_null()) {
        doc["config"] = config;
        doc["master_seed"] = config.at("seed");
        doc["realizations"] = config.at("realizations");
    }
    doc["args"] = args;
    doc["outputs"] = outputs;
    doc["results"] = results;
    check(coincars_write_text_atomic(path.string().c_str(), (doc.dump(2) + "\n").c_str()));
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw Failure{exit_usage, "cannot create " + dir.string() + ": " + ec.message()};
}

std::string path_in(const fs::path& dir, const char* name) { return (dir / name).string(); }

json visibility_json(const coincars_visibility& v)
{
    return {{"defined", v.defined != 0}, {"v_raw", v.v_raw},         {"v_fit", v.v_fit},
            {"offset", v.offset},        {"amplitude", v.amplitude}, {"phase", v.phase},
            {"phase_max", v.phase_max},  {"phase_min", v.phase_min}, {"residual", v.residual}};
}

// Each command takes an optional inline config (replay) and the parsed options.

int run_simulate_map(const Common& c, const json* inline_config)
{
    Scenario sc;
    load_scenario(sc, c.config, inline_config, c);
    Map map;
    check(coincars_map_build(sc, map.out()));
    double metric = 0.0;
    check(coincars_map_strip_metric(map, &metric));
    Curve curve;
    check(coincars_map_integrate(map, curve.out()));
    coincars_visibility vis{};
    check(coincars_curve_visibility(curve, &vis));
    std::size_t n_omega = 0, n_phase = 0;
    check(coincars_map_dims(map, &n_omega, &n_phase));

    const fs::path dir = c.out;
    ensure_dir(dir);
    check(coincars_map_write_csv(map, path_in(dir, "map.csv").c_str()));
    const json results{{"n_omega", n_omega}, {"n_phase", n_phase}, {"strip_metric", metric},
                       {"visibility", visibility_json(vis)}};
    write_sidecar(dir / "map.json", "simulate-map", scenario_json(sc), json::object(), {{"map", "map.csv"}}, results);
    std::printf("map %zu x %zu  strip_metric %.6g rad  V_fit %.6g\n", n_omega, n_phase, metric, vis.v_fit);
    return exit_ok;
}

coincars_visibility build_curve(Scenario& sc, Curve& curve)
{
    Map map;
    check(coincars_map_build(sc, map.out()));
    check(coincars_map_integrate(map, curve.out()));
    coincars_visibility vis{};
    check(coincars_curve_visibility(curve, &vis));
    return vis;
}

int run_fringe_curve(const Common& c, const json* inline_config)
{
    Scenario sc;
    load_scenario(sc, c.config, inline_config, c);
    Curve curve;
    const auto vis = build_curve(sc, curve);
    const fs::path dir = c.out;
    ensure_dir(dir);
    check(coincars_curve_write_csv(curve, path_in(dir, "curve.csv").c_str()));
    write_sidecar(dir / "curve.json", "fringe-curve", scenario_json(sc), json::object(), {{"curve", "curve.csv"}},
                  {{"visibility", visibility_json(vis)}});
    std::printf("V_fit %.6g  V_raw %.6g  Phi_max %.6g  Phi_min %.6g\n", vis.v_fit, vis.v_raw, vis.phase_max,
                vis.phase_min);
    return exit_ok;
}

int run_compare(const Common& c, double threshold, const json* inline_config)
{
    if (!(threshold > 0.0 && threshold < 1.0))
        throw Failure{exit_usage, "threshold must lie in (0, 1)"};
    Scenario sc;
    load_scenario(sc, c.config, inline_config, c);
    Curve curve;
    const auto vis = build_curve(sc, curve);
    const bool same = vis.defined && vis.v_fit >= threshold;
    const fs::path dir = c.out;
    ensure_dir(dir);
    check(coincars_curve_write_csv(curve, path_in(dir, "curve.csv").c_str()));
    write_sidecar(dir / "compare.json", "compare", scenario_json(sc), {{"threshold", threshold}},
                  {{"curve", "curve.csv"}},
                  {{"visibility", visibility_json(vis)}, {"verdict", same ? "SAME" : "DIFFERENT"}});
    std::printf("%s  V_fit %.6g  threshold %.6g\n", same ? "SAME" : "DIFFERENT", vis.v_fit, threshold);
    return same ? exit_ok : exit_different;
}

int run_probe_preview(const Common& c, const json* inline_config)
{
    Scenario sc;
    load_scenario(sc, c.config, inline_config, c);
    const fs::path dir = c.out;
    double corr = 0.0;
    std::uint64_t seed = 0;
    check(coincars_scenario_get_seed(sc, &seed));
    ensure_dir(dir);
    check(coincars_probe_preview(sc, path_in(dir, "probe_spectrum.csv").c_str(),
                                 path_in(dir, "probe_temporal.csv").c_str(), &corr));
    write_sidecar(dir / "probe.json", "probe-preview", scenario_json(sc), json::object(),
                  {{"spectrum", "probe_spectrum.csv"}, {"temporal", "probe_temporal.csv"}},
                  {{"correlation_length_cm1", corr}});
    std::printf("probe seed %llu  correlation length %.6g cm^-1\n", static_cast<unsigned long long>(seed), corr);
    return exit_ok;
}

struct TmmArgs {
    double start = 12000.0;
    double step = 0.25;
    std::size_t count = 4001;
};

int run_tmm(const std::string& out, const std::string& stack_body, const TmmArgs& g)
{
    Stack st;
    check(coincars_stack_parse(stack_body.c_str(), st.out()));
    if (g.count < 2 || !(g.step > 0.0))
        throw Failure{exit_usage, "grid needs step > 0 and count >= 2"};
    const fs::path dir = out;
    ensure_dir(dir);
    check(coincars_tmm_write_csv(st, g.start, g.step, g.count, path_in(dir, "tmm.csv").c_str()));
    std::size_t layers = 0;
    check(coincars_stack_layer_count(st, &layers));
    const json args{{"stack", stack_text(st)}, {"grid", {g.start, g.step, g.count}}};
    write_sidecar(dir / "tmm.json", "tmm-spectrum", nullptr, args, {{"tmm", "tmm.csv"}}, {{"layers", layers}});
    std::printf("tmm %zu layers  %zu points\n", layers, g.count);
    return exit_ok;
}

int run_sweep(const std::string& out, double from, double to, double step)
{
    if (!(step > 0.0) || to < from)
        throw Failure{exit_usage, "sweep needs FROM <= TO and STEP > 0"};
    const fs::path dir = out;
    ensure_dir(dir);
    std::size_t rows = 0;
    check(coincars_sweep_wrs_write_csv(from, to, step, path_in(dir, "sweep.csv").c_str(), &rows));
    write_sidecar(dir / "sweep.json", "sweep-wrs", nullptr, {{"from", from}, {"to", to}, {"step", step}},
                  {{"sweep", "sweep.csv"}}, {{"rows", rows}});
    std::printf("sweep %zu rows\n", rows);
    return exit_ok;
}

int run_replay(const std::string& sidecar_path, const std::string& out_dir)
{
    json doc;
    try {
        doc = json::parse(read_text(sidecar_path));
    } catch (const json::parse_error& e) {
        throw Failure{exit_usage, sidecar_path + ": " + e.what()};
    }
    if (!doc.is_object() || !doc.contains("coincars_sidecar") || !doc.contains("command"))
        throw Failure{exit_usage, sidecar_path + ": not a coincars sidecar"};
    const std::string out = out_dir.empty() ? fs::path(sidecar_path).parent_path().string() : out_dir;
    const std::string cmd = doc.at("command").get<std::string>();
    const json& args = doc.at("args");
    Common c;
    c.out = out.empty() ? "." : out;
    try {
        if (cmd == "simulate-map")
            return run_simulate_map(c, &doc.at("config"));
        if (cmd == "fringe-curve")
            return run_fringe_curve(c, &doc.at("config"));
        if (cmd == "compare")
            return run_compare(c, args.at("threshold").get<double>(), &doc.at("config"));
        if (cmd == "probe-preview")
            return run_probe_preview(c, &doc.at("config"));
        if (cmd == "tmm-spectrum") {
            const auto& g = args.at("grid");
            return run_tmm(c.out, args.at("stack").get<std::string>(),
                           {g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<std::size_t>()});
        }
        if (cmd == "sweep-wrs")
            return run_sweep(c.out, args.at("from").get<double>(), args.at("to").get<double>(),
                             args.at("step").get<double>());
    } catch (const json::exception& e) {
        throw Failure{exit_usage, sidecar_path + ": " + e.what()};
    }
    throw Failure{exit_usage, sidecar_path + ": unknown command '" + cmd + "'"};
}

void apply_thread_env()
{
    const char* env = std::getenv("COINCARS_THREADS");
    if (env == nullptr || *env == '\0')
        return;
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (*end != '\0')
        throw Failure{exit_usage, "COINCARS_THREADS must be a non-negative integer"};
    coincars_set_max_threads(static_cast<unsigned>(n));
}

void add_common(CLI::App* sub, Common& c, bool needs_config = true)
{
    auto* opt = sub->add_option("--config", c.config, "Scenario config (JSON) or sidecar");
    if (needs_config)
        opt->required();
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "Master seed (overrides config)");
    sub->add_option("--realizations", c.realizations, "Noise realizations M")->check(CLI::PositiveNumber);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coherent CARS interference simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", coincars_version());

    Common c;
    double threshold = 0.8;
    TmmArgs grid;
    std::string stack_file;
    std::vector<double> grid_spec;
    double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
    std::string sidecar;

    auto* map_cmd = app.add_subcommand("simulate-map", "Noise-averaged (omega, Phi) interference map");
    add_common(map_cmd, c);
    auto* curve_cmd = app.add_subcommand("fringe-curve", "Frequency-integrated fringe curve and visibility");
    add_common(curve_cmd, c);
    auto* cmp_cmd = app.add_subcommand("compare", "SAME/DIFFERENT verdict from fringe visibility");
    add_common(cmp_cmd, c);
    cmp_cmd->add_option("--threshold", threshold, "Visibility threshold in (0, 1)")->capture_default_str();
    auto* probe_cmd = app.add_subcommand("probe-preview", "Probe spectrum and temporal profile of one realization");
    add_common(probe_cmd, c);
    auto* tmm_cmd = app.add_subcommand("tmm-spectrum", "Transmission spectrum of a layer stack");
    tmm_cmd->add_option("stack", stack_file, "Stack file (rows: n_re, n_im, d_um)")->required();
    tmm_cmd->add_option("--grid", grid_spec, "start,step,count in cm^-1")->delimiter(',')->expected(3);
    tmm_cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    auto* sweep_cmd = app.add_subcommand("sweep-wrs", "Equal-amplitude pair visibility versus w_RS");
    sweep_cmd->add_option("from", sweep_from)->required();
    sweep_cmd->add_option("to", sweep_to)->required();
    sweep_cmd->add_option("step", sweep_step)->required();
    sweep_cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a sidecar");
    replay_cmd->add_option("sidecar", sidecar, "Sidecar JSON")->required()->check(CLI::ExistingFile);
    std::string replay_out;
    replay_cmd->add_option("--out", replay_out, "Output directory (default: the sidecar's)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        apply_thread_env();
        if (*map_cmd)
            return run_simulate_map(c, nullptr);
        if (*curve_cmd)
            return run_fringe_curve(c, nullptr);
        if (*cmp_cmd)
            return run_compare(c, threshold, nullptr);
        if (*probe_cmd)
            return run_probe_preview(c, nullptr);
        if (*tmm_cmd) {
            if (!grid_spec.empty()) {
                if (grid_spec[2] < 2 || grid_spec[2] != static_cast<double>(static_cast<std::size_t>(grid_spec[2])))
                    throw Failure{exit_usage, "--grid count must be an integer >= 2"};
                grid = {grid_spec[0], grid_spec[1], static_cast<std::size_t>(grid_spec[2])};
            }
            return run_tmm(c.out, read_text(stack_file), grid);
        }
        if (*sweep_cmd)
            return run_sweep(c.out, sweep_from, sweep_to, sweep_step);
        if (*replay_cmd)
            return run_replay(sidecar, replay_out);
    } catch (const Failure& f) {
        std::fprintf(stderr, "coincars: %s\n", f.message.c_str());
        return f.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "coincars: %s\n", e.what());
        return exit_internal;
    }
    return exit_usage;
}
