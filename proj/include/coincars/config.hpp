#pragma once

// Scenario configuration documents (JSON) and the resolved form recorded in
// output sidecars.

#include "coincars/interferometry.hpp"

#include "json.hpp"

#include <filesystem>

namespace coincars {

struct PreviewOptions {
    std::uint64_t realization = 0;
    TimeGrid times{-500.0, 5.0, 1201};
};

struct ScenarioConfig {
    Scenario scenario;
    PreviewOptions preview;
    /// Fully resolved document: files inlined, defaults filled. Parsing it
    /// again yields an identical scenario.
    nlohmann::json resolved;

    std::uint64_t seed() const noexcept { return scenario.probe.seed; }
    void set_seed(std::uint64_t seed);
    void set_realizations(std::size_t m);
};

/// Strict parse: unknown keys and wrong types raise ConfigError naming the field.
/// Relative file paths are resolved against `base_dir`.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Loads a config file, or the `config` member of a sidecar written by the CLI.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Parses JSON text with line/column diagnostics.
nlohmann::json parse_json_text(std::string_view text, std::string_view origin);

bool is_sidecar(const nlohmann::json& doc);

} // namespace coincars
