#pragma once

#include "qlienard/dynamics.hpp"
#include "qlienard/model.hpp"
#include "qlienard/noise.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qlienard {

/// A complete, validated simulation request.
struct RunConfig {
    std::string name = "custom";
    DampingSpec spec;
    SystemParams params;
    NoiseSpec noise{};
    IntegratorScheme scheme{};
    Representation representation = Representation::Phase;
    double t_total = 0.0;
    std::uint64_t seed = 1;
    std::size_t ensemble_size = 1;
    /// Member i starts from initial[i % initial.size()].
    std::vector<PhaseState> initial{};
    double kappa = 1.0;
    std::size_t sample_stride = 10;
    double burn_in = 0.3;
    std::string output_dir = "qlienard-out";
};

/// Parses a JSON document (leading '{') or a YAML document into a RunConfig.
/// Unknown keys and schema violations throw ConfigError with the offending
/// path, e.g. "params.gamma".
RunConfig parse_config(std::string_view text);

/// Validates a key-value tree against the run schema.
RunConfig config_from_json(const nlohmann::json& doc);

/// Canonical tree: damping always in the m basis, gamma rather than epsilon,
/// every optional field explicit.
nlohmann::json config_to_json(const RunConfig& config);

/// config_to_json(config).dump(2)
std::string serialize_config(const RunConfig& config);

/// Converts a YAML document to the equivalent JSON tree.
nlohmann::json yaml_to_json(std::string_view text);

std::vector<std::string> preset_names();

/// Figure and table presets. Throws ConfigError for unknown names.
RunConfig preset(std::string_view name);

/// Default run length: 400 natural periods.
double default_t_total(double omega0);

} // namespace qlienard
