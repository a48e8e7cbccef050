#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pacgen/envsim.hpp"
#include "pacgen/es_trainer.hpp"
#include "pacgen/serialize.hpp"
#include "pacgen/simplex_opt.hpp"

namespace pacgen {

inline constexpr std::string_view kConfigSchema = "pacgen_config_v1";

struct SimConfig {
    SensorSpec sensor;
    int hidden_width = 16;
    int n_primitives = 11;
    double max_turn = std::numbers::pi / 3.0;
    double arc_length = 1.25;
    int collision_samples = PrimitiveLibrary::kDefaultSamples;

    friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct ExperimentConfig {
    DistributionSpec real{.role = DistributionRole::real};
    DistributionSpec generative{.role = DistributionRole::generative};
    std::int64_t N = 100;
    std::int64_t m = 50;
    std::int64_t l = 50;
    int K = 12;
    double delta = 0.01;
    EsConfig es;
    SolverConfig solver;
    SimConfig sim;
    std::uint64_t seed = 0;
    std::string output_dir = "runs/default";

    // Throws ConfigError naming the offending field.
    void validate() const;
};

SimSettings make_sim_settings(const ExperimentConfig& config);

Json config_to_json(const ExperimentConfig& config);

// Strict: unknown keys, wrong types and invariant violations throw ConfigError
// with the dotted field path. Missing keys take their defaults.
ExperimentConfig config_from_json(const Json& doc);

// Applies "dotted.path=value"; value is parsed as JSON, falling back to a string.
void apply_override(Json& doc, std::string_view assignment);

ExperimentConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// Full SHA-256 of the canonical config document.
// SHA-256 of the canonical config JSON without output_dir, so that the same
// experiment written to two locations reports the same digest.
std::string config_digest(const ExperimentConfig& config);

}  // namespace pacgen
