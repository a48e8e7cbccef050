#pragma once

// Versioned JSON documents and content digests.

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pacgen/envsim.hpp"

namespace pacgen {

using Json = nlohmann::json;

inline constexpr std::string_view kEnvSchema = "pacgen_env_v1";
inline constexpr std::string_view kPolicySchema = "pacgen_policy_v1";
inline constexpr std::string_view kPosteriorSchema = "pacgen_posterior_v1";
inline constexpr std::string_view kEvalSchema = "pacgen_eval_v1";

// Round to the given number of significant decimal digits. The shortest
// round-trip rendering of the result has at most that many digits.
double round_significant(double value, int digits = 12);

std::string sha256_hex(std::string_view data);

// First 16 hex characters of the SHA-256 of the compact dump.
std::string digest_of(const Json& doc);

Json to_json(const DistributionSpec& dist);
Json to_json(const SensorSpec& sensor);
Json to_json(const EnvironmentSpec& env);
EnvironmentSpec environment_from_json(const Json& doc);

std::string environment_digest(const EnvironmentSpec& env);
std::string dataset_digest(const SyntheticDataset& dataset);
// Digest of an ordered environment list (e.g. the real training set S).
std::string environments_digest(std::span<const EnvironmentSpec> envs);

// {"schema": "pacgen_env_v1", "kind": "environment_set", ...}
Json environment_set_to_json(std::span<const EnvironmentSpec> envs, std::string_view label);
std::vector<EnvironmentSpec> environment_set_from_json(const Json& doc);
Json dataset_to_json(const SyntheticDataset& dataset);

Json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Textual form of a number exactly as it appears in dumped JSON.
std::string json_number_text(double value);

}  // namespace pacgen
