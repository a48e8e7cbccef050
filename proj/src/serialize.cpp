#include "pacgen/serialize.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "pacgen/errors.hpp"

namespace pacgen {

double round_significant(double value, int digits) {
    if (!std::isfinite(value) || value == 0.0) return value;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return std::strtod(buf, nullptr);
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xf]);
    }
    return out;
}

std::string digest_of(const Json& doc) { return sha256_hex(doc.dump()).substr(0, 16); }

Json to_json(const DistributionSpec& d) {
    return Json{{"n_obstacles", d.n_obstacles},
                {"r_min", d.r_min},
                {"r_max", d.r_max},
                {"x_min", d.x_min},
                {"x_max", d.x_max},
                {"y_min", d.y_min},
                {"y_max", d.y_max},
                {"corridor_half_width", d.corridor_half_width},
                {"corridor_length", d.corridor_length},
                {"role", d.role == DistributionRole::real ? "real" : "generative"}};
}

Json to_json(const SensorSpec& s) {
    return Json{{"n_ray", s.n_ray}, {"fov", s.fov}, {"d_max", s.d_max}};
}

Json to_json(const EnvironmentSpec& env) {
    Json obstacles = Json::array();
    for (const auto& o : env.obstacles) obstacles.push_back(Json::array({o.x, o.y, o.radius}));
    return Json{{"corridor_half_width", env.corridor_half_width},
                {"corridor_length", env.corridor_length},
                {"obstacles", std::move(obstacles)}};
}

EnvironmentSpec environment_from_json(const Json& doc) {
    EnvironmentSpec env;
    env.corridor_half_width = doc.at("corridor_half_width").get<double>();
    env.corridor_length = doc.at("corridor_length").get<double>();
    for (const auto& o : doc.at("obstacles")) {
        if (!o.is_array() || o.size() != 3) throw StructuralError("obstacle must be [x, y, radius]");
        env.obstacles.push_back(Obstacle{o[0].get<double>(), o[1].get<double>(), o[2].get<double>()});
    }
    return env;
}

std::string environment_digest(const EnvironmentSpec& env) { return digest_of(to_json(env)); }

std::string environments_digest(std::span<const EnvironmentSpec> envs) {
    Json list = Json::array();
    for (const auto& e : envs) list.push_back(environment_digest(e));
    return digest_of(list);
}

std::string dataset_digest(const SyntheticDataset& dataset) {
    return environments_digest(dataset.environments);
}

Json environment_set_to_json(std::span<const EnvironmentSpec> envs, std::string_view label) {
    Json list = Json::array();
    for (const auto& e : envs) list.push_back(to_json(e));
    return Json{{"schema", kEnvSchema},
                {"kind", "environment_set"},
                {"label", label},
                {"digest", environments_digest(envs)},
                {"environments", std::move(list)}};
}

std::vector<EnvironmentSpec> environment_set_from_json(const Json& doc) {
    if (doc.value("schema", "") != kEnvSchema) throw StructuralError("not a pacgen_env_v1 document");
    std::vector<EnvironmentSpec> envs;
    for (const auto& e : doc.at("environments")) envs.push_back(environment_from_json(e));
    return envs;
}

Json dataset_to_json(const SyntheticDataset& dataset) {
    Json doc = environment_set_to_json(dataset.environments, "synthetic_dataset");
    doc["kind"] = "synthetic_dataset";
    doc["index"] = dataset.index;
    doc["generator_seed"] = dataset.generator_seed;
    doc["distribution_digest"] = dataset.distribution_digest;
    return doc;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

std::string json_number_text(double value) { return Json(value).dump(); }

}  // namespace pacgen
