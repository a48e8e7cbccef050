#include "pacgen/config.hpp"

#include <set>

#include "pacgen/errors.hpp"

namespace pacgen {

namespace {

Json distribution_json(const DistributionSpec& d) {
    Json j = to_json(d);
    j.erase("role");
    return j;
}

// Reads an object section field by field, rejecting keys nobody consumed.
class Section {
public:
    Section(const Json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) throw ConfigError(where("") + ": expected an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        auto it = doc_.find(key);
        if (it == doc_.end()) return;
        try {
            if constexpr (std::is_integral_v<T>) {
                if (!it->is_number_integer()) throw ConfigError("");
                if constexpr (std::is_unsigned_v<T>) {
                    if (it->is_number_unsigned())
                        out = it->template get<T>();
                    else if (it->template get<std::int64_t>() < 0)
                        throw ConfigError("");
                    else
                        out = static_cast<T>(it->template get<std::int64_t>());
                } else {
                    out = it->template get<T>();
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!it->is_number()) throw ConfigError("");
                out = it->template get<T>();
            } else {
                if (!it->is_string()) throw ConfigError("");
                out = it->template get<T>();
            }
        } catch (const std::exception&) {
            throw ConfigError(where(key) + ": wrong type");
        }
    }

    const Json* child(const char* key) {
        seen_.insert(key);
        auto it = doc_.find(key);
        return it == doc_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = doc_.begin(); it != doc_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(where(it.key()) + ": unknown key");
    }

    std::string where(const std::string& key) const {
        if (path_.empty()) return key;
        return key.empty() ? path_ : path_ + "." + key;
    }

private:
    const Json& doc_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_distribution(Section& parent, const char* key, DistributionSpec& d) {
    const Json* j = parent.child(key);
    if (!j) return;
    Section s(*j, key);
    s.read("n_obstacles", d.n_obstacles);
    s.read("r_min", d.r_min);
    s.read("r_max", d.r_max);
    s.read("x_min", d.x_min);
    s.read("x_max", d.x_max);
    s.read("y_min", d.y_min);
    s.read("y_max", d.y_max);
    s.read("corridor_half_width", d.corridor_half_width);
    s.read("corridor_length", d.corridor_length);
    s.finish();
}

template <typename F>
void check(const std::string& path, F&& f) {
    try {
        f();
    } catch (const DomainError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    check("real", [&] { real.validate(); });
    check("generative", [&] { generative.validate(); });
    if (N < 1) throw ConfigError("N: must be >= 1");
    if (m < 1) throw ConfigError("m: must be >= 1");
    if (l < 1) throw ConfigError("l: must be >= 1");
    if (K < 1) throw ConfigError("K: must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta: must lie in (0,1)");
    check("es", [&] { es.validate(); });
    check("solver", [&] { solver.validate(static_cast<std::size_t>(m)); });
    check("sim", [&] {
        sim.sensor.validate();
        if (sim.hidden_width < 1) throw DomainError("hidden_width must be >= 1");
        if (sim.n_primitives < 2) throw DomainError("n_primitives must be >= 2");
        if (!(sim.max_turn > 0.0)) throw DomainError("max_turn must be positive");
        if (!(sim.arc_length > 0.0)) throw DomainError("arc_length must be positive");
        if (sim.collision_samples < 2) throw DomainError("collision_samples must be >= 2");
    });
    if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
}

SimSettings make_sim_settings(const ExperimentConfig& config) {
    SimSettings s;
    s.sensor = config.sim.sensor;
    s.hidden_width = config.sim.hidden_width;
    auto lib = PrimitiveLibrary::evenly_spaced(config.sim.n_primitives, config.sim.max_turn, config.sim.arc_length);
    s.primitives = PrimitiveLibrary({lib.primitives().begin(), lib.primitives().end()}, config.sim.collision_samples);
    s.start = RobotState{};
    s.horizon = config.K;
    return s;
}

Json config_to_json(const ExperimentConfig& c) {
    return Json{
        {"schema_version", kConfigSchema},
        {"seed", c.seed},
        {"N", c.N},
        {"m", c.m},
        {"l", c.l},
        {"K", c.K},
        {"delta", c.delta},
        {"output_dir", c.output_dir},
        {"real", distribution_json(c.real)},
        {"generative", distribution_json(c.generative)},
        {"es",
         {{"population_size", c.es.population_size},
          {"sigma", c.es.sigma},
          {"learning_rate", c.es.learning_rate},
          {"iterations", c.es.iterations}}},
        {"solver",
         {{"max_iters", c.solver.max_iters},
          {"step_size", c.solver.step_size},
          {"tolerance", c.solver.tolerance},
          {"floor", c.solver.floor}}},
        {"sim",
         {{"n_ray", c.sim.sensor.n_ray},
          {"fov", c.sim.sensor.fov},
          {"d_max", c.sim.sensor.d_max},
          {"hidden_width", c.sim.hidden_width},
          {"n_primitives", c.sim.n_primitives},
          {"max_turn", c.sim.max_turn},
          {"arc_length", c.sim.arc_length},
          {"collision_samples", c.sim.collision_samples}}},
    };
}

ExperimentConfig config_from_json(const Json& doc) {
    ExperimentConfig c;
    Section root(doc, "");
    std::string schema;
    root.read("schema_version", schema);
    if (schema != kConfigSchema)
        throw ConfigError("schema_version: expected \"" + std::string(kConfigSchema) + "\", got \"" + schema + "\"");
    root.read("seed", c.seed);
    root.read("N", c.N);
    root.read("m", c.m);
    root.read("l", c.l);
    root.read("K", c.K);
    root.read("delta", c.delta);
    root.read("output_dir", c.output_dir);
    read_distribution(root, "real", c.real);
    read_distribution(root, "generative", c.generative);
    if (const Json* j = root.child("es")) {
        Section s(*j, "es");
        s.read("population_size", c.es.population_size);
        s.read("sigma", c.es.sigma);
        s.read("learning_rate", c.es.learning_rate);
        s.read("iterations", c.es.iterations);
        s.finish();
    }
    if (const Json* j = root.child("solver")) {
        Section s(*j, "solver");
        s.read("max_iters", c.solver.max_iters);
        s.read("step_size", c.solver.step_size);
        s.read("tolerance", c.solver.tolerance);
        s.read("floor", c.solver.floor);
        s.finish();
    }
    if (const Json* j = root.child("sim")) {
        Section s(*j, "sim");
        s.read("n_ray", c.sim.sensor.n_ray);
        s.read("fov", c.sim.sensor.fov);
        s.read("d_max", c.sim.sensor.d_max);
        s.read("hidden_width", c.sim.hidden_width);
        s.read("n_primitives", c.sim.n_primitives);
        s.read("max_turn", c.sim.max_turn);
        s.read("arc_length", c.sim.arc_length);
        s.read("collision_samples", c.sim.collision_samples);
        s.finish();
    }
    root.finish();
    c.real.role = DistributionRole::real;
    c.generative.role = DistributionRole::generative;
    c.validate();
    return c;
}

void apply_override(Json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("override \"" + std::string(assignment) + "\": expected key=value");
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));

    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error&) {
        value = text;
    }

    Json* node = &doc;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("override \"" + path + "\": empty path segment");
        if (!node->is_object()) throw ConfigError(path + ": not an object");
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

ExperimentConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    Json doc;
    try {
        doc = read_json_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return config_from_json(doc);
}

std::string config_digest(const ExperimentConfig& config) {
    Json doc = config_to_json(config);
    doc.erase("output_dir");
    return sha256_hex(doc.dump());
}

}  // namespace pacgen
