#include "pacgen/envsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pacgen/errors.hpp"
#include "pacgen/serialize.hpp"

namespace pacgen {

void DistributionSpec::validate() const {
    if (n_obstacles < 0) throw DomainError("n_obstacles must be >= 0");
    if (!(r_min > 0.0 && r_min < r_max)) throw DomainError("need 0 < r_min < r_max");
    if (!(x_min < x_max && y_min < y_max)) throw DomainError("center rectangle is empty");
    if (!(corridor_half_width > 0.0 && corridor_length > 0.0))
        throw DomainError("corridor dimensions must be positive");
}

void SensorSpec::validate() const {
    if (n_ray < 1) throw DomainError("n_ray must be >= 1");
    if (!(fov >= 0.0 && fov <= 2.0 * std::numbers::pi)) throw DomainError("fov must lie in [0, 2pi]");
    if (!(d_max > 0.0)) throw DomainError("d_max must be positive");
}

PrimitiveLibrary::PrimitiveLibrary(std::vector<Primitive> primitives, int samples_per_arc)
    : primitives_(std::move(primitives)), samples_(samples_per_arc) {
    if (primitives_.size() < 2) throw DomainError("primitive library needs at least two primitives");
    if (samples_ < 2) throw DomainError("need at least two collision samples per arc");
    for (std::size_t i = 0; i < primitives_.size(); ++i) {
        if (!(primitives_[i].arc_length > 0.0)) throw DomainError("primitive arc length must be positive");
        for (std::size_t j = 0; j < i; ++j)
            if (primitives_[i] == primitives_[j]) throw DomainError("primitives must be distinct");
    }
    offsets_.reserve(primitives_.size() * static_cast<std::size_t>(samples_));
    for (const auto& p : primitives_) {
        const double kappa = p.heading_change / p.arc_length;
        for (int j = 0; j < samples_; ++j) {
            const double s = p.arc_length * j / (samples_ - 1);
            if (std::abs(kappa) < 1e-12)
                offsets_.emplace_back(s, 0.0);
            else
                offsets_.emplace_back(std::sin(kappa * s) / kappa, (1.0 - std::cos(kappa * s)) / kappa);
        }
    }
}

PrimitiveLibrary PrimitiveLibrary::evenly_spaced(int count, double max_turn, double arc_length) {
    if (count < 2) throw DomainError("primitive library needs at least two primitives");
    std::vector<Primitive> prims;
    for (int k = 0; k < count; ++k)
        prims.push_back(Primitive{arc_length, -max_turn + 2.0 * max_turn * k / (count - 1)});
    return PrimitiveLibrary(std::move(prims));
}

std::size_t SimSettings::param_count() const noexcept {
    const auto in = static_cast<std::size_t>(sensor.n_ray);
    const auto h = static_cast<std::size_t>(hidden_width);
    const auto out = primitives.size();
    return h * in + h + out * h + out;
}

void SimSettings::validate() const {
    sensor.validate();
    if (hidden_width < 1) throw DomainError("hidden_width must be >= 1");
    if (horizon < 1) throw DomainError("horizon K must be >= 1");
}

double wrap_angle(double a) noexcept {
    double r = std::remainder(a, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

EnvironmentSpec sample_environment(const DistributionSpec& dist, Rng& stream) {
    dist.validate();
    EnvironmentSpec env;
    env.corridor_half_width = dist.corridor_half_width;
    env.corridor_length = dist.corridor_length;
    env.obstacles.reserve(static_cast<std::size_t>(dist.n_obstacles));
    for (int i = 0; i < dist.n_obstacles; ++i) {
        Obstacle o;
        o.x = uniform(stream, dist.x_min, dist.x_max);
        o.y = uniform(stream, dist.y_min, dist.y_max);
        o.radius = uniform(stream, dist.r_min, dist.r_max);
        env.obstacles.push_back(o);
    }
    return env;
}

std::vector<SyntheticDataset> sample_synthetic_datasets(const DistributionSpec& dist, std::size_t m,
                                                        std::size_t l, std::uint64_t master_seed) {
    if (m < 1 || l < 1) throw DomainError("need m >= 1 and l >= 1");
    dist.validate();
    const std::string dist_digest = digest_of(to_json(dist));
    std::vector<SyntheticDataset> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i].index = i;
        out[i].generator_seed = master_seed;
        out[i].distribution_digest = dist_digest;
        out[i].environments.reserve(l);
        for (std::size_t j = 0; j < l; ++j) {
            Rng stream = make_stream(master_seed, tags::kGen, {i, j});
            out[i].environments.push_back(sample_environment(dist, stream));
        }
    }
    return out;
}

std::vector<EnvironmentSpec> sample_real_environments(const DistributionSpec& dist, std::size_t N,
                                                      std::uint64_t master_seed) {
    std::vector<EnvironmentSpec> out;
    out.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        Rng stream = make_stream(master_seed, tags::kReal, {i});
        out.push_back(sample_environment(dist, stream));
    }
    return out;
}

double ray_depth(const EnvironmentSpec& env, double ox, double oy, double angle, double d_max) {
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    double t = d_max;

    const double hw = env.corridor_half_width;
    if (std::abs(ox) > hw) return kMinDepth;
    if (dx > 0.0)
        t = std::min(t, (hw - ox) / dx);
    else if (dx < 0.0)
        t = std::min(t, (-hw - ox) / dx);

    for (const auto& o : env.obstacles) {
        const double cx = o.x - ox;
        const double cy = o.y - oy;
        const double c2 = cx * cx + cy * cy;
        const double r2 = o.radius * o.radius;
        if (c2 <= r2) return kMinDepth;
        const double b = cx * dx + cy * dy;  // projection of the center on the ray
        if (b <= 0.0) continue;
        const double disc = b * b - (c2 - r2);
        if (disc < 0.0) continue;
        const double hit = b - std::sqrt(disc);
        if (hit < t) t = hit;
    }
    return std::max(t, kMinDepth);
}

RayScan raycast_scan(const EnvironmentSpec& env, const RobotState& state, const SensorSpec& sensor) {
    RayScan scan;
    scan.depths.resize(static_cast<std::size_t>(sensor.n_ray));
    for (int i = 0; i < sensor.n_ray; ++i) {
        const double offset =
            sensor.n_ray == 1 ? 0.0 : sensor.fov * (static_cast<double>(i) / (sensor.n_ray - 1) - 0.5);
        scan.depths[static_cast<std::size_t>(i)] =
            ray_depth(env, state.x, state.y, state.heading + offset, sensor.d_max);
    }
    return scan;
}

std::size_t policy_forward(std::span<const double> theta, const RayScan& scan, const SimSettings& sim) {
    if (theta.size() != sim.param_count())
        throw StructuralError("policy has " + std::to_string(theta.size()) + " parameters, architecture needs " +
                              std::to_string(sim.param_count()));
    const auto n_in = static_cast<std::size_t>(sim.sensor.n_ray);
    const auto n_hidden = static_cast<std::size_t>(sim.hidden_width);
    const auto n_out = sim.primitives.size();
    if (scan.depths.size() != n_in) throw StructuralError("scan size does not match sensor");

    const double* w1 = theta.data();
    const double* b1 = w1 + n_hidden * n_in;
    const double* w2 = b1 + n_hidden;
    const double* b2 = w2 + n_out * n_hidden;

    // small fixed sizes; a stack buffer would also do
    std::vector<double> hidden(n_hidden);
    for (std::size_t j = 0; j < n_hidden; ++j) {
        double a = b1[j];
        for (std::size_t i = 0; i < n_in; ++i) a += w1[j * n_in + i] * (scan.depths[i] / sim.sensor.d_max);
        hidden[j] = std::tanh(a);
    }
    std::size_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n_out; ++k) {
        double s = b2[k];
        for (std::size_t j = 0; j < n_hidden; ++j) s += w2[k * n_hidden + j] * hidden[j];
        if (s > best_score) {
            best_score = s;
            best = k;
        }
    }
    return best;
}

bool in_collision(const EnvironmentSpec& env, double x, double y) {
    if (std::abs(x) > env.corridor_half_width) return true;
    for (const auto& o : env.obstacles) {
        const double dx = x - o.x;
        const double dy = y - o.y;
        if (dx * dx + dy * dy < o.radius * o.radius) return true;
    }
    return false;
}

StepResult execute_primitive(const EnvironmentSpec& env, const RobotState& state, std::size_t primitive,
                             const SimSettings& sim) {
    if (primitive >= sim.primitives.size()) throw StructuralError("primitive index out of range");
    const Primitive& prim = sim.primitives[primitive];
    const double c = std::cos(state.heading);
    const double s = std::sin(state.heading);

    // Only obstacles within reach of the arc can be hit.
    const double reach = prim.arc_length;
    std::vector<const Obstacle*> nearby;
    nearby.reserve(env.obstacles.size());
    for (const auto& o : env.obstacles) {
        const double dx = o.x - state.x;
        const double dy = o.y - state.y;
        const double lim = reach + o.radius;
        if (dx * dx + dy * dy <= lim * lim) nearby.push_back(&o);
    }

    const int n = sim.primitives.samples_per_arc();
    RobotState at = state;
    for (int j = 0; j < n; ++j) {
        const auto [fwd, left] = sim.primitives.local_sample(primitive, j);
        at.x = state.x + c * fwd - s * left;
        at.y = state.y + s * fwd + c * left;
        bool hit = std::abs(at.x) > env.corridor_half_width;
        for (std::size_t k = 0; !hit && k < nearby.size(); ++k) {
            const double dx = at.x - nearby[k]->x;
            const double dy = at.y - nearby[k]->y;
            hit = dx * dx + dy * dy < nearby[k]->radius * nearby[k]->radius;
        }
        if (hit) {
            at.heading = wrap_angle(state.heading +
                                    prim.heading_change * static_cast<double>(j) / static_cast<double>(n - 1));
            return StepResult{at, true};
        }
    }
    at.heading = wrap_angle(state.heading + prim.heading_change);
    return StepResult{at, false};
}

double rollout_cost(const EnvironmentSpec& env, std::span<const double> theta, int K, const SimSettings& sim) {
    if (K < 1) throw DomainError("rollout horizon K must be >= 1");
    RobotState state = sim.start;
    int successes = 0;
    for (int t = 0; t < K; ++t) {
        const RayScan scan = raycast_scan(env, state, sim.sensor);
        const std::size_t choice = policy_forward(theta, scan, sim);
        const StepResult step = execute_primitive(env, state, choice, sim);
        if (step.collision) break;
        ++successes;
        state = step.state;
        if (state.y >= env.corridor_length) {
            successes = K;
            break;
        }
    }
    return static_cast<double>(K - successes) / static_cast<double>(K);
}

}  // namespace pacgen
