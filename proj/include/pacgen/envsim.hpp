#pragma once

// 2D corridor navigation: circular obstacles, a fan of depth rays, a small
// tanh network choosing among constant-curvature motion primitives, and the
// cost 1 - k/K where k counts collision-free primitive executions.

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pacgen/streams.hpp"

namespace pacgen {

struct Obstacle {
    double x = 0.0;
    double y = 0.0;
    double radius = 0.0;

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

struct EnvironmentSpec {
    std::vector<Obstacle> obstacles;
    double corridor_half_width = 5.0;  // walls at x = +-corridor_half_width
    double corridor_length = 14.0;     // goal line y = corridor_length

    friend bool operator==(const EnvironmentSpec&, const EnvironmentSpec&) = default;
};

enum class DistributionRole { real, generative };

struct DistributionSpec {
    int n_obstacles = 23;
    double r_min = 0.05;
    double r_max = 0.30;
    double x_min = -5.0;
    double x_max = 5.0;
    double y_min = 0.0;
    double y_max = 14.0;
    double corridor_half_width = 5.0;
    double corridor_length = 14.0;
    DistributionRole role = DistributionRole::real;

    void validate() const;
    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

struct RobotState {
    double x = 0.0;
    double y = 0.0;
    double heading = std::numbers::pi / 2;  // radians in (-pi, pi]; +y is "forward"
};

struct RayScan {
    std::vector<double> depths;
};

struct SensorSpec {
    int n_ray = 16;
    double fov = 2.0 * std::numbers::pi / 3.0;
    double d_max = 5.0;

    void validate() const;
    friend bool operator==(const SensorSpec&, const SensorSpec&) = default;
};

struct Primitive {
    double arc_length = 1.25;
    double heading_change = 0.0;

    friend bool operator==(const Primitive&, const Primitive&) = default;
};

// Fixed, ordered set of arcs. Sample offsets along each arc are precomputed in
// the robot frame (x forward, y left) for the collision check.
class PrimitiveLibrary {
public:
    static constexpr int kDefaultSamples = 100;

    explicit PrimitiveLibrary(std::vector<Primitive> primitives, int samples_per_arc = kDefaultSamples);

    // count arcs with heading changes evenly spaced in [-max_turn, max_turn].
    static PrimitiveLibrary evenly_spaced(int count = 11, double max_turn = std::numbers::pi / 3.0,
                                          double arc_length = 1.25);

    std::size_t size() const noexcept { return primitives_.size(); }
    const Primitive& operator[](std::size_t i) const { return primitives_[i]; }
    std::span<const Primitive> primitives() const noexcept { return primitives_; }
    int samples_per_arc() const noexcept { return samples_; }

    // Robot-frame offset (forward, left) of sample j of primitive i.
    std::pair<double, double> local_sample(std::size_t i, int j) const {
        const auto& p = offsets_[i * static_cast<std::size_t>(samples_) + static_cast<std::size_t>(j)];
        return {p.first, p.second};
    }

    friend bool operator==(const PrimitiveLibrary& a, const PrimitiveLibrary& b) {
        return a.primitives_ == b.primitives_ && a.samples_ == b.samples_;
    }

private:
    std::vector<Primitive> primitives_;
    int samples_;
    std::vector<std::pair<double, double>> offsets_;
};

// Everything a rollout needs besides the world and the policy.
struct SimSettings {
    SensorSpec sensor;
    int hidden_width = 16;
    PrimitiveLibrary primitives = PrimitiveLibrary::evenly_spaced();
    RobotState start;
    int horizon = 12;  // K

    // n_ray -> hidden (tanh) -> n_primitives, with biases.
    std::size_t param_count() const noexcept;
    void validate() const;
};

// Flat parameter vector. Layout: W1 (hidden x n_ray, row-major), b1 (hidden),
// W2 (n_primitives x hidden, row-major), b2 (n_primitives).
struct PolicyParams {
    std::vector<double> theta;

    static PolicyParams zeros(std::size_t n) { return PolicyParams{std::vector<double>(n, 0.0)}; }
    friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

struct SyntheticDataset {
    std::vector<EnvironmentSpec> environments;
    std::uint64_t generator_seed = 0;
    std::size_t index = 0;
    std::string distribution_digest;
};

// Smallest depth reported when the ray origin is inside an obstacle or outside the walls.
inline constexpr double kMinDepth = 1e-6;

double wrap_angle(double a) noexcept;

EnvironmentSpec sample_environment(const DistributionSpec& dist, Rng& stream);

// Dataset i, environment j is drawn from stream (seed, "GEN", i, j).
std::vector<SyntheticDataset> sample_synthetic_datasets(const DistributionSpec& dist, std::size_t m,
                                                        std::size_t l, std::uint64_t master_seed);

// Environment i is drawn from stream (seed, "REAL", i); a longer list extends a shorter one.
std::vector<EnvironmentSpec> sample_real_environments(const DistributionSpec& dist, std::size_t N,
                                                      std::uint64_t master_seed);

// Distance along a ray to the first obstacle or wall, clamped to [kMinDepth, d_max].
double ray_depth(const EnvironmentSpec& env, double ox, double oy, double angle, double d_max);

RayScan raycast_scan(const EnvironmentSpec& env, const RobotState& state, const SensorSpec& sensor);

std::size_t policy_forward(std::span<const double> theta, const RayScan& scan, const SimSettings& sim);

bool in_collision(const EnvironmentSpec& env, double x, double y);

struct StepResult {
    RobotState state;
    bool collision = false;
};

StepResult execute_primitive(const EnvironmentSpec& env, const RobotState& state, std::size_t primitive,
                             const SimSettings& sim);

double rollout_cost(const EnvironmentSpec& env, std::span<const double> theta, int K, const SimSettings& sim);

}  // namespace pacgen
