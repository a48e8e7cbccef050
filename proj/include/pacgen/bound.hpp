#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pacgen {

// Nonnegative weights on m >= 1 items summing to one (absolute tolerance 1e-9).
class SimplexDistribution {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit SimplexDistribution(std::vector<double> weights);

    static SimplexDistribution uniform(std::size_t m);
    static SimplexDistribution point_mass(std::size_t m, std::size_t index);

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }

    bool has_full_support() const noexcept;

    friend bool operator==(const SimplexDistribution&, const SimplexDistribution&) = default;

private:
    std::vector<double> weights_;
};

struct BoundInputs {
    std::int64_t N = 1;
    double delta = 0.01;
    std::vector<double> cost_vector;

    void validate() const;
};

// The five numbers of one certificate. raw_bound is the unclamped quadratic
// bound; pac_bound = min(raw_bound, 1).
struct BoundTerms {
    double empirical_cost = 0.0;
    double kl = 0.0;
    double regularizer = 0.0;
    double raw_bound = 0.0;
    double pac_bound = 0.0;
};

// sum_i q_i ln(q_i / q0_i) in nats, with 0 ln 0 = 0. Throws StructuralError on
// dimension mismatch and DomainError when q_i > 0 but q0_i = 0.
double kl_discrete(const SimplexDistribution& q, const SimplexDistribution& q0);

// (kl + ln(2 sqrt(N) / delta)) / (2N)
double regularizer(double kl, std::int64_t N, double delta);

// (sqrt(c + reg) + sqrt(reg))^2
double quad_pac_bound(double empirical_cost, double reg);

// Inner product C.q in index order.
double empirical_posterior_cost(std::span<const double> cost_vector, const SimplexDistribution& q);

BoundTerms compute_bound(const BoundInputs& inputs, const SimplexDistribution& posterior,
                         const SimplexDistribution& prior);

// Push a distribution on m items through the map i -> lookup[i] into a
// distribution on n_targets items.
SimplexDistribution pushforward(const SimplexDistribution& q, std::span<const std::size_t> lookup,
                                std::size_t n_targets);

}  // namespace pacgen
