#include "pacgen/bound.hpp"

#include <cmath>
#include <string>

#include "pacgen/errors.hpp"

namespace pacgen {

namespace {

void check_N_delta(std::int64_t N, double delta) {
    if (N < 1) throw DomainError("N must be >= 1, got " + std::to_string(N));
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("delta must lie in (0,1), got " + std::to_string(delta));
}

}  // namespace

SimplexDistribution::SimplexDistribution(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw DomainError("simplex distribution needs at least one item");
    double sum = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double w = weights_[i];
        if (!std::isfinite(w) || w < 0.0)
            throw DomainError("simplex weight " + std::to_string(i) + " is negative or non-finite");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw DomainError("simplex weights sum to " + std::to_string(sum) + ", expected 1");
}

SimplexDistribution SimplexDistribution::uniform(std::size_t m) {
    if (m == 0) throw DomainError("simplex distribution needs at least one item");
    return SimplexDistribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

SimplexDistribution SimplexDistribution::point_mass(std::size_t m, std::size_t index) {
    if (index >= m) throw StructuralError("point mass index out of range");
    std::vector<double> w(m, 0.0);
    w[index] = 1.0;
    return SimplexDistribution(std::move(w));
}

bool SimplexDistribution::has_full_support() const noexcept {
    for (double w : weights_)
        if (w <= 0.0) return false;
    return true;
}

void BoundInputs::validate() const {
    check_N_delta(N, delta);
    if (cost_vector.empty()) throw DomainError("cost vector is empty");
    for (std::size_t i = 0; i < cost_vector.size(); ++i) {
        const double c = cost_vector[i];
        if (!(c >= 0.0 && c <= 1.0))
            throw DomainError("cost entry " + std::to_string(i) + " outside [0,1]");
    }
}

double kl_discrete(const SimplexDistribution& q, const SimplexDistribution& q0) {
    if (q.size() != q0.size())
        throw StructuralError("kl_discrete: dimension mismatch " + std::to_string(q.size()) + " vs " +
                              std::to_string(q0.size()));
    double kl = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double qi = q[i];
        if (qi == 0.0) continue;
        if (q0[i] == 0.0)
            throw DomainError("kl_discrete: q not absolutely continuous w.r.t. q0 at index " +
                              std::to_string(i));
        kl += qi * std::log(qi / q0[i]);
    }
    // Rounding can leave a tiny negative value when q == q0 up to ulps.
    return kl < 0.0 ? 0.0 : kl;
}

double regularizer(double kl, std::int64_t N, double delta) {
    check_N_delta(N, delta);
    if (!(kl >= 0.0)) throw DomainError("regularizer: kl must be >= 0");
    const double n = static_cast<double>(N);
    return (kl + std::log(2.0 * std::sqrt(n) / delta)) / (2.0 * n);
}

double quad_pac_bound(double empirical_cost, double reg) {
    if (!(empirical_cost >= 0.0 && empirical_cost <= 1.0))
        throw DomainError("quad_pac_bound: empirical cost outside [0,1]");
    if (!(reg >= 0.0)) throw DomainError("quad_pac_bound: regularizer must be >= 0");
    const double s = std::sqrt(empirical_cost + reg) + std::sqrt(reg);
    return s * s;
}

double empirical_posterior_cost(std::span<const double> cost_vector, const SimplexDistribution& q) {
    if (cost_vector.size() != q.size())
        throw StructuralError("empirical_posterior_cost: dimension mismatch");
    double c = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) c += cost_vector[i] * q[i];
    // C is in [0,1]^m and q sums to 1 within 1e-9
    if (c > 1.0) c = 1.0;
    if (c < 0.0) c = 0.0;
    return c;
}

BoundTerms compute_bound(const BoundInputs& inputs, const SimplexDistribution& posterior,
                         const SimplexDistribution& prior) {
    inputs.validate();
    BoundTerms t;
    t.empirical_cost = empirical_posterior_cost(inputs.cost_vector, posterior);
    t.kl = kl_discrete(posterior, prior);
    t.regularizer = regularizer(t.kl, inputs.N, inputs.delta);
    t.raw_bound = quad_pac_bound(t.empirical_cost, t.regularizer);
    t.pac_bound = t.raw_bound < 1.0 ? t.raw_bound : 1.0;
    return t;
}

SimplexDistribution pushforward(const SimplexDistribution& q, std::span<const std::size_t> lookup,
                                std::size_t n_targets) {
    if (lookup.size() != q.size()) throw StructuralError("pushforward: lookup size mismatch");
    std::vector<double> out(n_targets, 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (lookup[i] >= n_targets) throw StructuralError("pushforward: target index out of range");
        out[lookup[i]] += q[i];
    }
    return SimplexDistribution(std::move(out));
}

}  // namespace pacgen
