#pragma once

// Seeded evolution strategies: the deterministic map from a synthetic dataset
// to a policy parameter vector.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pacgen/envsim.hpp"

namespace pacgen {

struct EsConfig {
    int population_size = 32;  // even; population_size / 2 antithetic pairs
    double sigma = 0.05;
    double learning_rate = 0.02;
    int iterations = 300;
    std::uint64_t seed = 0;

    void validate() const;
};

// Loss over a flat parameter vector; must be deterministic.
using LossFn = std::function<double(std::span<const double>)>;

// Mean rollout cost over the dataset's environments, in dataset order.
double dataset_loss(std::span<const double> theta, const SyntheticDataset& dataset, const SimSettings& sim);

// Antithetic ES on an arbitrary loss. Losses are clamped to [0,1] before the
// gradient estimate; a non-finite loss throws with the iteration index.
PolicyParams train_es(const LossFn& loss, const EsConfig& config, PolicyParams init);

PolicyParams train_policy(const SyntheticDataset& dataset, const EsConfig& config, const PolicyParams& init,
                          const SimSettings& sim);

// Seed of the ES stream for dataset i: derive_seed(master, "ES", {i}).
std::uint64_t es_seed_for(std::uint64_t master_seed, std::size_t index);

using SeedFn = std::function<std::uint64_t(std::size_t)>;

// Train one policy per dataset from a zero initialization. Output order
// matches input order for any worker count.
std::vector<PolicyParams> pushforward_policies(std::span<const SyntheticDataset> datasets, const EsConfig& base,
                                               std::uint64_t master_seed, const SimSettings& sim, int workers);

// As above with an explicit per-index seed.
std::vector<PolicyParams> pushforward_policies(std::span<const SyntheticDataset> datasets, const EsConfig& base,
                                               const SeedFn& seed_for, const SimSettings& sim, int workers);

// lookup[i] = first index j <= i with policies[j] == policies[i], renumbered
// densely; .second is the number of distinct policies.
std::pair<std::vector<std::size_t>, std::size_t> distinct_policy_lookup(std::span<const PolicyParams> policies);

}  // namespace pacgen
