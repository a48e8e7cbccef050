#include "pacgen/es_trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pacgen/errors.hpp"
#include "pacgen/parallel.hpp"
#include "pacgen/streams.hpp"

namespace pacgen {

void EsConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0)
        throw DomainError("es.population_size must be a positive even integer");
    if (!(sigma > 0.0)) throw DomainError("es.sigma must be positive");
    if (!(learning_rate > 0.0)) throw DomainError("es.learning_rate must be positive");
    if (iterations < 0) throw DomainError("es.iterations must be >= 0");
}

double dataset_loss(std::span<const double> theta, const SyntheticDataset& dataset, const SimSettings& sim) {
    if (dataset.environments.empty()) throw DomainError("dataset_loss: empty dataset");
    double total = 0.0;
    for (const auto& env : dataset.environments) total += rollout_cost(env, theta, sim.horizon, sim);
    return total / static_cast<double>(dataset.environments.size());
}

PolicyParams train_es(const LossFn& loss, const EsConfig& config, PolicyParams init) {
    config.validate();
    std::vector<double>& theta = init.theta;
    const std::size_t n = theta.size();
    const int pairs = config.population_size / 2;
    const double scale = config.learning_rate / (config.population_size * config.sigma);

    Rng stream(config.seed);
    std::vector<double> eps(n);
    std::vector<double> probe(n);
    std::vector<double> grad(n);

    auto eval = [&](int iteration) {
        const double v = loss(probe);
        if (!std::isfinite(v))
            throw DomainError("non-finite loss at ES iteration " + std::to_string(iteration));
        return std::clamp(v, 0.0, 1.0);
    };

    for (int it = 0; it < config.iterations; ++it) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int p = 0; p < pairs; ++p) {
            for (std::size_t k = 0; k < n; ++k) eps[k] = standard_normal(stream);
            for (std::size_t k = 0; k < n; ++k) probe[k] = theta[k] + config.sigma * eps[k];
            const double up = eval(it);
            for (std::size_t k = 0; k < n; ++k) probe[k] = theta[k] - config.sigma * eps[k];
            const double down = eval(it);
            // L(+) eps + L(-) (-eps)
            const double diff = up - down;
            for (std::size_t k = 0; k < n; ++k) grad[k] += diff * eps[k];
        }
        for (std::size_t k = 0; k < n; ++k) theta[k] -= scale * grad[k];
    }
    return init;
}

PolicyParams train_policy(const SyntheticDataset& dataset, const EsConfig& config, const PolicyParams& init,
                          const SimSettings& sim) {
    if (init.theta.size() != sim.param_count())
        throw StructuralError("train_policy: init has " + std::to_string(init.theta.size()) +
                              " parameters, architecture needs " + std::to_string(sim.param_count()));
    if (dataset.environments.empty()) throw DomainError("train_policy: empty dataset");
    return train_es([&](std::span<const double> theta) { return dataset_loss(theta, dataset, sim); }, config,
                    init);
}

std::uint64_t es_seed_for(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(master_seed, tags::kEs, {index});
}

std::vector<PolicyParams> pushforward_policies(std::span<const SyntheticDataset> datasets, const EsConfig& base,
                                               std::uint64_t master_seed, const SimSettings& sim, int workers) {
    return pushforward_policies(
        datasets, base, [master_seed](std::size_t i) { return es_seed_for(master_seed, i); }, sim, workers);
}

std::vector<PolicyParams> pushforward_policies(std::span<const SyntheticDataset> datasets, const EsConfig& base,
                                               const SeedFn& seed_for, const SimSettings& sim, int workers) {
    if (datasets.empty()) throw DomainError("pushforward_policies: need m >= 1 datasets");
    base.validate();
    std::vector<PolicyParams> out(datasets.size());
    parallel_for(datasets.size(), workers, [&](std::size_t i) {
        EsConfig cfg = base;
        cfg.seed = seed_for(i);
        try {
            out[i] = train_policy(datasets[i], cfg, PolicyParams::zeros(sim.param_count()), sim);
        } catch (const std::exception& e) {
            throw StageError("train[" + std::to_string(i) + "]", e.what());
        }
    });
    return out;
}

std::pair<std::vector<std::size_t>, std::size_t> distinct_policy_lookup(std::span<const PolicyParams> policies) {
    std::vector<std::size_t> lookup(policies.size());
    std::vector<std::size_t> representatives;
    for (std::size_t i = 0; i < policies.size(); ++i) {
        std::size_t slot = representatives.size();
        for (std::size_t r = 0; r < representatives.size(); ++r) {
            if (policies[representatives[r]] == policies[i]) {
                slot = r;
                break;
            }
        }
        if (slot == representatives.size()) representatives.push_back(i);
        lookup[i] = slot;
    }
    return {std::move(lookup), representatives.size()};
}

}  // namespace pacgen
