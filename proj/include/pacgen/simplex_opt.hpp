#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pacgen/bound.hpp"

namespace pacgen {

// min_q (sqrt(C.q + R(q,q0)) + sqrt(R(q,q0)))^2 over the probability simplex.
struct RepProblem {
    std::vector<double> cost_vector;
    SimplexDistribution prior;
    std::int64_t N = 1;
    double delta = 0.01;

    // Throws DomainError / StructuralError; the prior must have full support.
    void validate() const;
    std::size_t size() const noexcept { return cost_vector.size(); }
};

struct SolverConfig {
    std::int64_t max_iters = 50'000;
    double step_size = 0.1;
    double tolerance = 1e-10;
    double floor = 1e-12;

    // Iterations over which the objective decrease is measured for stopping.
    static constexpr std::int64_t kWindow = 10;

    void validate(std::size_t m) const;
};

struct SolveResult {
    SimplexDistribution posterior = SimplexDistribution::uniform(1);
    double objective = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;
};

double rep_objective(const RepProblem& problem, const SimplexDistribution& q);

// dF/dq_i with weights clamped to >= floor before evaluation. A weight that is
// still <= 0 after clamping (floor == 0) is a DomainError.
std::vector<double> rep_gradient(const RepProblem& problem, const SimplexDistribution& q,
                                 double floor = 0.0);

// Exponentiated-gradient mirror descent with halving backtracking. Never
// returns a posterior whose objective exceeds the prior's.
SolveResult optimize_posterior(const RepProblem& problem, const SolverConfig& config = {});

// Observer for every accepted iterate; used by tests to check feasibility.
using IterateObserver = std::function<void(std::span<const double> iterate)>;
SolveResult optimize_posterior(const RepProblem& problem, const SolverConfig& config,
                               const IterateObserver& observer);

// Exhaustive search over the grid {k * step : sum k * step = 1}; m <= 4.
// Ties go to the lexicographically smallest grid index.
SolveResult brute_force_posterior(const RepProblem& problem, double grid_step);

}  // namespace pacgen
