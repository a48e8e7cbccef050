#include "pacgen/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pacgen/errors.hpp"

namespace pacgen {

void RepProblem::validate() const {
    BoundInputs{N, delta, cost_vector}.validate();
    if (prior.size() != cost_vector.size())
        throw StructuralError("rep problem: prior has " + std::to_string(prior.size()) +
                              " items, cost vector has " + std::to_string(cost_vector.size()));
    if (!prior.has_full_support()) throw DomainError("rep problem: prior must have full support");
}

void SolverConfig::validate(std::size_t m) const {
    if (max_iters < 1) throw DomainError("solver.max_iters must be positive");
    if (!(step_size > 0.0)) throw DomainError("solver.step_size must be positive");
    if (!(tolerance > 0.0)) throw DomainError("solver.tolerance must be positive");
    if (!(floor > 0.0)) throw DomainError("solver.floor must be positive");
    if (m > 0 && floor > 1.0 / static_cast<double>(m)) throw DomainError("solver.floor must be <= 1/m");
}

double rep_objective(const RepProblem& problem, const SimplexDistribution& q) {
    return compute_bound(BoundInputs{problem.N, problem.delta, problem.cost_vector}, q, problem.prior)
        .raw_bound;
}

std::vector<double> rep_gradient(const RepProblem& problem, const SimplexDistribution& q, double floor) {
    problem.validate();
    const std::size_t m = problem.size();
    if (q.size() != m) throw StructuralError("rep_gradient: dimension mismatch");

    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) {
        w[i] = std::max(q[i], floor);
        if (!(w[i] > 0.0))
            throw DomainError("rep_gradient: weight " + std::to_string(i) + " on the simplex boundary");
    }

    double a = 0.0;
    double kl = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        a += problem.cost_vector[i] * w[i];
        kl += w[i] * std::log(w[i] / problem.prior[i]);
    }
    a = std::clamp(a, 0.0, 1.0);
    kl = std::max(kl, 0.0);
    const double n = static_cast<double>(problem.N);
    const double reg = regularizer(kl, problem.N, problem.delta);

    // F = (sqrt(a + R) + sqrt(R))^2, R > 0 since ln(2 sqrt(N)/delta) > 0
    const double sa = std::sqrt(a + reg);
    const double sr = std::sqrt(reg);
    const double s = sa + sr;
    const double dF_da = s / sa;
    const double dF_dR = s * (1.0 / sa + 1.0 / sr);

    std::vector<double> grad(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double dR_dqi = (std::log(w[i] / problem.prior[i]) + 1.0) / (2.0 * n);
        grad[i] = dF_da * problem.cost_vector[i] + dF_dR * dR_dqi;
    }
    return grad;
}

namespace {

// q_i <- q_i exp(-eta g_i) / Z, computed in the log domain.
std::vector<double> mirror_step(const std::vector<double>& q, const std::vector<double>& grad, double eta) {
    const std::size_t m = q.size();
    std::vector<double> logw(m);
    double hi = -INFINITY;
    for (std::size_t i = 0; i < m; ++i) {
        logw[i] = q[i] > 0.0 ? std::log(q[i]) - eta * grad[i] : -INFINITY;
        hi = std::max(hi, logw[i]);
    }
    std::vector<double> out(m);
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = std::exp(logw[i] - hi);
        z += out[i];
    }
    for (double& v : out) v /= z;
    return out;
}

std::vector<double> floor_and_renormalize(const std::vector<double>& q, double floor) {
    std::vector<double> out(q.size());
    double z = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        out[i] = std::max(q[i], floor);
        z += out[i];
    }
    for (double& v : out) v /= z;
    return out;
}

constexpr int kMaxHalvings = 60;

}  // namespace

SolveResult optimize_posterior(const RepProblem& problem, const SolverConfig& config) {
    return optimize_posterior(problem, config, IterateObserver{});
}

SolveResult optimize_posterior(const RepProblem& problem, const SolverConfig& config,
                               const IterateObserver& observer) {
    problem.validate();
    config.validate(problem.size());

    const double prior_objective = rep_objective(problem, problem.prior);
    std::vector<double> q(problem.prior.weights().begin(), problem.prior.weights().end());
    double f = prior_objective;
    if (observer) observer(q);

    // history[k] = objective after k accepted iterations
    std::vector<double> history{f};
    std::int64_t it = 0;
    bool converged = false;
    while (it < config.max_iters) {
        const auto grad = rep_gradient(problem, SimplexDistribution(q), config.floor);
        double eta = config.step_size;
        bool accepted = false;
        std::vector<double> candidate;
        double f_candidate = f;
        for (int h = 0; h < kMaxHalvings; ++h, eta *= 0.5) {
            candidate = mirror_step(q, grad, eta);
            f_candidate = rep_objective(problem, SimplexDistribution(candidate));
            if (f_candidate <= f) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // no descent along the mirror direction at any scale: stationary
            converged = true;
            break;
        }
        ++it;
        q = std::move(candidate);
        f = f_candidate;
        history.push_back(f);
        if (observer) observer(q);
        if (it >= SolverConfig::kWindow &&
            history[static_cast<std::size_t>(it - SolverConfig::kWindow)] - f < config.tolerance) {
            converged = true;
            break;
        }
    }

    SimplexDistribution posterior(floor_and_renormalize(q, config.floor));
    double objective = rep_objective(problem, posterior);
    if (objective > prior_objective) {
        posterior = problem.prior;
        objective = prior_objective;
    }
    return SolveResult{std::move(posterior), objective, it, converged};
}

SolveResult brute_force_posterior(const RepProblem& problem, double grid_step) {
    problem.validate();
    const std::size_t m = problem.size();
    if (m > 4) throw UnsupportedError("brute_force_posterior supports m <= 4, got " + std::to_string(m));
    if (!(grid_step > 0.0 && grid_step <= 1.0)) throw DomainError("grid_step must lie in (0,1]");
    const auto n = static_cast<int>(std::llround(1.0 / grid_step));

    std::vector<int> k(m, 0);
    std::vector<double> w(m);
    std::vector<double> best_w;
    double best = INFINITY;
    std::int64_t evaluated = 0;

    // Enumerate compositions of n into m parts in lexicographic order.
    auto visit = [&](auto&& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == m) {
            k[pos] = remaining;
            for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(k[i]) / n;
            const double f = rep_objective(problem, SimplexDistribution(w));
            ++evaluated;
            if (f < best) {
                best = f;
                best_w = w;
            }
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            k[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    visit(visit, 0, n);

    return SolveResult{SimplexDistribution(std::move(best_w)), best, evaluated, true};
}

}  // namespace pacgen
