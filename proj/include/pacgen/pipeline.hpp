#pragma once

// End-to-end certificate pipeline:
//   sample S ~ D^N and datasets ~ D_gen^l, train one policy per dataset,
//   fill the N x m cost matrix, minimize the bound over the simplex starting
//   from the uniform prior, and persist everything under the run directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pacgen/bound.hpp"
#include "pacgen/config.hpp"
#include "pacgen/envsim.hpp"
#include "pacgen/simplex_opt.hpp"

namespace pacgen {

inline constexpr std::string_view kReportSchema = "pacgen_report_v1";

// Row = real environment, column = policy.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    // Column means summed in row order: the cost vector C.
    std::vector<double> column_means() const;

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> entries_;
};

struct BoundReport {
    BoundTerms terms;
    double policy_kl = 0.0;  // KL between the induced distributions on distinct policies
    std::int64_t N = 0;
    std::int64_t m = 0;
    std::int64_t l = 0;
    int K = 0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    int n_obstacles_real = 0;
    int n_obstacles_gen = 0;
    std::string config_digest;
    std::string real_env_digest;
    double solver_objective = 0.0;
    std::int64_t solver_iterations = 0;
    bool solver_converged = false;
};

// All report numbers are rounded to 12 significant digits.
Json report_to_json(const BoundReport& report);
BoundReport report_from_json(const Json& doc);

CostMatrix build_cost_matrix(std::span<const PolicyParams> policies, std::span<const EnvironmentSpec> real_envs,
                             int K, const SimSettings& sim, int workers);

std::string cost_matrix_csv(const CostMatrix& matrix, std::span<const std::string> row_labels,
                            std::span<const std::string> col_labels);
CostMatrix cost_matrix_from_csv(const std::string& text);

// ES output rounded to 12 significant digits: the exact vector persisted in
// the policy store and used for every rollout.
PolicyParams to_stored_precision(PolicyParams params);

struct RunArtifacts {
    std::vector<EnvironmentSpec> real_envs;
    std::vector<SyntheticDataset> datasets;
    std::vector<PolicyParams> policies;
    CostMatrix costs{0, 0};
    SolveResult solve;
    BoundReport report;
};

// Runs every stage and writes the run directory config.output_dir (unless
// `persist` is false). Stage failures throw StageError; artifacts of finished
// stages are already on disk.
RunArtifacts execute_pipeline(const ExperimentConfig& config, int workers, bool persist = true);

BoundReport run_pipeline(const ExperimentConfig& config, int workers);

struct TrueCostEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    bool standard_error_defined = false;  // false when n_eval == 1
    std::size_t n_eval = 0;
};

// Mean over n_eval fresh environments (stream (eval_seed, "EVAL", i)) of the
// exact posterior expectation sum_j q_j cost(env, policy_j).
TrueCostEstimate estimate_true_cost(const SimplexDistribution& posterior, std::span<const PolicyParams> policies,
                                    const DistributionSpec& real_dist, std::size_t n_eval, std::uint64_t eval_seed,
                                    const SimSettings& sim, int workers);

Json eval_to_json(const TrueCostEstimate& est, std::uint64_t eval_seed);

// Re-reads a run directory and writes eval.json next to report.json.
TrueCostEstimate evaluate_run(const std::filesystem::path& run_dir, std::size_t n_eval,
                              std::optional<std::uint64_t> eval_seed, int workers);

enum class SweepAxis { n_obstacles_gen, N };

SweepAxis parse_sweep_axis(std::string_view name);
std::string_view sweep_axis_name(SweepAxis axis);

struct SweepRow {
    std::int64_t axis_value = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    BoundReport report;
    std::filesystem::path run_dir;
};

// One pipeline per (axis value, seed), written to
// <base.output_dir>/<axis>_<value>/seed_<seed>/, plus <base.output_dir>/sweep.csv.
// Failed cells are recorded and the sweep continues.
std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const std::int64_t> values,
                            std::span<const std::uint64_t> seeds, int workers);

std::string sweep_csv(SweepAxis axis, std::span<const SweepRow> rows);

}  // namespace pacgen
