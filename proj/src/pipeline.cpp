#include "pacgen/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "pacgen/errors.hpp"
#include "pacgen/es_trainer.hpp"
#include "pacgen/parallel.hpp"
#include "pacgen/serialize.hpp"
#include "pacgen/streams.hpp"

namespace pacgen {

namespace fs = std::filesystem;

namespace {

double r12(double v) { return round_significant(v, 12); }

std::string indexed_name(const char* prefix, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04zu%s", prefix, i, ext);
    return buf;
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

Json policy_record(const PolicyParams& p, std::size_t index, const EsConfig& es, std::uint64_t es_seed,
                   std::uint64_t master_seed, const std::string& dataset_digest) {
    Json theta = Json::array();
    for (double v : p.theta) theta.push_back(r12(v));
    return Json{{"schema", kPolicySchema},
                {"index", index},
                {"theta", std::move(theta)},
                {"es",
                 {{"population_size", es.population_size},
                  {"sigma", es.sigma},
                  {"learning_rate", es.learning_rate},
                  {"iterations", es.iterations},
                  {"seed", es_seed}}},
                {"dataset_digest", dataset_digest},
                {"master_seed", master_seed},
                {"stream_version", kStreamVersion},
                {"stream_tag", tags::kEs}};
}

PolicyParams policy_from_record(const Json& doc) {
    if (doc.value("schema", "") != kPolicySchema) throw StructuralError("not a pacgen_policy_v1 record");
    return PolicyParams{doc.at("theta").get<std::vector<double>>()};
}

Json posterior_to_json(const SolveResult& solve, const SimplexDistribution& prior) {
    return Json{{"schema", kPosteriorSchema},
                {"weights", std::vector<double>(solve.posterior.weights().begin(), solve.posterior.weights().end())},
                {"prior", std::vector<double>(prior.weights().begin(), prior.weights().end())},
                {"objective", solve.objective},
                {"iterations", solve.iterations},
                {"converged", solve.converged}};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::vector<double> CostMatrix::column_means() const {
    std::vector<double> means(cols_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) means[c] += at(r, c);
    for (double& v : means) v /= static_cast<double>(rows_);
    return means;
}

Json report_to_json(const BoundReport& r) {
    return Json{{"schema", kReportSchema},
                {"empirical_cost", r12(r.terms.empirical_cost)},
                {"kl", r12(r.terms.kl)},
                {"regularizer", r12(r.terms.regularizer)},
                {"raw_bound", r12(r.terms.raw_bound)},
                {"pac_bound", r12(r.terms.pac_bound)},
                {"policy_kl", r12(r.policy_kl)},
                {"N", r.N},
                {"m", r.m},
                {"l", r.l},
                {"K", r.K},
                {"delta", r12(r.delta)},
                {"n_obstacles_real", r.n_obstacles_real},
                {"n_obstacles_gen", r.n_obstacles_gen},
                {"provenance",
                 {{"seed", r.seed},
                  {"stream_version", kStreamVersion},
                  {"config_digest", r.config_digest},
                  {"real_env_digest", r.real_env_digest}}},
                {"solver",
                 {{"objective", r12(r.solver_objective)},
                  {"iterations", r.solver_iterations},
                  {"converged", r.solver_converged}}}};
}

BoundReport report_from_json(const Json& doc) {
    if (!doc.is_object() || doc.value("schema", "") != kReportSchema)
        throw StructuralError("report: schema is not " + std::string(kReportSchema));
    try {
        BoundReport r;
        r.terms.empirical_cost = doc.at("empirical_cost").get<double>();
        r.terms.kl = doc.at("kl").get<double>();
        r.terms.regularizer = doc.at("regularizer").get<double>();
        r.terms.raw_bound = doc.at("raw_bound").get<double>();
        r.terms.pac_bound = doc.at("pac_bound").get<double>();
        r.policy_kl = doc.at("policy_kl").get<double>();
        r.N = doc.at("N").get<std::int64_t>();
        r.m = doc.at("m").get<std::int64_t>();
        r.l = doc.at("l").get<std::int64_t>();
        r.K = doc.at("K").get<int>();
        r.delta = doc.at("delta").get<double>();
        r.n_obstacles_real = doc.at("n_obstacles_real").get<int>();
        r.n_obstacles_gen = doc.at("n_obstacles_gen").get<int>();
        const Json& prov = doc.at("provenance");
        r.seed = prov.at("seed").get<std::uint64_t>();
        r.config_digest = prov.at("config_digest").get<std::string>();
        r.real_env_digest = prov.at("real_env_digest").get<std::string>();
        const Json& solver = doc.at("solver");
        r.solver_objective = solver.at("objective").get<double>();
        r.solver_iterations = solver.at("iterations").get<std::int64_t>();
        r.solver_converged = solver.at("converged").get<bool>();
        return r;
    } catch (const Json::exception& e) {
        throw StructuralError(std::string("report: ") + e.what());
    }
}

CostMatrix build_cost_matrix(std::span<const PolicyParams> policies, std::span<const EnvironmentSpec> real_envs,
                             int K, const SimSettings& sim, int workers) {
    if (policies.empty() || real_envs.empty()) throw DomainError("build_cost_matrix: empty inputs");
    CostMatrix matrix(real_envs.size(), policies.size());
    const std::size_t cells = real_envs.size() * policies.size();
    parallel_for(cells, workers, [&](std::size_t cell) {
        const std::size_t i = cell / policies.size();
        const std::size_t j = cell % policies.size();
        try {
            matrix.at(i, j) = rollout_cost(real_envs[i], policies[j].theta, K, sim);
        } catch (const std::exception& e) {
            throw StageError("cell(" + std::to_string(i) + "," + std::to_string(j) + ")", e.what());
        }
    });
    return matrix;
}

std::string cost_matrix_csv(const CostMatrix& matrix, std::span<const std::string> row_labels,
                            std::span<const std::string> col_labels) {
    if (row_labels.size() != matrix.rows() || col_labels.size() != matrix.cols())
        throw StructuralError("cost_matrix_csv: label count mismatch");
    std::string out = "env";
    for (const auto& c : col_labels) out += "," + c;
    out += "\n";
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        out += row_labels[r];
        for (std::size_t c = 0; c < matrix.cols(); ++c) out += "," + json_number_text(matrix.at(r, c));
        out += "\n";
    }
    return out;
}

CostMatrix cost_matrix_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw StructuralError("cost matrix: missing header");
    const std::size_t cols = split_csv_line(line).size() - 1;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != cols + 1) throw StructuralError("cost matrix: ragged row");
        std::vector<double> row;
        for (std::size_t c = 1; c < cells.size(); ++c) row.push_back(std::stod(cells[c]));
        rows.push_back(std::move(row));
    }
    CostMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    return m;
}

PolicyParams to_stored_precision(PolicyParams params) {
    for (double& v : params.theta) v = r12(v);
    return params;
}

RunArtifacts execute_pipeline(const ExperimentConfig& config, int workers, bool persist) {
    config.validate();
    const SimSettings sim = make_sim_settings(config);
    const fs::path dir(config.output_dir);
    const auto N = static_cast<std::size_t>(config.N);
    const auto m = static_cast<std::size_t>(config.m);
    const auto l = static_cast<std::size_t>(config.l);

    RunArtifacts run;

    stage("sample", [&] {
        if (persist) {
            fs::create_directories(dir);
            for (const char* stale : {"envs", "policies"}) fs::remove_all(dir / stale);
            for (const char* stale : {"cost_matrix.csv", "posterior.json", "report.json", "eval.json"})
                fs::remove(dir / stale);
            write_json_file(dir / "config.json", config_to_json(config));
        }
        run.real_envs = sample_real_environments(config.real, N, config.seed);
        run.datasets = sample_synthetic_datasets(config.generative, m, l, config.seed);
        if (persist) {
            write_json_file(dir / "envs" / "real.json", environment_set_to_json(run.real_envs, "real"));
            for (const auto& d : run.datasets)
                write_json_file(dir / "envs" / indexed_name("dataset", d.index, ".json"), dataset_to_json(d));
        }
    });

    stage("train", [&] {
        run.policies = pushforward_policies(run.datasets, config.es, config.seed, sim, workers);
        for (auto& p : run.policies) p = to_stored_precision(std::move(p));
        if (persist) {
            for (std::size_t i = 0; i < m; ++i)
                write_json_file(dir / "policies" / indexed_name("policy", i, ".json"),
                                policy_record(run.policies[i], i, config.es, es_seed_for(config.seed, i), config.seed,
                                              dataset_digest(run.datasets[i])));
        }
    });

    stage("cost_matrix", [&] {
        run.costs = build_cost_matrix(run.policies, run.real_envs, config.K, sim, workers);
        if (persist) {
            std::vector<std::string> rows, cols;
            for (const auto& e : run.real_envs) rows.push_back(environment_digest(e));
            for (const auto& d : run.datasets) cols.push_back(dataset_digest(d));
            write_text_file(dir / "cost_matrix.csv", cost_matrix_csv(run.costs, rows, cols));
        }
    });

    const SimplexDistribution prior = SimplexDistribution::uniform(m);
    const std::vector<double> cost_vector = run.costs.column_means();

    stage("optimize", [&] {
        const RepProblem problem{cost_vector, prior, config.N, config.delta};
        run.solve = optimize_posterior(problem, config.solver);
        if (persist) write_json_file(dir / "posterior.json", posterior_to_json(run.solve, prior));
    });

    stage("report", [&] {
        BoundReport& r = run.report;
        r.terms = compute_bound(BoundInputs{config.N, config.delta, cost_vector}, run.solve.posterior, prior);
        const auto [lookup, distinct] = distinct_policy_lookup(run.policies);
        r.policy_kl = kl_discrete(pushforward(run.solve.posterior, lookup, distinct), pushforward(prior, lookup, distinct));
        r.N = config.N;
        r.m = config.m;
        r.l = config.l;
        r.K = config.K;
        r.delta = config.delta;
        r.seed = config.seed;
        r.n_obstacles_real = config.real.n_obstacles;
        r.n_obstacles_gen = config.generative.n_obstacles;
        r.config_digest = config_digest(config);
        r.real_env_digest = environments_digest(run.real_envs);
        r.solver_objective = run.solve.objective;
        r.solver_iterations = run.solve.iterations;
        r.solver_converged = run.solve.converged;
        if (r.terms.raw_bound < r.terms.empirical_cost) throw DomainError("bound below empirical cost");
        if (persist) write_json_file(dir / "report.json", report_to_json(r));
    });

    return run;
}

BoundReport run_pipeline(const ExperimentConfig& config, int workers) {
    return execute_pipeline(config, workers, true).report;
}

TrueCostEstimate estimate_true_cost(const SimplexDistribution& posterior, std::span<const PolicyParams> policies,
                                    const DistributionSpec& real_dist, std::size_t n_eval, std::uint64_t eval_seed,
                                    const SimSettings& sim, int workers) {
    if (n_eval < 1) throw DomainError("estimate_true_cost: n_eval must be >= 1");
    if (posterior.size() != policies.size()) throw StructuralError("estimate_true_cost: posterior/policy mismatch");
    real_dist.validate();

    std::vector<double> values(n_eval, 0.0);
    parallel_for(n_eval, workers, [&](std::size_t i) {
        Rng stream = make_stream(eval_seed, tags::kEval, {i});
        const EnvironmentSpec env = sample_environment(real_dist, stream);
        double v = 0.0;
        for (std::size_t j = 0; j < policies.size(); ++j) {
            if (posterior[j] == 0.0) continue;
            v += posterior[j] * rollout_cost(env, policies[j].theta, sim.horizon, sim);
        }
        values[i] = v;
    });

    TrueCostEstimate est;
    est.n_eval = n_eval;
    double sum = 0.0;
    for (double v : values) sum += v;
    est.estimate = sum / static_cast<double>(n_eval);
    if (n_eval > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - est.estimate) * (v - est.estimate);
        est.standard_error = std::sqrt(ss / static_cast<double>(n_eval - 1) / static_cast<double>(n_eval));
        est.standard_error_defined = true;
    }
    return est;
}

Json eval_to_json(const TrueCostEstimate& est, std::uint64_t eval_seed) {
    return Json{{"schema", kEvalSchema},
                {"estimate", r12(est.estimate)},
                {"standard_error", r12(est.standard_error)},
                {"standard_error_defined", est.standard_error_defined},
                {"n_eval", est.n_eval},
                {"eval_seed", eval_seed},
                {"stream_version", kStreamVersion},
                {"stream_tag", tags::kEval}};
}

TrueCostEstimate evaluate_run(const fs::path& run_dir, std::size_t n_eval, std::optional<std::uint64_t> eval_seed,
                              int workers) {
    const ExperimentConfig config = config_from_json(read_json_file(run_dir / "config.json"));
    const Json post = read_json_file(run_dir / "posterior.json");
    if (post.value("schema", "") != kPosteriorSchema) throw StructuralError("posterior.json: bad schema");
    const SimplexDistribution posterior(post.at("weights").get<std::vector<double>>());

    std::vector<PolicyParams> policies;
    for (std::size_t i = 0; i < posterior.size(); ++i)
        policies.push_back(policy_from_record(read_json_file(run_dir / "policies" / indexed_name("policy", i, ".json"))));

    const SimSettings sim = make_sim_settings(config);
    for (const auto& p : policies)
        if (p.theta.size() != sim.param_count()) throw StructuralError("policy record has wrong parameter count");

    const std::uint64_t seed = eval_seed.value_or(config.seed);
    const TrueCostEstimate est = estimate_true_cost(posterior, policies, config.real, n_eval, seed, sim, workers);
    write_json_file(run_dir / "eval.json", eval_to_json(est, seed));
    return est;
}

SweepAxis parse_sweep_axis(std::string_view name) {
    if (name == "n_obstacles_gen") return SweepAxis::n_obstacles_gen;
    if (name == "N") return SweepAxis::N;
    throw ConfigError("unknown sweep axis \"" + std::string(name) + "\" (expected n_obstacles_gen or N)");
}

std::string_view sweep_axis_name(SweepAxis axis) { return axis == SweepAxis::N ? "N" : "n_obstacles_gen"; }

std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const std::int64_t> values,
                            std::span<const std::uint64_t> seeds, int workers) {
    if (values.empty() || seeds.empty()) throw DomainError("sweep: axis values and seeds must be nonempty");
    const fs::path root(base.output_dir);
    std::vector<SweepRow> rows;
    for (std::int64_t value : values) {
        for (std::uint64_t seed : seeds) {
            SweepRow row;
            row.axis_value = value;
            row.seed = seed;
            row.run_dir = root / (std::string(sweep_axis_name(axis)) + "_" + std::to_string(value)) /
                          ("seed_" + std::to_string(seed));
            try {
                ExperimentConfig cfg = base;
                cfg.seed = seed;
                cfg.output_dir = row.run_dir.string();
                if (axis == SweepAxis::N)
                    cfg.N = value;
                else
                    cfg.generative.n_obstacles = static_cast<int>(value);
                row.report = run_pipeline(cfg, workers);
                row.ok = true;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    write_text_file(root / "sweep.csv", sweep_csv(axis, rows));
    return rows;
}

std::string sweep_csv(SweepAxis axis, std::span<const SweepRow> rows) {
    std::string out =
        "axis,value,seed,status,N,n_obstacles_gen,pac_bound,raw_bound,empirical_cost,kl,regularizer,"
        "real_env_digest,run_dir,error\n";
    for (const auto& row : rows) {
        out += std::string(sweep_axis_name(axis)) + "," + std::to_string(row.axis_value) + "," +
               std::to_string(row.seed) + "," + (row.ok ? "ok" : "failed") + ",";
        if (row.ok) {
            const auto& r = row.report;
            out += std::to_string(r.N) + "," + std::to_string(r.n_obstacles_gen) + "," +
                   json_number_text(r12(r.terms.pac_bound)) + "," + json_number_text(r12(r.terms.raw_bound)) + "," +
                   json_number_text(r12(r.terms.empirical_cost)) + "," + json_number_text(r12(r.terms.kl)) + "," +
                   json_number_text(r12(r.terms.regularizer)) + "," + r.real_env_digest + ",";
        } else {
            out += ",,,,,,,,";
        }
        out += csv_escape(row.run_dir.string()) + "," + csv_escape(row.error) + "\n";
    }
    return out;
}

}  // namespace pacgen
