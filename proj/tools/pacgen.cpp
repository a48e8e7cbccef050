// pacgen: train policy distributions from a generative prior and certify them.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pacgen/config.hpp"
#include "pacgen/errors.hpp"
#include "pacgen/parallel.hpp"
#include "pacgen/pipeline.hpp"
#include "pacgen/report.hpp"

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& csv, const char* what) {
    std::vector<T> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || item.empty() || (std::is_unsigned_v<T> && v < 0))
            throw pacgen::ConfigError(std::string(what) + ": bad entry \"" + item + "\"");
        out.push_back(static_cast<T>(v));
    }
    if (out.empty()) throw pacgen::ConfigError(std::string(what) + ": empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC-Bayes certified policy learning with generative environment priors"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string axis;
    std::string values;
    std::string seeds;
    std::string run_dir;
    std::size_t n_eval = 0;
    std::optional<std::uint64_t> eval_seed;
    std::string out_csv;

    auto* run = app.add_subcommand("run", "run the full pipeline for one config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--set", overrides, "dotted.key=value override (repeatable)");

    auto* sw = app.add_subcommand("sweep", "run the pipeline over an axis of values and seeds");
    sw->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sw->add_option("--axis", axis, "n_obstacles_gen or N")->required();
    sw->add_option("--values", values, "comma-separated axis values")->required();
    sw->add_option("--seeds", seeds, "comma-separated master seeds")->required();
    sw->add_option("--set", overrides, "dotted.key=value override (repeatable)");

    auto* ev = app.add_subcommand("eval", "estimate the true cost of a finished run on fresh environments");
    ev->add_option("--run-dir", run_dir, "run directory")->required()->check(CLI::ExistingDirectory);
    ev->add_option("--n-eval", n_eval, "number of fresh environments")->required()->check(CLI::PositiveNumber);
    ev->add_option("--eval-seed", eval_seed, "seed of the evaluation stream (default: run seed)");

    auto* rep = app.add_subcommand("report", "summarize a run or sweep directory");
    rep->add_option("--run-dir", run_dir, "run or sweep directory")->required()->check(CLI::ExistingDirectory);
    rep->add_option("--out", out_csv, "plot-data CSV to write")->required();

    CLI11_PARSE(app, argc, argv);

    const int workers = pacgen::default_worker_count();
    try {
        if (*run) {
            const auto config = pacgen::parse_config(config_path, overrides);
            const auto report = pacgen::run_pipeline(config, workers);
            std::cout << pacgen::report_to_json(report).dump(2) << "\n";
        } else if (*sw) {
            const auto config = pacgen::parse_config(config_path, overrides);
            const auto ax = pacgen::parse_sweep_axis(axis);
            const auto axis_values = parse_list<std::int64_t>(values, "--values");
            const auto seed_list = parse_list<std::uint64_t>(seeds, "--seeds");
            const auto rows = pacgen::sweep(config, ax, axis_values, seed_list, workers);
            std::cout << pacgen::sweep_csv(ax, rows);
            for (const auto& row : rows)
                if (!row.ok) return 1;
        } else if (*ev) {
            const auto est = pacgen::evaluate_run(run_dir, n_eval, eval_seed, workers);
            std::cout << "true cost estimate " << est.estimate << " +- " << est.standard_error
                      << (est.standard_error_defined ? "" : " (undefined for n_eval=1)") << "\n";
        } else if (*rep) {
            pacgen::render_report(run_dir, out_csv, std::cout);
        }
    } catch (const pacgen::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
