#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pacgen/config.hpp"
#include "pacgen/errors.hpp"
#include "pacgen/pipeline.hpp"
#include "pacgen/report.hpp"

using namespace pacgen;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("pacgen_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> cells(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');) out.push_back(c);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

const char* kTiny = R"({"schema_version": "pacgen_config_v1", "N": 5, "m": 2, "l": 2, "seed": 4,
                         "es": {"iterations": 2, "population_size": 4}})";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PACGEN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(ParseConfig, MinimalConfigGetsDefaults) {
    const auto dir = scratch("minimal");
    const auto cfg = parse_config(write_config(dir, R"({"schema_version": "pacgen_config_v1"})"));
    EXPECT_EQ(cfg.m, 50);
    EXPECT_EQ(cfg.l, 50);
    EXPECT_EQ(cfg.delta, 0.01);
    EXPECT_EQ(cfg.K, 12);
    EXPECT_EQ(cfg.real.n_obstacles, 23);
    EXPECT_EQ(cfg.es.population_size, 32);
    EXPECT_EQ(cfg.es.iterations, 300);
    EXPECT_EQ(cfg.solver.max_iters, 50000);
}

TEST(ParseConfig, OverridesAreValidated) {
    const auto dir = scratch("overrides");
    const auto path = write_config(dir, R"({"schema_version": "pacgen_config_v1"})");
    try {
        parse_config(path, {"delta=1.5"});
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("delta"), std::string::npos);
    }
    const auto cfg = parse_config(path, {"es.iterations=7", "generative.n_obstacles=10", "output_dir=out/x"});
    EXPECT_EQ(cfg.es.iterations, 7);
    EXPECT_EQ(cfg.generative.n_obstacles, 10);
    EXPECT_EQ(cfg.output_dir, "out/x");
    EXPECT_THROW(parse_config(path, {"novalue"}), ConfigError);
}

TEST(ParseConfig, UnknownKeysAndWrongTypesNameTheField) {
    const auto dir = scratch("unknown");
    const auto path = write_config(dir, R"({"schema_version": "pacgen_config_v1"})");
    const auto message = [&](const std::string& o) {
        try {
            parse_config(path, {o});
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    EXPECT_NE(message("es.sigmaa=0.1").find("es.sigmaa"), std::string::npos);
    EXPECT_NE(message("m=\"ten\"").find("m"), std::string::npos);
    EXPECT_NE(message("es.population_size=5").find("es"), std::string::npos);
    EXPECT_NE(message("seed=-3").find("seed"), std::string::npos);

    EXPECT_THROW(parse_config(write_config(dir, R"({"N": 5})")), ConfigError);
    EXPECT_THROW(parse_config(write_config(dir, "{not json")), ConfigError);
    EXPECT_THROW(parse_config(dir / "missing.json"), ConfigError);
}

TEST(ParseConfig, SerializeRoundTripPreservesDigest) {
    const auto dir = scratch("roundtrip");
    const auto cfg = parse_config(write_config(dir, kTiny), {"delta=0.037", "sim.fov=1.9"});
    const auto again = config_from_json(Json::parse(config_to_json(cfg).dump()));
    EXPECT_EQ(config_digest(cfg), config_digest(again));
    EXPECT_EQ(config_to_json(cfg), config_to_json(again));
}

TEST(RenderReport, SingleRunSummaryAndCsvMatchReport) {
    const auto dir = scratch("render_single");
    auto cfg = parse_config(write_config(dir, kTiny), {"m=1", "output_dir=" + (dir / "run").string()});
    const auto run = execute_pipeline(cfg, 1);
    evaluate_run(dir / "run", 20, std::nullopt, 1);

    std::ostringstream summary;
    render_report(dir / "run", dir / "plot.csv", summary);

    const double c1 = run.costs.column_means()[0];
    const double expected =
        round_significant(std::min(1.0, quad_pac_bound(c1, regularizer(0.0, cfg.N, cfg.delta))), 12);
    EXPECT_NE(summary.str().find("certified bound : " + json_number_text(expected)), std::string::npos)
        << summary.str();

    const auto rows = lines(slurp(dir / "plot.csv"));
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "N,n_obstacles_gen,seed,bound,empirical,kl,true_cost_estimate,stderr");
    const auto c = cells(rows[1]);
    ASSERT_EQ(c.size(), 8u);
    const Json report = read_json_file(dir / "run" / "report.json");
    const Json eval = read_json_file(dir / "run" / "eval.json");
    EXPECT_EQ(c[0], report["N"].dump());
    EXPECT_EQ(c[1], report["n_obstacles_gen"].dump());
    EXPECT_EQ(c[2], report["provenance"]["seed"].dump());
    EXPECT_EQ(c[3], report["pac_bound"].dump());
    EXPECT_EQ(c[4], report["empirical_cost"].dump());
    EXPECT_EQ(c[5], report["kl"].dump());
    EXPECT_EQ(c[6], eval["estimate"].dump());
    EXPECT_EQ(c[7], eval["standard_error"].dump());
}

TEST(RenderReport, SweepDirectoryHasOneRowPerCell) {
    const auto dir = scratch("render_sweep");
    auto cfg = parse_config(write_config(dir, kTiny), {"output_dir=" + (dir / "sweep").string()});
    const std::vector<std::int64_t> values{3, 4};
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    sweep(cfg, SweepAxis::N, values, seeds, 1);
    std::ostringstream summary;
    render_report(dir / "sweep", dir / "plot.csv", summary);
    EXPECT_EQ(lines(slurp(dir / "plot.csv")).size(), 1u + values.size() * seeds.size());
}

TEST(RenderReport, RejectsMissingOrInvalidArtifacts) {
    const auto dir = scratch("render_bad");
    std::ostringstream sink;
    EXPECT_ANY_THROW(render_report(dir, dir / "out.csv", sink));
    std::ofstream(dir / "report.json") << R"({"schema": "something_else"})";
    EXPECT_ANY_THROW(render_report(dir, dir / "out.csv", sink));
}

TEST(CliBinary, ExitCodes) {
    const auto dir = scratch("binary");
    const auto cfg = write_config(dir, kTiny);
    const std::string out = (dir / "run").string();
    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --set output_dir=" + out), 0);
    EXPECT_TRUE(fs::exists(fs::path(out) / "report.json"));
    EXPECT_EQ(run_cli("eval --run-dir " + out + " --n-eval 5"), 0);
    EXPECT_EQ(run_cli("report --run-dir " + out + " --out " + (dir / "plot.csv").string()), 0);
    EXPECT_EQ(lines(slurp(dir / "plot.csv")).size(), 2u);

    EXPECT_EQ(run_cli("run --config " + cfg.string() + " --set delta=1.5"), 2);
    EXPECT_NE(run_cli("report --run-dir " + dir.string() + "/nothing --out x.csv"), 0);
    EXPECT_NE(run_cli("bogus"), 0);

    const std::string sweep_out = (dir / "sweep").string();
    EXPECT_EQ(run_cli("sweep --config " + cfg.string() + " --axis n_obstacles_gen --values 5,23 --seeds 1 --set output_dir=" +
                      sweep_out),
              0);
    EXPECT_EQ(lines(slurp(fs::path(sweep_out) / "sweep.csv")).size(), 3u);
    EXPECT_EQ(run_cli("sweep --config " + cfg.string() + " --axis width --values 5 --seeds 1"), 2);
}
