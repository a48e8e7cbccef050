#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pacgen/pipeline.hpp"
#include "pacgen/serialize.hpp"

namespace pacgen {

struct RunSummary {
    std::filesystem::path run_dir;
    BoundReport report;
    Json report_doc;
    std::optional<Json> eval_doc;
};

// A run directory (report.json at top level) or a sweep directory (every
// report.json below it, in path order). Throws if nothing valid is found or a
// document fails schema validation.
std::vector<RunSummary> load_run_summaries(const std::filesystem::path& dir);

// Tidy table: N,n_obstacles_gen,seed,bound,empirical,kl,true_cost_estimate,stderr.
// Numbers are copied verbatim from the JSON documents.
std::string summaries_csv(const std::vector<RunSummary>& runs);

void print_summary(const std::vector<RunSummary>& runs, std::ostream& out);

// Reads persisted artifacts only; never simulates.
void render_report(const std::filesystem::path& dir, const std::filesystem::path& out_csv, std::ostream& summary);

}  // namespace pacgen
