#include "pacgen/report.hpp"

#include <algorithm>
#include <ostream>

#include "pacgen/errors.hpp"

namespace pacgen {

namespace fs = std::filesystem;

namespace {

RunSummary load_one(const fs::path& run_dir) {
    RunSummary s;
    s.run_dir = run_dir;
    s.report_doc = read_json_file(run_dir / "report.json");
    s.report = report_from_json(s.report_doc);
    if (fs::exists(run_dir / "eval.json")) {
        Json eval = read_json_file(run_dir / "eval.json");
        if (eval.value("schema", "") != kEvalSchema || !eval.contains("estimate") ||
            !eval.contains("standard_error"))
            throw StructuralError((run_dir / "eval.json").string() + ": invalid eval document");
        s.eval_doc = std::move(eval);
    }
    return s;
}

}  // namespace

std::vector<RunSummary> load_run_summaries(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
    if (fs::exists(dir / "report.json")) return {load_one(dir)};

    std::vector<fs::path> run_dirs;
    for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().filename() == "report.json")
            run_dirs.push_back(entry.path().parent_path());
    if (run_dirs.empty()) throw std::runtime_error("no report.json found under " + dir.string());
    std::sort(run_dirs.begin(), run_dirs.end());

    std::vector<RunSummary> out;
    for (const auto& d : run_dirs) out.push_back(load_one(d));
    return out;
}

std::string summaries_csv(const std::vector<RunSummary>& runs) {
    std::string out = "N,n_obstacles_gen,seed,bound,empirical,kl,true_cost_estimate,stderr\n";
    for (const auto& r : runs) {
        const Json& d = r.report_doc;
        out += d.at("N").dump() + "," + d.at("n_obstacles_gen").dump() + "," + d.at("provenance").at("seed").dump() +
               "," + d.at("pac_bound").dump() + "," + d.at("empirical_cost").dump() + "," + d.at("kl").dump() + ",";
        if (r.eval_doc)
            out += r.eval_doc->at("estimate").dump() + "," + r.eval_doc->at("standard_error").dump();
        else
            out += ",";
        out += "\n";
    }
    return out;
}

void print_summary(const std::vector<RunSummary>& runs, std::ostream& out) {
    for (const auto& r : runs) {
        const Json& d = r.report_doc;
        out << "run " << r.run_dir.string() << "\n"
            << "  N=" << d.at("N").dump() << " m=" << d.at("m").dump() << " l=" << d.at("l").dump()
            << " K=" << d.at("K").dump() << " delta=" << d.at("delta").dump()
            << " n_obstacles real/gen=" << d.at("n_obstacles_real").dump() << "/" << d.at("n_obstacles_gen").dump()
            << "\n"
            << "  certified bound : " << d.at("pac_bound").dump() << "  (raw " << d.at("raw_bound").dump() << ")\n"
            << "  empirical cost  : " << d.at("empirical_cost").dump() << "\n"
            << "  KL(q||q0)       : " << d.at("kl").dump() << "\n"
            << "  regularizer     : " << d.at("regularizer").dump() << "\n";
        if (r.eval_doc)
            out << "  true cost (est) : " << r.eval_doc->at("estimate").dump() << " +- "
                << r.eval_doc->at("standard_error").dump() << " (n_eval=" << r.eval_doc->at("n_eval").dump() << ")\n";
        else
            out << "  true cost (est) : not evaluated\n";
    }
}

void render_report(const fs::path& dir, const fs::path& out_csv, std::ostream& summary) {
    const auto runs = load_run_summaries(dir);
    print_summary(runs, summary);
    write_text_file(out_csv, summaries_csv(runs));
}

}  // namespace pacgen
