#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "sgfs_cli/commands.hpp"

namespace sgfs::cli {
namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SGFS_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("SGFS_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

const std::map<std::string, ProjMethod> proj_methods{
    {"sglp", ProjMethod::sglp}, {"admm", ProjMethod::admm}, {"dykstra", ProjMethod::dykstra}};
const std::map<std::string, LogBase> log_bases{{"ln", LogBase::natural}, {"log10", LogBase::ten}};
const std::map<std::string, OutputFormat> formats{
    {"table", OutputFormat::table}, {"jsonl", OutputFormat::jsonl}, {"both", OutputFormat::both}};
const std::map<std::string, SolveOptions::Method> solve_methods{{"dc", SolveOptions::Method::dc},
                                                                {"sgl", SolveOptions::Method::sgl}};
const std::map<std::string, CvMetric> metrics{{"mse", CvMetric::prediction_error}, {"accuracy", CvMetric::accuracy}};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sparse group feature selection: projections, solvers and benchmarks"};
    app.require_subcommand(1);

    OutputFormat format = OutputFormat::table;
    std::string jsonl_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--format", format, "stdout format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->default_str("table");
    app.add_option("--jsonl", jsonl_path, "also write the JSON-lines report to this file");
    app.add_option("--seed", seed, "base random seed (default: $SGFS_SEED or 0)");

    ProjectOptions proj;
    auto* c_proj = app.add_subcommand("project", "project one vector onto the L1 / group-norm intersection");
    c_proj->add_option("--method", proj.method)->transform(CLI::CheckedTransformer(proj_methods))->default_str("sglp");
    c_proj->add_option("--input", proj.input, "vector CSV (one value per line); generated when absent")
        ->check(CLI::ExistingFile);
    c_proj->add_option("--groups", proj.groups, "group-id file; contiguous groups when absent")
        ->check(CLI::ExistingFile);
    c_proj->add_option("-p,--dim", proj.p, "dimension of the generated vector")->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_proj->add_option("--group-count", proj.group_count, "number of contiguous groups")->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_proj->add_option("--s1", proj.s1, "L1 radius");
    c_proj->add_option("--s2", proj.s2, "group-norm radius");
    c_proj->add_option("--log", proj.log_base, "logarithm in the default radii")
        ->transform(CLI::CheckedTransformer(log_bases))
        ->default_str("ln");
    c_proj->add_option("--rel-tol", proj.rel_tol, "relative stop for admm and dykstra")->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_proj->add_option("--max-iter", proj.max_iter, "iteration cap for admm and dykstra")->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_proj->add_option("-o,--output", proj.output, "write the projection here");

    BenchProjOptions bp;
    auto* c_bp = app.add_subcommand("bench-proj", "time the exact projection against ADMM and Dykstra");
    c_bp->add_option("--p", bp.p_list, "dimensions")->delimiter(',')->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_bp->add_option("--reps", bp.reps, "replications per dimension")->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_bp->add_option("--methods", bp.methods)->delimiter(',')->transform(CLI::CheckedTransformer(proj_methods))
        ->default_str("sglp,admm,dykstra");
    c_bp->add_option("--log", bp.log_base)->transform(CLI::CheckedTransformer(log_bases))->default_str("ln");
    c_bp->add_option("--target-gap", bp.target_gap, "baseline stop gap to the exact objective")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_bp->add_option("--time-limit", bp.time_limit, "per-run time limit for the baselines, seconds")
        ->check(CLI::PositiveNumber);

    BenchSynthOptions bs;
    int synth_parallel = 1;
    auto* c_bs = app.add_subcommand("bench-synth", "compare DC and convex SGL on synthetic regression data");
    c_bs->add_option("--reps", bs.reps)->check(CLI::PositiveNumber)->capture_default_str();
    c_bs->add_option("--tau", bs.tau)->check(CLI::PositiveNumber)->capture_default_str();
    c_bs->add_option("--dc-s2-grid", bs.dc_s2_grid)->delimiter(',');
    c_bs->add_option("--dc-s1-mult", bs.dc_s1_mult, "DC s1 grid as multiples of s2")->delimiter(',');
    c_bs->add_option("--sgl-s2-grid", bs.sgl_s2_grid)->delimiter(',');
    c_bs->add_option("--sgl-s1-mult", bs.sgl_s1_mult, "convex s1 grid as multiples of s2")->delimiter(',');
    c_bs->add_option("--folds", bs.folds, "0 for leave-one-out")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_bs->add_option("--parallel", synth_parallel, "concurrent CV evaluations")->check(CLI::PositiveNumber);

    SolveOptions so;
    int solve_parallel = 1;
    auto* c_so = app.add_subcommand("solve", "fit a model to CSV data");
    c_so->add_option("--method", so.method)->transform(CLI::CheckedTransformer(solve_methods))->default_str("dc");
    c_so->add_option("--matrix", so.matrix, "design matrix CSV, one sample per row")
        ->required()
        ->check(CLI::ExistingFile);
    c_so->add_option("--response", so.response, "response, one value per line")->required()->check(CLI::ExistingFile);
    c_so->add_option("--groups", so.groups, "0-based group id per feature")->required()->check(CLI::ExistingFile);
    c_so->add_flag("--header", so.header, "skip the first line of the matrix file");
    c_so->add_option("--s1", so.s1, "feature budget (dc) or L1 radius (sgl)");
    c_so->add_option("--s2", so.s2, "group budget (dc) or group-norm radius (sgl)");
    c_so->add_option("--tau", so.tau)->check(CLI::PositiveNumber)->capture_default_str();
    c_so->add_flag("--cv", so.cv, "choose (s1, s2) by cross-validation");
    c_so->add_option("--s1-grid", so.s1_grid)->delimiter(',');
    c_so->add_option("--s2-grid", so.s2_grid)->delimiter(',');
    c_so->add_option("--folds", so.folds, "0 for leave-one-out")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    c_so->add_option("--metric", so.metric)->transform(CLI::CheckedTransformer(metrics))->default_str("mse");
    c_so->add_option("--parallel", solve_parallel, "concurrent CV evaluations")->check(CLI::PositiveNumber);
    c_so->add_option("-o,--output", so.output, "write the coefficients here");
    c_so->add_option("--trace", so.trace_output, "write the objective trace here");
    c_so->add_option("--cv-table", so.cv_table, "write the CV score table here");
    c_so->callback([&] {
        if (!so.cv && (!c_so->count("--s1") || !c_so->count("--s2")))
            throw CLI::ValidationError("solve", "--s1 and --s2 are required without --cv");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::uint64_t s = seed ? *seed : default_seed();
        Report report;
        if (*c_proj) {
            proj.seed = s;
            report = cmd_project(proj);
        } else if (*c_bp) {
            bp.seed = s;
            report = cmd_bench_proj(bp);
        } else if (*c_bs) {
            bs.seed = s;
            bs.workers = synth_parallel;
            report = cmd_bench_synth(bs);
        } else {
            so.seed = s;
            so.workers = solve_parallel;
            report = cmd_solve(so);
        }
        report.write(out, format);
        if (!jsonl_path.empty()) {
            std::ofstream f(jsonl_path);
            if (!f) throw std::runtime_error("cannot open " + jsonl_path);
            report.write(f, OutputFormat::jsonl);
        }
        return report.exit_code();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace sgfs::cli
