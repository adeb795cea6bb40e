#include "sgfs_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <stdexcept>

namespace sgfs::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const char* method_name(ProjMethod m) {
    switch (m) {
        case ProjMethod::sglp: return "sglp";
        case ProjMethod::admm: return "admm";
        case ProjMethod::dykstra: return "dykstra";
    }
    return "?";
}

const char* log_name(LogBase b) { return b == LogBase::ten ? "log10" : "ln"; }

double proj_objective(const Vector& x, const Vector& v) { return 0.5 * (x - v).squaredNorm(); }

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

MeanSd mean_sd(const std::vector<double>& xs) {
    MeanSd r;
    r.n = xs.size();
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return r;
}

std::string mean_sd_cell(const MeanSd& m, int precision = 4) {
    if (m.n == 0) return "-";
    return format_number(m.mean, precision) + " (" + format_number(m.sd, 2) + ")";
}

struct ProjRun {
    Vector x;
    double seconds = 0.0;
    long iterations = 0;
    bool converged = false;
};

ProjRun run_projection(ProjMethod method, const Vector& v, const SparsityBudget& b, const GroupPartition& part,
                       const StopRule& stop) {
    ProjRun r;
    const auto start = Clock::now();
    switch (method) {
        case ProjMethod::sglp: {
            auto out = sglp(v, b.s1, b.s2, part);
            r.seconds = seconds_since(start);
            r.x = std::move(out.x);
            r.iterations = out.iterations;
            r.converged = true;
            break;
        }
        case ProjMethod::admm: {
            auto out = admm_project(v, b.s1, b.s2, part, stop);
            r.seconds = seconds_since(start);
            r.x = std::move(out.x);
            r.iterations = out.state.t;
            r.converged = out.converged;
            break;
        }
        case ProjMethod::dykstra: {
            auto out = dykstra_project(v, b.s1, b.s2, part, stop);
            r.seconds = seconds_since(start);
            r.x = std::move(out.x);
            r.iterations = out.state.t;
            r.converged = out.converged;
            break;
        }
    }
    return r;
}

}  // namespace

Report cmd_project(const ProjectOptions& opts) {
    Vector v;
    std::optional<GroupPartition> part;
    if (opts.input) {
        v = read_vector_csv(*opts.input);
        if (opts.groups)
            part = read_groups(*opts.groups);
        else
            part = GroupPartition::contiguous(v.size(), opts.group_count);
    } else {
        ProjBenchSpec spec;
        spec.p = opts.p;
        spec.group_count = opts.group_count;
        spec.log_base = opts.log_base;
        spec.seed = opts.seed;
        auto inst = gen_projection_instance(spec);
        v = std::move(inst.v);
        part = std::move(inst.partition);
    }
    if (v.size() != part->p()) throw std::invalid_argument("project: vector length does not match the groups");
    const auto defaults = projection_bench_radii(v.size(), opts.log_base);
    const auto budget = SparsityBudget::radii(opts.s1.value_or(defaults.s1), opts.s2.value_or(defaults.s2));
    budget.validate(*part);

    Json config;
    config["method"] = method_name(opts.method);
    config["input"] = opts.input ? Json(*opts.input) : Json(nullptr);
    config["p"] = v.size();
    config["groups"] = part->size();
    config["s1"] = budget.s1;
    config["s2"] = budget.s2;
    config["log_base"] = log_name(opts.log_base);

    Report report;
    report.header = make_header("project", opts.seed, config);

    StopRule stop;
    stop.rel_tol = opts.rel_tol;
    stop.max_iter = opts.max_iter;
    const auto r = run_projection(opts.method, v, budget, *part, stop);
    if (opts.output) write_vector_csv(*opts.output, r.x);

    const double f = proj_objective(r.x, v);
    const double viol = constraint_violation(r.x, budget.s1, budget.s2, *part);
    Json row;
    row["type"] = "run";
    row["method"] = method_name(opts.method);
    row["p"] = v.size();
    row["s1"] = budget.s1;
    row["s2"] = budget.s2;
    row["objective"] = f;
    row["violation"] = viol;
    row["l1_norm"] = r.x.lpNorm<1>();
    row["group_norm"] = group_norm(r.x, *part);
    row["iterations"] = r.iterations;
    row["time_seconds"] = r.seconds;
    row["converged"] = r.converged;
    report.add_row(row);

    TextTable t;
    t.title = "Projection";
    t.headers = {"method", "p", "s1", "s2", "objective", "||x||_1", "||x||_G", "iterations", "time (s)"};
    t.rows.push_back({method_name(opts.method), std::to_string(v.size()), format_number(budget.s1),
                      format_number(budget.s2), format_number(f, 10), format_number(r.x.lpNorm<1>(), 8),
                      format_number(group_norm(r.x, *part), 8), std::to_string(r.iterations),
                      format_number(r.seconds, 4)});
    report.tables.push_back(std::move(t));
    return report;
}

Report cmd_bench_proj(const BenchProjOptions& opts) {
    if (opts.reps < 1) throw std::invalid_argument("bench-proj: reps must be >= 1");
    if (opts.p_list.empty()) throw std::invalid_argument("bench-proj: empty p list");

    Json config;
    config["p"] = opts.p_list;
    config["reps"] = opts.reps;
    std::vector<std::string> names;
    for (auto m : opts.methods) names.emplace_back(method_name(m));
    config["methods"] = names;
    config["log_base"] = log_name(opts.log_base);
    config["target_gap"] = opts.target_gap;
    config["time_limit_seconds"] = opts.time_limit ? Json(*opts.time_limit) : Json(nullptr);

    Report report;
    report.header = make_header("bench-proj", opts.seed, config);

    StopRule stop;
    stop.target_gap = opts.target_gap;
    stop.time_limit_seconds = opts.time_limit;

    // times[m][k], distances[m][k] for method m at p_list[k]
    const std::size_t M = opts.methods.size();
    const std::size_t K = opts.p_list.size();
    std::vector<std::vector<std::vector<double>>> times(M, std::vector<std::vector<double>>(K));
    std::vector<std::vector<std::vector<double>>> dists(M, std::vector<std::vector<double>>(K));

    for (std::size_t k = 0; k < K; ++k) {
        const Index p = opts.p_list[k];
        const std::uint64_t p_seed = derive_seed(opts.seed, static_cast<std::uint64_t>(p));
        // rep == -1 is the discarded warm-up.
        for (int rep = -1; rep < opts.reps; ++rep) {
            const std::uint64_t stream =
                rep < 0 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(rep);
            ProjBenchSpec spec;
            spec.p = p;
            spec.log_base = opts.log_base;
            spec.seed = derive_seed(p_seed, stream);

            std::optional<ProjectionInstance> inst;
            try {
                inst = gen_projection_instance(spec);
            } catch (const std::bad_alloc&) {
                if (rep >= 0) {
                    Json row{{"type", "run"}, {"method", "instance"}, {"p", p}, {"rep", rep},
                             {"converged", false}, {"error", "out of memory"}};
                    report.add_row(row);
                }
                continue;
            }

            // Reference solution from the exact projection.
            Vector x_ref;
            double f_star = 0.0;
            try {
                x_ref = sglp(inst->v, inst->budget.s1, inst->budget.s2, inst->partition).x;
                f_star = proj_objective(x_ref, inst->v);
            } catch (const std::exception& e) {
                if (rep >= 0) {
                    Json row{{"type", "run"}, {"method", "sglp"}, {"p", p}, {"rep", rep},
                             {"converged", false}, {"error", e.what()}};
                    report.add_row(row);
                }
                continue;
            }
            StopRule target = stop;
            target.target_objective = f_star;

            for (std::size_t m = 0; m < M; ++m) {
                const auto method = opts.methods[m];
                Json row{{"type", "run"}, {"method", method_name(method)}, {"p", p}, {"rep", rep},
                         {"seed", spec.seed}, {"f_star", f_star}};
                try {
                    const auto r = run_projection(method, inst->v, inst->budget, inst->partition, target);
                    const double dist = (r.x - x_ref).norm();
                    row["objective"] = proj_objective(r.x, inst->v);
                    row["violation"] = constraint_violation(r.x, inst->budget.s1, inst->budget.s2, inst->partition);
                    row["distance"] = dist;
                    row["iterations"] = r.iterations;
                    row["time_seconds"] = r.seconds;
                    row["converged"] = r.converged;
                    if (rep >= 0 && r.converged) {
                        times[m][k].push_back(r.seconds);
                        dists[m][k].push_back(dist);
                    }
                } catch (const std::bad_alloc&) {
                    row["converged"] = false;
                    row["error"] = "out of memory";
                } catch (const std::exception& e) {
                    row["converged"] = false;
                    row["error"] = e.what();
                }
                if (rep >= 0) report.add_row(std::move(row));
            }
        }
    }

    TextTable t1;
    t1.title = "Mean wall time in seconds (sd), converged runs";
    TextTable t2;
    t2.title = "Mean distance to the exact projection (sd)";
    t1.headers = {"method"};
    for (auto p : opts.p_list) t1.headers.push_back("p=" + std::to_string(p));
    t2.headers = t1.headers;
    for (std::size_t m = 0; m < M; ++m) {
        std::vector<std::string> r1{method_name(opts.methods[m])};
        std::vector<std::string> r2{method_name(opts.methods[m])};
        for (std::size_t k = 0; k < K; ++k) {
            const auto ts = mean_sd(times[m][k]);
            const auto ds = mean_sd(dists[m][k]);
            r1.push_back(mean_sd_cell(ts));
            r2.push_back(mean_sd_cell(ds));
            Json s{{"type", "summary"},
                   {"method", method_name(opts.methods[m])},
                   {"p", opts.p_list[k]},
                   {"runs", ts.n},
                   {"failed", static_cast<std::size_t>(opts.reps) - ts.n},
                   {"time_mean", ts.mean},
                   {"time_sd", ts.sd},
                   {"distance_mean", ds.mean},
                   {"distance_sd", ds.sd}};
            report.summaries.push_back(std::move(s));
        }
        t1.rows.push_back(std::move(r1));
        if (opts.methods[m] != ProjMethod::sglp) t2.rows.push_back(std::move(r2));
    }
    report.tables.push_back(std::move(t1));
    if (!t2.rows.empty()) report.tables.push_back(std::move(t2));
    return report;
}

Report cmd_bench_synth(const BenchSynthOptions& opts) {
    if (opts.reps < 1) throw std::invalid_argument("bench-synth: reps must be >= 1");
    if (opts.folds == 1 || opts.folds < 0) throw std::invalid_argument("bench-synth: folds must be 0 or >= 2");
    const TruncationParam tau(opts.tau);
    const SolverConfig cfg;

    Json config;
    config["reps"] = opts.reps;
    config["tau"] = opts.tau;
    config["dc_s2_grid"] = opts.dc_s2_grid;
    config["dc_s1_multipliers"] = opts.dc_s1_mult;
    config["sgl_s2_grid"] = opts.sgl_s2_grid;
    config["sgl_s1_multipliers"] = opts.sgl_s1_mult;
    config["cv"] = opts.folds == 0 ? std::string("leave-one-out") : std::to_string(opts.folds) + "-fold";
    config["workers"] = opts.workers;
    Report report;
    report.header = make_header("bench-synth", opts.seed, config);

    struct Method {
        const char* name;
        FitMethod fit;
        std::vector<double> s2_grid;
        std::vector<double> s1_mult;
    };
    const std::vector<Method> methods{{"dc", FitMethod::dc, opts.dc_s2_grid, opts.dc_s1_mult},
                                      {"sgl", FitMethod::constrained_sgl, opts.sgl_s2_grid, opts.sgl_s1_mult}};
    struct Acc {
        std::vector<double> est, pred, prec, rec, feat, grp;
    };
    std::vector<Acc> acc(methods.size());

    for (int rep = 0; rep < opts.reps; ++rep) {
        SyntheticSpec spec;
        spec.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(rep));
        const auto ds = gen_synthetic_dataset(spec);
        for (std::size_t m = 0; m < methods.size(); ++m) {
            const auto& method = methods[m];
            Json row{{"type", "run"}, {"method", method.name}, {"rep", rep}, {"seed", spec.seed}};
            try {
                CvPlan plan;
                plan.folds = opts.folds == 0 ? 5 : opts.folds;
                plan.leave_one_out = opts.folds == 0;
                plan.s2_grid = method.s2_grid;
                plan.s1_grid = method.s1_mult;
                plan.s1_scales_with_s2 = true;
                plan.workers = opts.workers;
                const auto cv = cross_validate(ds, plan, method.fit, tau, cfg);

                Vector x;
                bool converged = false;
                if (method.fit == FitMethod::dc) {
                    auto r = dc_solve(ds.train, cv.best, tau, cfg);
                    x = std::move(r.x);
                    converged = r.trace.converged;
                } else {
                    auto r = agm_solve(ds.train, cv.best, std::nullopt, cfg);
                    x = std::move(r.x);
                    converged = r.converged;
                }
                const auto met = compute_metrics(x, ds, tau);
                row["s1"] = cv.best.s1;
                row["s2"] = cv.best.s2;
                row["cv_score"] = cv.best_score;
                row["estimation_error"] = met.estimation_error;
                row["prediction_error"] = met.prediction_error;
                row["precision"] = met.group_precision;
                row["recall"] = met.group_recall;
                row["n_features"] = met.n_features;
                row["n_groups"] = met.n_groups;
                row["converged"] = converged;
                if (converged) {
                    acc[m].est.push_back(met.estimation_error);
                    acc[m].pred.push_back(met.prediction_error);
                    acc[m].prec.push_back(met.group_precision);
                    acc[m].rec.push_back(met.group_recall);
                    acc[m].feat.push_back(static_cast<double>(met.n_features));
                    acc[m].grp.push_back(static_cast<double>(met.n_groups));
                }
            } catch (const std::exception& e) {
                row["converged"] = false;
                row["error"] = e.what();
            }
            report.add_row(std::move(row));
        }
    }

    TextTable t;
    t.title = "Synthetic data, mean (sd) over converged replications";
    t.headers = {"method", "Esti.", "Pred.", "Prec.", "Rec.", "#Feature", "#Group", "runs"};
    for (std::size_t m = 0; m < methods.size(); ++m) {
        const auto est = mean_sd(acc[m].est), pred = mean_sd(acc[m].pred), prec = mean_sd(acc[m].prec),
                   rec = mean_sd(acc[m].rec), feat = mean_sd(acc[m].feat), grp = mean_sd(acc[m].grp);
        t.rows.push_back({methods[m].name, mean_sd_cell(est), mean_sd_cell(pred), mean_sd_cell(prec),
                          mean_sd_cell(rec), mean_sd_cell(feat), mean_sd_cell(grp),
                          std::to_string(est.n) + "/" + std::to_string(opts.reps)});
        Json s{{"type", "summary"},          {"method", methods[m].name},
               {"runs", est.n},              {"failed", static_cast<std::size_t>(opts.reps) - est.n},
               {"estimation_error", est.mean}, {"estimation_error_sd", est.sd},
               {"prediction_error", pred.mean}, {"prediction_error_sd", pred.sd},
               {"precision", prec.mean},     {"precision_sd", prec.sd},
               {"recall", rec.mean},         {"recall_sd", rec.sd},
               {"n_features", feat.mean},    {"n_groups", grp.mean}};
        report.summaries.push_back(std::move(s));
    }
    report.tables.push_back(std::move(t));
    return report;
}

Report cmd_solve(const SolveOptions& opts) {
    const TruncationParam tau(opts.tau);
    SolverConfig cfg;
    cfg.rng_seed = opts.seed;
    const bool is_dc = opts.method == SolveOptions::Method::dc;
    const char* name = is_dc ? "dc" : "sgl";

    CsvOptions csv;
    csv.header = opts.header;
    auto inst = load_csv_dataset(opts.matrix, opts.response, opts.groups, csv);

    Json config;
    config["method"] = name;
    config["matrix"] = opts.matrix;
    config["response"] = opts.response;
    config["groups"] = opts.groups;
    config["n"] = inst.n();
    config["p"] = inst.p();
    config["group_count"] = inst.partition().size();
    config["tau"] = opts.tau;
    config["cv"] = opts.cv;
    Report report;

    SparsityBudget budget = is_dc ? SparsityBudget::counts(opts.s1, opts.s2) : SparsityBudget::radii(opts.s1, opts.s2);
    std::optional<CvResult> cv;
    if (opts.cv) {
        if (opts.s1_grid.empty() || opts.s2_grid.empty())
            throw std::invalid_argument("solve: --cv needs --s1-grid and --s2-grid");
        CvPlan plan;
        plan.folds = opts.folds == 0 ? 5 : opts.folds;
        plan.leave_one_out = opts.folds == 0;
        plan.s1_grid = opts.s1_grid;
        plan.s2_grid = opts.s2_grid;
        plan.metric = opts.metric;
        plan.workers = opts.workers;
        config["s1_grid"] = opts.s1_grid;
        config["s2_grid"] = opts.s2_grid;
        config["folds"] = opts.folds;
        config["metric"] = opts.metric == CvMetric::accuracy ? "accuracy" : "prediction_error";
        const Dataset ds{inst, inst, std::nullopt};
        cv = cross_validate(ds, plan, is_dc ? FitMethod::dc : FitMethod::constrained_sgl, tau, cfg);
        budget = cv->best;
        if (opts.cv_table) write_score_table(std::filesystem::path(*opts.cv_table), cv->table);
    } else {
        budget.validate(inst.partition());
    }
    config["s1"] = budget.s1;
    config["s2"] = budget.s2;
    report.header = make_header("solve", opts.seed, config);

    const auto start = Clock::now();
    Vector x;
    std::vector<double> trace;
    bool converged = false;
    if (is_dc) {
        auto r = dc_solve(inst, budget, tau, cfg);
        x = std::move(r.x);
        trace = std::move(r.trace.objectives);
        converged = r.trace.converged;
    } else {
        auto r = agm_solve(inst, budget, std::nullopt, cfg);
        x = std::move(r.x);
        trace = {r.objective};
        converged = r.converged;
    }
    const double secs = seconds_since(start);

    if (opts.output) write_vector_csv(*opts.output, x);
    if (opts.trace_output) {
        std::ofstream f(*opts.trace_output);
        if (!f) throw std::runtime_error("cannot open " + *opts.trace_output);
        f.precision(17);
        for (double v : trace) f << v << '\n';
    }

    const auto counts = selection_counts(x, inst.partition(), tau);
    const double f = objective(inst, x);
    Json row{{"type", "run"},
             {"method", name},
             {"s1", budget.s1},
             {"s2", budget.s2},
             {"objective", f},
             {"objective_trace", trace},
             {"n_features", counts.n_features},
             {"n_groups", counts.n_groups},
             {"time_seconds", secs},
             {"converged", converged}};
    if (cv) row["cv_score"] = cv->best_score;
    report.add_row(std::move(row));

    TextTable t;
    t.title = "Fit";
    t.headers = {"method", "s1", "s2", "#Feature", "#Group", "objective", "outer iterations", "time (s)"};
    t.rows.push_back({name, format_number(budget.s1), format_number(budget.s2), std::to_string(counts.n_features),
                      std::to_string(counts.n_groups), format_number(f, 10),
                      std::to_string(trace.size() - 1), format_number(secs, 4)});
    report.tables.push_back(std::move(t));
    if (is_dc) {
        TextTable tr;
        tr.title = "Objective trace";
        tr.headers = {"iteration", "objective"};
        for (std::size_t m = 0; m < trace.size(); ++m)
            tr.rows.push_back({std::to_string(m), format_number(trace[m], 12)});
        report.tables.push_back(std::move(tr));
    }
    return report;
}

}  // namespace sgfs::cli
