#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <sgfs/sgfs.hpp>

#include "sgfs_cli/report.hpp"

namespace sgfs::cli {

enum class ProjMethod { sglp, admm, dykstra };

struct ProjectOptions {
    ProjMethod method = ProjMethod::sglp;
    std::optional<std::string> input;   ///< vector CSV; otherwise generated
    std::optional<std::string> groups;  ///< group-id file; otherwise contiguous
    Index p = 1000;
    Index group_count = 10;
    std::optional<double> s1;  ///< default: benchmark radii for p
    std::optional<double> s2;
    LogBase log_base = LogBase::natural;
    double rel_tol = 1e-7;  ///< baseline relative stop
    long max_iter = 100000;
    std::optional<std::string> output;
    std::uint64_t seed = 0;
};

struct BenchProjOptions {
    std::vector<Index> p_list{100, 1000, 10000, 100000};
    int reps = 100;
    std::vector<ProjMethod> methods{ProjMethod::sglp, ProjMethod::admm, ProjMethod::dykstra};
    LogBase log_base = LogBase::natural;
    double target_gap = 1e-3;
    std::optional<double> time_limit;  ///< per baseline run, seconds
    std::uint64_t seed = 0;
};

struct BenchSynthOptions {
    int reps = 100;
    double tau = 0.01;
    std::vector<double> dc_s2_grid{2, 4, 6, 8};
    std::vector<double> dc_s1_mult{2, 4, 6, 8};
    std::vector<double> sgl_s2_grid{0.5, 1, 2, 4, 8, 16};
    std::vector<double> sgl_s1_mult{1, 1.5, 2, 3};
    int folds = 0;  ///< 0 means leave-one-out
    int workers = 1;
    std::uint64_t seed = 0;
};

struct SolveOptions {
    enum class Method { dc, sgl } method = Method::dc;
    std::string matrix;
    std::string response;
    std::string groups;
    bool header = false;
    double s1 = 0.0;
    double s2 = 0.0;
    double tau = 0.01;
    bool cv = false;
    std::vector<double> s1_grid;
    std::vector<double> s2_grid;
    int folds = 5;  ///< 0 means leave-one-out
    CvMetric metric = CvMetric::prediction_error;
    int workers = 1;
    std::optional<std::string> output;
    std::optional<std::string> trace_output;
    std::optional<std::string> cv_table;
    std::uint64_t seed = 0;
};

Report cmd_project(const ProjectOptions& opts);
Report cmd_bench_proj(const BenchProjOptions& opts);
Report cmd_bench_synth(const BenchSynthOptions& opts);
Report cmd_solve(const SolveOptions& opts);

/// Parses the command line, runs the command and writes the report.
/// Returns the process exit code: 0 when every run converged, 1 when some
/// did not, 2 on usage or input errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgfs::cli
