#include <gtest/gtest.h>

#include <sgfs/sgfs.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "sgfs_cli/commands.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace sgfs;
using oracle::TempDir;
using oracle::write_text;

namespace {

struct Invocation {
    int code = -1;
    std::string out;
    std::string err;
    std::vector<cli::Json> records;  // parsed JSON lines of `out`
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "sgfs");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    std::istringstream lines(r.out);
    for (std::string line; std::getline(lines, line);)
        if (!line.empty() && line.front() == '{') r.records.push_back(cli::Json::parse(line));
    return r;
}

std::vector<cli::Json> of_type(const Invocation& r, const std::string& type) {
    std::vector<cli::Json> out;
    for (const auto& j : r.records)
        if (j.at("type") == type) out.push_back(j);
    return out;
}

// Writes A, y and group ids as CSV files and returns their paths.
struct CsvFiles {
    std::string matrix, response, groups;
};

CsvFiles write_dataset(const TempDir& dir, const ProblemInstance& inst) {
    CsvFiles f{(dir / "A.csv").string(), (dir / "y.csv").string(), (dir / "g.csv").string()};
    write_matrix_csv(f.matrix, inst.A());
    write_vector_csv(f.response, inst.y());
    write_groups(f.groups, inst.partition());
    return f;
}

}  // namespace

TEST(CliProject, FeasibleInputIsReturnedUnchanged) {
    TempDir dir;
    write_text(dir / "v.csv", "0.1\n-0.2\n0.3\n0.05\n");
    const auto out = (dir / "x.csv").string();
    const auto r = invoke({"--format", "jsonl", "project", "--input", (dir / "v.csv").string(), "--group-count", "2",
                           "--s1", "10", "--s2", "10", "-o", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const Vector x = read_vector_csv(out);
    EXPECT_EQ(x, (Vector(4) << 0.1, -0.2, 0.3, 0.05).finished());
    const auto runs = of_type(r, "run");
    ASSERT_EQ(runs.size(), 1u);
    EXPECT_EQ(runs[0]["objective"].get<double>(), 0.0);
}

TEST(CliProject, MethodsAgree) {
    TempDir dir;
    std::vector<Vector> xs;
    for (const char* m : {"sglp", "admm", "dykstra"}) {
        const auto path = (dir / (std::string(m) + ".csv")).string();
        const auto r = invoke({"--format", "jsonl", "--seed", "4", "project", "--method", m, "-p", "300",
                               "--rel-tol", "1e-12", "-o", path});
        ASSERT_EQ(r.code, 0) << m << ": " << r.err;
        xs.push_back(read_vector_csv(path));
    }
    EXPECT_LE((xs[1] - xs[0]).norm(), 1e-3);
    EXPECT_LE((xs[2] - xs[0]).norm(), 1e-3);
}

TEST(CliProject, SeedFromEnvironment) {
    ::setenv("SGFS_SEED", "11", 1);
    const auto a = invoke({"--format", "jsonl", "project", "-p", "50"});
    ::unsetenv("SGFS_SEED");
    const auto b = invoke({"--format", "jsonl", "--seed", "11", "project", "-p", "50"});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(of_type(a, "header")[0]["seed"], 11);
    EXPECT_EQ(of_type(a, "run")[0]["objective"], of_type(b, "run")[0]["objective"]);
}

TEST(CliSolve, DcRecoversSparseSignal) {
    TempDir dir;
    const ProblemInstance inst(Matrix::Identity(4, 4), (Vector(4) << 5, 0, 0, 0).finished(),
                               GroupPartition::contiguous(4, 2));
    const auto f = write_dataset(dir, inst);
    const auto out = (dir / "x.csv").string();
    const auto trace = (dir / "trace.csv").string();
    const auto r = invoke({"--format", "both", "solve", "--matrix", f.matrix, "--response", f.response, "--groups",
                           f.groups, "--s1", "1", "--s2", "1", "-o", out, "--trace", trace});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LE((read_vector_csv(out) - (Vector(4) << 5, 0, 0, 0).finished()).norm(), 1e-6);
    const auto run = of_type(r, "run").at(0);
    EXPECT_EQ(run["n_features"], 1);
    EXPECT_EQ(run["n_groups"], 1);
    const Vector t = read_vector_csv(trace);
    EXPECT_NEAR(t[0], 12.5, 1e-12);
    for (Index m = 1; m < t.size(); ++m) EXPECT_LE(t[m], t[m - 1]);
    EXPECT_NE(r.out.find("#Feature"), std::string::npos);
}

TEST(CliSolve, ConvexWithHugeRadiiIsLeastSquares) {
    TempDir dir;
    Rng rng(31);
    const ProblemInstance inst(oracle::gaussian_matrix(rng, 12, 6), oracle::uniform_vector(rng, 12, -1, 1),
                               GroupPartition::contiguous(6, 3));
    const auto f = write_dataset(dir, inst);
    const auto out = (dir / "x.csv").string();
    const auto r = invoke({"solve", "--method", "sgl", "--matrix", f.matrix, "--response", f.response, "--groups",
                           f.groups, "--s1", "1e6", "--s2", "1e6", "-o", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const Vector ls = oracle::normal_equations_ls(inst.A(), inst.y(), {0, 1, 2, 3, 4, 5});
    EXPECT_LE((read_vector_csv(out) - ls).norm(), 1e-3 * (1 + ls.norm()));
}

TEST(CliSolve, SinglePointCvMatchesDirectFit) {
    TempDir dir;
    SyntheticSpec spec;
    spec.seed = 3;
    const auto ds = gen_synthetic_dataset(spec);
    const auto f = write_dataset(dir, ds.train);
    const auto direct = (dir / "direct.csv").string();
    const auto viacv = (dir / "cv.csv").string();
    const auto table = (dir / "table.csv").string();
    const std::vector<std::string> common{"solve", "--matrix", f.matrix, "--response", f.response, "--groups",
                                          f.groups};
    auto a = common;
    a.insert(a.end(), {"--s1", "8", "--s2", "4", "-o", direct});
    auto b = common;
    b.insert(b.end(), {"--cv", "--s1-grid", "8", "--s2-grid", "4", "--cv-table", table, "-o", viacv});
    ASSERT_EQ(invoke(a).code, 0);
    const auto rb = invoke(b);
    ASSERT_EQ(rb.code, 0) << rb.err;
    EXPECT_EQ(read_vector_csv(direct), read_vector_csv(viacv));
    std::ifstream t(table);
    std::string header;
    std::getline(t, header);
    EXPECT_EQ(header, "s1,s2,fold,score");
}

TEST(CliSolve, CountsMatchMetricsAfterCsvRoundTrip) {
    TempDir dir;
    SyntheticSpec spec;
    spec.seed = 8;
    const auto ds = gen_synthetic_dataset(spec);
    const auto f = write_dataset(dir, ds.train);
    const auto out = (dir / "x.csv").string();
    const auto r = invoke({"--format", "jsonl", "solve", "--matrix", f.matrix, "--response", f.response, "--groups",
                           f.groups, "--s1", "12", "--s2", "4", "-o", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto m = compute_metrics(read_vector_csv(out), ds, TruncationParam(0.01));
    const auto run = of_type(r, "run").at(0);
    EXPECT_EQ(run["n_features"].get<Index>(), m.n_features);
    EXPECT_EQ(run["n_groups"].get<Index>(), m.n_groups);
}

TEST(CliBench, ProjectionReplicationIsDeterministic) {
    const std::vector<std::string> args{"--format", "jsonl", "--seed", "2", "bench-proj", "--p", "200", "--reps", "1"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_EQ(a.code, 0) << a.err;
    const auto ra = of_type(a, "run");
    const auto rb = of_type(b, "run");
    ASSERT_EQ(ra.size(), 3u);
    ASSERT_EQ(rb.size(), 3u);
    for (std::size_t k = 0; k < ra.size(); ++k) {
        EXPECT_EQ(ra[k]["objective"], rb[k]["objective"]);
        EXPECT_EQ(ra[k]["seed"], rb[k]["seed"]);
        EXPECT_LE(std::abs(ra[k]["objective"].get<double>() - ra[k]["f_star"].get<double>()), 1e-3);
    }
    EXPECT_EQ(of_type(a, "summary").size(), 3u);
    const auto header = of_type(a, "header").at(0);
    EXPECT_EQ(header["command"], "bench-proj");
    EXPECT_TRUE(header.contains("clock_resolution_seconds"));
}

TEST(CliBench, SyntheticReplicationIsDeterministic) {
    const std::vector<std::string> args{"--format", "jsonl", "bench-synth", "--reps", "1", "--folds", "3",
                                        "--dc-s2-grid", "4", "--dc-s1-mult", "2", "--sgl-s2-grid", "4",
                                        "--sgl-s1-mult", "2"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_EQ(a.code, 0) << a.err;
    const auto ra = of_type(a, "run");
    const auto rb = of_type(b, "run");
    ASSERT_EQ(ra.size(), 2u);
    for (std::size_t k = 0; k < ra.size(); ++k) {
        EXPECT_EQ(ra[k]["estimation_error"], rb[k]["estimation_error"]);
        EXPECT_EQ(ra[k]["precision"], rb[k]["precision"]);
    }
    EXPECT_EQ(ra[0]["s2"], 4.0);
    EXPECT_EQ(ra[0]["s1"], 8.0);
}

TEST(CliExit, CodesAndErrors) {
    EXPECT_EQ(invoke({"--help"}).code, 0);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"project", "--method", "newton"}).code, 2);
    EXPECT_EQ(invoke({"project", "--input", "/nonexistent/v.csv"}).code, 2);
    const auto bad = invoke({"project", "-p", "10", "--s1", "-1"});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("error:"), std::string::npos);

    TempDir dir;
    const ProblemInstance inst(Matrix::Identity(4, 4), Vector::Ones(4), GroupPartition::contiguous(4, 2));
    const auto f = write_dataset(dir, inst);
    // Missing budget without --cv.
    EXPECT_EQ(invoke({"solve", "--matrix", f.matrix, "--response", f.response, "--groups", f.groups}).code, 2);
}
