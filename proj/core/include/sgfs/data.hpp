#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "sgfs/model.hpp"

namespace sgfs {

enum class LogBase { natural, ten };

/// Projection benchmark setup: v ~ Uniform[-50, 50]^p, 10 equal contiguous
/// groups, s2 = 5 log(p), s1 = (sqrt(10) / 2) s2.
struct ProjBenchSpec {
    Index p = 100;
    Index group_count = 10;
    double value_low = -50.0;
    double value_high = 50.0;
    LogBase log_base = LogBase::natural;
    std::uint64_t seed = 0;
};

struct ProjectionInstance {
    Vector v;
    SparsityBudget budget;  // radius kind
    GroupPartition partition;
};

ProjectionInstance gen_projection_instance(const ProjBenchSpec& spec);

/// Radii used by the projection benchmark for dimension p.
SparsityBudget projection_bench_radii(Index p, LogBase base = LogBase::natural);

/// Synthetic regression setup. A has i.i.d. N(0, 1) entries; the truth has
/// nonzeros in `active_groups` groups chosen uniformly, with a uniform number
/// in [min_group_nonzeros, max_group_nonzeros] of N(0, 1) entries each;
/// y = A x0 + N(0, noise_sd^2). The first half of the rows is the training
/// set, the second half the test set.
struct SyntheticSpec {
    Index n = 60;
    Index p = 100;
    Index group_count = 10;
    Index active_groups = 4;
    Index min_group_nonzeros = 1;
    Index max_group_nonzeros = 5;
    double noise_sd = 0.5;
    std::uint64_t seed = 0;
};

struct Dataset {
    ProblemInstance train;
    ProblemInstance test;
    std::optional<Vector> truth;
};

Dataset gen_synthetic_dataset(const SyntheticSpec& spec);

struct CsvOptions {
    bool header = false;  ///< skip the first line of the matrix file
};

/// Matrix CSV: one sample per row, comma separated, no header by default.
/// Response: one value per line. Groups: one 0-based group id per feature
/// (newline or comma separated), ids forming 0..|G|-1.
ProblemInstance load_csv_dataset(const std::filesystem::path& matrix_path,
                                 const std::filesystem::path& response_path,
                                 const std::filesystem::path& groups_path, const CsvOptions& options = {});

Matrix read_matrix_csv(const std::filesystem::path& path, bool header = false);
Vector read_vector_csv(const std::filesystem::path& path);
GroupPartition read_groups(const std::filesystem::path& path);

/// Writers emit the shortest decimal form that reads back to the same double.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
void write_vector_csv(const std::filesystem::path& path, const Vector& v);
void write_groups(const std::filesystem::path& path, const GroupPartition& partition);

}  // namespace sgfs
