#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sgfs/data.hpp"
#include "sgfs/model.hpp"

namespace sgfs {

/// Quality of a fitted coefficient vector against a dataset with known truth.
/// A feature (group) of the estimate counts as selected when its magnitude
/// (norm) exceeds tau; the true groups are those where x0 is nonzero.
struct SelectionMetrics {
    double estimation_error = 0.0;  ///< ||xhat - x0||^2
    double prediction_error = 0.0;  ///< ||A_test xhat - y_test||^2
    double group_precision = 0.0;
    double group_recall = 0.0;
    Index n_features = 0;
    Index n_groups = 0;
};

struct SelectionCounts {
    Index n_features = 0;
    Index n_groups = 0;
};

SelectionCounts selection_counts(const Vector& x, const GroupPartition& partition, TruncationParam tau);

/// Requires dataset.truth. Precision of an empty selection is 0 when the truth
/// has selected groups and 1 when both are empty; recall with an empty truth
/// is 1.
SelectionMetrics compute_metrics(const Vector& xhat, const Dataset& dataset, TruncationParam tau);

/// Fraction of rows whose label (+1/-1) matches sign(a_i^T xhat). A zero
/// prediction counts as incorrect.
double classify_accuracy(const Vector& xhat, const ProblemInstance& inst);

enum class FitMethod { dc, constrained_sgl };
enum class CvMetric { prediction_error, accuracy };

/// Cross-validation grid. Grid points are (s1, s2) for every s2 in s2_grid and
/// s1 in s1_grid; with s1_scales_with_s2 the s1 entries are multipliers of s2.
/// Budgets are counts for FitMethod::dc and radii for constrained_sgl.
struct CvPlan {
    int folds = 5;
    bool leave_one_out = false;
    std::vector<double> s2_grid;
    std::vector<double> s1_grid;
    bool s1_scales_with_s2 = false;
    CvMetric metric = CvMetric::prediction_error;
    int workers = 1;  ///< concurrent (grid point, fold) evaluations
};

struct CvRow {
    double s1 = 0.0;
    double s2 = 0.0;
    int fold = 0;
    double score = 0.0;
};

struct CvResult {
    SparsityBudget best;
    double best_score = 0.0;
    std::vector<CvRow> table;  ///< ordered by (grid point, fold)
};

/// Fits `method` on `inst` with the given budget.
Vector fit(FitMethod method, const ProblemInstance& inst, const SparsityBudget& budget, TruncationParam tau,
           const SolverConfig& cfg);

/// K-fold (contiguous blocks of rows, no shuffling) or leave-one-out
/// cross-validation over the training part of `dataset`. The fold score is
/// the held-out mean squared error or the held-out accuracy; the best grid
/// point minimises (maximises) the fold average, ties going to the smaller
/// s2 and then the smaller s1.
CvResult cross_validate(const Dataset& dataset, const CvPlan& plan, FitMethod method, TruncationParam tau,
                        const SolverConfig& cfg);

/// CSV with header `s1,s2,fold,score`.
void write_score_table(std::ostream& out, const std::vector<CvRow>& table);
void write_score_table(const std::filesystem::path& path, const std::vector<CvRow>& table);

}  // namespace sgfs
