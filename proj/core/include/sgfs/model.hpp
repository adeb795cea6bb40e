#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sgfs {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when an iterative routine exhausts its budget in a way that points
/// at a misconfiguration rather than a hard problem instance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-overlapping partition of the feature indices {0, ..., p-1}.
///
/// Every group is non-empty, groups are pairwise disjoint and together cover
/// all p features. Indices are 0-based.
class GroupPartition {
public:
    GroupPartition(std::vector<std::vector<Index>> groups, Index p);

    /// `group_count` groups of consecutive features; sizes differ by at most
    /// one, larger groups first.
    static GroupPartition contiguous(Index p, Index group_count);

    /// One label per feature; labels must form the range 0..|G|-1.
    static GroupPartition from_labels(std::span<const int> labels);

    Index p() const noexcept { return p_; }
    Index size() const noexcept { return static_cast<Index>(groups_.size()); }
    const std::vector<Index>& group(Index i) const { return groups_[static_cast<std::size_t>(i)]; }
    const std::vector<std::vector<Index>>& groups() const noexcept { return groups_; }
    Index group_of(Index feature) const { return owner_[static_cast<std::size_t>(feature)]; }

    std::vector<int> labels() const;

    friend bool operator==(const GroupPartition&, const GroupPartition&) = default;

private:
    std::vector<std::vector<Index>> groups_;
    std::vector<Index> owner_;
    Index p_ = 0;
};

/// Least-squares problem data: design matrix (n x p), response (n) and the
/// feature grouping.
class ProblemInstance {
public:
    ProblemInstance(Matrix A, Vector y, GroupPartition partition);

    const Matrix& A() const noexcept { return A_; }
    const Vector& y() const noexcept { return y_; }
    const GroupPartition& partition() const noexcept { return partition_; }
    Index n() const noexcept { return A_.rows(); }
    Index p() const noexcept { return A_.cols(); }

private:
    Matrix A_;
    Vector y_;
    GroupPartition partition_;
};

enum class BudgetKind { count, radius };

/// Two-level sparsity budget. `count` budgets bound the number of selected
/// features (s1) and groups (s2); `radius` budgets are the L1 and group-norm
/// ball radii of the convex problems.
struct SparsityBudget {
    double s1 = 0.0;
    double s2 = 0.0;
    BudgetKind kind = BudgetKind::radius;

    static SparsityBudget counts(double s1, double s2) { return {s1, s2, BudgetKind::count}; }
    static SparsityBudget radii(double s1, double s2) { return {s1, s2, BudgetKind::radius}; }

    /// Throws std::invalid_argument when the budget is unusable for
    /// `partition`. Count budgets need integral 1 <= s2 <= |G| and s1 <= p;
    /// s2 <= s1 is also enforced unless `allow_s1_below_s2`.
    void validate(const GroupPartition& partition, bool allow_s1_below_s2 = false) const;
};

class TruncationParam {
public:
    explicit TruncationParam(double tau);
    double value() const noexcept { return tau_; }

private:
    double tau_;
};

/// t1: features with |x_i| <= tau; t2: groups with norm <= tau; t3: the
/// features of the groups in t2. All sorted ascending.
struct SupportSets {
    std::vector<Index> t1;
    std::vector<Index> t2;
    std::vector<Index> t3;
};

struct ProjectionOutcome {
    Vector x;
    double lambda = 0.0;
    double eta = 0.0;
    bool c1_active = false;
    bool c2_active = false;
    int iterations = 0;
};

struct SolverConfig {
    int dc_max_iter = 50;
    double dc_rel_tol = 1e-5;
    int agm_max_iter = 10000;
    double agm_rel_tol = 1e-6;
    double bisect_tol = 1e-7;
    double feas_tol = 1e-6;
    double initial_lipschitz = 1.0;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/// 0.5 * ||A x - y||^2
double objective(const ProblemInstance& inst, const Vector& x);

/// Sum over groups of the Euclidean norm of each block.
double group_norm(const Vector& x, const GroupPartition& partition);

struct TruncatedCounts {
    double features = 0.0;
    double groups = 0.0;
};

/// Both constraint values of the truncated-L1 model, using
/// J(z) = min(|z| / tau, 1).
TruncatedCounts truncated_l1_counts(const Vector& x, const GroupPartition& partition,
                                    TruncationParam tau);

SupportSets support_sets(const Vector& x, const GroupPartition& partition, TruncationParam tau);

/// Exact minimiser of the L0-constrained least-squares model by exhaustive
/// enumeration of feasible supports. Only for p <= 20. Equal objectives are
/// resolved towards the lexicographically smallest support.
Vector l0_oracle(const ProblemInstance& inst, const SparsityBudget& budget);

inline constexpr Index kL0OracleMaxFeatures = 20;

namespace detail {
void require_length(const Vector& x, Index p, const char* what);
}

}  // namespace sgfs
