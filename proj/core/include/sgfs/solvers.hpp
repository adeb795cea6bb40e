#pragma once

#include <optional>
#include <vector>

#include "sgfs/model.hpp"

namespace sgfs {

/// Accelerated gradient iteration state. The momentum sequence starts at
/// alpha_prev = 0, alpha_cur = 1 and follows alpha' = (1 + sqrt(1 + 4 alpha^2)) / 2.
struct AgmState {
    Vector x_cur;
    Vector x_prev;
    double alpha_cur = 1.0;
    double alpha_prev = 0.0;
    double lipschitz = 1.0;
    int t = 0;
};

struct AgmResult {
    Vector x;          ///< best iterate seen (never worse than the start point)
    double objective = 0.0;
    AgmState state;
    bool converged = false;
};

/// Minimises 0.5||Ax - y||^2 over {||x||_1 <= s1, ||x||_G <= s2} by an
/// accelerated projected gradient method with a backtracking (doubling)
/// line search. With `restriction`, the L1 constraint covers only t1 and
/// the group constraint only t3, and zero radii are allowed (they pin those
/// coordinates to zero). The warm start, if any, is projected onto the
/// feasible set before the first step.
///
/// Stops when the relative objective change drops to agm_rel_tol or after
/// agm_max_iter steps; in the latter case `converged` is false.
AgmResult agm_solve(const ProblemInstance& inst, const SparsityBudget& budget,
                    const std::optional<SupportSets>& restriction, const SolverConfig& cfg,
                    const std::optional<Vector>& warm = std::nullopt);

/// Convex constrained sparse group lasso: agm_solve without restriction,
/// started from zero.
Vector constrained_sgl_solve(const ProblemInstance& inst, const SparsityBudget& budget, const SolverConfig& cfg);

struct DcTrace {
    /// objectives[0] is the objective of the starting point; entry m > 0 is
    /// the objective after outer iteration m. Non-increasing.
    std::vector<double> objectives;
    std::vector<Vector> iterates;  ///< filled only when requested
    bool converged = false;
};

struct DcResult {
    Vector x;
    DcTrace trace;
};

struct DcOptions {
    std::optional<Vector> init;  ///< defaults to the zero vector
    bool keep_iterates = false;
};

/// Difference-of-convex iteration for the truncated-L1 model with count
/// budget (s1 features, s2 groups). Each outer step linearises the concave
/// parts at the current iterate, which yields a restricted convex problem
/// with L1 radius tau * (s1 - (p - |t1|)) and group radius
/// tau * (s2 - (|G| - |t2|)); that problem is solved by agm_solve warm
/// started at the current iterate. Iteration stops once the objective
/// decrease falls below dc_rel_tol * (1 + |f|).
DcResult dc_solve(const ProblemInstance& inst, const SparsityBudget& budget, TruncationParam tau,
                  const SolverConfig& cfg, const DcOptions& options = {});

/// Linearised constraint radii used by dc_solve at iterate x. Exposed for
/// feasibility checks.
struct DcRadii {
    double l1 = 0.0;
    double group = 0.0;
    SupportSets sets;
};
DcRadii dc_linearized_radii(const Vector& x, const GroupPartition& partition, const SparsityBudget& budget,
                            TruncationParam tau);

}  // namespace sgfs
