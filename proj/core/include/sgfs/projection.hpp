#pragma once

#include <optional>
#include <span>

#include "sgfs/model.hpp"

namespace sgfs {

/// Multipliers of the L1 constraint (lambda) and the group-norm constraint
/// (eta). Both non-negative.
struct DualPair {
    double lambda = 0.0;
    double eta = 0.0;
};

/// Returns theta >= 0 with sum_j max(a_j - theta, 0) == mass, for
/// non-negative `a`. Returns 0 when sum(a) <= mass.
///
/// Expected linear time: randomized-pivot partitioning over a scratch copy,
/// no sorting. The pivot sequence is seeded deterministically so results are
/// reproducible.
double mass_threshold(std::span<const double> a, double mass);

/// sign(v_j) * max(|v_j| - lambda, 0), elementwise.
Vector soft_threshold(const Vector& v, double lambda);

/// Euclidean projection onto {x : ||x||_1 <= s1}.
Vector l1_ball_projection(const Vector& v, double s1);

/// Euclidean projection onto {x : ||x||_G <= s2}: the vector of group norms
/// is projected onto the L1 ball and each block is rescaled accordingly.
Vector group_ball_projection(const Vector& v, double s2, const GroupPartition& partition);

/// Solves sum_i max(||v^lambda_{G_i}||_2 - eta, 0) == s2 for eta >= 0, where
/// v^lambda is the soft-thresholded input. std::nullopt when the total mass
/// of thresholded group norms is below s2 (the group constraint cannot bind
/// at this lambda).
std::optional<double> eta_from_lambda(const Vector& v, double lambda, double s2,
                                      const GroupPartition& partition);

/// L1 norm of the point determined by (lambda, eta), evaluated group by group
/// without forming it. Groups whose thresholded block vanishes contribute 0.
double s1_of_lambda(const Vector& v, double lambda, double eta, const GroupPartition& partition);

/// Minimiser of 0.5||x - v||^2 + lambda ||x||_1 + eta ||x||_G: soft
/// thresholding by lambda followed by block shrinkage by eta.
Vector compute_x_from_duals(const Vector& v, DualPair duals, const GroupPartition& partition);

/// Exact Euclidean projection onto {||x||_1 <= s1} intersected with
/// {||x||_G <= s2}.
///
/// Early exits cover the feasible input and the two single-active-constraint
/// cases (L1 ball checked first). Otherwise lambda is bracketed on
/// [0, max|v_j|] and bisected using the monotone map lambda -> s1_of_lambda;
/// the returned point sits at the upper end of the final bracket and is
/// therefore always feasible.
ProjectionOutcome sglp(const Vector& v, double s1, double s2, const GroupPartition& partition,
                       const SolverConfig& cfg = {});

/// Projection with the L1 constraint applied only to the coordinates in `t1`
/// and the group constraint only to the coordinates in `t3` (t3 must be a
/// subset of t1). Coordinates outside t1 are copied from v unchanged.
/// Groups are formed by intersecting the partition with t3.
ProjectionOutcome restricted_sglp(const Vector& v, double s1, double s2, std::span<const Index> t1,
                                  std::span<const Index> t3, const GroupPartition& partition,
                                  const SolverConfig& cfg = {});

}  // namespace sgfs
