#pragma once

#include <optional>

#include "sgfs/model.hpp"

namespace sgfs {

/// Termination rule shared by the iterative reference projections.
///
/// Target mode (target_objective set): stop once |f(x) - target| <= target_gap
/// and x violates neither constraint by more than target_gap.
/// Relative mode: stop once |f(x_{k-1}) - f(x_k)| <= rel_tol * f(x_{k-1}); ADMM
/// additionally requires both splitting residuals ||u - x||, ||w - x|| to be
/// at most residual_tol.
struct StopRule {
    std::optional<double> target_objective;
    double target_gap = 1e-3;
    double rel_tol = 1e-7;
    long max_iter = 100000;
    double residual_tol = 1e-5;
    std::optional<double> time_limit_seconds;
};

/// Scaled-form ADMM iterate. lambda_mult and eta_mult are the scaled
/// multipliers of the splits u = x and w = x.
struct AdmmState {
    Vector x, u, w, lambda_mult, eta_mult;
    double rho = 1.0;
    long t = 0;
};

struct AdmmResult {
    Vector x;
    double objective = 0.0;
    AdmmState state;
    bool converged = false;
};

/// ADMM for the projection onto {||x||_1 <= s1} and {||x||_G <= s2}, splitting
/// the two balls into copies u and w of x. rho starts at 1 and doubles
/// (up to 2^16) whenever the primal residual exceeds ten times the dual one.
AdmmResult admm_project(const Vector& v, double s1, double s2, const GroupPartition& partition,
                        const StopRule& stop = {});

struct DykstraState {
    Vector x, y_aux, p_corr, q_corr;
    long t = 0;
};

struct DykstraResult {
    Vector x;
    double objective = 0.0;
    DykstraState state;
    bool converged = false;
};

/// Dykstra's alternating projections (group ball, then L1 ball) with
/// correction terms. Every returned x lies in the L1 ball.
DykstraResult dykstra_project(const Vector& v, double s1, double s2, const GroupPartition& partition,
                              const StopRule& stop = {});

/// max(||x||_1 - s1, ||x||_G - s2, 0)
double constraint_violation(const Vector& x, double s1, double s2, const GroupPartition& partition);

}  // namespace sgfs
