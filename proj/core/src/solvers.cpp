#include "sgfs/solvers.hpp"

#include <cmath>
#include <limits>

#include "projection_detail.hpp"
#include "sgfs/projection.hpp"

namespace sgfs {

namespace {

// Coordinates sitting on the truncation boundary |x_j| == tau are counted as
// "above" tau when linearising. Any subgradient of the concave part gives a
// valid majorant; this choice keeps coordinates that reached tau from being
// pinned there by the next subproblem.
constexpr double kBoundarySlack = 1e-9;

constexpr int kMaxLineSearchDoublings = 80;

}  // namespace

AgmResult agm_solve(const ProblemInstance& inst, const SparsityBudget& budget,
                    const std::optional<SupportSets>& restriction, const SolverConfig& cfg,
                    const std::optional<Vector>& warm) {
    cfg.validate();
    if (budget.kind != BudgetKind::radius) throw std::invalid_argument("agm_solve: budget must be a radius budget");
    if (restriction) {
        if (!(budget.s1 >= 0.0) || !(budget.s2 >= 0.0))
            throw std::invalid_argument("agm_solve: radii must be non-negative");
    } else {
        budget.validate(inst.partition());
    }

    const auto layout = restriction
                            ? detail::ProjectionLayout::restricted(inst.partition(), restriction->t1, restriction->t3)
                            : detail::ProjectionLayout::full(inst.partition());
    auto project = [&](const Vector& v) { return detail::project(v, budget.s1, budget.s2, layout, cfg).x; };

    const Matrix& A = inst.A();
    const Vector& y = inst.y();

    AgmState st;
    if (warm) detail::require_length(*warm, inst.p(), "agm_solve warm start");
    st.x_cur = project(warm ? *warm : Vector::Zero(inst.p()));
    st.x_prev = st.x_cur;
    st.lipschitz = cfg.initial_lipschitz;

    Vector Ax = A * st.x_cur;
    Vector Ax_prev = Ax;
    double f_cur = 0.5 * (Ax - y).squaredNorm();

    AgmResult result;
    result.x = st.x_cur;
    result.objective = f_cur;

    // Absolute floor for the stopping test, so that problems whose optimum is
    // an exact fit (f* = 0) still terminate.
    const double abs_floor = std::numeric_limits<double>::epsilon() * std::max(0.5 * y.squaredNorm(), 1e-300);

    Vector u(inst.p());
    Vector Au(inst.n());
    Vector grad(inst.p());
    Vector x_next(inst.p());
    Vector Ax_next(inst.n());

    for (st.t = 1; st.t <= cfg.agm_max_iter; ++st.t) {
        const double beta = (st.alpha_prev - 1.0) / st.alpha_cur;
        u = st.x_cur + beta * (st.x_cur - st.x_prev);
        Au = Ax + beta * (Ax - Ax_prev);
        const Vector residual = Au - y;
        const double f_u = 0.5 * residual.squaredNorm();
        grad.noalias() = A.transpose() * residual;

        double L = st.lipschitz;
        double f_next = 0.0;
        for (int doubling = 0;; ++doubling) {
            x_next = project(u - grad / L);
            Ax_next.noalias() = A * x_next;
            f_next = 0.5 * (Ax_next - y).squaredNorm();
            const Vector d = x_next - u;
            const double lin = grad.dot(d);
            const double quad = 0.5 * L * d.squaredNorm();
            const double model = f_u + lin + quad;
            // Slack scaled by the terms, not their sum, which can cancel.
            if (f_next <= model + 1e-12 * (f_u + std::abs(lin) + quad)) break;
            if (doubling == kMaxLineSearchDoublings)
                throw ConvergenceError("agm_solve: line search failed to find a Lipschitz bound");
            L *= 2.0;
        }
        st.lipschitz = L;

        const double alpha_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st.alpha_cur * st.alpha_cur));
        st.alpha_prev = st.alpha_cur;
        st.alpha_cur = alpha_next;
        st.x_prev.swap(st.x_cur);
        st.x_cur = x_next;
        Ax_prev.swap(Ax);
        Ax = Ax_next;

        const double f_prev = f_cur;
        f_cur = f_next;
        if (f_cur < result.objective) {
            result.objective = f_cur;
            result.x = st.x_cur;
        }
        const double change = std::abs(f_prev - f_cur);
        if (change <= cfg.agm_rel_tol * std::abs(f_prev) || change <= abs_floor) {
            result.converged = true;
            break;
        }
    }
    if (st.t > cfg.agm_max_iter) st.t = cfg.agm_max_iter;
    result.state = std::move(st);
    return result;
}

Vector constrained_sgl_solve(const ProblemInstance& inst, const SparsityBudget& budget, const SolverConfig& cfg) {
    return agm_solve(inst, budget, std::nullopt, cfg).x;
}

DcRadii dc_linearized_radii(const Vector& x, const GroupPartition& partition, const SparsityBudget& budget,
                            TruncationParam tau) {
    const double t = tau.value();
    DcRadii out;
    out.sets = support_sets(x, partition, TruncationParam(t * (1.0 - kBoundarySlack)));
    const double p = static_cast<double>(partition.p());
    const double groups = static_cast<double>(partition.size());
    out.l1 = t * (budget.s1 - (p - static_cast<double>(out.sets.t1.size())));
    out.group = t * (budget.s2 - (groups - static_cast<double>(out.sets.t2.size())));
    return out;
}

DcResult dc_solve(const ProblemInstance& inst, const SparsityBudget& budget, TruncationParam tau,
                  const SolverConfig& cfg, const DcOptions& options) {
    cfg.validate();
    if (budget.kind != BudgetKind::count) throw std::invalid_argument("dc_solve: budget must be a count budget");
    budget.validate(inst.partition(), /*allow_s1_below_s2=*/true);

    DcResult result;
    result.x = options.init ? *options.init : Vector::Zero(inst.p());
    detail::require_length(result.x, inst.p(), "dc_solve init");
    double f = objective(inst, result.x);
    result.trace.objectives.push_back(f);
    if (options.keep_iterates) result.trace.iterates.push_back(result.x);

    for (int m = 1; m <= cfg.dc_max_iter; ++m) {
        auto radii = dc_linearized_radii(result.x, inst.partition(), budget, tau);
        // Rounding in the previous subproblem can leave a radius a hair below
        // zero; anything larger means the iterate was infeasible.
        const double slack = cfg.feas_tol * tau.value();
        if (radii.l1 < -slack || radii.group < -slack)
            throw std::logic_error("dc_solve: linearised subproblem is infeasible (iterate violates the budget)");
        radii.l1 = std::max(radii.l1, 0.0);
        radii.group = std::max(radii.group, 0.0);

        const auto sub = agm_solve(inst, SparsityBudget::radii(radii.l1, radii.group), radii.sets, cfg, result.x);
        if (!(sub.objective < f)) {
            result.trace.converged = true;
            break;
        }
        const double decrease = f - sub.objective;
        result.x = sub.x;
        f = sub.objective;
        result.trace.objectives.push_back(f);
        if (options.keep_iterates) result.trace.iterates.push_back(result.x);
        if (decrease <= cfg.dc_rel_tol * (1.0 + std::abs(f))) {
            result.trace.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace sgfs
