#include "sgfs/baselines.hpp"

#include <chrono>
#include <cmath>

#include "sgfs/projection.hpp"

namespace sgfs {

namespace {

constexpr double kRhoCap = 65536.0;  // 2^16

class Deadline {
public:
    explicit Deadline(const std::optional<double>& seconds)
        : limit_(seconds), start_(std::chrono::steady_clock::now()) {}

    bool expired() const {
        if (!limit_) return false;
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
        return elapsed.count() > *limit_;
    }

private:
    std::optional<double> limit_;
    std::chrono::steady_clock::time_point start_;
};

void check_radii(double s1, double s2, const char* who) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) throw std::invalid_argument(std::string(who) + ": radii must be positive");
}

bool target_reached(const StopRule& stop, double f, const Vector& x, double s1, double s2,
                    const GroupPartition& partition) {
    return std::abs(f - *stop.target_objective) <= stop.target_gap &&
           constraint_violation(x, s1, s2, partition) <= stop.target_gap;
}

}  // namespace

double constraint_violation(const Vector& x, double s1, double s2, const GroupPartition& partition) {
    return std::max({x.lpNorm<1>() - s1, group_norm(x, partition) - s2, 0.0});
}

AdmmResult admm_project(const Vector& v, double s1, double s2, const GroupPartition& partition,
                        const StopRule& stop) {
    check_radii(s1, s2, "admm_project");
    detail::require_length(v, partition.p(), "admm_project");
    const Deadline deadline(stop.time_limit_seconds);

    AdmmResult result;
    AdmmState& st = result.state;
    st.x = v;
    st.u = v;
    st.w = v;
    st.lambda_mult = Vector::Zero(v.size());
    st.eta_mult = Vector::Zero(v.size());
    st.rho = 1.0;

    double f_prev = 0.0;
    Vector u_old(v.size());
    Vector w_old(v.size());
    for (st.t = 1; st.t <= stop.max_iter; ++st.t) {
        st.x = (v + st.rho * (st.u + st.lambda_mult + st.w + st.eta_mult)) / (1.0 + 2.0 * st.rho);
        u_old = st.u;
        w_old = st.w;
        st.w = group_ball_projection(st.x - st.eta_mult, s2, partition);
        st.u = l1_ball_projection(st.x - st.lambda_mult, s1);
        st.lambda_mult += st.u - st.x;
        st.eta_mult += st.w - st.x;

        const double r_u = (st.u - st.x).norm();
        const double r_w = (st.w - st.x).norm();
        const double primal = std::hypot(r_u, r_w);
        const double dual = st.rho * ((st.u - u_old) + (st.w - w_old)).norm();
        const double f = 0.5 * (st.x - v).squaredNorm();

        bool done = false;
        if (stop.target_objective) {
            done = target_reached(stop, f, st.x, s1, s2, partition);
        } else {
            done = std::abs(f_prev - f) <= stop.rel_tol * f_prev && std::max(r_u, r_w) <= stop.residual_tol;
        }
        f_prev = f;
        if (done) {
            result.converged = true;
            break;
        }
        if (deadline.expired()) break;

        if (primal > 10.0 * dual && st.rho < kRhoCap) {
            st.rho *= 2.0;
            st.lambda_mult *= 0.5;
            st.eta_mult *= 0.5;
        }
    }
    if (st.t > stop.max_iter) st.t = stop.max_iter;
    result.x = st.x;
    result.objective = 0.5 * (st.x - v).squaredNorm();
    return result;
}

DykstraResult dykstra_project(const Vector& v, double s1, double s2, const GroupPartition& partition,
                              const StopRule& stop) {
    check_radii(s1, s2, "dykstra_project");
    detail::require_length(v, partition.p(), "dykstra_project");
    const Deadline deadline(stop.time_limit_seconds);

    DykstraResult result;
    DykstraState& st = result.state;
    st.x = v;
    st.y_aux = v;
    st.p_corr = Vector::Zero(v.size());
    st.q_corr = Vector::Zero(v.size());

    double f_prev = 0.0;
    for (st.t = 1; st.t <= stop.max_iter; ++st.t) {
        st.y_aux = group_ball_projection(st.x + st.p_corr, s2, partition);
        st.p_corr += st.x - st.y_aux;
        st.x = l1_ball_projection(st.y_aux + st.q_corr, s1);
        st.q_corr += st.y_aux - st.x;

        const double f = 0.5 * (st.x - v).squaredNorm();
        const bool done = stop.target_objective ? target_reached(stop, f, st.x, s1, s2, partition)
                                                : std::abs(f_prev - f) <= stop.rel_tol * f_prev;
        f_prev = f;
        if (done) {
            result.converged = true;
            break;
        }
        if (deadline.expired()) break;
    }
    if (st.t > stop.max_iter) st.t = stop.max_iter;
    result.x = st.x;
    result.objective = 0.5 * (st.x - v).squaredNorm();
    return result;
}

}  // namespace sgfs
