#include <algorithm>
#include <cmath>
#include <optional>

#include "projection_detail.hpp"
#include "sgfs/projection.hpp"

namespace sgfs {

namespace detail {

ProjectionLayout ProjectionLayout::full(const GroupPartition& partition) {
    ProjectionLayout layout;
    layout.p_ = partition.p();
    layout.blocks_.reserve(static_cast<std::size_t>(partition.size()));
    for (const auto& g : partition.groups()) layout.blocks_.emplace_back(g);
    return layout;
}

ProjectionLayout ProjectionLayout::restricted(const GroupPartition& partition, std::span<const Index> t1,
                                              std::span<const Index> t3) {
    const Index p = partition.p();
    std::vector<char> in_t1(static_cast<std::size_t>(p), 0);
    std::vector<char> in_t3(static_cast<std::size_t>(p), 0);
    for (Index j : t1) {
        if (j < 0 || j >= p) throw std::invalid_argument("restricted projection: t1 index out of range");
        in_t1[static_cast<std::size_t>(j)] = 1;
    }
    for (Index j : t3) {
        if (j < 0 || j >= p) throw std::invalid_argument("restricted projection: t3 index out of range");
        if (!in_t1[static_cast<std::size_t>(j)])
            throw std::invalid_argument("restricted projection: t3 is not a subset of t1");
        in_t3[static_cast<std::size_t>(j)] = 1;
    }

    ProjectionLayout layout;
    layout.p_ = p;
    for (const auto& g : partition.groups()) {
        std::vector<Index> members;
        for (Index j : g)
            if (in_t3[static_cast<std::size_t>(j)]) members.push_back(j);
        if (!members.empty()) layout.storage_.push_back(std::move(members));
    }
    for (const auto& members : layout.storage_) layout.blocks_.emplace_back(members);
    for (Index j = 0; j < p; ++j)
        if (in_t1[static_cast<std::size_t>(j)] && !in_t3[static_cast<std::size_t>(j)]) layout.free_.push_back(j);
    return layout;
}

namespace {

/// Magnitudes |v_j| of the constrained coordinates, stored block by block
/// followed by the free coordinates, so that every evaluation of the
/// thresholded statistics is a contiguous sweep.
struct Magnitudes {
    std::vector<double> mag;
    std::vector<std::size_t> offsets;  // block i occupies [offsets[i], offsets[i+1])
    std::size_t free_begin = 0;

    Magnitudes(const Vector& v, const ProjectionLayout& layout) {
        offsets.reserve(layout.block_count() + 1);
        offsets.push_back(0);
        for (std::size_t b = 0; b < layout.block_count(); ++b) {
            for (Index j : layout.block(b)) mag.push_back(std::abs(v[j]));
            offsets.push_back(mag.size());
        }
        free_begin = mag.size();
        for (Index j : layout.free()) mag.push_back(std::abs(v[j]));
    }

    std::size_t blocks() const { return offsets.size() - 1; }
    std::span<const double> all() const { return mag; }
};

/// Per-block L2 and L1 norms of the soft-thresholded vector, and the L1 mass
/// of the thresholded free coordinates.
struct ThresholdedStats {
    std::vector<double> l2;
    std::vector<double> l1;
    double free_l1 = 0.0;

    void compute(const Magnitudes& m, double lambda) {
        const std::size_t nb = m.blocks();
        l2.resize(nb);
        l1.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            double s = 0.0;
            double sq = 0.0;
            for (std::size_t k = m.offsets[b]; k < m.offsets[b + 1]; ++k) {
                const double t = m.mag[k] - lambda;
                if (t > 0.0) {
                    s += t;
                    sq += t * t;
                }
            }
            l1[b] = s;
            l2[b] = std::sqrt(sq);
        }
        free_l1 = 0.0;
        for (std::size_t k = m.free_begin; k < m.mag.size(); ++k) free_l1 += std::max(m.mag[k] - lambda, 0.0);
    }

    std::optional<double> eta(double s2) const {
        double total = 0.0;
        for (double n : l2) total += n;
        if (total < s2) return std::nullopt;
        return mass_threshold(l2, s2);
    }

    double s1(double eta) const {
        double total = free_l1;
        for (std::size_t b = 0; b < l2.size(); ++b)
            if (l2[b] > eta) total += (l2[b] - eta) * (l1[b] / l2[b]);
        return total;
    }
};

/// Writes the regularised-problem minimiser for (lambda, eta) onto the
/// constrained coordinates of x; other coordinates are left untouched.
void write_point(const Vector& v, double lambda, double eta, const ProjectionLayout& layout, Vector& x) {
    for (std::size_t b = 0; b < layout.block_count(); ++b) {
        const auto block = layout.block(b);
        double sq = 0.0;
        for (Index j : block) {
            const double t = std::max(std::abs(v[j]) - lambda, 0.0);
            sq += t * t;
        }
        const double norm = std::sqrt(sq);
        const double scale = norm > eta ? (norm - eta) / norm : 0.0;
        for (Index j : block) {
            const double t = std::max(std::abs(v[j]) - lambda, 0.0);
            x[j] = std::copysign(t * scale, v[j]);
        }
    }
    for (Index j : layout.free()) {
        const double t = std::max(std::abs(v[j]) - lambda, 0.0);
        x[j] = std::copysign(t, v[j]);
    }
}

void zero_blocks(const ProjectionLayout& layout, Vector& x) {
    for (std::size_t b = 0; b < layout.block_count(); ++b)
        for (Index j : layout.block(b)) x[j] = 0.0;
}

double restricted_l1(const Vector& x, const ProjectionLayout& layout) {
    double total = 0.0;
    for (std::size_t b = 0; b < layout.block_count(); ++b)
        for (Index j : layout.block(b)) total += std::abs(x[j]);
    for (Index j : layout.free()) total += std::abs(x[j]);
    return total;
}

double restricted_group(const Vector& x, const ProjectionLayout& layout) {
    double total = 0.0;
    for (std::size_t b = 0; b < layout.block_count(); ++b) {
        double sq = 0.0;
        for (Index j : layout.block(b)) sq += x[j] * x[j];
        total += std::sqrt(sq);
    }
    return total;
}

// A constraint is reported active when it holds with equality up to
// feas_tol; inactive constraints are then strictly satisfied.
void set_flags(ProjectionOutcome& out, double s1, double s2, const ProjectionLayout& layout,
               const SolverConfig& cfg) {
    out.c1_active = std::abs(restricted_l1(out.x, layout) - s1) <= cfg.feas_tol;
    out.c2_active = std::abs(restricted_group(out.x, layout) - s2) <= cfg.feas_tol;
}

}  // namespace

ProjectionOutcome project(const Vector& v, double s1, double s2, const ProjectionLayout& layout,
                          const SolverConfig& cfg) {
    require_length(v, layout.p(), "projection");
    if (!(s1 >= 0.0) || !(s2 >= 0.0)) throw std::invalid_argument("projection: radii must be non-negative");

    ProjectionOutcome out;
    out.x = v;
    const Magnitudes m(v, layout);

    double l1_total = 0.0;
    for (double a : m.mag) l1_total += a;
    ThresholdedStats stats;
    stats.compute(m, 0.0);
    double group_total = 0.0;
    for (double n : stats.l2) group_total += n;

    if (l1_total <= s1 && group_total <= s2) {
        set_flags(out, s1, s2, layout, cfg);
        return out;
    }

    if (s1 == 0.0) {
        zero_blocks(layout, out.x);
        for (Index j : layout.free()) out.x[j] = 0.0;
        out.lambda = m.mag.empty() ? 0.0 : *std::max_element(m.mag.begin(), m.mag.end());
        set_flags(out, s1, s2, layout, cfg);
        return out;
    }
    if (s2 == 0.0) {
        zero_blocks(layout, out.x);
        const std::span<const double> free_mag(m.mag.data() + m.free_begin, m.mag.size() - m.free_begin);
        const double theta = mass_threshold(free_mag, s1);
        for (Index j : layout.free()) out.x[j] = std::copysign(std::max(std::abs(v[j]) - theta, 0.0), v[j]);
        out.lambda = theta;
        set_flags(out, s1, s2, layout, cfg);
        return out;
    }

    // Only the L1 constraint binds.
    const double theta1 = mass_threshold(m.all(), s1);
    stats.compute(m, theta1);
    double g_c1 = 0.0;
    for (double n : stats.l2) g_c1 += n;
    if (g_c1 <= s2) {
        write_point(v, theta1, 0.0, layout, out.x);
        out.lambda = theta1;
        set_flags(out, s1, s2, layout, cfg);
        return out;
    }

    // Only the group constraint binds.
    stats.compute(m, 0.0);
    const double theta2 = mass_threshold(stats.l2, s2);
    if (stats.s1(theta2) <= s1) {
        write_point(v, 0.0, theta2, layout, out.x);
        out.eta = theta2;
        set_flags(out, s1, s2, layout, cfg);
        return out;
    }

    // Both constraints bind: bisect on lambda.
    double low = 0.0;
    double up = *std::max_element(m.mag.begin(), m.mag.end());
    double s1_up = 0.0;
    double eta_up = 0.0;
    int iterations = 0;

    auto step = [&](double mid) {
        stats.compute(m, mid);
        const auto eta = stats.eta(s2);
        if (!eta) {
            up = mid;
            eta_up = 0.0;
            s1_up = stats.s1(0.0);
            return;
        }
        const double s1_hat = stats.s1(*eta);
        if (s1_hat <= s1) {
            up = mid;
            eta_up = *eta;
            s1_up = s1_hat;
        } else {
            low = mid;
        }
    };

    const double width = up - low;
    const int cap = (width > cfg.bisect_tol ? static_cast<int>(std::ceil(std::log2(width / cfg.bisect_tol))) : 0) + 8;
    while (up - low > cfg.bisect_tol) {
        if (++iterations > cap) throw ConvergenceError("sglp: bisection did not converge within its iteration cap");
        step(0.5 * (low + up));
    }

    // A bracket of width bisect_tol still leaves an L1 residual proportional
    // to the slope of s1_of_lambda; keep halving while it is not negligible.
    const double residual_target = 1e-3 * cfg.bisect_tol * std::max(1.0, s1);
    for (int extra = 0; extra < 64 && s1 - s1_up > residual_target; ++extra) {
        const double mid = low + 0.5 * (up - low);
        if (!(mid > low && mid < up)) break;
        ++iterations;
        step(mid);
    }

    write_point(v, up, eta_up, layout, out.x);
    out.lambda = up;
    out.eta = eta_up;
    out.iterations = iterations;
    set_flags(out, s1, s2, layout, cfg);
    return out;
}

}  // namespace detail

Vector soft_threshold(const Vector& v, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("soft_threshold: lambda must be non-negative");
    return v.unaryExpr([lambda](double a) { return std::copysign(std::max(std::abs(a) - lambda, 0.0), a); });
}

Vector l1_ball_projection(const Vector& v, double s1) {
    if (!(s1 > 0.0)) throw std::invalid_argument("l1_ball_projection: radius must be positive");
    if (v.lpNorm<1>() <= s1) return v;
    std::vector<double> mag(static_cast<std::size_t>(v.size()));
    for (Index j = 0; j < v.size(); ++j) mag[static_cast<std::size_t>(j)] = std::abs(v[j]);
    return soft_threshold(v, mass_threshold(mag, s1));
}

Vector group_ball_projection(const Vector& v, double s2, const GroupPartition& partition) {
    if (!(s2 > 0.0)) throw std::invalid_argument("group_ball_projection: radius must be positive");
    detail::require_length(v, partition.p(), "group_ball_projection");
    std::vector<double> norms(static_cast<std::size_t>(partition.size()));
    double total = 0.0;
    for (Index g = 0; g < partition.size(); ++g) {
        double sq = 0.0;
        for (Index j : partition.group(g)) sq += v[j] * v[j];
        norms[static_cast<std::size_t>(g)] = std::sqrt(sq);
        total += norms[static_cast<std::size_t>(g)];
    }
    if (total <= s2) return v;
    const double theta = mass_threshold(norms, s2);
    Vector x = v;
    for (Index g = 0; g < partition.size(); ++g) {
        const double n = norms[static_cast<std::size_t>(g)];
        const double scale = n > theta ? (n - theta) / n : 0.0;
        for (Index j : partition.group(g)) x[j] *= scale;
    }
    return x;
}

namespace {

std::vector<double> thresholded_group_norms(const Vector& v, double lambda, const GroupPartition& partition,
                                            std::vector<double>* l1 = nullptr) {
    std::vector<double> l2(static_cast<std::size_t>(partition.size()));
    if (l1) l1->assign(l2.size(), 0.0);
    for (Index g = 0; g < partition.size(); ++g) {
        double s = 0.0;
        double sq = 0.0;
        for (Index j : partition.group(g)) {
            const double t = std::max(std::abs(v[j]) - lambda, 0.0);
            s += t;
            sq += t * t;
        }
        l2[static_cast<std::size_t>(g)] = std::sqrt(sq);
        if (l1) (*l1)[static_cast<std::size_t>(g)] = s;
    }
    return l2;
}

}  // namespace

std::optional<double> eta_from_lambda(const Vector& v, double lambda, double s2, const GroupPartition& partition) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("eta_from_lambda: lambda must be non-negative");
    if (!(s2 > 0.0)) throw std::invalid_argument("eta_from_lambda: s2 must be positive");
    detail::require_length(v, partition.p(), "eta_from_lambda");
    const auto norms = thresholded_group_norms(v, lambda, partition);
    double total = 0.0;
    for (double n : norms) total += n;
    if (total < s2) return std::nullopt;
    return mass_threshold(norms, s2);
}

double s1_of_lambda(const Vector& v, double lambda, double eta, const GroupPartition& partition) {
    if (!(lambda >= 0.0) || !(eta >= 0.0)) throw std::invalid_argument("s1_of_lambda: duals must be non-negative");
    detail::require_length(v, partition.p(), "s1_of_lambda");
    std::vector<double> l1;
    const auto l2 = thresholded_group_norms(v, lambda, partition, &l1);
    double total = 0.0;
    for (std::size_t g = 0; g < l2.size(); ++g)
        if (l2[g] > eta) total += (l2[g] - eta) * (l1[g] / l2[g]);
    return total;
}

Vector compute_x_from_duals(const Vector& v, DualPair duals, const GroupPartition& partition) {
    if (!(duals.lambda >= 0.0) || !(duals.eta >= 0.0))
        throw std::invalid_argument("compute_x_from_duals: duals must be non-negative");
    detail::require_length(v, partition.p(), "compute_x_from_duals");
    Vector x = v;
    for (const auto& g : partition.groups()) {
        double sq = 0.0;
        for (Index j : g) {
            const double t = std::max(std::abs(v[j]) - duals.lambda, 0.0);
            sq += t * t;
        }
        const double norm = std::sqrt(sq);
        const double scale = norm > duals.eta ? (norm - duals.eta) / norm : 0.0;
        for (Index j : g) x[j] = std::copysign(std::max(std::abs(v[j]) - duals.lambda, 0.0) * scale, v[j]);
    }
    return x;
}

ProjectionOutcome sglp(const Vector& v, double s1, double s2, const GroupPartition& partition,
                       const SolverConfig& cfg) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) throw std::invalid_argument("sglp: radii must be positive");
    detail::require_length(v, partition.p(), "sglp");
    return detail::project(v, s1, s2, detail::ProjectionLayout::full(partition), cfg);
}

ProjectionOutcome restricted_sglp(const Vector& v, double s1, double s2, std::span<const Index> t1,
                                  std::span<const Index> t3, const GroupPartition& partition,
                                  const SolverConfig& cfg) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) throw std::invalid_argument("restricted_sglp: radii must be positive");
    detail::require_length(v, partition.p(), "restricted_sglp");
    return detail::project(v, s1, s2, detail::ProjectionLayout::restricted(partition, t1, t3), cfg);
}

}  // namespace sgfs
