#include "sgfs/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sgfs {

namespace detail {

void require_length(const Vector& x, Index p, const char* what) {
    if (x.size() != p) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch (got " << x.size() << ", expected " << p << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace detail

GroupPartition::GroupPartition(std::vector<std::vector<Index>> groups, Index p)
    : groups_(std::move(groups)), owner_(static_cast<std::size_t>(std::max<Index>(p, 0)), -1), p_(p) {
    if (p <= 0) throw std::invalid_argument("GroupPartition: feature count must be positive");
    if (groups_.empty()) throw std::invalid_argument("GroupPartition: at least one group required");
    Index covered = 0;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (groups_[g].empty()) throw std::invalid_argument("GroupPartition: empty group");
        for (Index j : groups_[g]) {
            if (j < 0 || j >= p) throw std::invalid_argument("GroupPartition: feature index out of range");
            auto& slot = owner_[static_cast<std::size_t>(j)];
            if (slot != -1) throw std::invalid_argument("GroupPartition: groups overlap");
            slot = static_cast<Index>(g);
            ++covered;
        }
    }
    if (covered != p) throw std::invalid_argument("GroupPartition: groups do not cover all features");
}

GroupPartition GroupPartition::contiguous(Index p, Index group_count) {
    if (group_count < 1 || group_count > p)
        throw std::invalid_argument("GroupPartition::contiguous: need 1 <= group_count <= p");
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(group_count));
    const Index base = p / group_count;
    const Index extra = p % group_count;
    Index next = 0;
    for (Index g = 0; g < group_count; ++g) {
        const Index len = base + (g < extra ? 1 : 0);
        auto& grp = groups[static_cast<std::size_t>(g)];
        grp.resize(static_cast<std::size_t>(len));
        for (Index k = 0; k < len; ++k) grp[static_cast<std::size_t>(k)] = next++;
    }
    return GroupPartition(std::move(groups), p);
}

GroupPartition GroupPartition::from_labels(std::span<const int> labels) {
    if (labels.empty()) throw std::invalid_argument("GroupPartition::from_labels: no features");
    const int max_label = *std::max_element(labels.begin(), labels.end());
    const int min_label = *std::min_element(labels.begin(), labels.end());
    if (min_label < 0) throw std::invalid_argument("GroupPartition::from_labels: negative group id");
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(max_label) + 1);
    for (std::size_t j = 0; j < labels.size(); ++j)
        groups[static_cast<std::size_t>(labels[j])].push_back(static_cast<Index>(j));
    for (const auto& g : groups)
        if (g.empty()) throw std::invalid_argument("non-contiguous group ids");
    return GroupPartition(std::move(groups), static_cast<Index>(labels.size()));
}

std::vector<int> GroupPartition::labels() const {
    std::vector<int> out(owner_.size());
    std::transform(owner_.begin(), owner_.end(), out.begin(), [](Index g) { return static_cast<int>(g); });
    return out;
}

ProblemInstance::ProblemInstance(Matrix A, Vector y, GroupPartition partition)
    : A_(std::move(A)), y_(std::move(y)), partition_(std::move(partition)) {
    if (A_.cols() != partition_.p())
        throw std::invalid_argument("ProblemInstance: column count of A differs from partition size");
    if (A_.rows() != y_.size())
        throw std::invalid_argument("ProblemInstance: row count of A differs from length of y");
}

void SparsityBudget::validate(const GroupPartition& partition, bool allow_s1_below_s2) const {
    if (!std::isfinite(s1) || !std::isfinite(s2))
        throw std::invalid_argument("SparsityBudget: non-finite budget");
    if (kind == BudgetKind::radius) {
        if (s1 <= 0.0 || s2 <= 0.0)
            throw std::invalid_argument("SparsityBudget: radii must be positive");
        return;
    }
    if (s1 != std::floor(s1) || s2 != std::floor(s2))
        throw std::invalid_argument("SparsityBudget: counts must be integers");
    if (s2 < 1.0 || s2 > static_cast<double>(partition.size()))
        throw std::invalid_argument("SparsityBudget: need 1 <= s2 <= number of groups");
    if (s1 > static_cast<double>(partition.p()))
        throw std::invalid_argument("SparsityBudget: need s1 <= p");
    if (s1 < 1.0) throw std::invalid_argument("SparsityBudget: need s1 >= 1");
    if (!allow_s1_below_s2 && s1 < s2)
        throw std::invalid_argument("SparsityBudget: need s2 <= s1 (each selected group needs a feature)");
}

TruncationParam::TruncationParam(double tau) : tau_(tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("TruncationParam: tau must be positive");
}

void SolverConfig::validate() const {
    if (dc_max_iter < 1 || agm_max_iter < 1)
        throw std::invalid_argument("SolverConfig: iteration counts must be >= 1");
    if (!(dc_rel_tol > 0) || !(agm_rel_tol > 0) || !(bisect_tol > 0) || !(feas_tol > 0))
        throw std::invalid_argument("SolverConfig: tolerances must be positive");
    if (!(initial_lipschitz > 0))
        throw std::invalid_argument("SolverConfig: initial_lipschitz must be positive");
}

double objective(const ProblemInstance& inst, const Vector& x) {
    detail::require_length(x, inst.p(), "objective");
    return 0.5 * (inst.A() * x - inst.y()).squaredNorm();
}

double group_norm(const Vector& x, const GroupPartition& partition) {
    detail::require_length(x, partition.p(), "group_norm");
    double total = 0.0;
    for (const auto& g : partition.groups()) {
        double sq = 0.0;
        for (Index j : g) sq += x[j] * x[j];
        total += std::sqrt(sq);
    }
    return total;
}

TruncatedCounts truncated_l1_counts(const Vector& x, const GroupPartition& partition,
                                    TruncationParam tau) {
    detail::require_length(x, partition.p(), "truncated_l1_counts");
    const double t = tau.value();
    TruncatedCounts out;
    for (Index j = 0; j < x.size(); ++j) out.features += std::min(std::abs(x[j]) / t, 1.0);
    for (const auto& g : partition.groups()) {
        double sq = 0.0;
        for (Index j : g) sq += x[j] * x[j];
        out.groups += std::min(std::sqrt(sq) / t, 1.0);
    }
    return out;
}

SupportSets support_sets(const Vector& x, const GroupPartition& partition, TruncationParam tau) {
    detail::require_length(x, partition.p(), "support_sets");
    const double t = tau.value();
    SupportSets sets;
    for (Index j = 0; j < x.size(); ++j)
        if (std::abs(x[j]) <= t) sets.t1.push_back(j);
    for (Index g = 0; g < partition.size(); ++g) {
        double sq = 0.0;
        for (Index j : partition.group(g)) sq += x[j] * x[j];
        if (std::sqrt(sq) <= t) {
            sets.t2.push_back(g);
            const auto& members = partition.group(g);
            sets.t3.insert(sets.t3.end(), members.begin(), members.end());
        }
    }
    std::sort(sets.t3.begin(), sets.t3.end());
    return sets;
}

}  // namespace sgfs
