#include <algorithm>
#include <bit>
#include <cstdint>

#include "sgfs/model.hpp"

namespace sgfs {

namespace {

std::vector<Index> support_of(std::uint32_t mask) {
    std::vector<Index> out;
    for (Index j = 0; mask != 0; ++j, mask >>= 1)
        if (mask & 1u) out.push_back(j);
    return out;
}

}  // namespace

Vector l0_oracle(const ProblemInstance& inst, const SparsityBudget& budget) {
    if (budget.kind != BudgetKind::count)
        throw std::invalid_argument("l0_oracle: budget must be a count budget");
    const Index p = inst.p();
    if (p > kL0OracleMaxFeatures)
        throw std::invalid_argument("l0_oracle: size limit exceeded (p > 20)");
    budget.validate(inst.partition(), /*allow_s1_below_s2=*/true);

    const auto& partition = inst.partition();
    std::vector<std::uint32_t> group_masks(static_cast<std::size_t>(partition.size()), 0u);
    for (Index g = 0; g < partition.size(); ++g)
        for (Index j : partition.group(g)) group_masks[static_cast<std::size_t>(g)] |= (1u << j);

    const int max_features = static_cast<int>(budget.s1);
    const int max_groups = static_cast<int>(budget.s2);

    Vector best_x = Vector::Zero(p);
    double best_obj = 0.5 * inst.y().squaredNorm();
    std::vector<Index> best_support;

    const std::uint32_t limit = 1u << p;
    for (std::uint32_t mask = 1; mask < limit; ++mask) {
        if (std::popcount(mask) > max_features) continue;
        int touched = 0;
        for (auto gm : group_masks) touched += (gm & mask) ? 1 : 0;
        if (touched > max_groups) continue;

        const auto support = support_of(mask);
        Matrix sub(inst.n(), static_cast<Index>(support.size()));
        for (std::size_t k = 0; k < support.size(); ++k) sub.col(static_cast<Index>(k)) = inst.A().col(support[k]);
        const Vector coef = sub.completeOrthogonalDecomposition().solve(inst.y());
        const double obj = 0.5 * (sub * coef - inst.y()).squaredNorm();

        const double tie = 1e-12 * (1.0 + best_obj);
        const bool better = obj < best_obj - tie;
        const bool tied_smaller = !better && obj <= best_obj + tie &&
                                  std::lexicographical_compare(support.begin(), support.end(),
                                                               best_support.begin(), best_support.end());
        if (better || tied_smaller) {
            best_obj = obj;
            best_support = support;
            best_x.setZero();
            for (std::size_t k = 0; k < support.size(); ++k) best_x[support[k]] = coef[static_cast<Index>(k)];
        }
    }
    return best_x;
}

}  // namespace sgfs
