#include <gtest/gtest.h>

#include <sgfs/sgfs.hpp>

#include "support/oracles.hpp"

using namespace sgfs;
using sgfs::oracle::naive_group_norm;
using sgfs::oracle::naive_objective;

namespace {

ProblemInstance identity_instance(Vector y, GroupPartition partition) {
    const Index p = y.size();
    return ProblemInstance(Matrix::Identity(p, p), std::move(y), std::move(partition));
}

}  // namespace

TEST(GroupPartition, ContiguousSplitsEvenly) {
    const auto part = GroupPartition::contiguous(6, 3);
    ASSERT_EQ(part.size(), 3);
    EXPECT_EQ(part.group(1), (std::vector<Index>{2, 3}));
    EXPECT_EQ(part.group_of(5), 2);
    EXPECT_EQ(part.labels(), (std::vector<int>{0, 0, 1, 1, 2, 2}));
}

TEST(GroupPartition, FromLabelsAcceptsInterleavedIds) {
    const std::vector<int> labels{1, 0, 1, 0};
    const auto part = GroupPartition::from_labels(labels);
    EXPECT_EQ(part.group(0), (std::vector<Index>{1, 3}));
    EXPECT_EQ(part.group(1), (std::vector<Index>{0, 2}));
}

TEST(GroupPartition, RejectsGapsOverlapAndMissingFeatures) {
    const std::vector<int> gap{0, 2};
    EXPECT_THROW(
        {
            try {
                GroupPartition::from_labels(gap);
            } catch (const std::invalid_argument& e) {
                EXPECT_STREQ(e.what(), "non-contiguous group ids");
                throw;
            }
        },
        std::invalid_argument);
    EXPECT_THROW(GroupPartition({{0, 1}, {1}}, 2), std::invalid_argument);
    EXPECT_THROW(GroupPartition({{0}}, 2), std::invalid_argument);
    EXPECT_THROW(GroupPartition({{0}, {}}, 1), std::invalid_argument);
    EXPECT_THROW(GroupPartition::contiguous(3, 4), std::invalid_argument);
}

TEST(ProblemInstance, RejectsMismatchedShapes) {
    EXPECT_THROW(ProblemInstance(Matrix::Zero(2, 3), Vector::Zero(2), GroupPartition::contiguous(2, 1)),
                 std::invalid_argument);
    EXPECT_THROW(ProblemInstance(Matrix::Zero(2, 3), Vector::Zero(3), GroupPartition::contiguous(3, 1)),
                 std::invalid_argument);
}

TEST(Objective, OneDimensional) {
    const auto inst = identity_instance(Vector::Constant(1, 2.0), GroupPartition::contiguous(1, 1));
    EXPECT_DOUBLE_EQ(objective(inst, Vector::Constant(1, 2.0)), 0.0);
    EXPECT_DOUBLE_EQ(objective(inst, Vector::Zero(1)), 2.0);
    EXPECT_THROW(objective(inst, Vector::Zero(2)), std::invalid_argument);
}

TEST(Objective, MatchesLoopSummation) {
    Rng rng(11);
    const Matrix A = oracle::gaussian_matrix(rng, 5, 8);
    const Vector y = oracle::uniform_vector(rng, 5, -3, 3);
    const Vector x = oracle::uniform_vector(rng, 8, -2, 2);
    const ProblemInstance inst(A, y, GroupPartition::contiguous(8, 2));
    EXPECT_NEAR(objective(inst, x), naive_objective(A, y, x), 1e-12);
}

TEST(GroupNorm, Examples) {
    const Vector x = (Vector(2) << 3.0, 4.0).finished();
    EXPECT_DOUBLE_EQ(group_norm(x, GroupPartition::contiguous(2, 1)), 5.0);
    EXPECT_DOUBLE_EQ(group_norm(x, GroupPartition::contiguous(2, 2)), 7.0);
    EXPECT_DOUBLE_EQ(group_norm(Vector::Zero(2), GroupPartition::contiguous(2, 1)), 0.0);
}

TEST(GroupNorm, BoundedByL1WithEqualityForSingletonSupport) {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const Index p = 2 + static_cast<Index>(rng.uniform_index(20));
        const auto part = oracle::random_contiguous_partition(rng, p, 1 + static_cast<Index>(rng.uniform_index(p)));
        const Vector x = oracle::uniform_vector(rng, p, -5, 5);
        EXPECT_NEAR(group_norm(x, part), naive_group_norm(x, part), 1e-12);
        EXPECT_LE(group_norm(x, part), x.lpNorm<1>() + 1e-12);

        Vector one_per_group = Vector::Zero(p);
        for (Index g = 0; g < part.size(); ++g) one_per_group[part.group(g).front()] = rng.normal();
        EXPECT_NEAR(group_norm(one_per_group, part), one_per_group.lpNorm<1>(), 1e-12);
    }
}

TEST(TruncatedCounts, Examples) {
    const auto singletons = GroupPartition::contiguous(3, 3);
    const TruncationParam tau(0.1);
    const auto c = truncated_l1_counts((Vector(3) << 2.0, 0.05, 0.0).finished(), singletons, tau);
    EXPECT_DOUBLE_EQ(c.features, 1.5);
    EXPECT_DOUBLE_EQ(c.groups, 1.5);

    const auto zero = truncated_l1_counts(Vector::Zero(3), singletons, tau);
    EXPECT_EQ(zero.features, 0.0);
    EXPECT_EQ(zero.groups, 0.0);

    const auto part = GroupPartition::contiguous(4, 2);
    const auto sat = truncated_l1_counts((Vector(4) << 1.0, -2.0, 0.0, 0.0).finished(), part, tau);
    EXPECT_DOUBLE_EQ(sat.features, 2.0);
    EXPECT_DOUBLE_EQ(sat.groups, 1.0);
}

TEST(TruncatedCounts, BoundedAndNonIncreasingInTau) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Index p = 1 + static_cast<Index>(rng.uniform_index(15));
        const auto part = oracle::random_contiguous_partition(rng, p, 1 + static_cast<Index>(rng.uniform_index(p)));
        const Vector x = oracle::uniform_vector(rng, p, -1, 1);
        const double t1 = rng.uniform(0.01, 1.0);
        const double t2 = t1 * rng.uniform(1.0, 3.0);
        const auto a = truncated_l1_counts(x, part, TruncationParam(t1));
        const auto b = truncated_l1_counts(x, part, TruncationParam(t2));
        EXPECT_LE(a.features, static_cast<double>(p));
        EXPECT_LE(a.groups, static_cast<double>(part.size()));
        EXPECT_GE(a.features, b.features);
        EXPECT_GE(a.groups, b.groups);
    }
}

TEST(SupportSets, Examples) {
    const auto part = GroupPartition::contiguous(4, 2);
    const TruncationParam tau(0.1);
    const auto s = support_sets((Vector(4) << 0.05, 2.0, 0.0, 0.5).finished(), part, tau);
    EXPECT_EQ(s.t1, (std::vector<Index>{0, 2}));
    EXPECT_TRUE(s.t2.empty());
    EXPECT_TRUE(s.t3.empty());

    const auto all = support_sets(Vector::Zero(4), part, tau);
    EXPECT_EQ(all.t1, (std::vector<Index>{0, 1, 2, 3}));
    EXPECT_EQ(all.t2, (std::vector<Index>{0, 1}));
    EXPECT_EQ(all.t3, (std::vector<Index>{0, 1, 2, 3}));

    const auto none = support_sets(Vector::Constant(4, 1.0), part, tau);
    EXPECT_TRUE(none.t1.empty() && none.t2.empty() && none.t3.empty());
}

TEST(SupportSets, GrowWithTau) {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const Index p = 2 + static_cast<Index>(rng.uniform_index(12));
        const auto part = oracle::random_contiguous_partition(rng, p, 1 + static_cast<Index>(rng.uniform_index(p)));
        const Vector x = oracle::uniform_vector(rng, p, -1, 1);
        const double t = rng.uniform(0.01, 0.8);
        const auto small = support_sets(x, part, TruncationParam(t));
        const auto large = support_sets(x, part, TruncationParam(t * 1.5));
        EXPECT_TRUE(std::includes(large.t1.begin(), large.t1.end(), small.t1.begin(), small.t1.end()));
        EXPECT_TRUE(std::includes(large.t2.begin(), large.t2.end(), small.t2.begin(), small.t2.end()));
    }
}

TEST(SparsityBudget, Validation) {
    const auto part = GroupPartition::contiguous(6, 3);
    EXPECT_NO_THROW(SparsityBudget::counts(2, 1).validate(part));
    EXPECT_THROW(SparsityBudget::counts(1.5, 1).validate(part), std::invalid_argument);
    EXPECT_THROW(SparsityBudget::counts(7, 1).validate(part), std::invalid_argument);
    EXPECT_THROW(SparsityBudget::counts(2, 4).validate(part), std::invalid_argument);
    EXPECT_THROW(SparsityBudget::counts(1, 2).validate(part), std::invalid_argument);
    EXPECT_NO_THROW(SparsityBudget::counts(1, 2).validate(part, true));
    EXPECT_NO_THROW(SparsityBudget::radii(0.5, 3.0).validate(part));
    EXPECT_THROW(SparsityBudget::radii(0.0, 1.0).validate(part), std::invalid_argument);
    EXPECT_THROW(TruncationParam(0.0), std::invalid_argument);
}

TEST(SolverConfig, DefaultsAndValidation) {
    SolverConfig cfg;
    EXPECT_EQ(cfg.dc_max_iter, 50);
    EXPECT_EQ(cfg.agm_max_iter, 10000);
    EXPECT_DOUBLE_EQ(cfg.bisect_tol, 1e-7);
    EXPECT_DOUBLE_EQ(cfg.feas_tol, 1e-6);
    EXPECT_NO_THROW(cfg.validate());
    cfg.agm_rel_tol = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(L0Oracle, RecoversSparseSignal) {
    const auto inst = identity_instance((Vector(4) << 5, 0, 0, 0).finished(), GroupPartition::contiguous(4, 2));
    const Vector x = l0_oracle(inst, SparsityBudget::counts(1, 1));
    EXPECT_TRUE(x.isApprox((Vector(4) << 5, 0, 0, 0).finished()));
    EXPECT_DOUBLE_EQ(objective(inst, x), 0.0);
}

TEST(L0Oracle, FullBudgetIsLeastSquares) {
    Rng rng(21);
    const Matrix A = oracle::gaussian_matrix(rng, 5, 5);
    const Vector y = oracle::uniform_vector(rng, 5, -1, 1);
    const ProblemInstance inst(A, y, GroupPartition::contiguous(5, 5));
    const Vector x = l0_oracle(inst, SparsityBudget::counts(5, 5));
    EXPECT_LT((x - A.partialPivLu().solve(y)).norm(), 1e-9);
}

TEST(L0Oracle, MatchesRecursiveEnumeration) {
    Rng rng(1234);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix A = oracle::gaussian_matrix(rng, 6, 8);
        const Vector y = oracle::uniform_vector(rng, 6, -2, 2);
        const ProblemInstance inst(A, y, GroupPartition::contiguous(8, 4));
        for (auto [s1, s2] : {std::pair{2, 1}, std::pair{3, 2}, std::pair{4, 2}}) {
            const Vector x = l0_oracle(inst, SparsityBudget::counts(s1, s2));
            EXPECT_NEAR(objective(inst, x), oracle::enumerate_best_objective(inst, s1, s2), 1e-9);
            const auto counts = truncated_l1_counts(x, inst.partition(), TruncationParam(1e-12));
            EXPECT_LE(counts.features, s1);
            EXPECT_LE(counts.groups, s2);
        }
    }
}

TEST(L0Oracle, NoWorseThanAnyFeasiblePoint) {
    Rng rng(77);
    const Matrix A = oracle::gaussian_matrix(rng, 7, 9);
    const Vector y = oracle::uniform_vector(rng, 7, -2, 2);
    const ProblemInstance inst(A, y, GroupPartition::contiguous(9, 3));
    const auto budget = SparsityBudget::counts(3, 2);
    const double best = objective(inst, l0_oracle(inst, budget));
    for (int trial = 0; trial < 200; ++trial) {
        Vector x = Vector::Zero(9);
        const Index g = static_cast<Index>(rng.uniform_index(3));
        x[inst.partition().group(g)[rng.uniform_index(3)]] = rng.normal();
        x[inst.partition().group((g + 1) % 3)[rng.uniform_index(3)]] = rng.normal();
        EXPECT_LE(best, objective(inst, x) + 1e-12);
    }
}

TEST(L0Oracle, RejectsLargeOrRadiusBudgets) {
    const ProblemInstance big(Matrix::Zero(2, 21), Vector::Zero(2), GroupPartition::contiguous(21, 3));
    EXPECT_THROW(l0_oracle(big, SparsityBudget::counts(2, 1)), std::invalid_argument);
    const auto small = identity_instance(Vector::Ones(2), GroupPartition::contiguous(2, 1));
    EXPECT_THROW(l0_oracle(small, SparsityBudget::radii(1, 1)), std::invalid_argument);
}

TEST(L0Oracle, TiesGoToLexicographicallySmallestSupport) {
    const auto inst = identity_instance(Vector::Ones(3), GroupPartition::contiguous(3, 3));
    const Vector x = l0_oracle(inst, SparsityBudget::counts(1, 1));
    EXPECT_EQ(x, (Vector(3) << 1, 0, 0).finished());
}
