#include "sgfs/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "sgfs/solvers.hpp"

namespace sgfs {

namespace {

std::vector<char> selected_groups(const Vector& x, const GroupPartition& partition, double tau) {
    std::vector<char> out(static_cast<std::size_t>(partition.size()), 0);
    for (Index g = 0; g < partition.size(); ++g) {
        double sq = 0.0;
        for (Index j : partition.group(g)) sq += x[j] * x[j];
        out[static_cast<std::size_t>(g)] = std::sqrt(sq) > tau;
    }
    return out;
}

ProblemInstance take_rows(const ProblemInstance& inst, const std::vector<Index>& rows) {
    Matrix A(static_cast<Index>(rows.size()), inst.p());
    Vector y(static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        A.row(static_cast<Index>(k)) = inst.A().row(rows[k]);
        y[static_cast<Index>(k)] = inst.y()[rows[k]];
    }
    return ProblemInstance(std::move(A), std::move(y), inst.partition());
}

struct GridPoint {
    double s1;
    double s2;
};

}  // namespace

SelectionCounts selection_counts(const Vector& x, const GroupPartition& partition, TruncationParam tau) {
    detail::require_length(x, partition.p(), "selection_counts");
    SelectionCounts out;
    for (Index j = 0; j < x.size(); ++j) out.n_features += std::abs(x[j]) > tau.value() ? 1 : 0;
    for (char s : selected_groups(x, partition, tau.value())) out.n_groups += s ? 1 : 0;
    return out;
}

SelectionMetrics compute_metrics(const Vector& xhat, const Dataset& dataset, TruncationParam tau) {
    if (!dataset.truth) throw std::invalid_argument("compute_metrics: dataset has no ground truth");
    const auto& partition = dataset.train.partition();
    detail::require_length(xhat, partition.p(), "compute_metrics");
    const Vector& x0 = *dataset.truth;

    SelectionMetrics m;
    m.estimation_error = (xhat - x0).squaredNorm();
    m.prediction_error = (dataset.test.A() * xhat - dataset.test.y()).squaredNorm();

    const auto chosen = selected_groups(xhat, partition, tau.value());
    const auto truth = selected_groups(x0, partition, 0.0);
    Index both = 0;
    Index n_true = 0;
    for (std::size_t g = 0; g < chosen.size(); ++g) {
        both += (chosen[g] && truth[g]) ? 1 : 0;
        n_true += truth[g] ? 1 : 0;
    }
    const auto counts = selection_counts(xhat, partition, tau);
    m.n_features = counts.n_features;
    m.n_groups = counts.n_groups;
    if (m.n_groups == 0)
        m.group_precision = n_true == 0 ? 1.0 : 0.0;
    else
        m.group_precision = static_cast<double>(both) / static_cast<double>(m.n_groups);
    m.group_recall = n_true == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(n_true);
    return m;
}

double classify_accuracy(const Vector& xhat, const ProblemInstance& inst) {
    detail::require_length(xhat, inst.p(), "classify_accuracy");
    for (Index i = 0; i < inst.n(); ++i)
        if (inst.y()[i] != 1.0 && inst.y()[i] != -1.0)
            throw std::invalid_argument("classify_accuracy: labels must be +1 or -1");
    if (inst.n() == 0) return 0.0;
    const Vector scores = inst.A() * xhat;
    Index correct = 0;
    for (Index i = 0; i < inst.n(); ++i) {
        const double s = scores[i];
        if ((s > 0.0 && inst.y()[i] > 0.0) || (s < 0.0 && inst.y()[i] < 0.0)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(inst.n());
}

Vector fit(FitMethod method, const ProblemInstance& inst, const SparsityBudget& budget, TruncationParam tau,
           const SolverConfig& cfg) {
    switch (method) {
        case FitMethod::dc:
            return dc_solve(inst, budget, tau, cfg).x;
        case FitMethod::constrained_sgl:
            return constrained_sgl_solve(inst, budget, cfg);
    }
    throw std::invalid_argument("fit: unknown method");
}

CvResult cross_validate(const Dataset& dataset, const CvPlan& plan, FitMethod method, TruncationParam tau,
                        const SolverConfig& cfg) {
    const ProblemInstance& train = dataset.train;
    const Index n = train.n();
    const Index folds = plan.leave_one_out ? n : plan.folds;
    if (folds < 2) throw std::invalid_argument("cross_validate: need at least 2 folds");
    if (folds > n) throw std::invalid_argument("cross_validate: more folds than samples");
    if (plan.s1_grid.empty() || plan.s2_grid.empty()) throw std::invalid_argument("cross_validate: empty grid");

    std::vector<GridPoint> grid;
    for (double s2 : plan.s2_grid)
        for (double s1 : plan.s1_grid) grid.push_back({plan.s1_scales_with_s2 ? s1 * s2 : s1, s2});
    const auto kind = method == FitMethod::dc ? BudgetKind::count : BudgetKind::radius;
    for (const auto& gp : grid) SparsityBudget{gp.s1, gp.s2, kind}.validate(train.partition(), true);

    // Contiguous fold blocks: fold k holds rows [k n / K, (k + 1) n / K).
    std::vector<ProblemInstance> fit_sets;
    std::vector<ProblemInstance> held_out;
    for (Index k = 0; k < folds; ++k) {
        const Index lo = k * n / folds;
        const Index hi = (k + 1) * n / folds;
        std::vector<Index> in;
        std::vector<Index> out;
        for (Index i = 0; i < n; ++i) (i >= lo && i < hi ? out : in).push_back(i);
        fit_sets.push_back(take_rows(train, in));
        held_out.push_back(take_rows(train, out));
    }

    CvResult result;
    result.table.resize(grid.size() * static_cast<std::size_t>(folds));
    const std::size_t tasks = result.table.size();
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            const std::size_t gi = task / static_cast<std::size_t>(folds);
            const auto fold = static_cast<std::size_t>(task % static_cast<std::size_t>(folds));
            try {
                const auto& gp = grid[gi];
                const Vector x = fit(method, fit_sets[fold], SparsityBudget{gp.s1, gp.s2, kind}, tau, cfg);
                const auto& val = held_out[fold];
                const double score = plan.metric == CvMetric::accuracy
                                         ? classify_accuracy(x, val)
                                         : (val.A() * x - val.y()).squaredNorm() / static_cast<double>(val.n());
                result.table[task] = CvRow{gp.s1, gp.s2, static_cast<int>(fold), score};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const int workers = std::max(1, std::min<int>(plan.workers, static_cast<int>(tasks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return grid[a].s2 != grid[b].s2 ? grid[a].s2 < grid[b].s2 : grid[a].s1 < grid[b].s1;
    });

    bool have_best = false;
    for (std::size_t gi : order) {
        double mean = 0.0;
        for (Index k = 0; k < folds; ++k) mean += result.table[gi * static_cast<std::size_t>(folds) + k].score;
        mean /= static_cast<double>(folds);
        const bool better = plan.metric == CvMetric::accuracy ? mean > result.best_score : mean < result.best_score;
        if (!have_best || better) {
            have_best = true;
            result.best_score = mean;
            result.best = SparsityBudget{grid[gi].s1, grid[gi].s2, kind};
        }
    }
    return result;
}

void write_score_table(std::ostream& out, const std::vector<CvRow>& table) {
    out << "s1,s2,fold,score\n";
    out.precision(17);
    for (const auto& row : table) out << row.s1 << ',' << row.s2 << ',' << row.fold << ',' << row.score << '\n';
}

void write_score_table(const std::filesystem::path& path, const std::vector<CvRow>& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_score_table(out, table);
}

}  // namespace sgfs
