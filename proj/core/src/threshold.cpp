#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "sgfs/projection.hpp"

namespace sgfs {

double mass_threshold(std::span<const double> a, double mass) {
    if (mass < 0.0) throw std::invalid_argument("mass_threshold: mass must be non-negative");
    const double total = std::accumulate(a.begin(), a.end(), 0.0);
    if (total <= mass) return 0.0;
    if (mass == 0.0) return *std::max_element(a.begin(), a.end());

    // Candidates still undecided live in work[lo, hi). Everything already
    // known to lie above the threshold is summarised by (sum_above, count_above).
    std::vector<double> work(a.begin(), a.end());
    std::minstd_rand pivot_rng(0x5eed);
    std::size_t lo = 0;
    std::size_t hi = work.size();
    double sum_above = 0.0;
    std::size_t count_above = 0;

    while (lo < hi) {
        const std::size_t k = lo + pivot_rng() % (hi - lo);
        std::swap(work[lo], work[k]);
        const double pivot = work[lo];

        // [lo, mid) holds values >= pivot, pivot itself at lo.
        std::size_t mid = lo + 1;
        double sum_ge = pivot;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            if (work[i] >= pivot) {
                std::swap(work[i], work[mid]);
                sum_ge += work[mid];
                ++mid;
            }
        }
        const std::size_t count_ge = mid - lo;

        if ((sum_above + sum_ge) - static_cast<double>(count_above + count_ge) * pivot < mass) {
            // Threshold is below the pivot: all of [lo, mid) stay positive.
            sum_above += sum_ge;
            count_above += count_ge;
            lo = mid;
        } else {
            // Threshold is at or above the pivot: drop the pivot and the
            // smaller values.
            hi = mid;
            ++lo;
        }
    }
    return std::max(0.0, (sum_above - mass) / static_cast<double>(count_above));
}

}  // namespace sgfs
