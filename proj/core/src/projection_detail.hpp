#pragma once

#include <span>
#include <vector>

#include "sgfs/model.hpp"

namespace sgfs::detail {

/// Which coordinates each constraint of a (possibly restricted) projection
/// touches. `blocks` carry both the L1 and the group constraint; `free`
/// coordinates carry only the L1 constraint; everything else passes through.
class ProjectionLayout {
public:
    static ProjectionLayout full(const GroupPartition& partition);
    /// t3 must be a subset of t1; throws std::invalid_argument otherwise.
    static ProjectionLayout restricted(const GroupPartition& partition, std::span<const Index> t1,
                                       std::span<const Index> t3);

    Index p() const noexcept { return p_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::span<const Index> block(std::size_t i) const { return blocks_[i]; }
    std::span<const Index> free() const noexcept { return free_; }
    bool empty() const noexcept { return blocks_.empty() && free_.empty(); }

private:
    Index p_ = 0;
    std::vector<std::span<const Index>> blocks_;
    std::vector<std::vector<Index>> storage_;
    std::vector<Index> free_;
};

/// Projection engine shared by sglp and restricted_sglp. Accepts zero radii,
/// which pin the affected coordinates to zero.
ProjectionOutcome project(const Vector& v, double s1, double s2, const ProjectionLayout& layout,
                          const SolverConfig& cfg);

}  // namespace sgfs::detail
