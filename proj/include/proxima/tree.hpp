#pragma once

#include "proxima/flat.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace proxima {

/// Balanced B-ary tree over ceil(N/B) leaves. Node level 0 holds the leaves
/// and the last level holds the root; there are always at least two levels.
struct TreeTopology {
    unsigned branching = 10;
    std::vector<std::vector<std::size_t>> leaves;  // validator indices per leaf
    std::vector<std::size_t> leaf_of;              // validator -> leaf
    std::vector<std::size_t> level_sizes;          // nodes per level

    std::size_t levels() const { return level_sizes.size(); }
    std::size_t leaf_count() const { return leaves.size(); }
    /// Index of the parent (one level up) of node j.
    std::size_t parent(std::size_t j) const { return j / branching; }
    std::size_t nonroot_nodes() const;
};

/// Node levels for N validators at branching B (minimum 2).
std::size_t tree_levels(std::size_t n, unsigned branching);

/// Validators fill leaves in index order, or in a seeded random order when
/// shuffle_seed is given. Throws if branching < 2 or n == 0.
TreeTopology build_topology(std::size_t n, unsigned branching, std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// The root keeps a child summary only if its mean is within tau of the reference.
bool root_accepts(const GroupSummary& child, const Digest& reference, const DistanceThreshold& tau);

/// One tree round: digests to leaf leaders, leaf filtering and push sync,
/// summaries up, then commit requests down, commits and aggregates up, and
/// finality down to the leaf leaders. Sends are recorded per level.
RoundResult run_tree_round(World& world, const TreeTopology& topology, const DistanceThreshold& tau,
                           const RoundOptions& options = {});

struct CommitteeTrial {
    std::size_t failed_leaves = 0;
    std::size_t bft_participants = 0;
    std::size_t distance_participants = 0;
};

struct CommitteeStats {
    std::size_t leaves = 0;
    std::vector<CommitteeTrial> trials;
    double mean_failed_leaves = 0.0;
    double mean_bft_participants = 0.0;
    double mean_distance_participants = 0.0;
};

/// Random assignment of `byzantine` out of `n` validators to groups of
/// `group` (the last group is short if group does not divide n). BFT mode
/// loses every group with more than floor(size/3) Byzantine members; distance
/// mode keeps every honest validator.
CommitteeStats committee_compare(std::size_t n, std::size_t byzantine, std::size_t group, std::size_t trials,
                                 std::uint64_t seed);

} // namespace proxima
