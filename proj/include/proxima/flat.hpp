#pragma once

#include "proxima/simnet.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace proxima {

inline constexpr double kFastPathEpsilon = 1e-9;

struct ClusterResult {
    Digest reference;
    std::vector<std::size_t> included;
    std::vector<std::size_t> excluded;
    std::size_t pushed_tx_count = 0;
    std::size_t push_messages = 0;
    /// Variance and mean of the included validators' reported (pre-push) digests.
    double variance = 0.0;
    Digest mean;
    bool fast_path = false;
    /// Pre-push distance from the reference, per validator index.
    std::vector<double> distances;
};

enum class FinalityKind { None, FastPath, Certificate };

const char* finality_name(FinalityKind k);

struct Phase2Result {
    std::optional<QuorumCertificate> certificate;
    /// Every certificate that could be assembled from the commitments sent at
    /// this height, one per distinct hash reaching quorum.
    std::vector<QuorumCertificate> certificates;
    std::size_t commits = 0;
    std::size_t valid_commits = 0;
};

struct RoundResult {
    Hash256 block_hash{};
    std::uint64_t height = 0;
    FinalityKind finality = FinalityKind::None;
    std::optional<QuorumCertificate> certificate;
    std::vector<QuorumCertificate> certificates;
    Metrics metrics;
    ClusterResult cluster;
    std::size_t commits = 0;

    bool finalized() const { return finality != FinalityKind::None; }
};

/// Running mean of each validator's pre-push distance from the reference.
class ReputationTable {
public:
    explicit ReputationTable(std::size_t n = 0) : sum_(n, 0.0), count_(n, 0) {}

    void record(std::size_t i, double distance);
    void record_round(const ClusterResult& cluster);
    double mean(std::size_t i) const;
    std::uint64_t samples(std::size_t i) const { return count_.at(i); }
    std::size_t size() const { return sum_.size(); }
    /// Mean of per-validator means over [first, last).
    double group_mean(std::size_t first, std::size_t last) const;

private:
    std::vector<double> sum_;
    std::vector<std::uint64_t> count_;
};

struct RoundOptions {
    /// Puts every Byzantine validator in the cluster regardless of distance.
    bool force_include_byzantine = false;
};

/// Handles a suppressing aggregator: validators time out, send view-change
/// votes, resend phase 1 to the next aggregator. Returns the view changes.
std::size_t recover_from_suppression(World& world, unsigned level = 0);

ClusterResult run_phase1(World& world, const DistanceThreshold& tau, const RoundOptions& options = {});
Phase2Result run_phase2(World& world, const ClusterResult& cluster, const Block& block);
RoundResult run_round(World& world, const DistanceThreshold& tau, const RoundOptions& options = {});

/// All certificates buildable from `commits` (validator, hash, signature),
/// one per distinct hash with at least quorum(N) valid signatures.
struct CommitRecord {
    std::size_t validator = 0;
    Hash256 hash{};
    Signature signature;
};
std::vector<QuorumCertificate> assemble_certificates(const World& world, std::span<const CommitRecord> commits);

struct ManyStats {
    std::uint64_t rounds = 0;
    std::uint64_t finalized = 0;
    std::uint64_t fast_path = 0;
    std::uint64_t conflicting_heights = 0;
    double mean_messages = 0.0;
    double mean_bytes = 0.0;
    double mean_commits = 0.0;
    ReputationTable reputation;

    double success_rate() const { return rounds ? static_cast<double>(finalized) / static_cast<double>(rounds) : 0.0; }
    double fast_path_rate() const { return rounds ? static_cast<double>(fast_path) / static_cast<double>(rounds) : 0.0; }
};

ManyStats run_many(World& world, std::uint64_t rounds, const DistanceThreshold& tau);

} // namespace proxima
